#include "r1/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace r1 {

Grid::Grid(int m, int n, int L) : m_(m), n_(n), L_(L) {
  if (m < 1 || n < 1) throw std::invalid_argument("grid: matrix shape must be positive");
  if (L < 3 || L % 2 == 0) throw std::invalid_argument("grid: L must be odd and >= 3, got " + std::to_string(L));
  h_ = 2.0 / (L - 1);
  const int a = axes();
  strides_.assign(a, 1);
  point_count_ = 1;
  for (int i = a - 1; i >= 0; --i) {
    strides_[i] = point_count_;
    point_count_ *= L;
  }
  const int center = (L - 1) / 2;
  zero_index_ = 0;
  for (int i = 0; i < a; ++i) zero_index_ += center * strides_[i];
}

int Grid::axis_coord(double v, double tol) const {
  const double k = (v + 1.0) / h_;
  const long long r = std::llround(k);
  if (r < 0 || r >= L_) return -1;
  if (std::abs(v - axis_value(static_cast<int>(r))) > tol) return -1;
  return static_cast<int>(r);
}

void Grid::coords_of(std::int64_t index, int* coords) const {
  for (int i = 0; i < axes(); ++i) {
    coords[i] = static_cast<int>(index / strides_[i]);
    index %= strides_[i];
  }
}

std::int64_t Grid::index_of(const int* coords) const {
  std::int64_t idx = 0;
  for (int i = 0; i < axes(); ++i) idx += coords[i] * strides_[i];
  return idx;
}

Matrix Grid::matrix_at(std::int64_t index) const {
  Matrix A(m_, n_);
  for (int i = axes() - 1; i >= 0; --i) {
    const int k = static_cast<int>(index % L_);
    index /= L_;
    A(i / n_, i % n_) = axis_value(k);
  }
  return A;
}

std::optional<std::int64_t> Grid::index_of_matrix(const Matrix& A, double tol) const {
  if (A.rows() != m_ || A.cols() != n_) return std::nullopt;
  std::int64_t idx = 0;
  for (int r = 0; r < m_; ++r) {
    for (int c = 0; c < n_; ++c) {
      const int k = axis_coord(A(r, c), tol);
      if (k < 0) return std::nullopt;
      idx += k * strides_[r * n_ + c];
    }
  }
  return idx;
}

Grid make_grid(int m, int n, int L) { return Grid(m, n, L); }

GridFunction constant_function(const Grid& g, double value) {
  return GridFunction{g, std::vector<double>(static_cast<std::size_t>(g.point_count()), value)};
}

}  // namespace r1
