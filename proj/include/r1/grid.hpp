#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

namespace r1 {

using Matrix = Eigen::MatrixXd;  // m x n matrix-space point, n = 2 throughout

// Uniform lattice on [-1,1]^{m*n}: L points per axis, spacing h = 2/(L-1),
// L odd so that 0 is a lattice value. Flat indices are row-major over the
// m*n axes (matrix entry (r,c) -> axis r*n + c, last axis fastest).
class Grid {
 public:
  Grid() = default;
  Grid(int m, int n, int L);

  int m() const { return m_; }
  int n() const { return n_; }
  int L() const { return L_; }
  double h() const { return h_; }
  int axes() const { return m_ * n_; }
  std::int64_t point_count() const { return point_count_; }
  std::int64_t stride(int axis) const { return strides_[axis]; }

  double axis_value(int k) const { return -1.0 + k * h_; }
  // Nearest per-axis lattice coordinate, or -1 if off-lattice beyond tol.
  int axis_coord(double v, double tol = 1e-9) const;

  std::int64_t zero_index() const { return zero_index_; }

  void coords_of(std::int64_t index, int* coords) const;
  std::int64_t index_of(const int* coords) const;

  Matrix matrix_at(std::int64_t index) const;
  std::optional<std::int64_t> index_of_matrix(const Matrix& A, double tol = 1e-9) const;

  // Memory footprint of one double-precision value table.
  std::int64_t table_bytes() const { return point_count_ * static_cast<std::int64_t>(sizeof(double)); }

  bool operator==(const Grid& o) const { return m_ == o.m_ && n_ == o.n_ && L_ == o.L_; }

 private:
  int m_ = 0, n_ = 0, L_ = 0;
  double h_ = 0.0;
  std::int64_t point_count_ = 0;
  std::int64_t zero_index_ = 0;
  std::vector<std::int64_t> strides_;
};

// Throws std::invalid_argument unless L is odd and >= 3, m >= 1, n >= 1.
Grid make_grid(int m, int n, int L);

struct GridFunction {
  Grid grid;
  std::vector<double> values;

  double& operator[](std::int64_t i) { return values[i]; }
  double operator[](std::int64_t i) const { return values[i]; }
};

GridFunction constant_function(const Grid& g, double value);

// Tabulates fn over the grid.
template <typename Fn>
GridFunction tabulate(const Grid& g, Fn&& fn) {
  GridFunction out{g, std::vector<double>(static_cast<std::size_t>(g.point_count()))};
  for (std::int64_t i = 0; i < g.point_count(); ++i) out.values[static_cast<std::size_t>(i)] = fn(g.matrix_at(i));
  return out;
}

}  // namespace r1
