#include "r1/directions.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace r1 {

namespace {

int vector_gcd(const Eigen::VectorXi& v) {
  int g = 0;
  for (int i = 0; i < v.size(); ++i) g = std::gcd(g, std::abs(v(i)));
  return g;
}

// All primitive integer vectors of the given length with max-norm <= bound,
// one representative per sign class (first nonzero component positive).
std::vector<Eigen::VectorXi> primitive_classes(int length, int bound) {
  std::vector<Eigen::VectorXi> out;
  Eigen::VectorXi v = Eigen::VectorXi::Constant(length, -bound);
  for (;;) {
    if (vector_gcd(v) == 1) {
      int first = 0;
      while (first < length && v(first) == 0) ++first;
      if (first < length && v(first) > 0) out.push_back(v);
    }
    int axis = length - 1;
    while (axis >= 0 && v(axis) == bound) v(axis--) = -bound;
    if (axis < 0) break;
    ++v(axis);
  }
  return out;
}

struct Key {
  long long max_entry;  // max |p_r q_c| * multiple, the coarsest step the dyad takes
  long long pq_norm;    // |p|^2 * |q|^2 * multiple^2
  long long p_norm;
  std::vector<int> lex;

  bool operator<(const Key& o) const {
    if (max_entry != o.max_entry) return max_entry < o.max_entry;
    if (pq_norm != o.pq_norm) return pq_norm < o.pq_norm;
    if (p_norm != o.p_norm) return p_norm < o.p_norm;
    return lex < o.lex;
  }
};

Key key_of(const Direction& d) {
  long long me = 0;
  for (int r = 0; r < d.p.size(); ++r)
    for (int c = 0; c < 2; ++c) me = std::max(me, static_cast<long long>(std::abs(d.p(r) * d.q(c))) * d.multiple);
  Key k;
  k.max_entry = me;
  k.pq_norm = static_cast<long long>(d.p.squaredNorm()) * d.q.squaredNorm() * d.multiple * d.multiple;
  k.p_norm = d.p.squaredNorm();
  k.lex.reserve(d.p.size() + 3);
  for (int r = 0; r < d.p.size(); ++r) k.lex.push_back(d.p(r));
  k.lex.push_back(d.q(0));
  k.lex.push_back(d.q(1));
  k.lex.push_back(d.multiple);
  return k;
}

}  // namespace

Matrix Direction::matrix(const Grid& grid) const {
  return grid.h() * multiple * (p.cast<double>() * q.cast<double>().transpose());
}

DirectionSet generate_directions(const Grid& grid, int bound_p, int bound_q, bool multiples, int max_count) {
  if (bound_p < 1 || bound_q < 1) throw std::invalid_argument("directions: bounds must be >= 1");
  if (grid.n() != 2) throw std::invalid_argument("directions: domain dimension must be 2");

  const auto ps = primitive_classes(grid.m(), bound_p);
  const auto qs = primitive_classes(2, bound_q);
  const int half_span = (grid.L() - 1) / 2;  // entries k*p_r*q_c must stay within [-(L-1)/2, (L-1)/2] cells

  std::vector<Direction> dirs;
  for (const auto& p : ps) {
    for (const auto& q : qs) {
      int max_cell = 0;
      for (int r = 0; r < p.size(); ++r)
        for (int c = 0; c < 2; ++c) max_cell = std::max(max_cell, std::abs(p(r) * q(c)));
      const int k_max = multiples ? half_span / max_cell : (max_cell <= half_span ? 1 : 0);
      for (int k = 1; k <= k_max; ++k) {
        Direction d;
        d.p = p;
        d.q = q;
        d.multiple = k;
        d.axis_offset.resize(grid.axes());
        d.flat_offset = 0;
        for (int r = 0; r < grid.m(); ++r) {
          for (int c = 0; c < 2; ++c) {
            const int off = k * p(r) * q(c);
            d.axis_offset[r * 2 + c] = off;
            d.flat_offset += off * grid.stride(r * 2 + c);
          }
        }
        dirs.push_back(std::move(d));
        if (!multiples) break;
      }
    }
  }

  std::sort(dirs.begin(), dirs.end(), [](const Direction& a, const Direction& b) { return key_of(a) < key_of(b); });
  if (max_count > 0 && static_cast<int>(dirs.size()) > max_count) dirs.resize(max_count);

  return DirectionSet{grid, bound_p, bound_q, multiples, max_count, std::move(dirs)};
}

bool directions_nested(const DirectionSet& coarse, const DirectionSet& fine) {
  int scale = 0;
  if (fine.grid.L() == coarse.grid.L()) {
    scale = 1;
  } else if (fine.grid.L() == 2 * coarse.grid.L() - 1) {
    scale = 2;
  } else {
    return false;
  }
  std::set<std::vector<int>> fine_offsets;
  for (const auto& d : fine.dirs) fine_offsets.insert(d.axis_offset);
  for (const auto& d : coarse.dirs) {
    std::vector<int> scaled(d.axis_offset);
    for (int& o : scaled) o *= scale;
    if (!fine_offsets.count(scaled)) return false;
  }
  return true;
}

bool is_rank_one(const Matrix& M, double tol) {
  const double scale = tol * (1.0 + M.squaredNorm());
  for (int r1 = 0; r1 < M.rows(); ++r1) {
    for (int r2 = r1 + 1; r2 < M.rows(); ++r2) {
      for (int c1 = 0; c1 < M.cols(); ++c1) {
        for (int c2 = c1 + 1; c2 < M.cols(); ++c2) {
          const double minor = M(r1, c1) * M(r2, c2) - M(r1, c2) * M(r2, c1);
          if (std::abs(minor) > scale) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace r1
