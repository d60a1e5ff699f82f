#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "r1/grid.hpp"

namespace r1 {

// One rank-one stencil matrix multiple * h * (p q^T), bound to a grid: the
// per-axis integer offsets it induces and the flat index offset are
// precomputed.
struct Direction {
  Eigen::VectorXi p;  // primitive, length m, first nonzero component positive
  Eigen::Vector2i q;  // primitive
  int multiple = 1;
  std::vector<int> axis_offset;  // multiple * p_r * q_c per axis
  std::int64_t flat_offset = 0;

  Matrix matrix(const Grid& grid) const;
};

struct DirectionSet {
  Grid grid;
  int bound_p = 0;
  int bound_q = 0;
  bool multiples = false;
  int max_count = 0;  // 0 = no cap
  std::vector<Direction> dirs;

  int size() const { return static_cast<int>(dirs.size()); }
};

// Enumerates primitive integer vectors p (length m, max-norm <= bound_p) and
// q (length 2, max-norm <= bound_q), deduplicated up to global sign, and
// emits h*(p q^T); with `multiples`, also k*h*(p q^T) for every k keeping the
// matrix inside [-1,1]^{m x 2}.  The list is sorted by a canonical fineness
// key and optionally truncated to max_count entries; a truncated prefix is
// how the calibrated cardinalities 168 and 784 are realized.
DirectionSet generate_directions(const Grid& grid, int bound_p, int bound_q, bool multiples = false,
                                 int max_count = 0);

// True when every matrix of `coarse` appears in `fine` (compared by exact
// integer offsets after rescaling to the finer spacing).  Both grids must
// satisfy L_fine = 2 L_coarse - 1 or be identical.
bool directions_nested(const DirectionSet& coarse, const DirectionSet& fine);

// Exact rank test for stencil candidates: all 2x2 minors vanish within
// tol * (1 + |M|_F^2).
bool is_rank_one(const Matrix& M, double tol);

}  // namespace r1
