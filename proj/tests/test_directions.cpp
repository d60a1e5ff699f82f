#include <doctest.h>

#include <numeric>
#include <set>
#include <vector>

#include "r1/directions.hpp"

using namespace r1;

namespace {

// Independent count of primitive sign classes with max-norm <= bound.
int count_classes(int length, int bound) {
  std::vector<int> v(static_cast<std::size_t>(length), -bound);
  int count = 0;
  for (;;) {
    int g = 0;
    for (int x : v) g = std::gcd(g, std::abs(x));
    if (g == 1) {
      int first = 0;
      while (first < length && v[static_cast<std::size_t>(first)] == 0) ++first;
      if (first < length && v[static_cast<std::size_t>(first)] > 0) ++count;
    }
    int i = length - 1;
    while (i >= 0 && v[static_cast<std::size_t>(i)] == bound) v[static_cast<std::size_t>(i--)] = -bound;
    if (i < 0) break;
    ++v[static_cast<std::size_t>(i)];
  }
  return count;
}

}  // namespace

TEST_CASE("generate_directions: m=2 bounds (2,2) give the 64-dyad set") {
  auto grid = make_grid(2, 2, 25);
  auto dirs = generate_directions(grid, 2, 2);
  CHECK(dirs.size() == 64);
  CHECK(count_classes(2, 2) * count_classes(2, 2) == 64);

  std::set<std::vector<int>> offsets;
  for (const auto& d : dirs.dirs) {
    CHECK(is_rank_one(d.matrix(grid), 1e-12));
    CHECK(d.matrix(grid).cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    offsets.insert(d.axis_offset);
  }
  CHECK(offsets.size() == 64);  // no duplicate stencils
}

TEST_CASE("generate_directions: m=3 default cap emits 168 dyads") {
  auto grid = make_grid(3, 2, 19);
  auto dirs = generate_directions(grid, 2, 2, false, 168);
  CHECK(dirs.size() == 168);
  for (const auto& d : dirs.dirs) CHECK(is_rank_one(d.matrix(grid), 1e-12));
  // the cap keeps the finest stencils: a capped set nests in the full one
  auto full = generate_directions(grid, 2, 2);
  CHECK(full.size() == 392);
  CHECK(directions_nested(dirs, full));
}

TEST_CASE("generate_directions: reference refinement cardinalities nest") {
  auto d64 = generate_directions(make_grid(2, 2, 25), 2, 2);
  auto d256 = generate_directions(make_grid(2, 2, 49), 3, 3);
  auto d784 = generate_directions(make_grid(2, 2, 97), 5, 5, false, 784);
  CHECK(d64.size() == 64);
  CHECK(d256.size() == 256);
  CHECK(d784.size() == 784);
  CHECK(directions_nested(d64, d256));
  CHECK(directions_nested(d256, d784));
}

TEST_CASE("generate_directions: multiples stay inside the box") {
  auto grid = make_grid(2, 2, 9);
  auto plain = generate_directions(grid, 1, 1);
  auto with_mult = generate_directions(grid, 1, 1, true);
  CHECK(with_mult.size() > plain.size());
  int max_multiple = 0;
  for (const auto& d : with_mult.dirs) {
    CHECK(d.matrix(grid).cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    max_multiple = std::max(max_multiple, d.multiple);
  }
  CHECK(max_multiple == 4);  // half_span / max_cell for unit dyads
}

TEST_CASE("generate_directions: dyads too coarse for the grid are dropped") {
  // L=7 has half-span 3; a (2,2) dyad entry reaches 4 cells
  auto dirs = generate_directions(make_grid(2, 2, 7), 2, 2);
  CHECK(dirs.size() < 64);
  for (const auto& d : dirs.dirs) {
    for (int off : d.axis_offset) CHECK(std::abs(off) <= 3);
  }
}

TEST_CASE("is_rank_one basics") {
  CHECK(is_rank_one(Matrix::Zero(3, 2), 1e-9));
  Eigen::VectorXd a(3);
  a << 1.0, -2.0, 0.5;
  Eigen::Vector2d n(3.0, 7.0);
  CHECK(is_rank_one(a * n.transpose(), 1e-9));
  CHECK_FALSE(is_rank_one(Matrix::Identity(2, 2), 1e-9));
}
