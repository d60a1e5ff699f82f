#include "r1/envelope.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace r1 {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Collapsed {
  std::vector<std::int64_t> support;
  std::vector<double> g;
  std::vector<int> pattern_slot;
  int collisions = 0;
};

Collapsed collapse_support(const Grid& grid, const DiscreteGYMeasure& measure, const Eigen::VectorXd& g) {
  if (static_cast<std::size_t>(g.size()) != measure.points.size())
    throw std::invalid_argument("spike: g must have one value per sign pattern");
  if (g.size() > 0 && (g.minCoeff() < -1.0 - 1e-12 || g.maxCoeff() > 1.0 + 1e-12))
    throw std::invalid_argument("spike: g values must lie in [-1,1]");

  Collapsed out;
  out.pattern_slot.resize(measure.points.size());
  std::map<std::int64_t, int> slot_of;
  for (std::size_t eps = 0; eps < measure.points.size(); ++eps) {
    const auto idx = grid.index_of_matrix(measure.points[eps]);
    if (!idx) throw std::invalid_argument("spike: support matrix off the lattice");
    auto [it, inserted] = slot_of.try_emplace(*idx, static_cast<int>(out.support.size()));
    if (inserted) {
      out.support.push_back(*idx);
      out.g.push_back(g(static_cast<int>(eps)));
    } else {
      out.g[static_cast<std::size_t>(it->second)] = std::min(out.g[static_cast<std::size_t>(it->second)], g(static_cast<int>(eps)));
      ++out.collisions;
    }
    out.pattern_slot[eps] = it->second;
  }
  return out;
}

// Per-direction admissible box: coords_a in [|o_a|, L-1-|o_a|].
struct Box {
  std::vector<int> lo, hi;
  bool empty = false;
};

Box admissible_box(const Grid& grid, const Direction& d) {
  Box b;
  const int axes = grid.axes();
  b.lo.resize(axes);
  b.hi.resize(axes);
  for (int a = 0; a < axes; ++a) {
    const int o = std::abs(d.axis_offset[a]);
    b.lo[a] = o;
    b.hi[a] = grid.L() - 1 - o;
    if (b.lo[a] > b.hi[a]) b.empty = true;
  }
  return b;
}

}  // namespace

SpikeResult spike_function(const Grid& grid, const DiscreteGYMeasure& measure, const Eigen::VectorXd& g) {
  auto col = collapse_support(grid, measure, g);
  GridFunction fn = constant_function(grid, 2.0);
  for (std::size_t s = 0; s < col.support.size(); ++s) fn.values[static_cast<std::size_t>(col.support[s])] = col.g[s];
  return SpikeResult{BoundaryData{std::move(col.support), std::move(col.g), col.collisions}, std::move(fn),
                     std::move(col.pattern_slot)};
}

double measure_inner_product(const Grid& grid, const DiscreteGYMeasure& measure, const Eigen::VectorXd& g) {
  auto col = collapse_support(grid, measure, g);
  double acc = 0.0;
  for (std::size_t eps = 0; eps < measure.points.size(); ++eps)
    acc += measure.weights(static_cast<int>(eps)) * col.g[static_cast<std::size_t>(col.pattern_slot[eps])];
  return acc;
}

void ks_step_into(const Grid& grid, const DirectionSet& dirs, const std::vector<double>& in,
                  std::vector<double>& out) {
  const std::int64_t count = grid.point_count();
  out.resize(in.size());
  const int axes = grid.axes();
  const int L = grid.L();

  std::vector<Box> boxes;
  boxes.reserve(dirs.dirs.size());
  for (const auto& d : dirs.dirs) boxes.push_back(admissible_box(grid, d));

  const double* src = in.data();
  double* dst = out.data();

#pragma omp parallel
  {
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) dst[i] = src[i];

    // Each thread owns a contiguous range of first-axis slabs; writes are
    // disjoint and min is order-insensitive, so the sweep is deterministic.
#pragma omp for schedule(static)
    for (int c0 = 0; c0 < L; ++c0) {
      std::vector<int> coord(axes);
      for (std::size_t di = 0; di < dirs.dirs.size(); ++di) {
        const Box& box = boxes[di];
        if (box.empty || c0 < box.lo[0] || c0 > box.hi[0]) continue;
        const std::int64_t off = dirs.dirs[di].flat_offset;

        for (int a = 1; a < axes; ++a) coord[a] = box.lo[a];
        for (;;) {
          std::int64_t base = c0 * grid.stride(0);
          for (int a = 1; a < axes - 1; ++a) base += coord[a] * grid.stride(a);
          const std::int64_t first = base + box.lo[axes - 1];
          const std::int64_t last = base + box.hi[axes - 1];
          for (std::int64_t idx = first; idx <= last; ++idx) {
            const double avg = 0.5 * (src[idx + off] + src[idx - off]);
            if (avg < dst[idx]) dst[idx] = avg;
          }
          int a = axes - 2;
          while (a >= 1 && coord[a] == box.hi[a]) {
            coord[a] = box.lo[a];
            --a;
          }
          if (a < 1) break;
          ++coord[a];
        }
      }
    }
  }
}

GridFunction ks_step(const GridFunction& f, const DirectionSet& dirs) {
  GridFunction out{f.grid, {}};
  ks_step_into(f.grid, dirs, f.values, out.values);
  return out;
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::converged:
      return "converged";
    case StopReason::jensen_satisfied:
      return "jensen_satisfied";
    case StopReason::iteration_cap:
      return "iteration_cap";
  }
  return "unknown";
}

EnvelopeResult ks_envelope(GridFunction f, const DirectionSet& dirs, const EnvelopeStop& stop) {
  const auto t0 = Clock::now();
  const Grid grid = f.grid;
  const std::int64_t zero = grid.zero_index();
  std::vector<double> cur = std::move(f.values);
  std::vector<double> next(cur.size());

  int iterations = 0;
  StopReason reason = StopReason::iteration_cap;
  while (iterations < stop.max_iter) {
    ks_step_into(grid, dirs, cur, next);
    ++iterations;

    double max_drop = 0.0;
    const double* a = cur.data();
    const double* b = next.data();
    const std::int64_t count = grid.point_count();
#pragma omp parallel for schedule(static) reduction(max : max_drop)
    for (std::int64_t i = 0; i < count; ++i) max_drop = std::max(max_drop, a[i] - b[i]);

    cur.swap(next);
    if (stop.jensen_target && cur[static_cast<std::size_t>(zero)] <= *stop.jensen_target) {
      reason = StopReason::jensen_satisfied;
      break;
    }
    if (max_drop < stop.tol_conv) {
      reason = StopReason::converged;
      break;
    }
  }

  EnvelopeResult res;
  res.final = GridFunction{grid, std::move(cur)};
  res.iterations = iterations;
  res.stop_reason = reason;
  res.value_at_barycenter = res.final.values[static_cast<std::size_t>(zero)];
  res.wall_ms = ms_since(t0);
  return res;
}

EnvelopeResult naive_reference_envelope(const GridFunction& f, const DirectionSet& dirs, const EnvelopeStop& stop) {
  const auto t0 = Clock::now();
  const Grid& grid = f.grid;
  if (grid.point_count() > 100000) throw std::invalid_argument("naive envelope: grid too large for the oracle path");

  std::vector<Matrix> stencils;
  stencils.reserve(dirs.dirs.size());
  for (const auto& d : dirs.dirs) stencils.push_back(d.matrix(grid));

  std::vector<double> cur = f.values;
  std::vector<double> next(cur.size());
  int iterations = 0;
  StopReason reason = StopReason::iteration_cap;
  while (iterations < stop.max_iter) {
    for (std::int64_t idx = 0; idx < grid.point_count(); ++idx) {
      const Matrix A = grid.matrix_at(idx);
      double best = cur[static_cast<std::size_t>(idx)];
      for (const auto& X : stencils) {
        const auto plus = grid.index_of_matrix(A + X);
        const auto minus = grid.index_of_matrix(A - X);
        if (plus && minus) {
          best = std::min(best, 0.5 * (cur[static_cast<std::size_t>(*plus)] + cur[static_cast<std::size_t>(*minus)]));
        }
      }
      next[static_cast<std::size_t>(idx)] = best;
    }
    ++iterations;
    double max_drop = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) max_drop = std::max(max_drop, cur[i] - next[i]);
    cur.swap(next);
    if (stop.jensen_target && cur[static_cast<std::size_t>(grid.zero_index())] <= *stop.jensen_target) {
      reason = StopReason::jensen_satisfied;
      break;
    }
    if (max_drop < stop.tol_conv) {
      reason = StopReason::converged;
      break;
    }
  }

  EnvelopeResult res;
  res.final = GridFunction{grid, std::move(cur)};
  res.iterations = iterations;
  res.stop_reason = reason;
  res.value_at_barycenter = res.final.values[static_cast<std::size_t>(grid.zero_index())];
  res.wall_ms = ms_since(t0);
  return res;
}

double jensen_gap(const EnvelopeResult& result, const DiscreteGYMeasure& measure, const Eigen::VectorXd& g) {
  return result.value_at_barycenter - measure_inner_product(result.final.grid, measure, g);
}

}  // namespace r1
