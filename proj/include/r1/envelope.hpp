#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "r1/directions.hpp"
#include "r1/grid.hpp"
#include "r1/torus_measure.hpp"

namespace r1 {

// Boundary data of a spike function: g on the support set K, 2 elsewhere.
// Restricted to the lattice this is the exact trace of the delta-cone
// function for any delta below the grid spacing, since the cone around a
// support point contains no other lattice point.
struct BoundaryData {
  std::vector<std::int64_t> support;  // distinct lattice indices
  std::vector<double> g;              // collapsed values, one per support point
  int collisions = 0;                 // sign patterns whose points coincided
};

struct SpikeResult {
  BoundaryData boundary;
  GridFunction fn;
  std::vector<int> pattern_slot;  // 2^N -> index into boundary.support
};

// Throws std::invalid_argument when a support matrix is off-lattice or a
// g-value leaves [-1,1].  Colliding support points keep the minimum g.
SpikeResult spike_function(const Grid& grid, const DiscreteGYMeasure& measure, const Eigen::VectorXd& g);

// <nu, g> with the same collision collapse as spike_function.
double measure_inner_product(const Grid& grid, const DiscreteGYMeasure& measure, const Eigen::VectorXd& g);

// One Jacobi sweep of the discrete Kohn-Strang update: out(A) = min(f(A),
// min over admissible X in D of (f(A+X)+f(A-X))/2).  Directions whose offsets
// leave the lattice at A are skipped.  Deterministic for any thread count.
void ks_step_into(const Grid& grid, const DirectionSet& dirs, const std::vector<double>& in,
                  std::vector<double>& out);
GridFunction ks_step(const GridFunction& f, const DirectionSet& dirs);

struct EnvelopeStop {
  double tol_conv = 1e-7;
  int max_iter = 10000;
  std::optional<double> jensen_target;  // early exit once value at 0 drops this low
};

enum class StopReason { converged, jensen_satisfied, iteration_cap };

std::string to_string(StopReason r);

struct EnvelopeResult {
  GridFunction final;
  int iterations = 0;
  StopReason stop_reason = StopReason::converged;
  double value_at_barycenter = 0.0;
  double wall_ms = 0.0;
};

// Iterates ks_step until the maximum pointwise decrease falls below
// tol_conv, the value at the zero index reaches jensen_target (the iterates
// are pointwise nonincreasing, so that verdict is final), or max_iter.
EnvelopeResult ks_envelope(GridFunction f, const DirectionSet& dirs, const EnvelopeStop& stop);

// Unoptimized transcription used purely as a correctness oracle; refuses
// grids above 1e5 points.
EnvelopeResult naive_reference_envelope(const GridFunction& f, const DirectionSet& dirs, const EnvelopeStop& stop);

// envelope value at the barycentre (= 0) minus <nu, g>.
double jensen_gap(const EnvelopeResult& result, const DiscreteGYMeasure& measure, const Eigen::VectorXd& g);

}  // namespace r1
