#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "r1/envelope.hpp"
#include "r1/torus_measure.hpp"

namespace r1 {

// Discretization parameters of one Jensen check.
struct GridParams {
  int L = 25;
  int bound_p = 2;
  int bound_q = 2;
  bool multiples = false;
  int max_dirs = 0;  // 0 = full enumeration
  double tol_conv = 1e-7;
  int max_iter = 10000;
};

// Defaults matching the reference runs: m=2 starts at (2,2) -> 64 dyads,
// m=3 caps the (2,2) enumeration at 168.
GridParams default_grid_params(int m, int L);

enum class VerdictStatus { certified, suspicious, budget_exhausted };

std::string to_string(VerdictStatus s);

struct JensenVerdict {
  VerdictStatus status = VerdictStatus::certified;
  bool sufficiently_suspicious = false;  // margin > gamma
  double margin = 0.0;                   // envelope(0) - <nu, g>
  double nu_g = 0.0;
  double envelope_at_zero = 0.0;
  GridParams grid;
  int num_directions = 0;
  int iterations = 0;
  StopReason stop_reason = StopReason::converged;
  int support_collisions = 0;
  double wall_ms = 0.0;
};

// Builds the spike function for (measure, g), runs the discrete
// rank-one convexification with early exit at <nu,g>, and classifies the
// margin.  A certified verdict is a one-sided certificate: the discrete
// envelope dominates the true one, so margin <= 0 proves Jensen for this g.
JensenVerdict check_pair(const DiscreteGYMeasure& measure, const Eigen::VectorXd& g, const GridParams& params,
                         double gamma);

// One refinement step: L' = 2L-1 and a direction schedule that preserves
// nesting while matching the reference cardinalities 64 -> 256 -> 784.
GridParams refine(const GridParams& params);

struct RefinementSchedule {
  std::vector<GridParams> levels;  // levels[0] is the base check

  // base plus `depth` refinements
  static RefinementSchedule from_base(const GridParams& base, int depth);
};

enum class LaminateStatus { certified_up_to, suspicious, budget_exhausted };

std::string to_string(LaminateStatus s);

struct LaminateBudget {
  int g_samples_per_level = 16;  // random draws per level; an equal-size deterministic net is added
  RefinementSchedule schedule;
  std::uint64_t seed = 1;
  std::int64_t max_pairs = 0;  // 0 = unlimited
};

struct LaminateReport {
  LaminateStatus status = LaminateStatus::budget_exhausted;
  int level = -1;                // deepest level reached
  double net_resolution = 0.0;   // quantization step of the deterministic g-net at that level
  std::int64_t pairs_tested = 0;
  std::optional<Eigen::VectorXd> witness_g;  // set when suspicious
  double witness_margin = 0.0;
};

// Dovetailed semidecision run over (refinement level, g-sample): random g's
// plus a deterministic net whose resolution shrinks with the level.  Any
// margin that stays positive through the full ladder is reported as
// suspicious with its witness; exhausting the ladder with every tested g
// certified yields certified_up_to -- an evidence statement, not a proof.
LaminateReport check_laminate(const DiscreteGYMeasure& measure, const LaminateBudget& budget);

// --- fixed-function Jensen testing -----------------------------------------

using MatrixFn = std::function<double(const Matrix&)>;

class FunctionRegistry {
 public:
  void register_fn(const std::string& name, MatrixFn fn);
  const MatrixFn& get(const std::string& name) const;  // throws std::out_of_range
  bool contains(const std::string& name) const;
  std::vector<std::string> names() const;

  // Built-ins: det, negdet (m=2 only), frobenius.
  static FunctionRegistry& global();

 private:
  std::map<std::string, MatrixFn> fns_;
};

// fn(base) - sum_eps nu_eps fn(base + X_eps); <= 0 means Jensen holds for
// this deformation at this base point.
double jensen_fixed_function(const MatrixFn& fn, const Matrix& base, const PlaneWaveSpec& spec, int resolution);
double jensen_fixed_function(const std::string& name, const Matrix& base, const PlaneWaveSpec& spec, int resolution);

}  // namespace r1
