#include "r1/laminate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "r1/rng.hpp"

namespace r1 {

namespace {

// Radical-inverse (Halton) net over [-1,1]^dim, quantized to `step`.
Eigen::VectorXd halton_point(std::int64_t index, int dim, double step) {
  static const int primes[] = {2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,
                               59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131,
                               137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
                               227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311};
  Eigen::VectorXd x(dim);
  for (int d = 0; d < dim; ++d) {
    const int b = primes[d % 64];
    double inv = 1.0 / b, value = 0.0;
    for (std::int64_t i = index + 1; i > 0; i /= b) {
      value += (i % b) * inv;
      inv /= b;
    }
    double v = 2.0 * value - 1.0;
    if (step > 0.0) v = std::clamp(std::round(v / step) * step, -1.0, 1.0);
    x(d) = v;
  }
  return x;
}

}  // namespace

GridParams default_grid_params(int m, int L) {
  GridParams p;
  p.L = L;
  p.bound_p = 2;
  p.bound_q = 2;
  p.max_dirs = m >= 3 ? 168 : 0;
  return p;
}

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::certified:
      return "certified";
    case VerdictStatus::suspicious:
      return "suspicious";
    case VerdictStatus::budget_exhausted:
      return "budget_exhausted";
  }
  return "unknown";
}

JensenVerdict check_pair(const DiscreteGYMeasure& measure, const Eigen::VectorXd& g, const GridParams& params,
                         double gamma) {
  const Grid grid = make_grid(measure.m, 2, params.L);
  const DirectionSet dirs =
      generate_directions(grid, params.bound_p, params.bound_q, params.multiples, params.max_dirs);

  auto spike = spike_function(grid, measure, g);
  double nu_g = 0.0;
  for (std::size_t eps = 0; eps < measure.points.size(); ++eps)
    nu_g += measure.weights(static_cast<int>(eps)) * spike.boundary.g[static_cast<std::size_t>(spike.pattern_slot[eps])];

  EnvelopeStop stop;
  stop.tol_conv = params.tol_conv;
  stop.max_iter = params.max_iter;
  stop.jensen_target = nu_g;
  auto env = ks_envelope(std::move(spike.fn), dirs, stop);

  JensenVerdict v;
  v.margin = env.value_at_barycenter - nu_g;
  v.nu_g = nu_g;
  v.envelope_at_zero = env.value_at_barycenter;
  v.status = v.margin <= 0.0 ? VerdictStatus::certified : VerdictStatus::suspicious;
  v.sufficiently_suspicious = v.margin > gamma;
  v.grid = params;
  v.num_directions = dirs.size();
  v.iterations = env.iterations;
  v.stop_reason = env.stop_reason;
  v.support_collisions = spike.boundary.collisions;
  v.wall_ms = env.wall_ms;
  return v;
}

GridParams refine(const GridParams& params) {
  GridParams next = params;
  next.L = 2 * params.L - 1;
  if (params.bound_p == 2 && params.bound_q == 2 && params.max_dirs == 0) {
    next.bound_p = next.bound_q = 3;
  } else if (params.bound_p == 3 && params.bound_q == 3 && params.max_dirs == 0) {
    next.bound_p = next.bound_q = 5;
    next.max_dirs = 784;
  } else {
    ++next.bound_p;
    ++next.bound_q;
    if (params.max_dirs > 0) next.max_dirs = params.max_dirs * 4;
  }
  return next;
}

RefinementSchedule RefinementSchedule::from_base(const GridParams& base, int depth) {
  RefinementSchedule s;
  s.levels.push_back(base);
  for (int i = 0; i < depth; ++i) s.levels.push_back(refine(s.levels.back()));
  return s;
}

std::string to_string(LaminateStatus s) {
  switch (s) {
    case LaminateStatus::certified_up_to:
      return "certified_up_to";
    case LaminateStatus::suspicious:
      return "suspicious";
    case LaminateStatus::budget_exhausted:
      return "budget_exhausted";
  }
  return "unknown";
}

LaminateReport check_laminate(const DiscreteGYMeasure& measure, const LaminateBudget& budget) {
  LaminateReport report;
  if (budget.schedule.levels.empty() || budget.g_samples_per_level <= 0) return report;  // budget_exhausted

  const int dim = static_cast<int>(measure.weights.size());
  const int levels = static_cast<int>(budget.schedule.levels.size());

  for (int level = 0; level < levels; ++level) {
    const double net_step = std::pow(2.0, 1 - level);
    report.level = level;
    report.net_resolution = net_step;

    for (int j = 0; j < 2 * budget.g_samples_per_level; ++j) {
      if (budget.max_pairs > 0 && report.pairs_tested >= budget.max_pairs) {
        report.status = LaminateStatus::budget_exhausted;
        return report;
      }
      Eigen::VectorXd g(dim);
      if (j < budget.g_samples_per_level) {
        Rng rng = Rng::substream(budget.seed, {stream::kLaminateNet, static_cast<std::uint64_t>(level),
                                               static_cast<std::uint64_t>(j)});
        for (int d = 0; d < dim; ++d) g(d) = rng.uniform(-1.0, 1.0);
      } else {
        g = halton_point(j - budget.g_samples_per_level, dim, net_step);
      }

      auto verdict = check_pair(measure, g, budget.schedule.levels[static_cast<std::size_t>(level)], 0.0);
      ++report.pairs_tested;

      // Chase a positive margin through the remaining ladder; only a margin
      // that survives the deepest level counts as suspicion.
      int chase = level;
      while (verdict.status == VerdictStatus::suspicious && chase + 1 < levels) {
        ++chase;
        verdict = check_pair(measure, g, budget.schedule.levels[static_cast<std::size_t>(chase)], 0.0);
        ++report.pairs_tested;
      }
      if (verdict.status == VerdictStatus::suspicious) {
        report.status = LaminateStatus::suspicious;
        report.level = chase;
        report.witness_g = g;
        report.witness_margin = verdict.margin;
        return report;
      }
    }
  }

  report.status = LaminateStatus::certified_up_to;
  report.level = levels - 1;
  return report;
}

void FunctionRegistry::register_fn(const std::string& name, MatrixFn fn) { fns_[name] = std::move(fn); }

const MatrixFn& FunctionRegistry::get(const std::string& name) const {
  auto it = fns_.find(name);
  if (it == fns_.end()) throw std::out_of_range("function not registered: " + name);
  return it->second;
}

bool FunctionRegistry::contains(const std::string& name) const { return fns_.count(name) > 0; }

std::vector<std::string> FunctionRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : fns_) out.push_back(k);
  return out;
}

FunctionRegistry& FunctionRegistry::global() {
  static FunctionRegistry reg = [] {
    FunctionRegistry r;
    r.register_fn("det", [](const Matrix& A) {
      if (A.rows() != 2 || A.cols() != 2) throw std::invalid_argument("det requires a 2x2 matrix");
      return A.determinant();
    });
    r.register_fn("negdet", [](const Matrix& A) {
      if (A.rows() != 2 || A.cols() != 2) throw std::invalid_argument("negdet requires a 2x2 matrix");
      return -A.determinant();
    });
    r.register_fn("frobenius", [](const Matrix& A) { return A.norm(); });
    return r;
  }();
  return reg;
}

double jensen_fixed_function(const MatrixFn& fn, const Matrix& base, const PlaneWaveSpec& spec, int resolution) {
  const auto support = build_support(spec);
  const auto weights = compute_weights(spec, resolution);
  double avg = 0.0;
  for (std::size_t eps = 0; eps < support.size(); ++eps)
    avg += weights(static_cast<int>(eps)) * fn(base + support[eps]);
  return fn(base) - avg;
}

double jensen_fixed_function(const std::string& name, const Matrix& base, const PlaneWaveSpec& spec, int resolution) {
  return jensen_fixed_function(FunctionRegistry::global().get(name), base, spec, resolution);
}

}  // namespace r1
