#include <doctest.h>

#include <cmath>

#include "r1/laminate.hpp"
#include "r1/rng.hpp"

using namespace r1;

namespace {

// Order-2 laminate: two grid dyads with unit p/q factors, so both lie in
// every direction set used below.
DiscreteGYMeasure order2_laminate(int L) {
  const Grid grid = make_grid(2, 2, L);
  PlaneWaveSpec spec;
  spec.m = 2;
  spec.waves.resize(2);
  spec.waves[0].a = Eigen::VectorXd::Zero(2);
  spec.waves[0].a(0) = grid.h();
  spec.waves[0].n << 1, 0;
  spec.waves[1].a = Eigen::VectorXd::Zero(2);
  spec.waves[1].a(1) = grid.h();
  spec.waves[1].n << 0, 1;
  return make_measure(spec, 4096);
}

// Diagonal three-wave configuration with a quarter phase: non-degenerate
// weights (1/16 vs 3/16) on the m=3 lattice.
DiscreteGYMeasure skew_three_wave(int L) {
  const Grid grid = make_grid(3, 2, L);
  PlaneWaveSpec spec;
  spec.m = 3;
  spec.waves.resize(3);
  for (int i = 0; i < 3; ++i) {
    spec.waves[static_cast<std::size_t>(i)].a = Eigen::VectorXd::Zero(3);
    spec.waves[static_cast<std::size_t>(i)].a(i) = grid.h();
  }
  spec.waves[0].n << 1, 0;
  spec.waves[1].n << 0, 1;
  spec.waves[2].n << 1, 1;
  spec.waves[2].c = 0.25;
  return make_measure(spec, 4096);
}

}  // namespace

TEST_CASE("check_pair: order-2 laminate with g = -1 is certified at margin 0") {
  auto measure = order2_laminate(9);
  Eigen::VectorXd g = Eigen::VectorXd::Constant(4, -1.0);
  GridParams params = default_grid_params(2, 9);
  auto v = check_pair(measure, g, params, 0.1);
  CHECK(v.status == VerdictStatus::certified);
  CHECK(v.margin == 0.0);
  CHECK_FALSE(v.sufficiently_suspicious);
}

TEST_CASE("check_pair: g = +1 certifies through the bound") {
  auto measure = order2_laminate(9);
  Eigen::VectorXd g = Eigen::VectorXd::Constant(4, 1.0);
  auto v = check_pair(measure, g, default_grid_params(2, 9), 0.1);
  CHECK(v.status == VerdictStatus::certified);
  CHECK(v.margin <= 0.0);
}

TEST_CASE("check_pair: certified verdicts survive refinement (soundness)") {
  auto measure = order2_laminate(13);
  Rng rng(2024);
  GridParams base = default_grid_params(2, 13);
  int certified_seen = 0;
  for (int t = 0; t < 6; ++t) {
    Eigen::VectorXd g(4);
    for (int i = 0; i < 4; ++i) g(i) = rng.uniform(-1.0, 1.0);
    auto v0 = check_pair(measure, g, base, 0.1);
    if (v0.status != VerdictStatus::certified) continue;
    ++certified_seen;
    auto v1 = check_pair(measure, g, refine(base), 0.1);
    CHECK(v1.status == VerdictStatus::certified);
  }
  CHECK(certified_seen > 0);
}

TEST_CASE("refine: ladder arithmetic and cardinalities") {
  GridParams p = default_grid_params(2, 25);
  GridParams p1 = refine(p);
  CHECK(p1.L == 49);
  CHECK(p1.bound_p == 3);
  CHECK(generate_directions(make_grid(2, 2, p1.L), p1.bound_p, p1.bound_q, p1.multiples, p1.max_dirs).size() == 256);
  GridParams p2 = refine(p1);
  CHECK(p2.L == 97);
  CHECK(p2.max_dirs == 784);
  CHECK(generate_directions(make_grid(2, 2, p2.L), p2.bound_p, p2.bound_q, p2.multiples, p2.max_dirs).size() == 784);
}

TEST_CASE("refine: coarse lattice values persist on the fine lattice") {
  const Grid coarse = make_grid(2, 2, 25);
  const Grid fine = make_grid(2, 2, 49);
  for (int k = 0; k < 25; ++k) CHECK(fine.axis_coord(coarse.axis_value(k)) == 2 * k);
}

TEST_CASE("check_laminate: explicit laminate certifies at level 0") {
  auto measure = order2_laminate(9);
  LaminateBudget budget;
  budget.g_samples_per_level = 6;
  budget.schedule = RefinementSchedule::from_base(default_grid_params(2, 9), 0);
  budget.seed = 11;
  auto report = check_laminate(measure, budget);
  CHECK(report.status == LaminateStatus::certified_up_to);
  CHECK(report.level == 0);
  CHECK(report.pairs_tested == 12);  // random draws plus the deterministic net
}

TEST_CASE("check_laminate: zero budget is reported as exhausted") {
  auto measure = order2_laminate(9);
  LaminateBudget budget;
  budget.g_samples_per_level = 0;
  budget.schedule = RefinementSchedule::from_base(default_grid_params(2, 9), 1);
  CHECK(check_laminate(measure, budget).status == LaminateStatus::budget_exhausted);

  LaminateBudget capped;
  capped.g_samples_per_level = 8;
  capped.schedule = RefinementSchedule::from_base(default_grid_params(2, 9), 0);
  capped.max_pairs = 1;
  auto r = check_laminate(measure, capped);
  CHECK((r.status == LaminateStatus::budget_exhausted || r.status == LaminateStatus::suspicious));
}

TEST_CASE("check_laminate: non-degenerate m=3 measure stays suspicious under refinement") {
  auto measure = skew_three_wave(5);
  CHECK_FALSE(is_degenerate(measure));
  LaminateBudget budget;
  budget.g_samples_per_level = 8;
  budget.schedule.levels = {default_grid_params(3, 5), default_grid_params(3, 9)};
  budget.seed = 4;
  auto report = check_laminate(measure, budget);
  CHECK(report.status == LaminateStatus::suspicious);
  REQUIRE(report.witness_g.has_value());
  CHECK(report.witness_margin > 0.0);
  CHECK(report.level == 1);  // survived the full ladder
}

TEST_CASE("jensen_fixed_function: null Lagrangian and convex bounds") {
  Rng rng(606);
  const Grid grid = make_grid(2, 2, 25);
  SampleSpecParams params;
  params.N = 3;
  params.freq_bound = 8;
  for (int t = 0; t < 6; ++t) {
    auto spec = sample_spec(rng, grid, params);
    auto support = build_support(spec);
    double max_det = 0.0, max_norm = 0.0;
    for (const auto& X : support) {
      max_det = std::max(max_det, std::abs(X.determinant()));
      max_norm = std::max(max_norm, X.norm());
    }
    const double tol = marginal_tolerance(spec, 4096);
    const double pattern_count = static_cast<double>(support.size());

    const double det_gap = jensen_fixed_function("det", Matrix::Zero(2, 2), spec, 4096);
    CHECK(std::abs(det_gap) <= pattern_count * tol * max_det + 1e-12);

    const double fro_gap = jensen_fixed_function("frobenius", Matrix::Zero(2, 2), spec, 4096);
    CHECK(fro_gap <= pattern_count * tol * max_norm + 1e-12);
  }
}

TEST_CASE("jensen_fixed_function: shifted base uses f(. - A)") {
  auto measure = order2_laminate(9);
  (void)measure;
  PlaneWaveSpec spec;
  spec.m = 2;
  spec.waves.resize(1);
  spec.waves[0].a = Eigen::VectorXd::Zero(2);
  spec.waves[0].a(0) = 0.5;
  spec.waves[0].n << 1, 0;
  Matrix base(2, 2);
  base << 0.25, 0.0, 0.0, 0.25;
  // det is quasiaffine, so the gap vanishes at every base point
  CHECK(std::abs(jensen_fixed_function("det", base, spec, 4096)) <= 1e-10);
}

TEST_CASE("function registry") {
  CHECK(FunctionRegistry::global().contains("det"));
  CHECK(FunctionRegistry::global().contains("negdet"));
  CHECK(FunctionRegistry::global().contains("frobenius"));
  CHECK_THROWS_AS(FunctionRegistry::global().get("nope"), std::out_of_range);

  FunctionRegistry reg;
  reg.register_fn("sumabs", [](const Matrix& A) { return A.cwiseAbs().sum(); });
  CHECK(reg.get("sumabs")(Matrix::Identity(2, 2)) == 2.0);
}
