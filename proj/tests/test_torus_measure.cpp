#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "oracle.hpp"
#include "r1/grid.hpp"
#include "r1/rng.hpp"
#include "r1/torus_measure.hpp"

using namespace r1;

namespace {

PlaneWaveSpec make_spec(int m, std::vector<WaveComponent> waves) {
  PlaneWaveSpec s;
  s.m = m;
  s.waves = std::move(waves);
  return s;
}

WaveComponent wave(std::initializer_list<double> a, int n0, int n1, double c) {
  WaveComponent w;
  w.a = Eigen::VectorXd(static_cast<int>(a.size()));
  int i = 0;
  for (double v : a) w.a(i++) = v;
  w.n << n0, n1;
  w.c = c;
  return w;
}

}  // namespace

TEST_CASE("sawtooth: definition and periodicity") {
  CHECK(sawtooth(0.25) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(sawtooth(0.75) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(sawtooth(1.25) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(sawtooth(-0.25) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(sawtooth(0.0) == 0.0);
  CHECK(sawtooth(0.5) == 0.5);
}

TEST_CASE("haar: half-open sign convention") {
  CHECK(haar(0.25) == +1);
  CHECK(haar(0.75) == -1);
  CHECK(haar(1.25) == +1);
  CHECK(haar(0.0) == +1);
  CHECK(haar(0.5) == -1);
  CHECK(haar(-0.25) == -1);
}

TEST_CASE("build_support: direct formula") {
  SUBCASE("N=1") {
    auto spec = make_spec(2, {wave({1, 0}, 1, 1, 0.0)});
    auto X = build_support(spec);
    REQUIRE(X.size() == 2);
    Matrix plus(2, 2);
    plus << 1, 1, 0, 0;
    CHECK(X[1] == plus);
    CHECK(X[0] == -plus);
  }
  SUBCASE("N=2 axis-aligned") {
    auto spec = make_spec(2, {wave({1, 0}, 1, 0, 0.0), wave({0, 1}, 0, 1, 0.0)});
    auto X = build_support(spec);
    REQUIRE(X.size() == 4);
    CHECK(X[3] == Matrix::Identity(2, 2));  // ++
    Matrix pm(2, 2);
    pm << 1, 0, 0, -1;
    CHECK(X[1] == pm);  // eps = (+,-)
    CHECK(X[2] == -pm);
    CHECK(X[0] == -Matrix::Identity(2, 2));
  }
  SUBCASE("N=3, m=3") {
    auto spec = make_spec(3, {wave({1, 0, 0}, 1, 0, 0.0), wave({0, 1, 0}, 0, 1, 0.0), wave({0, 0, 1}, 1, 1, 0.0)});
    auto X = build_support(spec);
    REQUIRE(X.size() == 8);
    Matrix top(3, 2);
    top << 1, 0, 0, 1, 1, 1;
    CHECK(X[7] == top);
  }
}

TEST_CASE("compute_weights: N=1 is balanced") {
  for (double c : {0.0, 0.3, 0.77}) {
    auto spec = make_spec(2, {wave({0.5, -0.25}, 2, -3, c)});
    auto w = compute_weights(spec, 4096);
    CHECK(w(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w(1) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("compute_weights: N=2 independent directions are uniform") {
  auto spec = make_spec(2, {wave({1, 0}, 1, 0, 0.13), wave({0, 1}, 0, 1, 0.71)});
  auto w = compute_weights(spec, 4096);
  for (int i = 0; i < 4; ++i) CHECK(w(i) == doctest::Approx(0.25).epsilon(1e-9));
  // brute-force oracle route
  auto bf = oracle::brute_force_weights(spec, 1024);
  CHECK((w - bf).cwiseAbs().maxCoeff() < 5e-3);
}

TEST_CASE("compute_weights: N=3 quarter-phase configuration") {
  // Sign regions of ((1,0),(0,1),(1,1)) with phases (0,0,1/4): the unit square
  // decomposes into triangles of area 1/32; the sign-product orbit gives
  // weight 1/16 when eps_1 eps_2 eps_3 = +1 and 3/16 otherwise.
  auto spec = make_spec(2, {wave({1, 0}, 1, 0, 0.0), wave({0, 1}, 0, 1, 0.0), wave({1, 1}, 1, 1, 0.25)});
  auto w = compute_weights(spec, 4096);
  REQUIRE(w.size() == 8);
  for (std::uint32_t eps = 0; eps < 8; ++eps) {
    const int product = sign_of(eps, 0) * sign_of(eps, 1) * sign_of(eps, 2);
    const double expected = product > 0 ? 1.0 / 16.0 : 3.0 / 16.0;
    CHECK(w(eps) == doctest::Approx(expected).epsilon(1e-9));
  }
  CHECK(w(7) == doctest::Approx(1.0 / 16.0).epsilon(1e-9));
  auto bf = oracle::brute_force_weights(spec, 2048);
  CHECK((w - bf).cwiseAbs().maxCoeff() < 2e-3);
}

TEST_CASE("compute_weights: normalization, marginals, pairwise uniformity") {
  const int R = 4096;
  Rng rng(20240521);
  const auto grid = make_grid(2, 2, 25);
  for (int trial = 0; trial < 25; ++trial) {
    SampleSpecParams params;
    params.N = 1 + static_cast<int>(rng.uniform_int(0, 3));
    params.freq_bound = 8;
    auto spec = sample_spec(rng, grid, params);
    auto w = compute_weights(spec, R);
    const int N = spec.wave_count();

    CHECK(std::abs(w.sum() - 1.0) < 1e-12);
    CHECK(w.minCoeff() >= 0.0);

    const double tol_marginal = marginal_tolerance(spec, R);
    for (int i = 0; i < N; ++i) {
      double marg = 0.0;
      for (std::uint32_t eps = 0; eps < spec.pattern_count(); ++eps) marg += w(eps) * sign_of(eps, i);
      CHECK(std::abs(marg) <= tol_marginal);
    }

    for (int i = 0; i < N; ++i) {
      for (int j = i + 1; j < N; ++j) {
        double quad[2][2] = {{0, 0}, {0, 0}};
        for (std::uint32_t eps = 0; eps < spec.pattern_count(); ++eps) {
          quad[(eps >> i) & 1u][(eps >> j) & 1u] += w(eps);
        }
        for (int s = 0; s < 2; ++s)
          for (int t = 0; t < 2; ++t) CHECK(std::abs(quad[s][t] - 0.25) <= 10.0 / R);
      }
    }
  }
}

TEST_CASE("compute_weights: independent of amplitudes") {
  auto spec = make_spec(2, {wave({0.25, 0.5}, 2, 1, 0.4), wave({-0.75, 0.1}, 1, -1, 0.9)});
  auto w1 = compute_weights(spec, 512);
  for (auto& wv : spec.waves) wv.a *= -3.7;
  auto w2 = compute_weights(spec, 512);
  CHECK((w1 - w2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("compute_weights: doubling the resolution moves weights by O(1/R)") {
  Rng rng(99);
  const auto grid = make_grid(2, 2, 25);
  for (int trial = 0; trial < 8; ++trial) {
    SampleSpecParams params;
    params.N = 3;
    params.freq_bound = 6;
    auto spec = sample_spec(rng, grid, params);
    double C = 0.0;
    for (const auto& wv : spec.waves) C += 4.0 * (std::abs(wv.n(0)) + std::abs(wv.n(1)) + 1);
    for (int R : {256, 512, 1024}) {
      auto wa = compute_weights(spec, R);
      auto wb = compute_weights(spec, 2 * R);
      CHECK((wa - wb).cwiseAbs().maxCoeff() <= C / R);
    }
  }
}

TEST_CASE("compute_weights: rejects tiny resolution") {
  auto spec = make_spec(2, {wave({1, 0}, 1, 0, 0.0)});
  CHECK_THROWS_AS(compute_weights(spec, 32), std::invalid_argument);
}

TEST_CASE("measure: sign symmetry is exact") {
  Rng rng(4242);
  const auto grid = make_grid(3, 2, 13);
  SampleSpecParams params;
  params.N = 3;
  params.freq_bound = 5;
  auto spec = sample_spec(rng, grid, params);
  auto X = build_support(spec);
  const std::uint32_t all = spec.pattern_count() - 1;
  for (std::uint32_t eps = 0; eps < spec.pattern_count(); ++eps) {
    CHECK(X[eps] == -X[all ^ eps]);  // bitwise-exact negation
  }
}

TEST_CASE("barycenter") {
  SUBCASE("N=1 with exact half weights vanishes") {
    auto spec = make_spec(2, {wave({1, 0.5}, 1, 2, 0.2)});
    auto measure = make_measure(spec, 4096);
    CHECK(barycenter(measure).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("quadrature bound for sampled specs") {
    Rng rng(7);
    const auto grid = make_grid(2, 2, 25);
    SampleSpecParams params;
    params.N = 3;
    params.freq_bound = 6;
    for (int t = 0; t < 5; ++t) {
      auto spec = sample_spec(rng, grid, params);
      auto measure = make_measure(spec, 4096);
      double scale = 0.0;
      for (const auto& wv : spec.waves) scale += wv.a.norm() * wv.n.cast<double>().norm();
      CHECK(barycenter(measure).cwiseAbs().maxCoeff() <= marginal_tolerance(spec, 4096) * scale);
    }
  }
  SUBCASE("hand-set weights pick out a support point") {
    auto spec = make_spec(2, {wave({1, 0}, 1, 0, 0.0), wave({0, 1}, 0, 1, 0.0)});
    auto measure = make_measure(spec, 4096);
    measure.weights.setZero();
    measure.weights(0) = 1.0;
    CHECK(barycenter(measure) == measure.points[0]);
  }
}

TEST_CASE("degeneracy flag") {
  auto axis = make_spec(2, {wave({1, 0}, 1, 0, 0.1), wave({0, 1}, 0, 1, 0.9)});
  CHECK(is_degenerate(make_measure(axis, 4096)));
  auto skew = make_spec(2, {wave({1, 0}, 1, 0, 0.0), wave({0, 1}, 0, 1, 0.0), wave({1, 1}, 1, 1, 0.25)});
  CHECK_FALSE(is_degenerate(make_measure(skew, 4096)));
}

TEST_CASE("sample_spec: constraints hold on every draw") {
  Rng rng(31337);
  const auto grid = make_grid(2, 2, 25);
  SampleSpecParams params;
  params.N = 3;
  params.freq_bound = 25;
  for (int t = 0; t < 40; ++t) {
    auto spec = sample_spec(rng, grid, params);
    spec.validate();  // pairwise independence, nonzero amplitudes
    auto X = build_support(spec);
    for (const auto& M : X) {
      CHECK(M.cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
      // on-lattice by construction
      for (int r = 0; r < M.rows(); ++r)
        for (int c = 0; c < M.cols(); ++c) CHECK(grid.axis_coord(M(r, c)) >= 0);
    }
  }
}

TEST_CASE("sample_spec: pinned phases") {
  Rng rng(5);
  const auto grid = make_grid(2, 2, 25);
  SampleSpecParams params;
  params.N = 3;
  params.freq_bound = 6;
  params.pin_phases = true;
  auto spec = sample_spec(rng, grid, params);
  CHECK(spec.waves[0].c == 0.0);
  CHECK(spec.waves[1].c == 0.0);
}

TEST_CASE("sample_spec: exhausted budget reports unsatisfiable parameters") {
  Rng rng(1);
  const auto grid = make_grid(2, 2, 25);
  SampleSpecParams params;
  params.N = 3;
  params.budget = 0;
  CHECK_THROWS_AS(sample_spec(rng, grid, params), SampleBudgetExceeded);
}

TEST_CASE("spec validation rejects bad input") {
  CHECK_THROWS_AS(make_spec(2, {}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_spec(2, {wave({0, 0}, 1, 0, 0.0)}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_spec(2, {wave({1, 0}, 0, 0, 0.0)}).validate(), std::invalid_argument);
  // collinear frequencies (1,2) and (2,4)
  CHECK_THROWS_AS(make_spec(2, {wave({1, 0}, 1, 2, 0.0), wave({0, 1}, 2, 4, 0.0)}).validate(), std::invalid_argument);
}
