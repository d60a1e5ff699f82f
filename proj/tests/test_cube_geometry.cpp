#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "r1/cube_geometry.hpp"
#include "r1/rng.hpp"

using namespace r1;

namespace {

PlaneWaveSpec random_real_spec(Rng& rng, int m, int N, int freq_bound) {
  PlaneWaveSpec spec;
  spec.m = m;
  spec.waves.resize(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    auto& w = spec.waves[static_cast<std::size_t>(i)];
    for (;;) {
      w.n << static_cast<int>(rng.uniform_int(-freq_bound, freq_bound)),
          static_cast<int>(rng.uniform_int(-freq_bound, freq_bound));
      if (w.n(0) == 0 && w.n(1) == 0) continue;
      bool indep = true;
      for (int j = 0; j < i; ++j) {
        const auto& nj = spec.waves[static_cast<std::size_t>(j)].n;
        if (static_cast<long long>(w.n(0)) * nj(1) - static_cast<long long>(w.n(1)) * nj(0) == 0) indep = false;
      }
      if (indep) break;
    }
    w.a = Eigen::VectorXd(m);
    for (int r = 0; r < m; ++r) w.a(r) = rng.uniform(-1.0, 1.0);
    w.c = rng.uniform01();
  }
  return spec;
}

}  // namespace

TEST_CASE("edges: counts, endpoints, ids") {
  Rng rng(1);
  auto cfg = make_cube_config(random_real_spec(rng, 2, 3, 5));
  auto edges = enumerate_edges(cfg);
  CHECK(edges.size() == 12);  // N * 2^{N-1}
  for (std::size_t e = 0; e < edges.size(); ++e) {
    CHECK(edge_id(cfg, edges[e]) == static_cast<int>(e));
    auto [lo, hi] = edge_endpoints(edges[e]);
    // endpoints differ exactly in the free coordinate
    CHECK((lo ^ hi) == (1u << edges[e].free_index));
    // e(+-1) reproduces the endpoint vertices
    const Matrix at_plus = edges[e].base + cfg.dyads[static_cast<std::size_t>(edges[e].free_index)];
    const Matrix at_minus = edges[e].base - cfg.dyads[static_cast<std::size_t>(edges[e].free_index)];
    CHECK((at_plus - cfg.vertices[hi]).cwiseAbs().maxCoeff() == 0.0);
    CHECK((at_minus - cfg.vertices[lo]).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("trivial catalogue combinatorics") {
  Rng rng(2);
  SUBCASE("N=3") {
    auto cfg = make_cube_config(random_real_spec(rng, 2, 3, 5));
    auto cat = trivial_catalogue(cfg);
    CHECK(cat.vertex_edges.size() == 8);
    CHECK(cat.edge_edges.size() == 12);
    for (const auto& v : cat.vertex_edges) CHECK(v.size() == 3);
    for (const auto& e : cat.edge_edges) CHECK(e.size() == 2);
  }
  SUBCASE("N=4") {
    auto cfg = make_cube_config(random_real_spec(rng, 2, 4, 5));
    auto cat = trivial_catalogue(cfg);
    CHECK(cat.edge_edges.size() == 32);
    for (const auto& v : cat.vertex_edges) CHECK(v.size() == 4);
    for (const auto& e : cat.edge_edges) CHECK(e.size() == 3);
  }
}

TEST_CASE("trivial pairs are always rank-one connected") {
  Rng rng(3);
  for (int m : {2, 3}) {
    auto cfg = make_cube_config(random_real_spec(rng, m, 3, 5));
    auto edges = enumerate_edges(cfg);
    for (std::size_t v = 0; v < cfg.vertices.size(); ++v) {
      for (const auto& e : edges) {
        if (vertex_edge_trivial(static_cast<std::uint32_t>(v), e))
          CHECK(vertex_edge_connected(cfg, static_cast<std::uint32_t>(v), e, 1e-9));
      }
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      for (std::size_t j = 0; j < edges.size(); ++j) {
        if (i != j && edge_edge_trivial(edges[i], edges[j]))
          CHECK(edge_edge_connected(cfg, edges[i], edges[j], 1e-9));
      }
    }
  }
}

TEST_CASE("N=2: no non-trivial connections for any configuration") {
  Rng rng(4);
  // generic amplitudes
  auto generic = make_cube_config(random_real_spec(rng, 2, 2, 5));
  auto s1 = count_connections(generic);
  for (int c : s1.vertex_counts) CHECK(c == 0);
  for (int c : s1.edge_counts) CHECK(c == 0);

  // parallel amplitudes: the whole square is rank-one foliated, still trivial
  PlaneWaveSpec spec;
  spec.m = 2;
  spec.waves.resize(2);
  spec.waves[0].a = Eigen::VectorXd(2);
  spec.waves[0].a << 1.0, 0.5;
  spec.waves[0].n << 1, 0;
  spec.waves[1].a = spec.waves[0].a;
  spec.waves[1].n << 0, 1;
  auto s2 = count_connections(make_cube_config(spec));
  CHECK(s2.vertex_mean == 0.0);
  CHECK(s2.edge_mean == 0.0);
}

TEST_CASE("closed-form tests agree with dense-sampling oracles") {
  Rng rng(20240610);
  for (int trial = 0; trial < 6; ++trial) {
    const int m = trial % 2 == 0 ? 2 : 3;
    auto cfg = make_cube_config(random_real_spec(rng, m, 3, 5));
    auto edges = enumerate_edges(cfg);
    const double tol = 1e-9;
    for (std::size_t v = 0; v < cfg.vertices.size(); ++v) {
      for (const auto& e : edges) {
        if (vertex_edge_trivial(static_cast<std::uint32_t>(v), e)) continue;
        const bool fast = vertex_edge_connected(cfg, static_cast<std::uint32_t>(v), e, tol);
        const bool slow = oracle::dense_vertex_edge(cfg, static_cast<std::uint32_t>(v), e, tol, 20000);
        CHECK(fast == slow);
      }
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      for (std::size_t j = i + 1; j < edges.size(); ++j) {
        if (edge_edge_trivial(edges[i], edges[j])) continue;
        const bool fast = edge_edge_connected(cfg, edges[i], edges[j], tol);
        const bool slow = oracle::dense_edge_edge(cfg, edges[i], edges[j], tol, m == 2 ? 128 : 96);
        CHECK(fast == slow);
      }
    }
  }
}

TEST_CASE("edge-edge verdict matches the 1024x1024 sweep on a fixed m=2 pair") {
  Rng rng(99);
  auto cfg = make_cube_config(random_real_spec(rng, 2, 3, 7));
  auto edges = enumerate_edges(cfg);
  int checked = 0;
  for (std::size_t i = 0; i < edges.size() && checked < 6; ++i) {
    for (std::size_t j = i + 1; j < edges.size() && checked < 6; ++j) {
      if (edge_edge_trivial(edges[i], edges[j])) continue;
      CHECK(edge_edge_connected(cfg, edges[i], edges[j], 1e-9) ==
            oracle::dense_edge_edge(cfg, edges[i], edges[j], 1e-9, 1024));
      ++checked;
    }
  }
  CHECK(checked == 6);
}

TEST_CASE("bilinear forms attain their square extrema at the corners") {
  Rng rng(55);
  for (int trial = 0; trial < 1000000; ++trial) {
    const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1), c = rng.uniform(-1, 1), d = rng.uniform(-1, 1);
    auto q = [&](double s, double t) { return a + b * s + c * t + d * s * t; };
    double corner_lo = 1e300, corner_hi = -1e300;
    for (double s : {-1.0, 1.0})
      for (double t : {-1.0, 1.0}) {
        corner_lo = std::min(corner_lo, q(s, t));
        corner_hi = std::max(corner_hi, q(s, t));
      }
    // interior samples never beat the corners
    for (int i = 0; i < 5; ++i) {
      const double s = rng.uniform(-1, 1), t = rng.uniform(-1, 1);
      const double v = q(s, t);
      CHECK(v >= corner_lo - 1e-12);
      CHECK(v <= corner_hi + 1e-12);
    }
  }
}

TEST_CASE("connection symmetry") {
  Rng rng(66);
  auto cfg = make_cube_config(random_real_spec(rng, 2, 3, 6));
  auto edges = enumerate_edges(cfg);
  SUBCASE("edge-edge is symmetric") {
    for (std::size_t i = 0; i < edges.size(); ++i)
      for (std::size_t j = i + 1; j < edges.size(); ++j)
        CHECK(edge_edge_connected(cfg, edges[i], edges[j], 1e-9) ==
              edge_edge_connected(cfg, edges[j], edges[i], 1e-9));
  }
  SUBCASE("counts are invariant under the sign flip of the configuration") {
    auto stats = count_connections(cfg);
    const std::uint32_t all = (1u << cfg.N) - 1;
    for (std::uint32_t v = 0; v < cfg.vertices.size(); ++v)
      CHECK(stats.vertex_counts[v] == stats.vertex_counts[all ^ v]);
  }
}

TEST_CASE("connection survey runs deterministically") {
  SurveyParams p;
  p.m = 2;
  p.N = 3;
  p.samples = 12;
  p.L = 25;
  p.freq_bound = 25;
  p.seed = 12345;
  auto r1_ = connection_survey(p);
  auto r2_ = connection_survey(p);
  CHECK(r1_.vertex_mean == r2_.vertex_mean);
  CHECK(r1_.edge_mean == r2_.edge_mean);
  CHECK(r1_.vertex_mean > 0.0);  // m=2 configs do show non-trivial connections

  SUBCASE("N=2 survey is identically zero") {
    SurveyParams p2 = p;
    p2.N = 2;
    auto row = connection_survey(p2);
    CHECK(row.vertex_mean == 0.0);
    CHECK(row.edge_mean == 0.0);
  }
}

TEST_CASE("small-integer m=3 sampling shows non-trivial connections") {
  // amplitudes on a 5-element integer range produce rank-one coincidences
  Rng rng(31415);
  int configs_with_connections = 0;
  for (int trial = 0; trial < 30; ++trial) {
    PlaneWaveSpec spec;
    spec.m = 3;
    spec.waves.resize(3);
    for (int i = 0; i < 3; ++i) {
      auto& w = spec.waves[static_cast<std::size_t>(i)];
      for (;;) {
        w.n << static_cast<int>(rng.uniform_int(-5, 5)), static_cast<int>(rng.uniform_int(-5, 5));
        if (w.n(0) == 0 && w.n(1) == 0) continue;
        bool indep = true;
        for (int j = 0; j < i; ++j) {
          const auto& nj = spec.waves[static_cast<std::size_t>(j)].n;
          if (static_cast<long long>(w.n(0)) * nj(1) - static_cast<long long>(w.n(1)) * nj(0) == 0) indep = false;
        }
        if (indep) break;
      }
      do {
        w.a = Eigen::VectorXd(3);
        for (int r = 0; r < 3; ++r) w.a(r) = static_cast<double>(rng.uniform_int(-5, 5));
      } while (w.a.isZero(0.0));
    }
    auto stats = count_connections(make_cube_config(spec));
    if (stats.vertex_mean > 0.0 || stats.edge_mean > 0.0) ++configs_with_connections;
  }
  CHECK(configs_with_connections > 5);
}
