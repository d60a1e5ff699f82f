#include "r1/cube_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace r1 {

namespace {

// det of rows (r1,r2) of A
double minor_det(const Matrix& A, int r1, int r2) { return A(r1, 0) * A(r2, 1) - A(r1, 1) * A(r2, 0); }

// bilinear mixed term: d/ds det(A + s B) at s=0
double minor_mix(const Matrix& A, const Matrix& B, int r1, int r2) {
  return A(r1, 0) * B(r2, 1) + B(r1, 0) * A(r2, 1) - A(r1, 1) * B(r2, 0) - B(r1, 1) * A(r2, 0);
}

struct BilinearForm {
  // q(s,t) = a + b s + c t + d s t
  double a = 0, b = 0, c = 0, d = 0;
  double eval(double s, double t) const { return a + b * s + c * t + d * s * t; }
  double max_coeff() const { return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)}); }
};

double mean_of(const std::vector<int>& xs) {
  double s = 0;
  for (int x : xs) s += x;
  return xs.empty() ? 0.0 : s / xs.size();
}

double mean_deviation(const std::vector<int>& xs, double mean) {
  double s = 0;
  for (int x : xs) s += std::abs(x - mean);
  return xs.empty() ? 0.0 : s / xs.size();
}

}  // namespace

CubeConfig make_cube_config(const PlaneWaveSpec& spec) {
  spec.validate();
  CubeConfig cfg;
  cfg.m = spec.m;
  cfg.N = spec.wave_count();
  cfg.vertices = build_support(spec);
  cfg.dyads.reserve(spec.waves.size());
  for (const auto& w : spec.waves) cfg.dyads.push_back(w.a * w.n.cast<double>().transpose());
  return cfg;
}

std::vector<Edge> enumerate_edges(const CubeConfig& config) {
  const int N = config.N;
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(N) << (N - 1));
  for (int i = 0; i < N; ++i) {
    for (std::uint32_t k = 0; k < (1u << (N - 1)); ++k) {
      // spread the N-1 fixed sign bits around the free index
      std::uint32_t fixed = 0;
      for (int j = 0, src = 0; j < N; ++j) {
        if (j == i) continue;
        if ((k >> src) & 1u) fixed |= 1u << j;
        ++src;
      }
      Edge e;
      e.free_index = i;
      e.fixed_bits = fixed;
      e.base = Matrix::Zero(config.m, 2);
      for (int j = 0; j < N; ++j) {
        if (j == i) continue;
        e.base += sign_of(fixed, j) * config.dyads[static_cast<std::size_t>(j)];
      }
      edges.push_back(std::move(e));
    }
  }
  return edges;
}

int edge_id(const CubeConfig& config, const Edge& e) {
  const int N = config.N;
  std::uint32_t k = 0;
  for (int j = 0, dst = 0; j < N; ++j) {
    if (j == e.free_index) continue;
    if ((e.fixed_bits >> j) & 1u) k |= 1u << dst;
    ++dst;
  }
  return e.free_index * (1 << (N - 1)) + static_cast<int>(k);
}

std::pair<std::uint32_t, std::uint32_t> edge_endpoints(const Edge& e) {
  return {e.fixed_bits, e.fixed_bits | (1u << e.free_index)};
}

bool vertex_edge_trivial(std::uint32_t vertex_pattern, const Edge& e) {
  return (vertex_pattern & ~(1u << e.free_index)) == e.fixed_bits;
}

bool edge_edge_trivial(const Edge& a, const Edge& b) {
  if (a.free_index != b.free_index) return false;
  const std::uint32_t diff = a.fixed_bits ^ b.fixed_bits;
  return diff != 0 && (diff & (diff - 1)) == 0;  // exactly one flipped sign
}

TrivialCatalogue trivial_catalogue(const CubeConfig& config) {
  const auto edges = enumerate_edges(config);
  TrivialCatalogue cat;
  cat.vertex_edges.resize(config.vertices.size());
  cat.edge_edges.resize(edges.size());
  for (std::size_t v = 0; v < config.vertices.size(); ++v) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (vertex_edge_trivial(static_cast<std::uint32_t>(v), edges[e])) cat.vertex_edges[v].push_back(static_cast<int>(e));
    }
  }
  for (std::size_t e1 = 0; e1 < edges.size(); ++e1) {
    for (std::size_t e2 = 0; e2 < edges.size(); ++e2) {
      if (e1 != e2 && edge_edge_trivial(edges[e1], edges[e2])) cat.edge_edges[e1].push_back(static_cast<int>(e2));
    }
  }
  return cat;
}

bool vertex_edge_connected(const CubeConfig& config, std::uint32_t vertex_pattern, const Edge& e, double tol) {
  const Matrix A = config.vertices[vertex_pattern] - e.base;
  const Matrix& B = config.dyads[static_cast<std::size_t>(e.free_index)];
  const double thr = tol * (1.0 + std::pow(A.norm() + B.norm(), 2));

  // every minor of A - t B is affine in t (the t^2 coefficient is a minor of
  // the rank-one B)
  const int m = config.m;
  std::vector<std::pair<double, double>> minors;  // (constant, slope)
  minors.reserve(static_cast<std::size_t>(m * (m - 1) / 2));
  for (int r1 = 0; r1 < m; ++r1)
    for (int r2 = r1 + 1; r2 < m; ++r2) minors.emplace_back(minor_det(A, r1, r2), -minor_mix(A, B, r1, r2));

  int best = -1;
  double best_slope = thr;
  for (std::size_t k = 0; k < minors.size(); ++k) {
    if (std::abs(minors[k].second) > best_slope) {
      best_slope = std::abs(minors[k].second);
      best = static_cast<int>(k);
    }
  }
  if (best < 0) {
    // no usable slope anywhere: connected iff all minors vanish identically
    for (const auto& [c, s] : minors)
      if (std::abs(c) > thr) return false;
    return true;
  }
  const double t = -minors[static_cast<std::size_t>(best)].first / minors[static_cast<std::size_t>(best)].second;
  if (!(std::abs(t) < 1.0 - tol)) return false;
  for (const auto& [c, s] : minors)
    if (std::abs(c + s * t) > thr) return false;
  return true;
}

namespace {

// A bilinear form attains its square extrema at the corners.  Corner values
// below `floor` are treated as numerically zero: for edge pairs sharing a
// cube vertex the form vanishes quadratically at one corner and its sign
// there is pure rounding noise.  The evaluation is arranged so that swapping
// the two edges (b <-> c with transposed corners) reproduces bit-identical
// values.
bool corner_sign_change(const BilinearForm& q, double a, double floor_) {
  double lo = 1e300, hi = -1e300;
  for (int sigma : {-1, 1}) {
    for (int tau : {-1, 1}) {
      const double lin = sigma * q.b + tau * q.c;
      const double v = q.a + a * lin + (a * a) * (sigma * tau) * q.d;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo >= -floor_ && hi <= floor_) return true;  // the whole square is in the cone
  return lo <= -floor_ && hi >= floor_;
}

bool dense_fallback(const std::vector<BilinearForm>& forms, double a, double thr) {
  auto residual = [&](double s, double t) {
    double r = 0.0;
    for (const auto& q : forms) r = std::max(r, std::abs(q.eval(s, t)));
    return r;
  };
  double best_s = 0, best_t = 0, best = residual(0, 0);
  const int G = 512;
  for (int i = 0; i < G; ++i) {
    const double s = -a + (2 * a) * (i + 0.5) / G;
    for (int j = 0; j < G; ++j) {
      const double t = -a + (2 * a) * (j + 0.5) / G;
      const double r = residual(s, t);
      if (r < best) {
        best = r;
        best_s = s;
        best_t = t;
      }
    }
  }
  double span = 2 * a / G;
  for (int round = 0; round < 6; ++round) {
    const double s0 = best_s, t0 = best_t;
    for (int i = -8; i <= 8; ++i) {
      for (int j = -8; j <= 8; ++j) {
        const double s = std::clamp(s0 + span * i / 8.0, -a, a);
        const double t = std::clamp(t0 + span * j / 8.0, -a, a);
        const double r = residual(s, t);
        if (r < best) {
          best = r;
          best_s = s;
          best_t = t;
        }
      }
    }
    span /= 8.0;
  }
  return best <= thr;
}

}  // namespace

bool edge_edge_connected(const CubeConfig& config, const Edge& e1, const Edge& e2, double tol, bool* used_fallback) {
  if (used_fallback) *used_fallback = false;
  const Matrix C = e1.base - e2.base;
  const Matrix& B1 = config.dyads[static_cast<std::size_t>(e1.free_index)];
  const Matrix& B2 = config.dyads[static_cast<std::size_t>(e2.free_index)];
  const double thr = tol * (1.0 + std::pow(C.norm() + B1.norm() + B2.norm(), 2));
  const double floor_ = 1e-3 * thr;  // numeric-noise floor for corner signs
  const double a = 1.0 - tol;        // open square, shrunk
  const int m = config.m;

  std::vector<BilinearForm> forms;
  forms.reserve(static_cast<std::size_t>(m * (m - 1) / 2));
  for (int r1 = 0; r1 < m; ++r1) {
    for (int r2 = r1 + 1; r2 < m; ++r2) {
      BilinearForm q;
      q.a = minor_det(C, r1, r2);
      q.b = minor_mix(C, B1, r1, r2);
      q.c = -minor_mix(C, B2, r1, r2);
      q.d = -(B1(r1, 0) * B2(r2, 1) + B2(r1, 0) * B1(r2, 1) - B1(r1, 1) * B2(r2, 0) - B2(r1, 1) * B1(r2, 0));
      forms.push_back(q);
    }
  }

  if (m == 2) return corner_sign_change(forms[0], a, floor_);

  // keep the forms that do not vanish identically
  std::vector<BilinearForm> live;
  for (const auto& q : forms)
    if (q.max_coeff() > thr) live.push_back(q);
  if (live.empty()) return true;  // the entire square is rank-one connected
  if (live.size() == 1) return corner_sign_change(live[0], a, floor_);

  std::sort(live.begin(), live.end(),
            [](const BilinearForm& x, const BilinearForm& y) { return x.max_coeff() > y.max_coeff(); });
  for (auto& q : live) {
    const double s = q.max_coeff();
    q.a /= s;
    q.b /= s;
    q.c /= s;
    q.d /= s;
  }

  // eliminate t between the dominant form and the first partner giving a
  // usable resultant: q_i = u_i(s) + t v_i(s), resultant u1 v2 - u2 v1
  const BilinearForm& f1 = live[0];
  const double eps = std::max(tol, 1e-12);
  double r2c = 0, r1c = 0, r0c = 0;
  bool have_resultant = false;
  std::size_t partner = 0;
  for (std::size_t k = 1; k < live.size(); ++k) {
    const BilinearForm& f2 = live[k];
    const double c2 = f1.b * f2.d - f2.b * f1.d;
    const double c1 = f1.a * f2.d + f1.b * f2.c - f2.a * f1.d - f2.b * f1.c;
    const double c0 = f1.a * f2.c - f2.a * f1.c;
    if (std::max({std::abs(c2), std::abs(c1), std::abs(c0)}) > eps) {
      r2c = c2;
      r1c = c1;
      r0c = c0;
      have_resultant = true;
      partner = k;
      break;
    }
  }
  if (!have_resultant) {
    // all live forms proportional: degenerate elimination
    if (used_fallback) *used_fallback = true;
    return dense_fallback(live, a, eps * static_cast<double>(live.size()));
  }
  (void)partner;

  std::vector<double> roots;
  if (std::abs(r2c) <= eps) {
    if (std::abs(r1c) > eps) roots.push_back(-r0c / r1c);
    // |r1c|,|r2c| tiny but |r0c| large: resultant never vanishes, no common zero
  } else {
    const double disc = r1c * r1c - 4 * r2c * r0c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      // numerically stable pairing
      const double q = -0.5 * (r1c + (r1c >= 0 ? sq : -sq));
      roots.push_back(q / r2c);
      if (std::abs(q) > eps) roots.push_back(r0c / q);
      else roots.push_back(-r1c / r2c - q / r2c);
    }
  }

  for (const double s : roots) {
    if (!(std::abs(s) < a)) continue;
    double t = 0.0;
    bool have_t = false;
    for (const auto& q : live) {
      const double v = q.c + q.d * s;
      if (std::abs(v) > eps) {
        t = -(q.a + q.b * s) / v;
        have_t = true;
        break;
      }
    }
    if (!have_t) {
      // every form is constant in t along s: the whole vertical line is a
      // candidate; sample it through the fallback
      if (used_fallback) *used_fallback = true;
      return dense_fallback(live, a, eps * static_cast<double>(live.size()));
    }
    if (!(std::abs(t) < a)) continue;
    bool all_zero = true;
    for (const auto& q : live) {
      if (std::abs(q.eval(s, t)) > 64 * eps) {
        all_zero = false;
        break;
      }
    }
    if (all_zero) return true;
  }
  return false;
}

ConnectionStats count_connections(const CubeConfig& config, double tol, ConnectionLists* lists) {
  const auto edges = enumerate_edges(config);
  ConnectionStats stats;
  stats.vertex_counts.assign(config.vertices.size(), 0);
  stats.edge_counts.assign(edges.size(), 0);

  // For N=2 the configuration is one 2-face: every connection already lives
  // in the 2-skeleton, so nothing counts as non-trivial.
  if (config.N >= 3) {
    for (std::size_t v = 0; v < config.vertices.size(); ++v) {
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (vertex_edge_trivial(static_cast<std::uint32_t>(v), edges[e])) continue;
        if (vertex_edge_connected(config, static_cast<std::uint32_t>(v), edges[e], tol)) {
          ++stats.vertex_counts[v];
          if (lists) lists->vertex_edge.emplace_back(static_cast<int>(v), static_cast<int>(e));
        }
      }
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      for (std::size_t j = i + 1; j < edges.size(); ++j) {
        if (edge_edge_trivial(edges[i], edges[j])) continue;
        bool fb = false;
        if (edge_edge_connected(config, edges[i], edges[j], tol, &fb)) {
          ++stats.edge_counts[i];
          ++stats.edge_counts[j];
          if (lists) lists->edge_edge.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
        if (fb) ++stats.fallback_pairs;
      }
    }
  }

  stats.vertex_mean = mean_of(stats.vertex_counts);
  stats.vertex_meandev = mean_deviation(stats.vertex_counts, stats.vertex_mean);
  stats.edge_mean = mean_of(stats.edge_counts);
  stats.edge_meandev = mean_deviation(stats.edge_counts, stats.edge_mean);
  return stats;
}

CubeConfig sample_survey_config(const SurveyParams& params, std::int64_t index) {
  if (params.law == SamplingLaw::lattice) {
    // amplitude rejection can be thin when frequencies are large; retry
    // with fresh substreams before giving up
    const Grid grid = make_grid(params.m, 2, params.L);
    for (std::uint64_t attempt = 0;; ++attempt) {
      Rng rng = Rng::substream(params.seed, {stream::kSurvey, static_cast<std::uint64_t>(index), attempt});
      SampleSpecParams sp;
      sp.N = params.N;
      sp.freq_bound = params.freq_bound;
      sp.budget = 200000;
      try {
        return make_cube_config(sample_spec(rng, grid, sp));
      } catch (const SampleBudgetExceeded&) {
        if (attempt >= 64) throw;
      }
    }
  }
  Rng rng = Rng::substream(params.seed, {stream::kSurvey, static_cast<std::uint64_t>(index)});
  // real-valued amplitudes, integer frequencies
  PlaneWaveSpec spec;
  spec.m = params.m;
  spec.waves.resize(static_cast<std::size_t>(params.N));
  for (int i = 0; i < params.N; ++i) {
    for (;;) {
      Eigen::Vector2i n(static_cast<int>(rng.uniform_int(-params.freq_bound, params.freq_bound)),
                        static_cast<int>(rng.uniform_int(-params.freq_bound, params.freq_bound)));
      if (n(0) == 0 && n(1) == 0) continue;
      bool indep = true;
      for (int j = 0; j < i; ++j) {
        const auto& nj = spec.waves[static_cast<std::size_t>(j)].n;
        if (static_cast<long long>(n(0)) * nj(1) - static_cast<long long>(n(1)) * nj(0) == 0) indep = false;
      }
      if (!indep) continue;
      spec.waves[static_cast<std::size_t>(i)].n = n;
      break;
    }
    Eigen::VectorXd a(params.m);
    do {
      for (int r = 0; r < params.m; ++r) a(r) = rng.uniform(-1.0, 1.0);
    } while (a.isZero(0.0));
    spec.waves[static_cast<std::size_t>(i)].a = a;
    spec.waves[static_cast<std::size_t>(i)].c = rng.uniform01();
  }
  return make_cube_config(spec);
}

SurveyRow connection_survey(const SurveyParams& params) {
  std::vector<ConnectionStats> per_config(static_cast<std::size_t>(params.samples));
  std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < params.samples; ++k) {
    try {
      per_config[static_cast<std::size_t>(k)] = count_connections(sample_survey_config(params, k), params.tol);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  SurveyRow row;
  row.m = params.m;
  row.N = params.N;
  row.samples = params.samples;
  row.seed = params.seed;
  for (const auto& s : per_config) {
    row.vertex_mean += s.vertex_mean;
    row.vertex_meandev += s.vertex_meandev;
    row.edge_mean += s.edge_mean;
    row.edge_meandev += s.edge_meandev;
  }
  if (params.samples > 0) {
    row.vertex_mean /= params.samples;
    row.vertex_meandev /= params.samples;
    row.edge_mean /= params.samples;
    row.edge_meandev /= params.samples;
  }
  return row;
}

}  // namespace r1
