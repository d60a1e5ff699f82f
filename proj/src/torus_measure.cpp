#include "r1/torus_measure.hpp"

#include <algorithm>
#include <cmath>

namespace r1 {

namespace {

double frac(double t) {
  double f = t - std::floor(t);
  if (f >= 1.0) f -= 1.0;  // guards against floor rounding at negative epsilons
  return f;
}

}  // namespace

void PlaneWaveSpec::validate() const {
  if (waves.empty()) throw std::invalid_argument("spec: at least one wave required");
  if (m < 2) throw std::invalid_argument("spec: target dimension m must be >= 2");
  if (waves.size() >= 31) throw std::invalid_argument("spec: too many waves");
  for (const auto& w : waves) {
    if (w.a.size() != m) throw std::invalid_argument("spec: amplitude length != m");
    if (w.a.isZero(0.0)) throw std::invalid_argument("spec: zero amplitude");
    if (w.n(0) == 0 && w.n(1) == 0) throw std::invalid_argument("spec: zero frequency");
  }
  for (std::size_t i = 0; i < waves.size(); ++i) {
    for (std::size_t j = i + 1; j < waves.size(); ++j) {
      const auto &ni = waves[i].n, &nj = waves[j].n;
      const long long det = static_cast<long long>(ni(0)) * nj(1) - static_cast<long long>(ni(1)) * nj(0);
      if (det == 0) throw std::invalid_argument("spec: frequencies linearly dependent");
    }
  }
}

double sawtooth(double t) {
  const double f = frac(t);
  return f <= 0.5 ? f : 1.0 - f;
}

int haar(double t) { return frac(t) < 0.5 ? +1 : -1; }

std::vector<Matrix> build_support(const PlaneWaveSpec& spec) {
  spec.validate();
  const int N = spec.wave_count();
  std::vector<Matrix> dyads(N);
  for (int i = 0; i < N; ++i) dyads[i] = spec.waves[i].a * spec.waves[i].n.cast<double>().transpose();
  std::vector<Matrix> support(spec.pattern_count());
  for (std::uint32_t eps = 0; eps < spec.pattern_count(); ++eps) {
    Matrix X = Matrix::Zero(spec.m, 2);
    for (int i = 0; i < N; ++i) X += sign_of(eps, i) * dyads[i];
    support[eps] = std::move(X);
  }
  return support;
}

WeightResult compute_weights_detailed(const PlaneWaveSpec& spec, int resolution) {
  spec.validate();
  if (resolution < 64) throw std::invalid_argument("weights: resolution must be >= 64");
  const int N = spec.wave_count();
  const int R = resolution;
  const std::uint32_t patterns = spec.pattern_count();

  Eigen::VectorXd w = Eigen::VectorXd::Zero(patterns);
  int perturbed = 0;

  std::vector<double> breaks;
  std::vector<double> base(N);       // n_i[1]*x2 + c_i per wave, fixed on a slice
  std::vector<int> const_sign(N);    // sign of waves with n_i[0] == 0

  for (int k = 0; k < R; ++k) {
    double x2 = (k + 0.5) / R;

    // A wave that is constant along the slice may sit exactly on a Haar
    // discontinuity; nudge the slice off the measure-zero set.
    double offset = 1e-7 / R;
    bool slice_perturbed = false;
    for (int attempt = 0; attempt < 8; ++attempt) {
      bool degenerate = false;
      for (int i = 0; i < N; ++i) {
        if (spec.waves[i].n(0) != 0) continue;
        const double t = spec.waves[i].n(1) * x2 + spec.waves[i].c;
        if (std::abs(2.0 * t - std::llround(2.0 * t)) < 1e-12) {
          degenerate = true;
          break;
        }
      }
      if (!degenerate) break;
      x2 += offset;
      offset *= 4.0;
      slice_perturbed = true;
    }
    if (slice_perturbed) ++perturbed;

    breaks.clear();
    for (int i = 0; i < N; ++i) {
      const int n1 = spec.waves[i].n(0);
      base[i] = spec.waves[i].n(1) * x2 + spec.waves[i].c;
      if (n1 == 0) {
        const_sign[i] = haar(base[i]);
        continue;
      }
      // Sign flips where 2*(n1*x1 + base) crosses an integer: x1 = (j/2 - base)/n1.
      const double b = base[i];
      if (n1 > 0) {
        const long long j0 = static_cast<long long>(std::ceil(2.0 * b));
        for (long long j = j0; j < j0 + 2LL * n1; ++j) {
          const double x1 = (0.5 * j - b) / n1;
          if (x1 >= 0.0 && x1 < 1.0) breaks.push_back(x1);
        }
      } else {
        const long long j0 = static_cast<long long>(std::floor(2.0 * b));
        for (long long j = j0; j > j0 + 2LL * n1; --j) {
          const double x1 = (0.5 * j - b) / n1;
          if (x1 >= 0.0 && x1 < 1.0) breaks.push_back(x1);
        }
      }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.push_back(1.0);

    double prev = 0.0;
    for (const double next : breaks) {
      const double len = next - prev;
      if (len > 0.0) {
        const double mid = 0.5 * (prev + next);
        std::uint32_t pattern = 0;
        for (int i = 0; i < N; ++i) {
          const int s = spec.waves[i].n(0) == 0 ? const_sign[i] : haar(spec.waves[i].n(0) * mid + base[i]);
          if (s > 0) pattern |= 1u << i;
        }
        w(pattern) += len;
      }
      prev = next;
    }
  }

  w /= R;
  return WeightResult{std::move(w), perturbed};
}

Eigen::VectorXd compute_weights(const PlaneWaveSpec& spec, int resolution) {
  return compute_weights_detailed(spec, resolution).weights;
}

DiscreteGYMeasure make_measure(const PlaneWaveSpec& spec, int resolution) {
  auto wr = compute_weights_detailed(spec, resolution);
  return DiscreteGYMeasure{spec.m, spec.wave_count(), build_support(spec), std::move(wr.weights), resolution,
                           wr.perturbed_slices};
}

Matrix barycenter(const DiscreteGYMeasure& measure) {
  Matrix B = Matrix::Zero(measure.m, 2);
  for (std::size_t eps = 0; eps < measure.points.size(); ++eps) B += measure.weights(static_cast<int>(eps)) * measure.points[eps];
  return B;
}

double marginal_tolerance(const PlaneWaveSpec& spec, int resolution) {
  int max_n2 = 0;
  for (const auto& w : spec.waves) max_n2 = std::max(max_n2, std::abs(w.n(1)));
  return 2.0 * (max_n2 + 1) / resolution;
}

bool is_degenerate(const DiscreteGYMeasure& measure) {
  const double uniform = 1.0 / static_cast<double>(measure.weights.size());
  const double tol = 10.0 / measure.weight_resolution;
  return (measure.weights.array() - uniform).abs().maxCoeff() <= tol;
}

namespace {

bool assign_rows(const std::vector<Eigen::Vector2i>& freqs, int m, int half_span, std::size_t wave,
                 std::vector<int>& load0, std::vector<int>& load1) {
  if (wave == freqs.size()) return true;
  const int f0 = std::abs(freqs[wave](0));
  const int f1 = std::abs(freqs[wave](1));
  for (int r = 0; r < m; ++r) {
    if (load0[r] + f0 <= half_span && load1[r] + f1 <= half_span) {
      load0[r] += f0;
      load1[r] += f1;
      if (assign_rows(freqs, m, half_span, wave + 1, load0, load1)) return true;
      load0[r] -= f0;
      load1[r] -= f1;
    }
  }
  return false;
}

}  // namespace

bool amplitudes_feasible(const std::vector<Eigen::Vector2i>& freqs, int m, int half_span) {
  std::vector<int> load0(m, 0), load1(m, 0);
  return assign_rows(freqs, m, half_span, 0, load0, load1);
}

std::vector<Eigen::Vector2i> sample_frequencies(Rng& rng, int N, int freq_bound, int m, int half_span, int budget) {
  if (N < 1) throw std::invalid_argument("sample_frequencies: N must be >= 1");
  if (freq_bound < 1) throw std::invalid_argument("sample_frequencies: freq_bound must be >= 1");
  std::vector<Eigen::Vector2i> freqs;
  for (;;) {
    if (--budget < 0)
      throw SampleBudgetExceeded("sample_frequencies: rejection budget exceeded (unsatisfiable parameters?)");
    freqs.clear();
    bool ok = true;
    for (int i = 0; i < N && ok; ++i) {
      Eigen::Vector2i n(static_cast<int>(rng.uniform_int(-freq_bound, freq_bound)),
                        static_cast<int>(rng.uniform_int(-freq_bound, freq_bound)));
      if (n(0) == 0 && n(1) == 0) {
        ok = false;
        break;
      }
      for (const auto& nj : freqs) {
        if (static_cast<long long>(n(0)) * nj(1) - static_cast<long long>(n(1)) * nj(0) == 0) {
          ok = false;
          break;
        }
      }
      if (ok) freqs.push_back(n);
    }
    if (!ok) continue;
    if (!amplitudes_feasible(freqs, m, half_span)) continue;
    return freqs;
  }
}

std::vector<double> sample_phases(Rng& rng, int N, bool pin_phases) {
  std::vector<double> phases(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) phases[static_cast<std::size_t>(i)] = rng.uniform01();
  if (pin_phases) {
    for (int i = 0; i < std::min(N, 2); ++i) phases[static_cast<std::size_t>(i)] = 0.0;
  }
  return phases;
}

std::vector<Eigen::VectorXd> sample_amplitudes(Rng& rng, const Grid& grid, const std::vector<Eigen::Vector2i>& freqs,
                                               int budget) {
  const int m = grid.m();
  const int L = grid.L();
  const int N = static_cast<int>(freqs.size());
  std::vector<Eigen::VectorXd> amps(static_cast<std::size_t>(N));
  for (;;) {
    if (--budget < 0)
      throw SampleBudgetExceeded("sample_amplitudes: rejection budget exceeded (unsatisfiable parameters?)");
    bool ok = true;
    for (int i = 0; i < N; ++i) {
      Eigen::VectorXd a(m);
      for (int r = 0; r < m; ++r) a(r) = grid.axis_value(static_cast<int>(rng.uniform_int(0, L - 1)));
      if (a.isZero(0.0)) {
        ok = false;
        break;
      }
      amps[static_cast<std::size_t>(i)] = std::move(a);
    }
    if (!ok) continue;
    // box constraint: sum_i |a_i[r]| |n_i[c]| <= 1 for all (r,c)
    for (int r = 0; r < m && ok; ++r) {
      for (int c = 0; c < 2 && ok; ++c) {
        double s = 0.0;
        for (int i = 0; i < N; ++i) s += std::abs(amps[static_cast<std::size_t>(i)](r)) * std::abs(freqs[static_cast<std::size_t>(i)](c));
        if (s > 1.0 + 1e-9) ok = false;
      }
    }
    if (ok) return amps;
  }
}

PlaneWaveSpec sample_spec(Rng& rng, const Grid& grid, const SampleSpecParams& params) {
  const int half_span = (grid.L() - 1) / 2;
  auto freqs = sample_frequencies(rng, params.N, params.freq_bound, grid.m(), half_span, params.budget);
  auto phases = sample_phases(rng, params.N, params.pin_phases);
  auto amps = sample_amplitudes(rng, grid, freqs, params.budget);

  PlaneWaveSpec spec;
  spec.m = grid.m();
  spec.waves.resize(static_cast<std::size_t>(params.N));
  for (int i = 0; i < params.N; ++i) {
    spec.waves[static_cast<std::size_t>(i)].a = std::move(amps[static_cast<std::size_t>(i)]);
    spec.waves[static_cast<std::size_t>(i)].n = freqs[static_cast<std::size_t>(i)];
    spec.waves[static_cast<std::size_t>(i)].c = phases[static_cast<std::size_t>(i)];
  }
  spec.validate();
  return spec;
}

}  // namespace r1
