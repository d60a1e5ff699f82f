#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "r1/grid.hpp"
#include "r1/rng.hpp"

namespace r1 {

// One plane wave of a deformation: amplitude a in R^m, integer frequency
// direction n in Z^2, phase c in [0,1).
struct WaveComponent {
  Eigen::VectorXd a;
  Eigen::Vector2i n;
  double c = 0.0;
};

// An N-wave deformation of the 2-torus into R^m. Only the gradient data is
// ever used: the deformation itself is never materialized.
struct PlaneWaveSpec {
  int m = 2;
  std::vector<WaveComponent> waves;

  int wave_count() const { return static_cast<int>(waves.size()); }
  std::uint32_t pattern_count() const { return 1u << waves.size(); }

  // Throws std::invalid_argument on: empty wave list, m < 2, zero amplitude,
  // zero frequency, or pairwise linearly dependent frequencies.
  void validate() const;
};

// Sign patterns are N-bit indices: bit i set <=> epsilon_i = +1, so index 0
// is all-minus and 2^N - 1 is all-plus.  All 2^N-long arrays (weights,
// support, g-vectors) are ordered this way.
inline int sign_of(std::uint32_t pattern, int i) { return (pattern >> i) & 1u ? +1 : -1; }

// 1-periodic sawtooth: s(t) = t on [0,1/2], 1-t on [1/2,1].
double sawtooth(double t);

// Its a.e. derivative, the Haar step: +1 on [0,1/2), -1 on [1/2,1).
int haar(double t);

// Gradient support: X_eps = sum_i eps_i a_i (x) n_i, ordered by pattern index.
std::vector<Matrix> build_support(const PlaneWaveSpec& spec);

struct WeightResult {
  Eigen::VectorXd weights;
  int perturbed_slices = 0;  // measure-zero slice degeneracies sidestepped
};

// Torus-area weights nu_eps by slice-exact quadrature: exact sign-region
// measures along x1, R midpoint slices along x2.  Weights sum to 1 up to
// floating summation error.  Requires resolution >= 64.
WeightResult compute_weights_detailed(const PlaneWaveSpec& spec, int resolution);
Eigen::VectorXd compute_weights(const PlaneWaveSpec& spec, int resolution);

// The discrete gradient Young measure generated by a spec.
struct DiscreteGYMeasure {
  int m = 0;
  int N = 0;
  std::vector<Matrix> points;   // 2^N support matrices, pattern order
  Eigen::VectorXd weights;      // 2^N nonnegative, sum 1
  int weight_resolution = 0;
  int quadrature_warnings = 0;
};

DiscreteGYMeasure make_measure(const PlaneWaveSpec& spec, int resolution);

Matrix barycenter(const DiscreteGYMeasure& measure);

// Quadrature bound on |sum_eps nu_eps eps_i| for any single wave.
double marginal_tolerance(const PlaneWaveSpec& spec, int resolution);

// True when every weight is within 10/R of the uniform value 2^-N.
bool is_degenerate(const DiscreteGYMeasure& measure);

struct SampleSpecParams {
  int N = 3;
  int freq_bound = 25;      // frequencies drawn from ([-freq_bound, freq_bound] cap Z)^2
  bool pin_phases = false;  // set c_1 = c_2 = 0
  int budget = 10000;       // rejection budget, shared by the n- and a-stages
};

struct SampleBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Can any on-grid amplitude set carry these frequencies inside the box?
// Exact check over row assignments: minimal-magnitude amplitudes put one
// component of size h per wave, so feasibility reduces to packing the
// per-column frequency magnitudes into m rows of capacity (L-1)/2.
bool amplitudes_feasible(const std::vector<Eigen::Vector2i>& freqs, int m, int half_span);

// Stagewise sampling, matching the harness nesting (n-sets, then phases,
// then amplitude sets).  sample_frequencies rejects sets that are pairwise
// dependent or that admit no amplitudes at all; sample_amplitudes rejects
// zero amplitudes and box violations.  Both throw SampleBudgetExceeded.
std::vector<Eigen::Vector2i> sample_frequencies(Rng& rng, int N, int freq_bound, int m, int half_span,
                                                int budget = 10000);
std::vector<double> sample_phases(Rng& rng, int N, bool pin_phases);
std::vector<Eigen::VectorXd> sample_amplitudes(Rng& rng, const Grid& grid,
                                               const std::vector<Eigen::Vector2i>& freqs, int budget = 10000);

// Rejection sampling of a deformation whose support lies on `grid`:
// frequencies pairwise linearly independent, amplitudes drawn from the grid's
// per-axis values (so the X_eps are on-lattice by construction), every X_eps
// inside [-1,1]^{2m}.  Throws SampleBudgetExceeded when the budget runs out.
PlaneWaveSpec sample_spec(Rng& rng, const Grid& grid, const SampleSpecParams& params);

}  // namespace r1
