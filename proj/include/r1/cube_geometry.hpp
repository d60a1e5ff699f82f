#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "r1/directions.hpp"
#include "r1/rng.hpp"
#include "r1/torus_measure.hpp"

namespace r1 {

// The support set viewed as vertices of the N-cube, with the rank-one dyads
// a_i (x) n_i spanning its edges.
struct CubeConfig {
  int m = 0;
  int N = 0;
  std::vector<Matrix> vertices;  // 2^N, pattern order
  std::vector<Matrix> dyads;     // N
};

CubeConfig make_cube_config(const PlaneWaveSpec& spec);

// Open segment e(t) = base + t * dyad[free_index], t in (-1,1); fixed_bits
// carries the signs of the other coordinates (bit free_index is zero).
struct Edge {
  int free_index = 0;
  std::uint32_t fixed_bits = 0;
  Matrix base;
};

// N * 2^{N-1} edges, free-index-major, fixed signs in pattern order.
std::vector<Edge> enumerate_edges(const CubeConfig& config);
int edge_id(const CubeConfig& config, const Edge& e);

// Endpoint vertex patterns of an edge.
std::pair<std::uint32_t, std::uint32_t> edge_endpoints(const Edge& e);

// Trivial pairs per the 2-skeleton convention: a vertex is trivially
// connected to its N incident edges; an edge to the N-1 edges obtained by
// flipping one of its fixed signs.
bool vertex_edge_trivial(std::uint32_t vertex_pattern, const Edge& e);
bool edge_edge_trivial(const Edge& a, const Edge& b);

struct TrivialCatalogue {
  std::vector<std::vector<int>> vertex_edges;  // per vertex: incident edge ids
  std::vector<std::vector<int>> edge_edges;    // per edge: flip-partner ids
};

TrivialCatalogue trivial_catalogue(const CubeConfig& config);

// Does some open-interval point of e see the vertex along a rank-one line?
// All 2x2 minors of X_v - e(t) are affine in t; m=2 solves the single root,
// m>=3 requires the roots to coincide within tol.
bool vertex_edge_connected(const CubeConfig& config, std::uint32_t vertex_pattern, const Edge& e, double tol);

// Rank-one connection between open segments.  Every minor of e1(s) - e2(t)
// is bilinear; for m=2 a bilinear form on a square attains its extrema at
// the corners, so a sign check on the tol-shrunk square decides.  For m>=3
// the first two independent forms are eliminated by resultant and the rest
// verified at the candidate roots; degenerate eliminations fall back to a
// dense 512x512 sweep (flagged).
bool edge_edge_connected(const CubeConfig& config, const Edge& e1, const Edge& e2, double tol,
                         bool* used_fallback = nullptr);

struct ConnectionStats {
  std::vector<int> vertex_counts;  // non-trivial edges seen by each vertex
  std::vector<int> edge_counts;    // non-trivial edges seen by each edge
  double vertex_mean = 0.0;
  double vertex_meandev = 0.0;  // mean absolute deviation
  double edge_mean = 0.0;
  double edge_meandev = 0.0;
  int fallback_pairs = 0;
};

// Connected non-trivial pairs, for figure data.
struct ConnectionLists {
  std::vector<std::pair<int, int>> vertex_edge;  // (vertex pattern, edge id)
  std::vector<std::pair<int, int>> edge_edge;    // (edge id, edge id), i < j
};

// Applies both tests to all non-trivial pairs.  For N=2 the whole
// configuration is a single 2-face, so every connection lives in the
// 2-skeleton and all non-trivial counts are zero by definition.
ConnectionStats count_connections(const CubeConfig& config, double tol = 1e-9, ConnectionLists* lists = nullptr);

enum class SamplingLaw { lattice, real };

struct SurveyParams {
  int m = 2;
  int N = 3;
  int samples = 500;
  SamplingLaw law = SamplingLaw::lattice;
  int L = 25;           // lattice law: amplitude grid and box constraint
  int freq_bound = 25;  // frequency range for both laws
  double tol = 1e-9;
  std::uint64_t seed = 1;
};

struct SurveyRow {
  int m = 0, N = 0, samples = 0;
  double vertex_mean = 0.0, vertex_meandev = 0.0;
  double edge_mean = 0.0, edge_meandev = 0.0;
  std::uint64_t seed = 0;
};

// Samples configurations under the chosen law and averages the per-config
// statistics; deterministic per seed and independent of worker count.
SurveyRow connection_survey(const SurveyParams& params);

// One configuration drawn under the survey law (exposed for figure data).
CubeConfig sample_survey_config(const SurveyParams& params, std::int64_t index);

}  // namespace r1
