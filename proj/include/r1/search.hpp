#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "r1/io.hpp"
#include "r1/laminate.hpp"
#include "r1/torus_measure.hpp"

namespace r1 {

// Full configuration of one randomized counterexample search.
struct SearchConfig {
  int m = 2;
  int N = 3;
  int L = 25;
  int bound_p = 2;
  int bound_q = 2;
  bool multiples = false;
  int max_dirs = 0;  // 0 = full enumeration
  double gamma = 0.1;
  int M_n = 7;
  int M_c = 1;
  int M_a = 30;
  int M_g = 50;
  std::uint64_t seed = 1;
  int resolution = 4096;
  int freq_bound = 0;  // 0 -> L
  int schedule_depth = 2;
  bool refine_all = true;  // refine every suspicious pair, not only margin > gamma
  bool require_nondegenerate = false;
  bool pin_phases = false;
  double tol_conv = 1e-7;
  int max_iter = 10000;

  int measures() const { return M_n * M_c * M_a; }
  int effective_freq_bound() const { return freq_bound > 0 ? freq_bound : L; }
  GridParams grid_params() const;

  // Reference sampling sizes per target count of waves (m = 2 runs).
  static SearchConfig defaults_for(int m, int N);

  Json to_json() const;
  static SearchConfig from_json(const Json& j);
};

struct TrialRecord {
  std::int64_t id = 0;
  std::string phase;  // "screen" or "refine"
  int n_idx = 0, c_idx = 0, a_idx = 0, g_idx = 0;
  PlaneWaveSpec spec;
  Eigen::VectorXd weights;
  bool degenerate = false;
  Eigen::VectorXd g;
  double nu_g = 0.0;
  double envelope0 = 0.0;
  double margin = 0.0;
  std::string status;  // certified | suspicious | sufficiently_suspicious | refined_certified | survived_refinement
  GridParams grid;
  int num_directions = 0;
  int iterations = 0;
  std::string stop_reason;
  std::string seed_path;
  double wall_ms = 0.0;
  Json refine_levels = Json::array();  // refine phase: per-level results

  Json to_json() const;
  static TrialRecord from_json(const Json& j);
  std::string key() const;  // (phase, n, c, a, g) identity for resume
};

struct ResumeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsatisfiableParameters : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using RecordSink = std::function<void(const TrialRecord&)>;

// Optional replay cache: completed trials looked up by key instead of being
// recomputed; the stream stays identical to an uninterrupted run.
class ReplayCache {
 public:
  void insert(const TrialRecord& r);
  const TrialRecord* find(const std::string& key) const;
  std::size_t size() const { return by_key_.size(); }

 private:
  std::map<std::string, TrialRecord> by_key_;
};

// Algorithm steps 1-6: nested sampling of (n, c, a), weights computed once
// per (n, c), then up to M_g functions g per measure with early advance on
// the first sufficiently suspicious hit.  Emits every record in trial order;
// the stream is a pure function of the config.
std::vector<TrialRecord> run_search(const SearchConfig& config, const RecordSink& sink,
                                    const ReplayCache* cache = nullptr);

// Step 7: rerun suspicious pairs through the refinement ladder; emits one
// refine record per pair and returns them.
std::vector<TrialRecord> examine_suspicious(const SearchConfig& config, const std::vector<TrialRecord>& screened,
                                            const RecordSink& sink, const ReplayCache* cache = nullptr);

// Runs (or resumes) a search against an append-only JSONL log and returns
// all records.  Resume refuses configs that differ from the log header.
std::vector<TrialRecord> run_search_with_log(const SearchConfig& config, const std::string& path, bool resume);

struct Summary {
  std::int64_t pairs = 0;
  std::int64_t suspicious_pairs = 0;
  std::int64_t sufficiently_suspicious_pairs = 0;
  int measures = 0;
  int suspicious_measures = 0;
  int sufficiently_suspicious_measures = 0;
  int refined_pairs = 0;
  int refined_certified = 0;
  int survived_refinement = 0;
  double wall_ms_total = 0.0;

  double suspicious_rate() const { return pairs ? static_cast<double>(suspicious_pairs) / pairs : 0.0; }
  double sufficiently_suspicious_rate() const {
    return pairs ? static_cast<double>(sufficiently_suspicious_pairs) / pairs : 0.0;
  }
  Json to_json() const;
  std::string table() const;  // human-readable
};

Summary summarize(const std::vector<TrialRecord>& records);

}  // namespace r1
