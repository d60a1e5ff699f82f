#include "r1/search.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace r1 {

namespace {

constexpr int kMaxFreqRetries = 64;
constexpr int kMaxPhaseRetries = 16;
constexpr int kMaxAmplitudeRetries = 20;

Json grid_params_to_json(const GridParams& p) {
  return Json{{"L", p.L},           {"bound_p", p.bound_p},   {"bound_q", p.bound_q}, {"multiples", p.multiples},
              {"max_dirs", p.max_dirs}, {"tol_conv", p.tol_conv}, {"max_iter", p.max_iter}};
}

GridParams grid_params_from_json(const Json& j) {
  GridParams p;
  p.L = j.at("L").get<int>();
  p.bound_p = j.at("bound_p").get<int>();
  p.bound_q = j.at("bound_q").get<int>();
  p.multiples = j.at("multiples").get<bool>();
  p.max_dirs = j.at("max_dirs").get<int>();
  p.tol_conv = j.at("tol_conv").get<double>();
  p.max_iter = j.at("max_iter").get<int>();
  return p;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  Eigen::VectorXd v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

}  // namespace

GridParams SearchConfig::grid_params() const {
  GridParams p;
  p.L = L;
  p.bound_p = bound_p;
  p.bound_q = bound_q;
  p.multiples = multiples;
  p.max_dirs = max_dirs;
  p.tol_conv = tol_conv;
  p.max_iter = max_iter;
  return p;
}

SearchConfig SearchConfig::defaults_for(int m, int N) {
  SearchConfig c;
  c.m = m;
  c.N = N;
  if (m >= 3) {
    c.L = 19;
    c.max_dirs = 168;
    c.M_n = 30;
    c.M_c = 1;
    c.M_a = 1;
    c.M_g = 50;
    c.require_nondegenerate = true;
    return c;
  }
  switch (N) {
    case 4:
      c.M_n = 7;
      c.M_c = 7;
      c.M_a = 20;
      c.M_g = 160;
      break;
    case 5:
      c.M_n = 7;
      c.M_c = 7;
      c.M_a = 20;
      c.M_g = 320;
      break;
    default:  // N = 3 reference run
      c.M_n = 7;
      c.M_c = 1;
      c.M_a = 30;
      c.M_g = 50;
      break;
  }
  return c;
}

Json SearchConfig::to_json() const {
  return Json{{"m", m},
              {"N", N},
              {"L", L},
              {"bound_p", bound_p},
              {"bound_q", bound_q},
              {"multiples", multiples},
              {"max_dirs", max_dirs},
              {"gamma", gamma},
              {"M_n", M_n},
              {"M_c", M_c},
              {"M_a", M_a},
              {"M_g", M_g},
              {"seed", seed},
              {"resolution", resolution},
              {"freq_bound", freq_bound},
              {"schedule_depth", schedule_depth},
              {"refine_all", refine_all},
              {"require_nondegenerate", require_nondegenerate},
              {"pin_phases", pin_phases},
              {"tol_conv", tol_conv},
              {"max_iter", max_iter}};
}

SearchConfig SearchConfig::from_json(const Json& j) {
  SearchConfig c;
  c.m = j.at("m").get<int>();
  c.N = j.at("N").get<int>();
  c.L = j.at("L").get<int>();
  c.bound_p = j.at("bound_p").get<int>();
  c.bound_q = j.at("bound_q").get<int>();
  c.multiples = j.at("multiples").get<bool>();
  c.max_dirs = j.at("max_dirs").get<int>();
  c.gamma = j.at("gamma").get<double>();
  c.M_n = j.at("M_n").get<int>();
  c.M_c = j.at("M_c").get<int>();
  c.M_a = j.at("M_a").get<int>();
  c.M_g = j.at("M_g").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.resolution = j.at("resolution").get<int>();
  c.freq_bound = j.at("freq_bound").get<int>();
  c.schedule_depth = j.at("schedule_depth").get<int>();
  c.refine_all = j.at("refine_all").get<bool>();
  c.require_nondegenerate = j.at("require_nondegenerate").get<bool>();
  c.pin_phases = j.at("pin_phases").get<bool>();
  c.tol_conv = j.at("tol_conv").get<double>();
  c.max_iter = j.at("max_iter").get<int>();
  return c;
}

std::string TrialRecord::key() const {
  std::ostringstream os;
  os << phase << '/' << n_idx << '.' << c_idx << '.' << a_idx << '.' << g_idx;
  return os.str();
}

Json TrialRecord::to_json() const {
  Json j{{"id", id},   {"phase", phase}, {"n", n_idx}, {"c", c_idx},
         {"a", a_idx}, {"g_idx", g_idx}, {"status", status}};
  if (phase == "screen") {
    j["spec"] = spec_to_json(spec);
    j["weights"] = vector_to_json(weights);
    j["degenerate"] = degenerate;
    j["g"] = vector_to_json(g);
    j["nu_g"] = nu_g;
    j["envelope0"] = envelope0;
    j["margin"] = margin;
    j["grid"] = grid_params_to_json(grid);
    j["dirs"] = num_directions;
    j["iterations"] = iterations;
    j["stop_reason"] = stop_reason;
  } else {
    j["margin"] = margin;
    j["levels"] = refine_levels;
  }
  j["seed_path"] = seed_path;
  j["wall_ms"] = wall_ms;
  return j;
}

TrialRecord TrialRecord::from_json(const Json& j) {
  TrialRecord r;
  r.id = j.at("id").get<std::int64_t>();
  r.phase = j.at("phase").get<std::string>();
  r.n_idx = j.at("n").get<int>();
  r.c_idx = j.at("c").get<int>();
  r.a_idx = j.at("a").get<int>();
  r.g_idx = j.at("g_idx").get<int>();
  r.status = j.at("status").get<std::string>();
  r.margin = j.at("margin").get<double>();
  if (r.phase == "screen") {
    r.spec = spec_from_json(j.at("spec"));
    r.weights = vector_from_json(j.at("weights"));
    r.degenerate = j.at("degenerate").get<bool>();
    r.g = vector_from_json(j.at("g"));
    r.nu_g = j.at("nu_g").get<double>();
    r.envelope0 = j.at("envelope0").get<double>();
    r.grid = grid_params_from_json(j.at("grid"));
    r.num_directions = j.at("dirs").get<int>();
    r.iterations = j.at("iterations").get<int>();
    r.stop_reason = j.at("stop_reason").get<std::string>();
  } else {
    r.refine_levels = j.value("levels", Json::array());
  }
  r.seed_path = j.value("seed_path", "");
  r.wall_ms = j.value("wall_ms", 0.0);
  return r;
}

void ReplayCache::insert(const TrialRecord& r) { by_key_.insert_or_assign(r.key(), r); }

const TrialRecord* ReplayCache::find(const std::string& key) const {
  auto it = by_key_.find(key);
  return it == by_key_.end() ? nullptr : &it->second;
}

std::vector<TrialRecord> run_search(const SearchConfig& config, const RecordSink& sink, const ReplayCache* cache) {
  if (config.gamma < 0.0 || config.gamma > 1.0) throw std::invalid_argument("search: gamma must lie in [0,1]");
  if (config.M_n < 1 || config.M_c < 1 || config.M_a < 1 || config.M_g < 1)
    throw std::invalid_argument("search: sampling counts must be >= 1");

  const Grid grid = make_grid(config.m, 2, config.L);
  const int half_span = (config.L - 1) / 2;
  const GridParams gp = config.grid_params();
  const int freq_bound = config.effective_freq_bound();

  std::vector<TrialRecord> records;
  std::int64_t next_id = 0;

  for (int n_idx = 0; n_idx < config.M_n; ++n_idx) {
    std::vector<Eigen::Vector2i> freqs;
    std::vector<std::vector<double>> phase_sets(static_cast<std::size_t>(config.M_c));
    std::vector<Eigen::VectorXd> weight_sets(static_cast<std::size_t>(config.M_c));
    std::vector<std::string> phase_paths(static_cast<std::size_t>(config.M_c));

    // Resolve the frequency set together with all its phase sets; when the
    // non-degeneracy requirement cannot be met, draw a new frequency set.
    std::uint64_t n_retry = 0;
    std::string n_path;
    for (;; ++n_retry) {
      if (n_retry >= kMaxFreqRetries)
        throw UnsatisfiableParameters("search: no admissible frequency set for slot " + std::to_string(n_idx));
      Rng rng_n = Rng::substream(config.seed, {stream::kDirections, static_cast<std::uint64_t>(n_idx), n_retry});
      try {
        freqs = sample_frequencies(rng_n, config.N, freq_bound, config.m, half_span);
      } catch (const SampleBudgetExceeded&) {
        continue;
      }
      n_path = "n" + std::to_string(n_idx) + (n_retry ? ".r" + std::to_string(n_retry) : "");

      bool all_phases_ok = true;
      for (int c_idx = 0; c_idx < config.M_c && all_phases_ok; ++c_idx) {
        bool ok = false;
        for (std::uint64_t c_retry = 0; c_retry < kMaxPhaseRetries; ++c_retry) {
          Rng rng_c = Rng::substream(config.seed, {stream::kPhases, static_cast<std::uint64_t>(n_idx),
                                                   static_cast<std::uint64_t>(c_idx), n_retry, c_retry});
          auto phases = sample_phases(rng_c, config.N, config.pin_phases);
          PlaneWaveSpec probe;
          probe.m = config.m;
          probe.waves.resize(static_cast<std::size_t>(config.N));
          for (int i = 0; i < config.N; ++i) {
            probe.waves[static_cast<std::size_t>(i)].n = freqs[static_cast<std::size_t>(i)];
            probe.waves[static_cast<std::size_t>(i)].c = phases[static_cast<std::size_t>(i)];
            probe.waves[static_cast<std::size_t>(i)].a = Eigen::VectorXd::Unit(config.m, 0);
          }
          auto w = compute_weights(probe, config.resolution);
          const double uniform = 1.0 / static_cast<double>(w.size());
          const bool degenerate = (w.array() - uniform).abs().maxCoeff() <= 10.0 / config.resolution;
          if (config.require_nondegenerate && degenerate) continue;
          phase_sets[static_cast<std::size_t>(c_idx)] = std::move(phases);
          weight_sets[static_cast<std::size_t>(c_idx)] = std::move(w);
          phase_paths[static_cast<std::size_t>(c_idx)] =
              "c" + std::to_string(c_idx) + (c_retry ? ".r" + std::to_string(c_retry) : "");
          ok = true;
          break;
        }
        if (!ok) all_phases_ok = false;
      }
      if (all_phases_ok) break;
    }

    for (int c_idx = 0; c_idx < config.M_c; ++c_idx) {
      const auto& phases = phase_sets[static_cast<std::size_t>(c_idx)];
      const auto& weights = weight_sets[static_cast<std::size_t>(c_idx)];

      for (int a_idx = 0; a_idx < config.M_a; ++a_idx) {
        std::vector<Eigen::VectorXd> amps;
        std::string a_path;
        bool have_amps = false;
        for (std::uint64_t a_retry = 0; a_retry < kMaxAmplitudeRetries; ++a_retry) {
          Rng rng_a = Rng::substream(config.seed, {stream::kAmplitudes, static_cast<std::uint64_t>(n_idx),
                                                   static_cast<std::uint64_t>(c_idx), static_cast<std::uint64_t>(a_idx),
                                                   n_retry, a_retry});
          try {
            amps = sample_amplitudes(rng_a, grid, freqs);
          } catch (const SampleBudgetExceeded&) {
            continue;
          }
          a_path = "a" + std::to_string(a_idx) + (a_retry ? ".r" + std::to_string(a_retry) : "");
          have_amps = true;
          break;
        }
        if (!have_amps)
          throw UnsatisfiableParameters("search: no admissible amplitudes for " + n_path + "/c" + std::to_string(c_idx));

        PlaneWaveSpec spec;
        spec.m = config.m;
        spec.waves.resize(static_cast<std::size_t>(config.N));
        for (int i = 0; i < config.N; ++i) {
          spec.waves[static_cast<std::size_t>(i)].a = amps[static_cast<std::size_t>(i)];
          spec.waves[static_cast<std::size_t>(i)].n = freqs[static_cast<std::size_t>(i)];
          spec.waves[static_cast<std::size_t>(i)].c = phases[static_cast<std::size_t>(i)];
        }
        DiscreteGYMeasure measure{config.m, config.N, build_support(spec), weights, config.resolution, 0};
        const bool degenerate = is_degenerate(measure);

        for (int g_idx = 0; g_idx < config.M_g; ++g_idx) {
          TrialRecord rec;
          rec.phase = "screen";
          rec.n_idx = n_idx;
          rec.c_idx = c_idx;
          rec.a_idx = a_idx;
          rec.g_idx = g_idx;

          const TrialRecord* cached = cache ? cache->find(rec.key()) : nullptr;
          if (cached) {
            records.push_back(*cached);
            next_id = std::max(next_id, cached->id + 1);
          } else {
            Rng rng_g = Rng::substream(config.seed, {stream::kG, static_cast<std::uint64_t>(n_idx),
                                                     static_cast<std::uint64_t>(c_idx), static_cast<std::uint64_t>(a_idx),
                                                     static_cast<std::uint64_t>(g_idx)});
            Eigen::VectorXd g(1 << config.N);
            for (int i = 0; i < g.size(); ++i) g(i) = rng_g.uniform(-1.0, 1.0);

            const JensenVerdict v = check_pair(measure, g, gp, config.gamma);

            rec.id = next_id++;
            rec.spec = spec;
            rec.weights = weights;
            rec.degenerate = degenerate;
            rec.g = std::move(g);
            rec.nu_g = v.nu_g;
            rec.envelope0 = v.envelope_at_zero;
            rec.margin = v.margin;
            rec.status = v.sufficiently_suspicious ? "sufficiently_suspicious"
                        : v.status == VerdictStatus::suspicious ? "suspicious"
                                                                : "certified";
            rec.grid = gp;
            rec.num_directions = v.num_directions;
            rec.iterations = v.iterations;
            rec.stop_reason = to_string(v.stop_reason);
            rec.seed_path = n_path + "/" + phase_paths[static_cast<std::size_t>(c_idx)] + "/" + a_path + "/g" +
                            std::to_string(g_idx);
            rec.wall_ms = v.wall_ms;
            sink(rec);
            records.push_back(rec);
          }

          // Step-6 control flow: one sufficiently suspicious g advances to
          // the next measure.
          if (records.back().status == "sufficiently_suspicious") break;
        }
      }
    }
  }
  return records;
}

std::vector<TrialRecord> examine_suspicious(const SearchConfig& config, const std::vector<TrialRecord>& screened,
                                            const RecordSink& sink, const ReplayCache* cache) {
  std::vector<TrialRecord> out;
  if (config.schedule_depth <= 0) return out;
  const auto schedule = RefinementSchedule::from_base(config.grid_params(), config.schedule_depth);

  std::int64_t next_id = 0;
  for (const auto& r : screened) next_id = std::max(next_id, r.id + 1);

  for (const auto& rec : screened) {
    if (rec.phase != "screen" || rec.margin <= 0.0) continue;
    if (!config.refine_all && rec.margin <= config.gamma) continue;

    TrialRecord ref;
    ref.phase = "refine";
    ref.n_idx = rec.n_idx;
    ref.c_idx = rec.c_idx;
    ref.a_idx = rec.a_idx;
    ref.g_idx = rec.g_idx;

    const TrialRecord* cached = cache ? cache->find(ref.key()) : nullptr;
    if (cached) {
      out.push_back(*cached);
      next_id = std::max(next_id, cached->id + 1);
      continue;
    }

    DiscreteGYMeasure measure{config.m, config.N, build_support(rec.spec), rec.weights, config.resolution, 0};
    ref.id = next_id++;
    ref.seed_path = rec.seed_path;
    ref.status = "survived_refinement";
    double total_ms = 0.0;
    double final_margin = rec.margin;
    for (std::size_t level = 1; level < schedule.levels.size(); ++level) {
      const JensenVerdict v = check_pair(measure, rec.g, schedule.levels[level], config.gamma);
      total_ms += v.wall_ms;
      final_margin = v.margin;
      ref.refine_levels.push_back(Json{{"L", v.grid.L},
                                       {"bound_p", v.grid.bound_p},
                                       {"bound_q", v.grid.bound_q},
                                       {"dirs", v.num_directions},
                                       {"margin", v.margin},
                                       {"iterations", v.iterations},
                                       {"stop_reason", to_string(v.stop_reason)}});
      if (v.margin <= 0.0) {
        ref.status = "refined_certified";
        break;
      }
    }
    ref.margin = final_margin;
    ref.wall_ms = total_ms;
    sink(ref);
    out.push_back(ref);
  }
  return out;
}

std::vector<TrialRecord> run_search_with_log(const SearchConfig& config, const std::string& path, bool resume) {
  ReplayCache cache;
  const bool have_log = std::filesystem::exists(path);
  if (resume && have_log) {
    JsonlFile f = read_jsonl(path, "r1lab/trials");
    const SearchConfig logged = SearchConfig::from_json(f.header.at("config"));
    if (logged.to_json() != config.to_json())
      throw ResumeMismatch("resume: log was written by a different configuration");
    for (const auto& j : f.records) cache.insert(TrialRecord::from_json(j));
    if (f.torn_tail) {
      // drop the interrupted fragment before appending
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      write_json_line(out, f.header);
      for (const auto& j : f.records) write_json_line(out, j);
    }
  } else {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_json_line(out, make_header("r1lab/trials", config.seed, config.to_json()));
  }

  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot append to " + path);
  RecordSink sink = [&out, &path](const TrialRecord& r) {
    write_json_line(out, r.to_json());
    out.flush();
    if (!out) throw std::runtime_error("persistence failure writing " + path);
  };

  auto records = run_search(config, sink, &cache);
  auto refined = examine_suspicious(config, records, sink, &cache);
  records.insert(records.end(), refined.begin(), refined.end());
  return records;
}

Json Summary::to_json() const {
  return Json{{"pairs", pairs},
              {"suspicious_pairs", suspicious_pairs},
              {"sufficiently_suspicious_pairs", sufficiently_suspicious_pairs},
              {"suspicious_rate", suspicious_rate()},
              {"sufficiently_suspicious_rate", sufficiently_suspicious_rate()},
              {"measures", measures},
              {"suspicious_measures", suspicious_measures},
              {"sufficiently_suspicious_measures", sufficiently_suspicious_measures},
              {"refined_pairs", refined_pairs},
              {"refined_certified", refined_certified},
              {"survived_refinement", survived_refinement},
              {"wall_ms_total", wall_ms_total}};
}

std::string Summary::table() const {
  std::ostringstream os;
  os << "pairs tested            " << pairs << "\n"
     << "suspicious              " << suspicious_pairs << " (" << 100.0 * suspicious_rate() << "%)\n"
     << "sufficiently suspicious " << sufficiently_suspicious_pairs << " (" << 100.0 * sufficiently_suspicious_rate()
     << "%)\n"
     << "measures                " << measures << "\n"
     << "suspicious measures     " << suspicious_measures << "\n"
     << "suff. susp. measures    " << sufficiently_suspicious_measures << "\n"
     << "refined pairs           " << refined_pairs << " (certified " << refined_certified << ", survived "
     << survived_refinement << ")\n";
  return os.str();
}

Summary summarize(const std::vector<TrialRecord>& records) {
  Summary s;
  std::map<std::string, int> measure_state;  // 0 clean, 1 suspicious, 2 sufficiently
  for (const auto& r : records) {
    if (r.phase == "screen") {
      ++s.pairs;
      s.wall_ms_total += r.wall_ms;
      std::ostringstream key;
      key << r.n_idx << '.' << r.c_idx << '.' << r.a_idx;
      auto& state = measure_state[key.str()];
      if (r.margin > 0.0) {
        ++s.suspicious_pairs;
        state = std::max(state, 1);
      }
      if (r.status == "sufficiently_suspicious") {
        ++s.sufficiently_suspicious_pairs;
        state = std::max(state, 2);
      }
    } else {
      ++s.refined_pairs;
      s.wall_ms_total += r.wall_ms;
      if (r.status == "refined_certified") ++s.refined_certified;
      if (r.status == "survived_refinement") ++s.survived_refinement;
    }
  }
  s.measures = static_cast<int>(measure_state.size());
  for (const auto& [k, v] : measure_state) {
    if (v >= 1) ++s.suspicious_measures;
    if (v >= 2) ++s.sufficiently_suspicious_measures;
  }
  return s;
}

}  // namespace r1
