// r1lab: numerical laboratory for rank-one convexity experiments.
//
// Subcommands: weights, convexify, search, connections, laminate, jensen,
// replay.  Every output file starts with a one-line JSON header carrying the
// format version, seed and effective configuration.
//
// Exit codes: 0 ok, 1 usage, 2 invalid spec/parameters, 3 refused
// (budget/memory), 4 I/O failure, 5 resume mismatch.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "r1/cube_geometry.hpp"
#include "r1/envelope.hpp"
#include "r1/io.hpp"
#include "r1/laminate.hpp"
#include "r1/search.hpp"

namespace {

using r1::Json;

constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitRefused = 3;
constexpr int kExitIo = 4;
constexpr int kExitResumeMismatch = 5;

struct CommonOpts {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
  std::string config_file;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--threads", o.threads, "global thread budget (0 = hardware default)");
  cmd->add_option("--out", o.out, "output path");
  cmd->set_config("--config", "", "key = value configuration file (sections per subcommand)");
}

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("short write to " + path);
}

// --- weights ----------------------------------------------------------------

struct WeightsOpts {
  CommonOpts common;
  std::string spec_file;
  bool sample = false;
  int m = 2, N = 3, L = 25;
  int freq_bound = 0;
  int resolution = 4096;
  bool pin_phases = false;
  bool emit_support = true;
};

Json weights_report(const r1::PlaneWaveSpec& spec, const WeightsOpts& o) {
  const auto measure = r1::make_measure(spec, o.resolution);
  const auto bary = r1::barycenter(measure);
  Json report = r1::make_header("r1lab/weights", o.common.seed,
                                Json{{"spec", r1::spec_to_json(spec)},
                                     {"resolution", o.resolution},
                                     {"sampled", o.sample},
                                     {"L", o.L}});
  report["measure"] = r1::measure_to_json(measure, o.emit_support);
  report["barycenter_norm"] = bary.norm();
  report["marginal_tolerance"] = r1::marginal_tolerance(spec, o.resolution);
  report["degenerate"] = r1::is_degenerate(measure);
  return report;
}

int cmd_weights(const WeightsOpts& o) {
  apply_threads(o.common.threads);
  r1::PlaneWaveSpec spec;
  if (!o.spec_file.empty()) {
    spec = r1::spec_from_json(load_json_file(o.spec_file));
  } else if (o.sample) {
    r1::Rng rng = r1::Rng::substream(o.common.seed, {r1::stream::kSpec});
    r1::SampleSpecParams p;
    p.N = o.N;
    p.freq_bound = o.freq_bound > 0 ? o.freq_bound : o.L;
    p.pin_phases = o.pin_phases;
    spec = r1::sample_spec(rng, r1::make_grid(o.m, 2, o.L), p);
  } else {
    std::cerr << "weights: provide --spec FILE or --sample\n";
    return kExitUsage;
  }
  const Json report = weights_report(spec, o);
  const std::string text = report.dump(2) + "\n";
  if (!o.common.out.empty()) write_text(o.common.out, text);
  std::cout << text;
  return 0;
}

// --- convexify ---------------------------------------------------------------

struct ConvexifyOpts {
  CommonOpts common;
  std::string fn;
  std::string spike_spec;
  std::string g_csv;
  int m = 2, L = 25;
  int bound_p = 2, bound_q = 2, max_dirs = 0;
  bool multiples = false;
  int resolution = 4096;
  double tol_conv = 1e-7;
  int max_iter = 10000;
  double mem_gb = 4.0;
  std::string dump;
};

int cmd_convexify(const ConvexifyOpts& o) {
  apply_threads(o.common.threads);
  const r1::Grid grid = r1::make_grid(o.m, 2, o.L);

  const double bytes = 2.0 * static_cast<double>(grid.table_bytes());
  const double gb = bytes / (1024.0 * 1024.0 * 1024.0);
  std::cerr << "grid: " << grid.point_count() << " points, value tables ~" << gb << " GiB\n";
  if (gb > o.mem_gb) {
    std::cerr << "refused: estimated " << gb << " GiB exceeds --mem-gb " << o.mem_gb << "\n";
    return kExitRefused;
  }

  r1::GridFunction f;
  Json source;
  r1::DiscreteGYMeasure measure;
  bool have_measure = false;
  if (!o.fn.empty()) {
    if (o.m != 2 && (o.fn == "det" || o.fn == "negdet")) {
      std::cerr << "convexify: " << o.fn << " needs m=2\n";
      return kExitInvalid;
    }
    const auto& fn = r1::FunctionRegistry::global().get(o.fn);
    f = r1::tabulate(grid, fn);
    source = Json{{"fn", o.fn}};
  } else if (!o.spike_spec.empty()) {
    const auto spec = r1::spec_from_json(load_json_file(o.spike_spec));
    measure = r1::make_measure(spec, o.resolution);
    have_measure = true;
    Eigen::VectorXd g(measure.weights.size());
    if (!o.g_csv.empty()) {
      std::stringstream ss(o.g_csv);
      std::string tok;
      int i = 0;
      while (std::getline(ss, tok, ',') && i < g.size()) g(i++) = std::stod(tok);
      if (i != g.size()) {
        std::cerr << "convexify: --g needs " << g.size() << " comma-separated values\n";
        return kExitInvalid;
      }
    } else {
      r1::Rng rng = r1::Rng::substream(o.common.seed, {r1::stream::kG});
      for (int i = 0; i < g.size(); ++i) g(i) = rng.uniform(-1.0, 1.0);
    }
    f = r1::spike_function(grid, measure, g).fn;
    source = Json{{"spike", r1::spec_to_json(spec)}, {"g", Json::array()}};
    for (int i = 0; i < g.size(); ++i) source["g"].push_back(g(i));
  } else {
    std::cerr << "convexify: provide --fn NAME or --spike SPECFILE\n";
    return kExitUsage;
  }

  const auto dirs = r1::generate_directions(grid, o.bound_p, o.bound_q, o.multiples, o.max_dirs);
  const std::vector<double> initial = f.values;
  r1::EnvelopeStop stop{o.tol_conv, o.max_iter, std::nullopt};
  auto result = r1::ks_envelope(std::move(f), dirs, stop);

  double max_decrease = 0.0;
  for (std::size_t i = 0; i < initial.size(); ++i)
    max_decrease = std::max(max_decrease, initial[i] - result.final.values[i]);

  Json summary = r1::make_header("r1lab/envelope", o.common.seed,
                                 Json{{"source", source},
                                      {"m", o.m},
                                      {"L", o.L},
                                      {"bound_p", o.bound_p},
                                      {"bound_q", o.bound_q},
                                      {"multiples", o.multiples},
                                      {"max_dirs", o.max_dirs},
                                      {"tol_conv", o.tol_conv},
                                      {"max_iter", o.max_iter}});
  summary["dirs"] = dirs.size();
  summary["iterations"] = result.iterations;
  summary["stop_reason"] = r1::to_string(result.stop_reason);
  summary["value_at_zero"] = result.value_at_barycenter;
  summary["max_total_decrease"] = max_decrease;
  summary["wall_ms"] = result.wall_ms;
  if (have_measure) summary["degenerate"] = r1::is_degenerate(measure);

  if (!o.dump.empty()) {
    r1::dump_grid_function(o.dump, result.final, Json{{"source", source}});
    summary["dump"] = o.dump;
  }
  const std::string text = summary.dump(2) + "\n";
  if (!o.common.out.empty()) write_text(o.common.out, text);
  std::cout << text;
  return 0;
}

// --- search -------------------------------------------------------------------

struct SearchOpts {
  CommonOpts common;
  int m = 2, N = 3;
  int L = 0;  // 0 = per-defaults
  int bound_p = 0, bound_q = 0, max_dirs = -1;
  bool multiples = false;
  double gamma = 0.1;
  int M_n = 0, M_c = 0, M_a = 0, M_g = 0;
  int resolution = 4096;
  int freq_bound = 0;
  int schedule_depth = 2;
  bool refine_above_gamma_only = false;
  bool nondegenerate = false;
  bool pin_phases = false;
  double tol_conv = 1e-7;
  int max_iter = 10000;
  bool resume = false;
};

r1::SearchConfig to_config(const SearchOpts& o) {
  r1::SearchConfig c = r1::SearchConfig::defaults_for(o.m, o.N);
  if (o.L > 0) c.L = o.L;
  if (o.bound_p > 0) c.bound_p = o.bound_p;
  if (o.bound_q > 0) c.bound_q = o.bound_q;
  if (o.max_dirs >= 0) c.max_dirs = o.max_dirs;
  c.multiples = o.multiples;
  c.gamma = o.gamma;
  if (o.M_n > 0) c.M_n = o.M_n;
  if (o.M_c > 0) c.M_c = o.M_c;
  if (o.M_a > 0) c.M_a = o.M_a;
  if (o.M_g > 0) c.M_g = o.M_g;
  c.seed = o.common.seed;
  c.resolution = o.resolution;
  c.freq_bound = o.freq_bound;
  c.schedule_depth = o.schedule_depth;
  c.refine_all = !o.refine_above_gamma_only;
  c.require_nondegenerate = c.require_nondegenerate || o.nondegenerate;
  c.pin_phases = o.pin_phases;
  c.tol_conv = o.tol_conv;
  c.max_iter = o.max_iter;
  return c;
}

int cmd_search(const SearchOpts& o) {
  apply_threads(o.common.threads);
  const r1::SearchConfig config = to_config(o);
  const std::string log_path = o.common.out.empty() ? "search.jsonl" : o.common.out;

  const auto records = r1::run_search_with_log(config, log_path, o.resume);
  const auto summary = r1::summarize(records);

  Json sj = r1::make_header("r1lab/summary", config.seed, config.to_json());
  sj["summary"] = summary.to_json();
  write_text(log_path + ".summary.json", sj.dump(2) + "\n");

  std::cout << summary.table();
  std::cout << "records: " << log_path << "\n";
  return 0;
}

// --- connections ----------------------------------------------------------------

struct ConnectionsOpts {
  CommonOpts common;
  int m = 2, N = 3;
  int samples = 500;
  std::string law = "lattice";
  int L = 25;
  int freq_bound = 25;
  double tol = 1e-9;
  std::string details;
};

int cmd_connections(const ConnectionsOpts& o) {
  apply_threads(o.common.threads);
  r1::SurveyParams p;
  p.m = o.m;
  p.N = o.N;
  p.samples = o.samples;
  p.law = o.law == "real" ? r1::SamplingLaw::real : r1::SamplingLaw::lattice;
  p.L = o.L;
  p.freq_bound = o.freq_bound;
  p.tol = o.tol;
  p.seed = o.common.seed;

  const auto row = r1::connection_survey(p);

  std::ostringstream csv;
  const Json header = r1::make_header("r1lab/survey", p.seed,
                                      Json{{"m", p.m},
                                           {"N", p.N},
                                           {"samples", p.samples},
                                           {"law", o.law},
                                           {"L", p.L},
                                           {"freq_bound", p.freq_bound},
                                           {"tol", p.tol}});
  csv << header.dump() << "\n";
  csv << "m,N,samples,vertex_mean,vertex_meandev,edge_mean,edge_meandev,seed\n";
  csv << row.m << ',' << row.N << ',' << row.samples << ',' << row.vertex_mean << ',' << row.vertex_meandev << ','
      << row.edge_mean << ',' << row.edge_meandev << ',' << row.seed << "\n";
  if (!o.common.out.empty()) write_text(o.common.out, csv.str());
  std::cout << csv.str();

  if (!o.details.empty()) {
    std::ofstream out(o.details, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + o.details);
    r1::write_json_line(out, header);
    for (int k = 0; k < o.samples; ++k) {
      const auto cfg = r1::sample_survey_config(p, k);
      r1::ConnectionLists lists;
      const auto stats = r1::count_connections(cfg, p.tol, &lists);
      Json rec{{"index", k},
               {"vertex_counts", stats.vertex_counts},
               {"edge_counts", stats.edge_counts},
               {"ve", Json::array()},
               {"ee", Json::array()}};
      for (auto [v, e] : lists.vertex_edge) rec["ve"].push_back(Json::array({v, e}));
      for (auto [i, j] : lists.edge_edge) rec["ee"].push_back(Json::array({i, j}));
      r1::write_json_line(out, rec);
    }
  }
  return 0;
}

// --- laminate -----------------------------------------------------------------

struct LaminateOpts {
  CommonOpts common;
  std::string spec_file;
  int resolution = 4096;
  int g_samples = 16;
  int depth = 2;
  int L = 0;  // 0 = default per m
  std::int64_t max_pairs = 0;
};

int cmd_laminate(const LaminateOpts& o) {
  apply_threads(o.common.threads);
  if (o.spec_file.empty()) {
    std::cerr << "laminate: provide --spec FILE\n";
    return kExitUsage;
  }
  const auto spec = r1::spec_from_json(load_json_file(o.spec_file));
  const auto measure = r1::make_measure(spec, o.resolution);

  const int base_L = o.L > 0 ? o.L : (spec.m >= 3 ? 9 : 13);
  r1::LaminateBudget budget;
  budget.g_samples_per_level = o.g_samples;
  budget.schedule = r1::RefinementSchedule::from_base(r1::default_grid_params(spec.m, base_L), o.depth);
  budget.seed = o.common.seed;
  budget.max_pairs = o.max_pairs;

  const auto report = r1::check_laminate(measure, budget);

  Json j = r1::make_header("r1lab/laminate", o.common.seed,
                           Json{{"spec", r1::spec_to_json(spec)},
                                {"resolution", o.resolution},
                                {"g_samples_per_level", o.g_samples},
                                {"depth", o.depth},
                                {"base_L", base_L}});
  j["status"] = r1::to_string(report.status);
  j["level"] = report.level;
  j["net_resolution"] = report.net_resolution;
  j["pairs_tested"] = report.pairs_tested;
  j["note"] = "certified_up_to is an evidence level over the sampled g-net, not a proof of laminate-hood";
  if (report.witness_g) {
    j["witness_g"] = Json::array();
    for (int i = 0; i < report.witness_g->size(); ++i) j["witness_g"].push_back((*report.witness_g)(i));
    j["witness_margin"] = report.witness_margin;
  }
  const std::string text = j.dump(2) + "\n";
  if (!o.common.out.empty()) write_text(o.common.out, text);
  std::cout << text;
  return 0;
}

// --- jensen (fixed functions) ----------------------------------------------------

struct JensenOpts {
  CommonOpts common;
  std::string fn = "det";
  int m = 2, N = 3, L = 25;
  int freq_bound = 0;
  int samples = 100;
  int resolution = 4096;
  std::string base = "zero";  // zero | idh2 | path to JSON matrix
};

int cmd_jensen(const JensenOpts& o) {
  apply_threads(o.common.threads);
  const auto& fn = r1::FunctionRegistry::global().get(o.fn);

  r1::Matrix base = r1::Matrix::Zero(o.m, 2);
  if (o.base == "idh2") {
    if (o.m < 5) {
      std::cerr << "jensen: --base idh2 needs m >= 5\n";
      return kExitInvalid;
    }
    base(0, 0) = 1.0;  // e1 (x) e1 + e5 (x) e2
    base(4, 1) = 1.0;
  } else if (o.base != "zero") {
    base = r1::matrix_from_json(load_json_file(o.base));
    if (base.rows() != o.m || base.cols() != 2) {
      std::cerr << "jensen: base matrix must be " << o.m << "x2\n";
      return kExitInvalid;
    }
  }

  const r1::Grid grid = r1::make_grid(o.m, 2, o.L);
  double max_gap = -1e300, mean_gap = 0.0;
  int positive = 0;
  Json gaps = Json::array();
  for (int k = 0; k < o.samples; ++k) {
    r1::Rng rng = r1::Rng::substream(o.common.seed, {r1::stream::kSpec, static_cast<std::uint64_t>(k)});
    r1::SampleSpecParams p;
    p.N = o.N;
    p.freq_bound = o.freq_bound > 0 ? o.freq_bound : o.L;
    const auto spec = r1::sample_spec(rng, grid, p);
    const double gap = r1::jensen_fixed_function(fn, base, spec, o.resolution);
    gaps.push_back(gap);
    max_gap = std::max(max_gap, gap);
    mean_gap += gap / o.samples;
    if (gap > 1e-9) ++positive;
  }

  Json j = r1::make_header("r1lab/jensen", o.common.seed,
                           Json{{"fn", o.fn},
                                {"m", o.m},
                                {"N", o.N},
                                {"L", o.L},
                                {"samples", o.samples},
                                {"resolution", o.resolution},
                                {"base", o.base}});
  j["max_gap"] = max_gap;
  j["mean_gap"] = mean_gap;
  j["gaps_above_1e-9"] = positive;
  j["gaps"] = gaps;
  const std::string text = j.dump(2) + "\n";
  if (!o.common.out.empty()) write_text(o.common.out, text);
  std::cout << text;
  return 0;
}

// --- replay --------------------------------------------------------------------

int cmd_replay(const std::string& file, const std::string& out, int threads) {
  apply_threads(threads);
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + file);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(file + ": missing header");
  const Json header = Json::parse(line);
  const std::string format = header.value("format", "");
  const std::string target = out.empty() ? file + ".replay" : out;

  if (format == "r1lab/trials") {
    const auto config = r1::SearchConfig::from_json(header.at("config"));
    r1::run_search_with_log(config, target, false);
    std::cout << "replayed search into " << target << "\n";
    return 0;
  }
  if (format == "r1lab/weights") {
    WeightsOpts o;
    o.common.seed = header.at("seed").get<std::uint64_t>();
    o.common.out = target;
    o.resolution = header.at("config").at("resolution").get<int>();
    o.sample = header.at("config").value("sampled", false);
    const auto spec = r1::spec_from_json(header.at("config").at("spec"));
    write_text(target, weights_report(spec, o).dump(2) + "\n");
    std::cout << "replayed weights into " << target << "\n";
    return 0;
  }
  std::cerr << "replay: unsupported format " << format << "\n";
  return kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rank-one convexity laboratory"};
  app.require_subcommand(1);

  WeightsOpts wo;
  auto* weights = app.add_subcommand("weights", "plane-wave support and torus-area weights");
  add_common(weights, wo.common);
  weights->add_option("--spec", wo.spec_file, "spec JSON file");
  weights->add_flag("--sample", wo.sample, "sample a spec instead of reading one");
  weights->add_option("--m", wo.m);
  weights->add_option("--N", wo.N);
  weights->add_option("--L", wo.L);
  weights->add_option("--freq-bound", wo.freq_bound);
  weights->add_option("--resolution", wo.resolution);
  weights->add_flag("--pin-phases", wo.pin_phases);
  weights->add_flag("!--no-support", wo.emit_support, "omit support matrices from the report");

  ConvexifyOpts co;
  auto* convexify = app.add_subcommand("convexify", "discrete rank-one convex envelope");
  add_common(convexify, co.common);
  convexify->add_option("--fn", co.fn, "registered function name (det, negdet, frobenius)");
  convexify->add_option("--spike", co.spike_spec, "spec JSON file for spike boundary data");
  convexify->add_option("--g", co.g_csv, "comma-separated g values for the spike");
  convexify->add_option("--m", co.m);
  convexify->add_option("--L", co.L);
  convexify->add_option("--bound-p", co.bound_p);
  convexify->add_option("--bound-q", co.bound_q);
  convexify->add_option("--max-dirs", co.max_dirs);
  convexify->add_flag("--multiples", co.multiples);
  convexify->add_option("--resolution", co.resolution);
  convexify->add_option("--tol-conv", co.tol_conv);
  convexify->add_option("--max-iter", co.max_iter);
  convexify->add_option("--mem-gb", co.mem_gb, "refuse grids whose tables exceed this estimate");
  convexify->add_option("--dump", co.dump, "write the converged table (header line + raw doubles)");

  SearchOpts so;
  auto* search = app.add_subcommand("search", "randomized counterexample search");
  add_common(search, so.common);
  search->add_option("--m", so.m);
  search->add_option("--N", so.N);
  search->add_option("--L", so.L);
  search->add_option("--bound-p", so.bound_p);
  search->add_option("--bound-q", so.bound_q);
  search->add_option("--max-dirs", so.max_dirs);
  search->add_flag("--multiples", so.multiples);
  search->add_option("--gamma", so.gamma);
  search->add_option("--Mn", so.M_n);
  search->add_option("--Mc", so.M_c);
  search->add_option("--Ma", so.M_a);
  search->add_option("--Mg", so.M_g);
  search->add_option("--resolution", so.resolution);
  search->add_option("--freq-bound", so.freq_bound);
  search->add_option("--schedule-depth", so.schedule_depth);
  search->add_flag("--refine-above-gamma-only", so.refine_above_gamma_only);
  search->add_flag("--nondegenerate", so.nondegenerate);
  search->add_flag("--pin-phases", so.pin_phases);
  search->add_option("--tol-conv", so.tol_conv);
  search->add_option("--max-iter", so.max_iter);
  search->add_flag("--resume", so.resume, "continue an interrupted run");

  ConnectionsOpts no;
  auto* connections = app.add_subcommand("connections", "rank-one connection census");
  add_common(connections, no.common);
  connections->add_option("--m", no.m);
  connections->add_option("--N", no.N);
  connections->add_option("--samples", no.samples);
  connections->add_option("--law", no.law)->check(CLI::IsMember({"lattice", "real"}));
  connections->add_option("--L", no.L);
  connections->add_option("--freq-bound", no.freq_bound);
  connections->add_option("--tol", no.tol);
  connections->add_option("--details", no.details, "per-config JSONL connection lists");

  LaminateOpts lo;
  auto* laminate = app.add_subcommand("laminate", "dovetailed laminate semidecision");
  add_common(laminate, lo.common);
  laminate->add_option("--spec", lo.spec_file, "spec JSON file")->required();
  laminate->add_option("--resolution", lo.resolution);
  laminate->add_option("--g-samples", lo.g_samples, "random g draws per level");
  laminate->add_option("--depth", lo.depth, "refinement levels");
  laminate->add_option("--L", lo.L, "base grid size");
  laminate->add_option("--max-pairs", lo.max_pairs);

  JensenOpts jo;
  auto* jensen = app.add_subcommand("jensen", "fixed-function Jensen gaps over sampled deformations");
  add_common(jensen, jo.common);
  jensen->add_option("--fn", jo.fn);
  jensen->add_option("--m", jo.m);
  jensen->add_option("--N", jo.N);
  jensen->add_option("--L", jo.L);
  jensen->add_option("--freq-bound", jo.freq_bound);
  jensen->add_option("--samples", jo.samples);
  jensen->add_option("--resolution", jo.resolution);
  jensen->add_option("--base", jo.base, "zero | idh2 | JSON matrix file");

  std::string replay_file, replay_out;
  int replay_threads = 0;
  auto* replay = app.add_subcommand("replay", "re-execute the config embedded in an output header");
  replay->add_option("file", replay_file)->required();
  replay->add_option("--out", replay_out);
  replay->add_option("--threads", replay_threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (weights->parsed()) return cmd_weights(wo);
    if (convexify->parsed()) return cmd_convexify(co);
    if (search->parsed()) return cmd_search(so);
    if (connections->parsed()) return cmd_connections(no);
    if (laminate->parsed()) return cmd_laminate(lo);
    if (jensen->parsed()) return cmd_jensen(jo);
    if (replay->parsed()) return cmd_replay(replay_file, replay_out, replay_threads);
  } catch (const r1::ResumeMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResumeMismatch;
  } catch (const r1::SampleBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRefused;
  } catch (const r1::UnsatisfiableParameters& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRefused;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
