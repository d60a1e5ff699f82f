#include "r1/io.hpp"

#include <bit>
#include <chrono>
#include <fstream>
#include <stdexcept>

namespace r1 {

static_assert(std::endian::native == std::endian::little, "grid dumps are little-endian");

Json matrix_to_json(const Matrix& A) {
  Json rows = Json::array();
  for (int r = 0; r < A.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < A.cols(); ++c) row.push_back(A(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  const int rows = static_cast<int>(j.size());
  if (rows == 0) throw std::invalid_argument("matrix json: empty");
  const int cols = static_cast<int>(j.at(0).size());
  Matrix A(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) A(r, c) = j.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>();
  return A;
}

Json spec_to_json(const PlaneWaveSpec& spec) {
  Json waves = Json::array();
  for (const auto& w : spec.waves) {
    Json a = Json::array();
    for (int r = 0; r < w.a.size(); ++r) a.push_back(w.a(r));
    waves.push_back(Json{{"a", std::move(a)}, {"n", Json::array({w.n(0), w.n(1)})}, {"c", w.c}});
  }
  return Json{{"m", spec.m}, {"N", spec.wave_count()}, {"waves", std::move(waves)}};
}

PlaneWaveSpec spec_from_json(const Json& j) {
  PlaneWaveSpec spec;
  spec.m = j.at("m").get<int>();
  for (const auto& wj : j.at("waves")) {
    WaveComponent w;
    const auto& aj = wj.at("a");
    w.a = Eigen::VectorXd(static_cast<int>(aj.size()));
    for (int r = 0; r < w.a.size(); ++r) w.a(r) = aj.at(static_cast<std::size_t>(r)).get<double>();
    w.n << wj.at("n").at(0).get<int>(), wj.at("n").at(1).get<int>();
    w.c = wj.at("c").get<double>();
    spec.waves.push_back(std::move(w));
  }
  if (j.contains("N") && j.at("N").get<int>() != spec.wave_count())
    throw std::invalid_argument("spec json: N does not match wave count");
  spec.validate();
  return spec;
}

Json measure_to_json(const DiscreteGYMeasure& measure, bool include_support) {
  Json weights = Json::array();
  for (int i = 0; i < measure.weights.size(); ++i) weights.push_back(measure.weights(i));
  Json j{{"m", measure.m},
         {"N", measure.N},
         {"weight_resolution", measure.weight_resolution},
         {"weights", std::move(weights)}};
  if (include_support) {
    Json support = Json::array();
    for (const auto& X : measure.points) support.push_back(matrix_to_json(X));
    j["support"] = std::move(support);
  }
  if (measure.quadrature_warnings > 0) j["quadrature_warnings"] = measure.quadrature_warnings;
  return j;
}

Json make_header(const std::string& format, std::uint64_t seed, Json config) {
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  return Json{{"format", format},
              {"version", 1},
              {"created", std::chrono::duration_cast<std::chrono::milliseconds>(now).count()},
              {"seed", seed},
              {"config", std::move(config)}};
}

void write_json_line(std::ostream& os, const Json& j) { os << j.dump() << '\n'; }

JsonlFile read_jsonl(const std::string& path, const std::string& expected_format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  JsonlFile out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const bool has_newline = !in.eof();
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error&) {
      if (!has_newline) {
        out.torn_tail = true;  // interrupted mid-write; drop the fragment
        break;
      }
      throw;
    }
    if (first) {
      out.header = std::move(j);
      first = false;
      if (!expected_format.empty()) {
        const std::string fmt = out.header.value("format", "");
        if (fmt.rfind(expected_format, 0) != 0)
          throw std::runtime_error(path + ": expected format " + expected_format + ", found " + fmt);
      }
    } else {
      out.records.push_back(std::move(j));
    }
  }
  if (first) throw std::runtime_error(path + ": missing header line");
  return out;
}

Json strip_volatile(Json j) {
  if (j.is_object()) {
    Json out = Json::object();
    for (auto& [k, v] : j.items()) {
      if (k == "created" || k == "wall_ms" || k == "wall_ms_total" || k == "timings") continue;
      out[k] = strip_volatile(v);
    }
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (auto& v : j) out.push_back(strip_volatile(v));
    return out;
  }
  return j;
}

void dump_grid_function(const std::string& path, const GridFunction& fn, Json extra) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  Json header = make_header("r1lab/gridfn", 0,
                            Json{{"m", fn.grid.m()},
                                 {"n", fn.grid.n()},
                                 {"L", fn.grid.L()},
                                 {"ordering", "row-major"},
                                 {"count", fn.grid.point_count()}});
  for (auto& [k, v] : extra.items()) header[k] = v;
  write_json_line(out, header);
  out.write(reinterpret_cast<const char*>(fn.values.data()),
            static_cast<std::streamsize>(fn.values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("short write to " + path);
}

GridFunction load_grid_function(const std::string& path, Json* header_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": missing header");
  const Json header = Json::parse(line);
  if (header.value("format", "") != "r1lab/gridfn") throw std::runtime_error(path + ": not a grid dump");
  const auto& cfg = header.at("config");
  GridFunction fn;
  fn.grid = make_grid(cfg.at("m").get<int>(), cfg.at("n").get<int>(), cfg.at("L").get<int>());
  fn.values.resize(static_cast<std::size_t>(fn.grid.point_count()));
  in.read(reinterpret_cast<char*>(fn.values.data()), static_cast<std::streamsize>(fn.values.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(fn.values.size() * sizeof(double)))
    throw std::runtime_error(path + ": truncated value table");
  if (header_out) *header_out = header;
  return fn;
}

}  // namespace r1
