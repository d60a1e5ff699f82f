#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "r1/grid.hpp"
#include "r1/torus_measure.hpp"

namespace r1 {

using Json = nlohmann::ordered_json;

// --- core object serialization ---------------------------------------------

Json matrix_to_json(const Matrix& A);
Matrix matrix_from_json(const Json& j);

Json spec_to_json(const PlaneWaveSpec& spec);
PlaneWaveSpec spec_from_json(const Json& j);

Json measure_to_json(const DiscreteGYMeasure& measure, bool include_support = true);

// --- versioned file headers -------------------------------------------------

// Every artifact file starts with one JSON header line carrying the format
// name, version, seed and the effective configuration; the timestamp lives in
// its own field so determinism checks can ignore it.
Json make_header(const std::string& format, std::uint64_t seed, Json config);

void write_json_line(std::ostream& os, const Json& j);

// Reads one JSONL file: first line must be a header with the given format
// prefix (empty = any).  A torn trailing line without a newline is dropped.
struct JsonlFile {
  Json header;
  std::vector<Json> records;
  bool torn_tail = false;
};
JsonlFile read_jsonl(const std::string& path, const std::string& expected_format = "");

// Removes volatile fields ("created", "wall_ms", "wall_ms_total", "timings")
// recursively; used when comparing artifacts for byte-level determinism.
Json strip_volatile(Json j);

// --- grid function snapshots -------------------------------------------------

// One JSON header line, then point_count little-endian doubles (row-major).
void dump_grid_function(const std::string& path, const GridFunction& fn, Json extra = Json::object());
GridFunction load_grid_function(const std::string& path, Json* header_out = nullptr);

}  // namespace r1
