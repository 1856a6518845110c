#pragma once

// Structured run reports.  Records are plain JSON objects with sorted keys and
// shortest-round-trip numbers, so a fixed seed reproduces reports byte for
// byte; there are deliberately no timestamps.  Non-finite doubles are encoded
// as the strings "inf", "-inf", "nan" because JSON has no tokens for them.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace picheck::report {

using Json = nlohmann::json;

Json number(double v);
double parse_number(const Json& j);

struct Record {
  std::string op;
  Json params = Json::object();
  Json outputs = Json::object();
  std::optional<bool> pass;  // empty for informational records
  std::string error;         // nonempty marks a captured failure
};

Json to_json(const Record& r);
Record record_from_json(const Json& j);

struct Provenance {
  std::string space_hash;
  std::string config_hash;
  std::uint64_t seed = 0;
  Json config_echo = Json::object();
};

Json assemble(const Provenance& prov, const std::vector<Record>& records);

// True when no record errored and none has pass == false.
bool all_pass(const Json& report);

void write_json_file(const Json& j, const std::string& path);
Json read_json_file(const std::string& path);

// Long-format table: one row per scalar output, fixed five-column schema
// (record index, op, pass, key, value).  Nested outputs flatten to dotted
// paths.
std::string render_tsv(const Json& report);

}  // namespace picheck::report
