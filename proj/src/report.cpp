#include "picheck/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace picheck::report {

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double parse_number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("not a report number: " + j.dump());
}

Json to_json(const Record& r) {
  Json j;
  j["op"] = r.op;
  j["params"] = r.params;
  j["outputs"] = r.outputs;
  if (r.pass.has_value())
    j["pass"] = *r.pass;
  else
    j["pass"] = nullptr;
  j["error"] = r.error;
  return j;
}

Record record_from_json(const Json& j) {
  Record r;
  r.op = j.at("op").get<std::string>();
  r.params = j.at("params");
  r.outputs = j.at("outputs");
  if (!j.at("pass").is_null()) r.pass = j.at("pass").get<bool>();
  r.error = j.at("error").get<std::string>();
  return r;
}

Json assemble(const Provenance& prov, const std::vector<Record>& records) {
  Json j;
  j["provenance"] = {{"tool", "picheck"},
                     {"format_version", 1},
                     {"space_hash", prov.space_hash},
                     {"config_hash", prov.config_hash},
                     {"seed", prov.seed},
                     {"config", prov.config_echo}};
  Json recs = Json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    Json r = to_json(records[i]);
    r["index"] = i;
    recs.push_back(std::move(r));
  }
  j["records"] = std::move(recs);
  return j;
}

bool all_pass(const Json& report) {
  for (const Json& r : report.at("records")) {
    if (!r.at("error").get_ref<const std::string&>().empty()) return false;
    if (r.at("pass").is_boolean() && !r.at("pass").get<bool>()) return false;
  }
  return true;
}

void write_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return Json::parse(in);
}

namespace {

void flatten(const std::string& prefix, const Json& node,
             std::vector<std::pair<std::string, std::string>>& rows) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it)
      flatten(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value(),
              rows);
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i)
      flatten(prefix + "[" + std::to_string(i) + "]", node[i], rows);
  } else {
    rows.emplace_back(prefix, node.is_string()
                                  ? node.get<std::string>()
                                  : node.dump());
  }
}

}  // namespace

std::string render_tsv(const Json& report) {
  std::ostringstream out;
  out << "record\top\tpass\tkey\tvalue\n";
  for (const Json& r : report.at("records")) {
    const std::string idx = r.at("index").dump();
    const std::string op = r.at("op").get<std::string>();
    const Json& pass = r.at("pass");
    const std::string pass_s =
        pass.is_null() ? "-" : (pass.get<bool>() ? "true" : "false");
    std::vector<std::pair<std::string, std::string>> rows;
    flatten("", r.at("outputs"), rows);
    if (!r.at("error").get_ref<const std::string&>().empty())
      rows.emplace_back("error", r.at("error").get<std::string>());
    for (const auto& [key, value] : rows)
      out << idx << '\t' << op << '\t' << pass_s << '\t' << key << '\t' << value
          << '\n';
  }
  return out.str();
}

}  // namespace picheck::report
