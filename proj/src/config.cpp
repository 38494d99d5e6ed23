#include "edgeplace/config.hpp"

#include <array>
#include <fstream>
#include <limits>
#include <sstream>

#include "edgeplace/errors.hpp"

namespace edgeplace {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 17> kKeys{
    "grid.width", "grid.height", "grid.cell_m", "grid.hop_delay_s", "node.capacity",
    "users.count", "users.pedestrian_fraction", "horizon", "v", "e_avg", "beta",
    "policy", "policy.k", "seed", "trace_path", "markov.iterations", "mobility.slot_s",
};

double get_number(const json& doc, const std::string& key, double fallback) {
  auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  if (!it->is_number()) throw ConfigError(key, "expected a number");
  return it->get<double>();
}

std::uint64_t get_unsigned(const json& doc, const std::string& key, std::uint64_t fallback) {
  auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  if (it->is_number_unsigned()) return it->get<std::uint64_t>();
  if (it->is_number_integer()) throw ConfigError(key, "must not be negative");
  throw ConfigError(key, "expected a non-negative integer");
}

std::size_t get_count(const json& doc, const std::string& key, std::size_t fallback) {
  const auto value = get_unsigned(doc, key, fallback);
  if (value > std::numeric_limits<std::size_t>::max() / 2)
    throw ConfigError(key, "value too large");
  return static_cast<std::size_t>(value);
}

}  // namespace

std::span<const std::string_view> config_keys() { return kKeys; }

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("<document>", "expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (auto k : kKeys) known = known || k == key;
    if (!known) throw ConfigError(key, "unknown key");
  }

  Scenario s;
  s.map.width_cells = get_count(doc, "grid.width", s.map.width_cells);
  s.map.height_cells = get_count(doc, "grid.height", s.map.height_cells);
  s.map.cell_size_m = get_number(doc, "grid.cell_m", s.map.cell_size_m);
  s.map.hop_delay_s = get_number(doc, "grid.hop_delay_s", s.map.hop_delay_s);
  s.node_capacity = get_number(doc, "node.capacity", s.node_capacity);
  s.users = get_count(doc, "users.count", s.users);
  s.mobility.pedestrian_fraction =
      get_number(doc, "users.pedestrian_fraction", s.mobility.pedestrian_fraction);
  s.mobility.slot_length_s = get_number(doc, "mobility.slot_s", s.mobility.slot_length_s);
  s.horizon = get_count(doc, "horizon", s.horizon);
  s.v = get_number(doc, "v", s.v);
  s.e_avg = get_number(doc, "e_avg", s.e_avg);
  s.beta = get_number(doc, "beta", s.beta);
  s.seed = get_unsigned(doc, "seed", s.seed);

  if (auto it = doc.find("policy"); it != doc.end()) {
    if (!it->is_string()) throw ConfigError("policy", "expected a string");
    const auto kind = parse_policy_kind(it->get<std::string>());
    if (!kind) throw ConfigError("policy", "unknown policy '" + it->get<std::string>() + "'");
    s.policy.kind = *kind;
  }
  if (doc.contains("policy.k")) {
    if (!policy_needs_k(s.policy.kind))
      throw ConfigError("policy.k", "only grk and gk take a K");
    s.policy.k = get_count(doc, "policy.k", 0);
  } else if (policy_needs_k(s.policy.kind)) {
    throw ConfigError("policy.k", "policy.k required");
  }

  if (auto it = doc.find("trace_path"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) throw ConfigError("trace_path", "expected a string");
    s.trace_path = it->get<std::string>();
  }
  if (doc.contains("markov.iterations")) {
    s.markov_iterations = get_count(doc, "markov.iterations", 0);
    if (*s.markov_iterations == 0) throw ConfigError("markov.iterations", "must be >= 1");
  }
  if (!(s.mobility.slot_length_s > 0.0)) throw ConfigError("mobility.slot_s", "must be > 0");
  s.validate();
  return s;
}

json scenario_to_json(const Scenario& s) {
  json doc = json::object();
  doc["grid.width"] = s.map.width_cells;
  doc["grid.height"] = s.map.height_cells;
  doc["grid.cell_m"] = s.map.cell_size_m;
  doc["grid.hop_delay_s"] = s.map.hop_delay_s;
  doc["node.capacity"] = s.node_capacity;
  doc["users.count"] = s.users;
  doc["users.pedestrian_fraction"] = s.mobility.pedestrian_fraction;
  doc["mobility.slot_s"] = s.mobility.slot_length_s;
  doc["horizon"] = s.horizon;
  doc["v"] = s.v;
  doc["e_avg"] = s.e_avg;
  doc["beta"] = s.beta;
  doc["policy"] = std::string(to_string(s.policy.kind));
  if (policy_needs_k(s.policy.kind)) doc["policy.k"] = s.policy.k;
  doc["seed"] = s.seed;
  if (s.trace_path) doc["trace_path"] = *s.trace_path;
  if (s.markov_iterations) doc["markov.iterations"] = *s.markov_iterations;
  return doc;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError(assignment, "override must look like key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  doc[key] = std::move(value);
}

Scenario parse_config_text(const std::string& text, std::span<const std::string> overrides) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("<document>", "not valid JSON");
  if (!doc.is_object()) throw ConfigError("<document>", "expected a JSON object");
  for (const auto& o : overrides) apply_override(doc, o);
  return scenario_from_json(doc);
}

Scenario parse_config(const std::filesystem::path& path, std::span<const std::string> overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), overrides);
}

std::string serialize_config(const Scenario& scenario) {
  return scenario_to_json(scenario).dump(2) + "\n";
}

}  // namespace edgeplace
