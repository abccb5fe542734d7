#include "seaport/config.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <nlohmann/json.hpp>

#include "seaport/error.hpp"

namespace seaport::io {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::SchemaError, why, path);
}

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

std::string at_index(const std::string& base, std::size_t idx) {
  return base + "[" + std::to_string(idx) + "]";
}

const json& require_object(const json& node, const std::string& path) {
  if (!node.is_object()) schema_error(path, "expected an object");
  return node;
}

void reject_unknown(const json& node, const std::string& path,
                    std::initializer_list<std::string_view> known,
                    const ParseOptions& options) {
  if (!options.strict) return;
  for (const auto& [key, value] : node.items()) {
    bool found = false;
    for (auto k : known) found = found || key == k;
    if (!found) schema_error(join(path, key), "unknown field");
  }
}

const json& require_field(const json& node, const std::string& path,
                          const char* key) {
  const auto it = node.find(key);
  if (it == node.end()) schema_error(join(path, key), "missing required field");
  return *it;
}

double as_number(const json& node, const std::string& path) {
  if (!node.is_number()) schema_error(path, "expected a number");
  return node.get<double>();
}

std::uint64_t as_unsigned(const json& node, const std::string& path) {
  if (node.is_number_unsigned()) return node.get<std::uint64_t>();
  if (node.is_number_integer()) {
    schema_error(path, "expected a non-negative integer");
  }
  schema_error(path, "expected an integer");
}

std::string as_string(const json& node, const std::string& path) {
  if (!node.is_string()) schema_error(path, "expected a string");
  return node.get<std::string>();
}

std::vector<SubsystemSpec> parse_subsystems(const json& node,
                                            const ParseOptions& options) {
  const std::string path = "subsystems";
  if (!node.is_array()) schema_error(path, "expected an array");
  std::vector<SubsystemSpec> subs;
  for (std::size_t si = 0; si < node.size(); ++si) {
    const std::string sp = at_index(path, si);
    const auto& sn = require_object(node[si], sp);
    reject_unknown(sn, sp, {"label", "ports"}, options);
    SubsystemSpec sub;
    if (sn.contains("label")) sub.label = as_string(sn["label"], join(sp, "label"));
    const auto& ports = require_field(sn, sp, "ports");
    const std::string pp = join(sp, "ports");
    if (!ports.is_array()) schema_error(pp, "expected an array");
    for (std::size_t pj = 0; pj < ports.size(); ++pj) {
      const std::string portp = at_index(pp, pj);
      const auto& pn = require_object(ports[pj], portp);
      reject_unknown(pn, portp, {"label", "berth_rates"}, options);
      PortSpec port;
      if (pn.contains("label")) {
        port.label = as_string(pn["label"], join(portp, "label"));
      }
      const auto& rates = require_field(pn, portp, "berth_rates");
      const std::string rp = join(portp, "berth_rates");
      if (!rates.is_array()) schema_error(rp, "expected an array");
      for (std::size_t bk = 0; bk < rates.size(); ++bk) {
        port.berths.push_back({as_number(rates[bk], at_index(rp, bk))});
      }
      sub.ports.push_back(std::move(port));
    }
    subs.push_back(std::move(sub));
  }
  return subs;
}

sim::SimSettings parse_simulation(const json& node,
                                  const ParseOptions& options) {
  const std::string path = "simulation";
  require_object(node, path);
  reject_unknown(node, path,
                 {"horizon", "ship_count", "warmup_fraction", "replications",
                  "batch_count", "seed", "confidence_intervals"},
                 options);
  sim::SimSettings s;
  const bool has_horizon = node.contains("horizon");
  const bool has_ships = node.contains("ship_count");
  if (has_horizon && has_ships) {
    schema_error(path, "set exactly one of horizon and ship_count");
  }
  if (has_horizon) {
    s.horizon = as_number(node["horizon"], join(path, "horizon"));
    s.ship_count.reset();
  }
  if (has_ships) {
    s.ship_count = as_unsigned(node["ship_count"], join(path, "ship_count"));
  }
  if (node.contains("warmup_fraction")) {
    s.warmup_fraction =
        as_number(node["warmup_fraction"], join(path, "warmup_fraction"));
  }
  if (node.contains("replications")) {
    s.replications = static_cast<std::uint32_t>(
        as_unsigned(node["replications"], join(path, "replications")));
  }
  if (node.contains("batch_count")) {
    s.batch_count = static_cast<std::uint32_t>(
        as_unsigned(node["batch_count"], join(path, "batch_count")));
  }
  if (node.contains("seed")) {
    s.seed = as_unsigned(node["seed"], join(path, "seed"));
  }
  if (node.contains("confidence_intervals")) {
    const auto& ci = node["confidence_intervals"];
    if (!ci.is_boolean()) {
      schema_error(join(path, "confidence_intervals"), "expected a boolean");
    }
    s.confidence_intervals = ci.get<bool>();
  }
  return s;
}

std::string position(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

sim::SimConfig ConfigBundle::sim_config() const {
  return sim::SimConfig{topology, traffic, routing,
                        simulation.value_or(sim::SimSettings{})};
}

std::string config_digest(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

ConfigBundle parse_config(std::string_view text, const ParseOptions& options) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    // The reported byte is one past the offending character.
    throw Error(ErrorCode::SyntaxError, e.what(),
                position(text, e.byte > 0 ? e.byte - 1 : 0));
  }

  require_object(doc, "$");
  reject_unknown(doc, "", {"traffic", "subsystems", "routing", "simulation"},
                 options);

  const auto& traffic_node = require_field(doc, "", "traffic");
  require_object(traffic_node, "traffic");
  reject_unknown(traffic_node, "traffic", {"arrival_rate", "erlang_degree"},
                 options);
  TrafficSpec traffic;
  traffic.arrival_rate = as_number(require_field(traffic_node, "traffic", "arrival_rate"),
                                   "traffic.arrival_rate");
  const auto& degree_node = require_field(traffic_node, "traffic", "erlang_degree");
  if (!degree_node.is_number_integer()) {
    schema_error("traffic.erlang_degree", "expected an integer");
  }
  const auto degree = degree_node.get<std::int64_t>();
  traffic.erlang_degree = degree < 1 ? 0
                          : degree > 1'000'000'000 ? 1'000'000'000
                                                   : static_cast<int>(degree);

  RoutingMode routing = RoutingMode::Eq3;
  if (doc.contains("routing")) {
    const auto text_mode = as_string(doc["routing"], "routing");
    const auto mode = parse_routing_mode(text_mode);
    if (!mode) schema_error("routing", "expected \"eq3\" or \"split\"");
    routing = *mode;
  }

  auto subs = parse_subsystems(require_field(doc, "", "subsystems"), options);

  std::optional<sim::SimSettings> simulation;
  if (doc.contains("simulation")) {
    simulation = parse_simulation(doc["simulation"], options);
  }

  try {
    validate_traffic(traffic);
    ConfigBundle bundle{validate_topology(std::move(subs)), traffic, routing,
                        simulation, config_digest(text)};
    if (simulation) sim::validate_sim_config(bundle.sim_config());
    return bundle;
  } catch (const Error& e) {
    std::string message = e.what();
    throw Error(ErrorCode::ValidationError, message, e.path(), e.code());
  }
}

ConfigBundle load_config(const std::filesystem::path& path,
                         const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open configuration file",
                path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), options);
}

}  // namespace seaport::io
