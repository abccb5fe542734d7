#include "seaport/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "seaport/error.hpp"
#include "seaport/version.hpp"

namespace seaport::io {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string{};
}

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

/// Left-aligned text cells padded to the widest entry of each column.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) {
    rows_.push_back(std::move(header));
  }

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render() const {
    std::vector<std::size_t> width(rows_.front().size(), 0);
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        width[c] = std::max(width[c], row[c].size());
      }
    }
    std::string out;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      std::string line;
      for (std::size_t c = 0; c < rows_[r].size(); ++c) {
        if (c > 0) line += "  ";
        line += rows_[r][c];
        line.append(width[c] - rows_[r][c].size(), ' ');
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out += line;
      out += '\n';
      if (r == 0) {
        std::size_t total = 0;
        for (auto w : width) total += w;
        out.append(total + 2 * (width.size() - 1), '-');
        out += '\n';
      }
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string csv_line(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k > 0) line += ',';
    line += fields[k];
  }
  line += '\n';
  return line;
}

std::string key_values(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::size_t width = 0;
  for (const auto& [k, v] : kv) width = std::max(width, k.size());
  std::string out;
  for (const auto& [k, v] : kv) {
    out += k;
    out.append(width - k.size() + 2, ' ');
    out += v;
    out += '\n';
  }
  return out;
}

ordered_json metadata_json(std::string_view kind, const ReportMetadata& meta,
                           RoutingMode routing, double arrival_rate,
                           int erlang_degree) {
  ordered_json m;
  m["kind"] = kind;
  m["tool_version"] = std::string(version());
  m["config_digest"] = meta.config_digest;
  m["config_path"] = meta.config_path;
  m["routing"] = std::string(to_string(routing));
  m["arrival_rate"] = arrival_rate;
  m["erlang_degree"] = erlang_degree;
  return m;
}

ordered_json settings_json(const sim::SimSettings& s) {
  ordered_json m;
  m["seed"] = s.seed;
  m["horizon"] = optional_json(s.horizon);
  m["ship_count"] = s.ship_count ? ordered_json(*s.ship_count) : ordered_json(nullptr);
  m["warmup_fraction"] = s.warmup_fraction;
  m["replications"] = s.replications;
  m["batch_count"] = s.batch_count;
  m["confidence_intervals"] = s.confidence_intervals;
  return m;
}

std::string settings_text(const sim::SimSettings& s) {
  std::string out = "seed " + std::to_string(s.seed) + ", ";
  if (s.horizon) {
    out += "horizon " + format_number(*s.horizon);
  } else if (s.ship_count) {
    out += "ship_count " + std::to_string(*s.ship_count);
  }
  out += ", warmup " + format_number(s.warmup_fraction) + ", replications " +
         std::to_string(s.replications);
  return out;
}

std::string header_text(std::string_view kind, const ReportMetadata& meta,
                        RoutingMode routing, double arrival_rate,
                        int erlang_degree) {
  std::string out = "seaport " + std::string(kind) + " report\n";
  out += key_values({
      {"tool version", std::string(version())},
      {"config", meta.config_path.empty() ? "-" : meta.config_path},
      {"config digest", meta.config_digest.empty() ? "-" : meta.config_digest},
      {"routing", std::string(to_string(routing))},
      {"arrival rate", format_number(arrival_rate)},
      {"erlang degree", std::to_string(erlang_degree)},
  });
  return out;
}

std::string estimate_text(const sim::Estimate& e) {
  std::string out = format_number(e.mean);
  if (e.half_width) out += " +/- " + format_number(*e.half_width);
  return out;
}

ordered_json estimate_json(const sim::Estimate& e) {
  ordered_json m;
  m["mean"] = e.mean;
  m["half_width"] = optional_json(e.half_width);
  return m;
}

ordered_json comparison_json(const MetricComparison& m) {
  ordered_json o;
  o["analytic"] = m.analytic;
  o["simulated"] = m.simulated;
  o["half_width"] = optional_json(m.half_width);
  o["relative_error"] = m.relative_error;
  o["within_tolerance"] = m.within_tolerance;
  return o;
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

std::string_view to_string(Format format) noexcept {
  switch (format) {
    case Format::Table: return "table";
    case Format::Csv: return "csv";
    case Format::Json: return "json";
  }
  return "table";
}

std::optional<Format> parse_format(std::string_view text) noexcept {
  if (text == "table") return Format::Table;
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  return std::nullopt;
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(text);
  }
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// ---------------------------------------------------------------------------
// analytic

std::string emit_report(const analytic::SystemMetrics& m, Format format,
                        const ReportMetadata& meta) {
  switch (format) {
    case Format::Csv: {
      std::string out(kAnalyticCsvHeader);
      out += '\n';
      for (const auto& p : m.ports) {
        out += csv_line({std::to_string(p.i), std::to_string(p.j),
                         csv_field(p.label), std::to_string(p.berths),
                         format_number(p.arrival_rate),
                         format_number(p.utilization),
                         format_number(p.base_wait), format_number(p.wait),
                         format_number(p.queue_length),
                         format_number(p.population)});
      }
      return out;
    }
    case Format::Json: {
      ordered_json doc;
      doc["metadata"] = metadata_json("analytic", meta, m.routing,
                                      m.arrival_rate, m.erlang_degree);
      ordered_json sys;
      sys["rho"] = m.utilization;
      sys["split_probabilities"] = m.split_probabilities;
      sys["EW_total"] = m.total_wait;
      sys["En_total"] = m.total_queue_length;
      sys["EQ_total"] = m.total_population;
      sys["EW_arrival_weighted"] = m.arrival_weighted_wait;
      doc["system"] = std::move(sys);
      ordered_json ports = ordered_json::array();
      for (const auto& p : m.ports) {
        ordered_json row;
        row["i"] = p.i;
        row["j"] = p.j;
        row["label"] = p.label;
        row["S"] = p.berths;
        row["homogeneous"] = p.homogeneous;
        row["r_ij"] = p.arrival_rate;
        row["rho_ij"] = p.utilization;
        row["EW_star"] = p.base_wait;
        row["EW"] = p.wait;
        row["En"] = p.queue_length;
        row["EQ"] = p.population;
        ports.push_back(std::move(row));
      }
      doc["ports"] = std::move(ports);
      return dump(doc);
    }
    case Format::Table:
      break;
  }

  std::string out =
      header_text("analytic", meta, m.routing, m.arrival_rate, m.erlang_degree);
  std::string split;
  for (std::size_t k = 0; k < m.split_probabilities.size(); ++k) {
    if (k > 0) split += " ";
    split += format_number(m.split_probabilities[k]);
  }
  out += "\nsystem\n";
  out += key_values({
      {"rho", format_number(m.utilization)},
      {"split probabilities", split},
      {"EW total (sum)", format_number(m.total_wait)},
      {"En total (sum)", format_number(m.total_queue_length)},
      {"EQ total (sum)", format_number(m.total_population)},
      {"EW arrival-weighted", format_number(m.arrival_weighted_wait)},
  });
  out += "\nports\n";
  TextTable table({"i", "j", "label", "S", "r_ij", "rho_ij", "EW_star", "EW",
                   "En", "EQ"});
  for (const auto& p : m.ports) {
    table.add({std::to_string(p.i), std::to_string(p.j), p.label,
               std::to_string(p.berths), format_number(p.arrival_rate),
               format_number(p.utilization), format_number(p.base_wait),
               format_number(p.wait), format_number(p.queue_length),
               format_number(p.population)});
  }
  out += table.render();
  return out;
}

// ---------------------------------------------------------------------------
// stability

std::string emit_report(const analytic::StabilityReport& s, RoutingMode routing,
                        Format format, const ReportMetadata& meta) {
  std::size_t total_berths = 0;
  double total_rate = 0.0;
  for (const auto& p : s.ports) total_berths += p.berths;
  for (const auto& p : s.ports) total_rate += p.arrival_rate;

  switch (format) {
    case Format::Csv: {
      std::string out(kStabilityCsvHeader);
      out += '\n';
      // Row 0,0 is the whole system.
      out += csv_line({"0", "0", "system", std::to_string(total_berths), "",
                       format_number(s.utilization),
                       s.system_stable ? "true" : "false"});
      for (const auto& p : s.ports) {
        out += csv_line({std::to_string(p.i), std::to_string(p.j),
                         csv_field(p.label), std::to_string(p.berths),
                         format_number(p.arrival_rate),
                         format_number(p.utilization),
                         p.stable ? "true" : "false"});
      }
      return out;
    }
    case Format::Json: {
      ordered_json doc;
      ordered_json m;
      m["kind"] = "stability";
      m["tool_version"] = std::string(version());
      m["config_digest"] = meta.config_digest;
      m["config_path"] = meta.config_path;
      m["routing"] = std::string(to_string(routing));
      doc["metadata"] = std::move(m);
      ordered_json sys;
      sys["rho"] = s.utilization;
      sys["stable"] = s.system_stable;
      doc["system"] = std::move(sys);
      ordered_json ports = ordered_json::array();
      for (const auto& p : s.ports) {
        ordered_json row;
        row["i"] = p.i;
        row["j"] = p.j;
        row["label"] = p.label;
        row["S"] = p.berths;
        row["r_ij"] = p.arrival_rate;
        row["rho_ij"] = p.utilization;
        row["stable"] = p.stable;
        ports.push_back(std::move(row));
      }
      doc["ports"] = std::move(ports);
      return dump(doc);
    }
    case Format::Table:
      break;
  }

  std::string out = "seaport stability report\n";
  out += key_values({
      {"tool version", std::string(version())},
      {"config digest", meta.config_digest.empty() ? "-" : meta.config_digest},
      {"routing", std::string(to_string(routing))},
      {"system rho", format_number(s.utilization)},
      {"system", s.system_stable ? "stable" : "UNSTABLE (rho >= 1)"},
  });
  out += "\nports\n";
  TextTable table({"i", "j", "label", "S", "r_ij", "rho_ij", "status"});
  for (const auto& p : s.ports) {
    table.add({std::to_string(p.i), std::to_string(p.j), p.label,
               std::to_string(p.berths), format_number(p.arrival_rate),
               format_number(p.utilization),
               p.stable ? "stable" : "UNSTABLE (rho_ij >= 1)"});
  }
  out += table.render();
  return out;
}

// ---------------------------------------------------------------------------
// simulation

std::string emit_report(const sim::SimMetrics& m, Format format,
                        const ReportMetadata& meta) {
  switch (format) {
    case Format::Csv: {
      std::string out(kSimulationCsvHeader);
      out += '\n';
      for (const auto& p : m.ports) {
        out += csv_line({std::to_string(p.i), std::to_string(p.j),
                         csv_field(p.label), std::to_string(p.berths),
                         std::to_string(p.served),
                         format_number(p.arrival_rate.mean),
                         optional_number(p.arrival_rate.half_width),
                         format_number(p.utilization.mean),
                         optional_number(p.utilization.half_width),
                         format_number(p.wait.mean),
                         optional_number(p.wait.half_width),
                         format_number(p.queue_length.mean),
                         optional_number(p.queue_length.half_width),
                         format_number(p.population.mean),
                         optional_number(p.population.half_width)});
      }
      return out;
    }
    case Format::Json: {
      ordered_json doc;
      auto md = metadata_json("simulation", meta, m.routing, m.arrival_rate,
                              m.erlang_degree);
      md["simulation"] = settings_json(m.settings);
      doc["metadata"] = std::move(md);
      ordered_json sys;
      sys["served"] = m.served;
      sys["EW_total"] = estimate_json(m.total_wait);
      sys["En_total"] = estimate_json(m.total_queue_length);
      sys["EQ_total"] = estimate_json(m.total_population);
      doc["system"] = std::move(sys);
      ordered_json ports = ordered_json::array();
      for (const auto& p : m.ports) {
        ordered_json row;
        row["i"] = p.i;
        row["j"] = p.j;
        row["label"] = p.label;
        row["S"] = p.berths;
        row["served"] = p.served;
        row["r_ij"] = estimate_json(p.arrival_rate);
        row["rho_ij"] = estimate_json(p.utilization);
        row["EW"] = estimate_json(p.wait);
        row["En"] = estimate_json(p.queue_length);
        row["EQ"] = estimate_json(p.population);
        row["berth_busy"] = p.berth_busy;
        ports.push_back(std::move(row));
      }
      doc["ports"] = std::move(ports);
      return dump(doc);
    }
    case Format::Table:
      break;
  }

  std::string out = header_text("simulation", meta, m.routing, m.arrival_rate,
                                m.erlang_degree);
  out += key_values({{"simulation", settings_text(m.settings)}});
  out += "\nsystem (95% half-widths)\n";
  out += key_values({
      {"served after warmup", std::to_string(m.served)},
      {"EW total (sum)", estimate_text(m.total_wait)},
      {"En total (sum)", estimate_text(m.total_queue_length)},
      {"EQ total (sum)", estimate_text(m.total_population)},
  });
  out += "\nports (95% half-widths)\n";
  TextTable table({"i", "j", "label", "S", "served", "rho_ij", "EW", "En", "EQ"});
  for (const auto& p : m.ports) {
    table.add({std::to_string(p.i), std::to_string(p.j), p.label,
               std::to_string(p.berths), std::to_string(p.served),
               estimate_text(p.utilization), estimate_text(p.wait),
               estimate_text(p.queue_length), estimate_text(p.population)});
  }
  out += table.render();
  out += "\nberth busy fractions\n";
  TextTable busy({"i", "j", "k", "busy"});
  for (const auto& p : m.ports) {
    for (std::size_t k = 0; k < p.berth_busy.size(); ++k) {
      busy.add({std::to_string(p.i), std::to_string(p.j), std::to_string(k + 1),
                format_number(p.berth_busy[k])});
    }
  }
  out += busy.render();
  return out;
}

// ---------------------------------------------------------------------------
// comparison

std::string emit_report(const ComparisonReport& r, Format format,
                        const ReportMetadata& meta) {
  switch (format) {
    case Format::Csv: {
      std::string out(kComparisonCsvHeader);
      out += '\n';
      auto cells = [](const MetricComparison& m) {
        return std::vector<std::string>{
            format_number(m.analytic), format_number(m.simulated),
            optional_number(m.half_width), format_number(m.relative_error)};
      };
      for (const auto& p : r.ports) {
        std::vector<std::string> row{std::to_string(p.i), std::to_string(p.j),
                                     csv_field(p.label), std::to_string(p.berths),
                                     p.homogeneous ? "true" : "false"};
        for (const auto* m : {&p.wait, &p.queue_length, &p.population,
                              &p.utilization}) {
          auto c = cells(*m);
          row.insert(row.end(), c.begin(), c.end());
        }
        row.push_back(p.analytic_wait_in_ci ? "true" : "false");
        row.push_back(p.within_tolerance ? "true" : "false");
        out += csv_line(row);
      }
      return out;
    }
    case Format::Json: {
      ordered_json doc;
      auto md = metadata_json("comparison", meta, r.routing, r.arrival_rate,
                              r.erlang_degree);
      md["simulation"] = settings_json(r.settings);
      md["tolerance"] = r.tolerance;
      doc["metadata"] = std::move(md);
      ordered_json sys;
      sys["EW_total"] = comparison_json(r.totals.wait);
      sys["En_total"] = comparison_json(r.totals.queue_length);
      sys["EQ_total"] = comparison_json(r.totals.population);
      sys["within_tolerance"] = r.within_tolerance;
      doc["system"] = std::move(sys);
      ordered_json ports = ordered_json::array();
      for (const auto& p : r.ports) {
        ordered_json row;
        row["i"] = p.i;
        row["j"] = p.j;
        row["label"] = p.label;
        row["S"] = p.berths;
        row["homogeneous"] = p.homogeneous;
        row["EW"] = comparison_json(p.wait);
        row["En"] = comparison_json(p.queue_length);
        row["EQ"] = comparison_json(p.population);
        row["rho_ij"] = comparison_json(p.utilization);
        row["EW_in_ci"] = p.analytic_wait_in_ci;
        row["within_tolerance"] = p.within_tolerance;
        ports.push_back(std::move(row));
      }
      doc["ports"] = std::move(ports);
      doc["notes"] = r.notes;
      return dump(doc);
    }
    case Format::Table:
      break;
  }

  std::string out = header_text("comparison", meta, r.routing, r.arrival_rate,
                                r.erlang_degree);
  out += key_values({
      {"simulation", settings_text(r.settings)},
      {"tolerance", format_number(r.tolerance)},
      {"verdict", r.within_tolerance ? "PASS" : "FAIL"},
  });
  out += "\nports\n";
  TextTable table({"i", "j", "label", "metric", "analytic", "simulated",
                   "half-width", "rel.err", "ok"});
  auto add = [&](const std::string& i, const std::string& j,
                 const std::string& label, const char* name,
                 const MetricComparison& m) {
    table.add({i, j, label, name, format_number(m.analytic),
               format_number(m.simulated),
               m.half_width ? format_number(*m.half_width) : "-",
               format_number(m.relative_error),
               m.within_tolerance ? "yes" : "NO"});
  };
  for (const auto& p : r.ports) {
    const auto i = std::to_string(p.i);
    const auto j = std::to_string(p.j);
    add(i, j, p.label, "EW", p.wait);
    add(i, j, p.label, "En", p.queue_length);
    add(i, j, p.label, "EQ", p.population);
    add(i, j, p.label, "rho_ij", p.utilization);
  }
  add("-", "-", "system", "EW total", r.totals.wait);
  add("-", "-", "system", "En total", r.totals.queue_length);
  add("-", "-", "system", "EQ total", r.totals.population);
  out += table.render();
  if (!r.notes.empty()) {
    out += "\nnotes\n";
    for (const auto& n : r.notes) out += "- " + n + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// berth plan

std::string emit_report(const std::vector<planning::BerthPlan>& plans,
                        double sla_wait, Format format,
                        const ReportMetadata& meta) {
  switch (format) {
    case Format::Csv: {
      std::string out(kPlanCsvHeader);
      out += '\n';
      for (const auto& p : plans) {
        out += csv_line({std::to_string(p.i), std::to_string(p.j),
                         csv_field(p.label), format_number(p.arrival_rate),
                         format_number(p.added_berth_rate),
                         std::to_string(p.current_berths),
                         p.satisfied ? std::to_string(p.required_berths) : "",
                         optional_number(p.current_wait),
                         optional_number(p.required_wait),
                         p.satisfied ? "true" : "false"});
      }
      return out;
    }
    case Format::Json: {
      ordered_json doc;
      ordered_json m;
      m["kind"] = "plan";
      m["tool_version"] = std::string(version());
      m["config_digest"] = meta.config_digest;
      m["config_path"] = meta.config_path;
      m["sla_wait"] = sla_wait;
      doc["metadata"] = std::move(m);
      std::size_t current = 0;
      std::size_t required = 0;
      bool all = true;
      for (const auto& p : plans) {
        current += p.current_berths;
        required += p.required_berths;
        all = all && p.satisfied;
      }
      ordered_json sys;
      sys["current_berths"] = current;
      sys["required_berths"] = all ? ordered_json(required) : ordered_json(nullptr);
      sys["all_satisfied"] = all;
      doc["system"] = std::move(sys);
      ordered_json ports = ordered_json::array();
      for (const auto& p : plans) {
        ordered_json row;
        row["i"] = p.i;
        row["j"] = p.j;
        row["label"] = p.label;
        row["r_ij"] = p.arrival_rate;
        row["berth_rate"] = p.added_berth_rate;
        row["current_S"] = p.current_berths;
        row["required_S"] =
            p.satisfied ? ordered_json(p.required_berths) : ordered_json(nullptr);
        row["EW_current"] = optional_json(p.current_wait);
        row["EW_required"] = optional_json(p.required_wait);
        row["meets_sla"] = p.satisfied;
        ports.push_back(std::move(row));
      }
      doc["ports"] = std::move(ports);
      return dump(doc);
    }
    case Format::Table:
      break;
  }

  std::string out = "seaport berth plan\n";
  out += key_values({
      {"tool version", std::string(version())},
      {"config digest", meta.config_digest.empty() ? "-" : meta.config_digest},
      {"SLA mean wait", "<= " + format_number(sla_wait)},
  });
  out += "\n";
  TextTable table({"i", "j", "label", "r_ij", "berth rate", "S now",
                   "S required", "EW now", "EW at required S"});
  for (const auto& p : plans) {
    table.add({std::to_string(p.i), std::to_string(p.j), p.label,
               format_number(p.arrival_rate), format_number(p.added_berth_rate),
               std::to_string(p.current_berths),
               p.satisfied ? std::to_string(p.required_berths) : "none",
               p.current_wait ? format_number(*p.current_wait) : "unstable",
               p.required_wait ? format_number(*p.required_wait) : "-"});
  }
  out += table.render();
  return out;
}

// ---------------------------------------------------------------------------

analytic::SystemMetrics parse_analytic_report(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SyntaxError, e.what());
  }
  try {
    analytic::SystemMetrics m;
    const auto& meta = doc.at("metadata");
    const auto routing = parse_routing_mode(meta.at("routing").get<std::string>());
    if (!routing) throw Error(ErrorCode::SchemaError, "bad routing", "metadata.routing");
    m.routing = *routing;
    m.arrival_rate = meta.at("arrival_rate").get<double>();
    m.erlang_degree = meta.at("erlang_degree").get<int>();
    const auto& sys = doc.at("system");
    m.utilization = sys.at("rho").get<double>();
    m.split_probabilities = sys.at("split_probabilities").get<std::vector<double>>();
    m.total_wait = sys.at("EW_total").get<double>();
    m.total_queue_length = sys.at("En_total").get<double>();
    m.total_population = sys.at("EQ_total").get<double>();
    m.arrival_weighted_wait = sys.at("EW_arrival_weighted").get<double>();
    for (const auto& row : doc.at("ports")) {
      analytic::PortMetrics p;
      p.i = row.at("i").get<std::size_t>();
      p.j = row.at("j").get<std::size_t>();
      p.label = row.at("label").get<std::string>();
      p.berths = row.at("S").get<std::size_t>();
      p.homogeneous = row.at("homogeneous").get<bool>();
      p.arrival_rate = row.at("r_ij").get<double>();
      p.utilization = row.at("rho_ij").get<double>();
      p.base_wait = row.at("EW_star").get<double>();
      p.wait = row.at("EW").get<double>();
      p.queue_length = row.at("En").get<double>();
      p.population = row.at("EQ").get<double>();
      m.ports.push_back(std::move(p));
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
}

}  // namespace seaport::io
