#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "seaport/analytic.hpp"
#include "seaport/compare.hpp"
#include "seaport/config.hpp"
#include "seaport/error.hpp"
#include "seaport/planning.hpp"
#include "seaport/report.hpp"
#include "seaport/simulator.hpp"
#include "seaport/version.hpp"

namespace seaport::cli {

namespace {

struct Invocation {
  std::string config_path;
  std::string format = "table";
  std::string out_path;
  std::string routing;
  bool allow_unknown_fields = false;
  double tolerance = 0.05;
  std::optional<std::uint64_t> seed;
  double sla_wait = 0.0;
  std::optional<double> berth_rate;
  std::string trace_path;
};

void add_common(CLI::App& sub, Invocation& inv) {
  sub.add_option("--config", inv.config_path, "Configuration file")
      ->required();
  sub.add_option("--format", inv.format, "Report format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  sub.add_option("--out", inv.out_path,
                 "Write the report here instead of standard output");
  sub.add_option("--routing", inv.routing,
                 "Override the document's routing mode")
      ->check(CLI::IsMember({"eq3", "split"}));
  sub.add_flag("--allow-unknown-fields", inv.allow_unknown_fields,
               "Ignore configuration fields the schema does not know");
}

/// Writes the report; false (with a diagnostic) if the file cannot be opened.
bool deliver(const std::string& text, const Invocation& inv, std::ostream& out,
             std::ostream& err) {
  if (inv.out_path.empty()) {
    out << text;
    out.flush();
    return true;
  }
  std::ofstream file(inv.out_path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "seaport: cannot write " << inv.out_path << "\n";
    return false;
  }
  file << text;
  return static_cast<bool>(file);
}

struct Context {
  io::ConfigBundle bundle;
  io::Format format;
  io::ReportMetadata meta;
};

Context load(const Invocation& inv) {
  io::ParseOptions options;
  options.strict = !inv.allow_unknown_fields;
  Context ctx{io::load_config(inv.config_path, options),
              *io::parse_format(inv.format),
              {}};
  if (!inv.routing.empty()) ctx.bundle.routing = *parse_routing_mode(inv.routing);
  ctx.meta.config_digest = ctx.bundle.digest;
  ctx.meta.config_path = inv.config_path;
  return ctx;
}

sim::SimConfig simulation_config(const Context& ctx, const Invocation& inv) {
  sim::SimConfig config = ctx.bundle.sim_config();
  if (inv.seed) config.settings.seed = *inv.seed;
  sim::validate_sim_config(config);
  return config;
}

int report_instability(const Context& ctx, const analytic::StabilityReport& s,
                       const Invocation& inv, std::ostream& out,
                       std::ostream& err) {
  err << "seaport: no steady state: system rho = "
      << io::format_number(s.utilization);
  for (const auto& p : s.ports) {
    if (!p.stable) {
      err << "; port " << p.label << " rho_ij = "
          << io::format_number(p.utilization);
    }
  }
  err << " (steady state requires rho < 1)\n";
  const auto text = io::emit_report(s, ctx.bundle.routing, ctx.format, ctx.meta);
  return deliver(text, inv, out, err) ? kUnstable : kInputError;
}

int cmd_analyze(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const Context ctx = load(inv);
  const auto& b = ctx.bundle;
  const auto stability = analytic::check_stability(b.topology, b.traffic, b.routing);
  if (!stability.stable()) return report_instability(ctx, stability, inv, out, err);
  const auto metrics = analytic::system_totals(b.topology, b.traffic, b.routing);
  const auto text = io::emit_report(metrics, ctx.format, ctx.meta);
  return deliver(text, inv, out, err) ? kSuccess : kInputError;
}

int cmd_simulate(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const Context ctx = load(inv);
  const sim::SimConfig config = simulation_config(ctx, inv);
  const auto metrics = sim::run_experiment(config);
  if (!inv.trace_path.empty()) {
    sim::SimConfig traced = config;
    traced.settings.record_trace = true;
    const auto rep = sim::run_replication(traced, 0);
    std::ofstream file(inv.trace_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "seaport: cannot write " << inv.trace_path << "\n";
      return kInputError;
    }
    file << sim::format_trace(rep.trace);
  }
  const auto text = io::emit_report(metrics, ctx.format, ctx.meta);
  return deliver(text, inv, out, err) ? kSuccess : kInputError;
}

int cmd_compare(const Invocation& inv, std::ostream& out, std::ostream& err) {
  if (!(inv.tolerance > 0.0)) {
    err << "seaport: --tolerance must be positive\n";
    return kInputError;
  }
  const Context ctx = load(inv);
  const auto& b = ctx.bundle;
  const sim::SimConfig config = simulation_config(ctx, inv);
  const auto stability = analytic::check_stability(b.topology, b.traffic, b.routing);
  if (!stability.stable()) return report_instability(ctx, stability, inv, out, err);

  const auto analytic_metrics =
      analytic::system_totals(b.topology, b.traffic, b.routing);
  const auto simulated = sim::run_experiment(config);
  const auto report =
      io::compare(b.topology, analytic_metrics, simulated, inv.tolerance);
  const auto text = io::emit_report(report, ctx.format, ctx.meta);
  if (!deliver(text, inv, out, err)) return kInputError;
  if (!report.within_tolerance) {
    err << "seaport: analytic and simulated metrics differ by more than "
        << io::format_number(inv.tolerance) << " relative\n";
    return kToleranceFailure;
  }
  return kSuccess;
}

int cmd_plan(const Invocation& inv, std::ostream& out, std::ostream& err) {
  if (!(inv.sla_wait > 0.0)) {
    err << "seaport: --sla-wait must be positive\n";
    return kInputError;
  }
  if (inv.berth_rate && !(*inv.berth_rate > 0.0)) {
    err << "seaport: --berth-rate must be positive\n";
    return kInputError;
  }
  const Context ctx = load(inv);
  const auto& b = ctx.bundle;
  planning::PlanOptions options;
  options.sla_wait = inv.sla_wait;
  options.added_berth_rate = inv.berth_rate;
  const auto plans = planning::plan_berths(b.topology, b.traffic, b.routing, options);
  const auto text = io::emit_report(plans, inv.sla_wait, ctx.format, ctx.meta);
  if (!deliver(text, inv, out, err)) return kInputError;
  const bool all = std::all_of(plans.begin(), plans.end(),
                               [](const auto& p) { return p.satisfied; });
  if (!all) {
    err << "seaport: no berth count up to " << options.max_berths
        << " meets the SLA for at least one port\n";
    return kUnstable;
  }
  return kSuccess;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::UnstableSystem:
    case ErrorCode::UnstablePort:
      return kUnstable;
    case ErrorCode::HorizonTooShort:
      return kInsufficientData;
    default:
      return kInputError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Steady-state metrics and simulation for hierarchical seaport "
               "queueing systems",
               "seaport"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  Invocation inv;
  auto* analyze = app.add_subcommand("analyze", "Analytic steady-state metrics");
  add_common(*analyze, inv);

  auto* simulate = app.add_subcommand("simulate", "Discrete-event simulation");
  add_common(*simulate, inv);
  simulate->add_option("--seed", inv.seed, "Override the master seed");
  simulate->add_option("--trace", inv.trace_path,
                       "Write the event trace of replication 0 to this file");

  auto* compare = app.add_subcommand(
      "compare", "Analytic metrics against simulation estimates");
  add_common(*compare, inv);
  compare->add_option("--tolerance", inv.tolerance,
                      "Relative tolerance for each metric")
      ->capture_default_str();
  compare->add_option("--seed", inv.seed, "Override the master seed");

  auto* plan = app.add_subcommand(
      "plan", "Smallest berth count per port meeting a mean-wait target");
  add_common(*plan, inv);
  plan->add_option("--sla-wait", inv.sla_wait, "Target mean wait (inclusive)")
      ->required();
  plan->add_option("--berth-rate", inv.berth_rate,
                   "Service rate of added berths (default: port mean)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(inv, out, err);
    if (simulate->parsed()) return cmd_simulate(inv, out, err);
    if (compare->parsed()) return cmd_compare(inv, out, err);
    return cmd_plan(inv, out, err);
  } catch (const Error& e) {
    err << "seaport: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "seaport: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace seaport::cli
