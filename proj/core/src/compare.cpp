#include "seaport/compare.hpp"

#include <algorithm>
#include <cmath>

#include "seaport/error.hpp"

namespace seaport::io {

double relative_error(double analytic, double simulated) noexcept {
  constexpr double kEpsilon = 1e-12;
  return std::abs(analytic - simulated) / std::max(std::abs(simulated), kEpsilon);
}

namespace {

MetricComparison pair(double analytic, const sim::Estimate& simulated,
                      double tolerance) {
  MetricComparison m;
  m.analytic = analytic;
  m.simulated = simulated.mean;
  m.half_width = simulated.half_width;
  m.relative_error = relative_error(analytic, simulated.mean);
  m.within_tolerance = m.relative_error <= tolerance;
  return m;
}

std::string coordinates(std::size_t i, std::size_t j, const std::string& label) {
  return "port " + label + " (" + std::to_string(i) + "," + std::to_string(j) +
         ")";
}

}  // namespace

ComparisonReport compare(const SystemTopology& topology,
                         const analytic::SystemMetrics& analytic,
                         const sim::SimMetrics& simulated, double tolerance) {
  if (analytic.ports.size() != simulated.ports.size() ||
      analytic.ports.size() != topology.total_ports()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "analytic and simulated reports describe different topologies");
  }

  ComparisonReport report;
  report.tolerance = tolerance;
  report.routing = analytic.routing;
  report.arrival_rate = analytic.arrival_rate;
  report.erlang_degree = analytic.erlang_degree;
  report.settings = simulated.settings;

  bool all = true;
  for (std::size_t p = 0; p < analytic.ports.size(); ++p) {
    const auto& a = analytic.ports[p];
    const auto& s = simulated.ports[p];
    ComparisonRow row;
    row.i = a.i;
    row.j = a.j;
    row.label = a.label;
    row.berths = a.berths;
    row.homogeneous = a.homogeneous;
    row.wait = pair(a.wait, s.wait, tolerance);
    row.queue_length = pair(a.queue_length, s.queue_length, tolerance);
    row.population = pair(a.population, s.population, tolerance);
    row.utilization = pair(a.utilization, s.utilization, tolerance);
    row.analytic_wait_in_ci = s.wait.contains(a.wait);
    row.within_tolerance =
        row.wait.within_tolerance && row.queue_length.within_tolerance &&
        row.population.within_tolerance && row.utilization.within_tolerance;
    all = all && row.within_tolerance;

    if (!a.homogeneous) {
      report.notes.push_back(
          coordinates(a.i, a.j, a.label) +
          ": berth rates differ; the analytic values treat the port as "
          "homogeneous with the aggregate service rate, while the simulation "
          "serves each ship at its berth's own rate. The gap between the two "
          "is attributable to that aggregate-rate approximation.");
    }
    if (analytic.erlang_degree > 1 && a.berths > 1) {
      report.notes.push_back(
          coordinates(a.i, a.j, a.label) + ": Erlang-" +
          std::to_string(analytic.erlang_degree) +
          " service with S > 1; the analytic wait scales the exponential-"
          "service delay by (1+c^2)/2, an approximation whose error is the "
          "measured gap.");
    }
    report.ports.push_back(std::move(row));
  }

  report.totals.wait = pair(analytic.total_wait, simulated.total_wait, tolerance);
  report.totals.queue_length =
      pair(analytic.total_queue_length, simulated.total_queue_length, tolerance);
  report.totals.population =
      pair(analytic.total_population, simulated.total_population, tolerance);
  report.totals.within_tolerance = report.totals.wait.within_tolerance &&
                                   report.totals.queue_length.within_tolerance &&
                                   report.totals.population.within_tolerance;
  report.within_tolerance = all && report.totals.within_tolerance;
  return report;
}

}  // namespace seaport::io
