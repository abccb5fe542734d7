#include "seaport/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seaport/error.hpp"

namespace seaport::analytic {

bool StabilityReport::stable() const noexcept {
  return system_stable &&
         std::all_of(ports.begin(), ports.end(),
                     [](const PortStability& p) { return p.stable; });
}

std::vector<double> split_probabilities(const SystemTopology& topology) {
  const auto total = static_cast<double>(topology.total_berths());
  std::vector<double> p;
  p.reserve(topology.subsystem_count());
  for (std::size_t i = 1; i <= topology.subsystem_count(); ++i) {
    p.push_back(static_cast<double>(topology.subsystem_berths(i)) / total);
  }
  return p;
}

double system_utilization(const SystemTopology& topology,
                          const TrafficSpec& traffic) {
  return traffic.arrival_rate / topology.total_service_rate();
}

double port_arrival_rate(const SystemTopology& topology,
                         const TrafficSpec& traffic, std::size_t i,
                         std::size_t j, RoutingMode routing) {
  const auto berths = static_cast<double>(topology.port(i, j).berth_count());
  // Split routing: p_i * lambda * S_ij / sum_j S_ij collapses to
  // lambda * S_ij / (total berths).
  const auto denominator =
      routing == RoutingMode::Split
          ? static_cast<double>(topology.total_berths())
          : static_cast<double>(topology.subsystem_berths(i));
  return traffic.arrival_rate * berths / denominator;
}

double port_utilization(const SystemTopology& topology,
                        const TrafficSpec& traffic, std::size_t i,
                        std::size_t j, RoutingMode routing) {
  return port_arrival_rate(topology, traffic, i, j, routing) /
         topology.port(i, j).total_service_rate();
}

double variation_coefficient(int degree) {
  if (degree < 1) {
    throw Error(ErrorCode::InvalidDegree,
                "Erlang degree must be at least 1, got " +
                    std::to_string(degree));
  }
  return 1.0 / std::sqrt(static_cast<double>(degree));
}

double base_wait(std::size_t berths, double total_service_rate,
                 double utilization) {
  if (berths == 0) {
    throw Error(ErrorCode::EmptyTopology, "port has no berths");
  }
  if (!(total_service_rate > 0.0) || !std::isfinite(total_service_rate)) {
    throw Error(ErrorCode::NonPositiveRate,
                "aggregate service rate must be positive");
  }
  if (std::isnan(utilization) || utilization < 0.0) {
    throw Error(ErrorCode::InvalidTraffic, "utilization must be non-negative");
  }
  if (utilization >= 1.0) {
    throw Error(ErrorCode::UnstablePort,
                "port occupancy " + std::to_string(utilization) +
                    " is not below 1");
  }
  if (utilization == 0.0) return 0.0;

  const auto servers = static_cast<double>(berths);
  const double log_load = std::log(servers * utilization);

  // Log of the tail term (S rho)^S / (S! (1 - rho)).
  const double log_tail =
      servers * log_load - std::lgamma(servers + 1.0) - std::log1p(-utilization);

  // Log of (S rho)^m / m! for m = 0..S-1 via the ratio recurrence.
  std::vector<double> log_terms;
  log_terms.reserve(berths + 1);
  double log_term = 0.0;
  for (std::size_t m = 0; m < berths; ++m) {
    log_terms.push_back(log_term);
    log_term += log_load - std::log(static_cast<double>(m + 1));
  }
  log_terms.push_back(log_tail);

  const double peak = *std::max_element(log_terms.begin(), log_terms.end());
  double scaled_sum = 0.0;
  for (double t : log_terms) scaled_sum += std::exp(t - peak);
  const double log_denominator = peak + std::log(scaled_sum);

  // Probability that an arrival has to wait, then the mean delay.
  const double wait_probability = std::exp(log_tail - log_denominator);
  const double result =
      wait_probability / (total_service_rate * (1.0 - utilization));
  if (!std::isfinite(result)) {
    throw Error(ErrorCode::NumericOverflow,
                "mean delay is not representable for S=" +
                    std::to_string(berths));
  }
  return result;
}

double base_wait(const PortSpec& port, double utilization) {
  return base_wait(port.berth_count(), port.total_service_rate(), utilization);
}

double port_wait(double base, double variation_coefficient) {
  return 0.5 * (1.0 + variation_coefficient * variation_coefficient) * base;
}

double port_queue_length(double arrival_rate, double wait) {
  return arrival_rate * wait;
}

double port_population(double queue_length, std::size_t berths,
                       double utilization) {
  return queue_length + static_cast<double>(berths) * utilization;
}

StabilityReport check_stability(const SystemTopology& topology,
                                const TrafficSpec& traffic,
                                RoutingMode routing) {
  StabilityReport report;
  report.utilization = system_utilization(topology, traffic);
  report.system_stable = report.utilization < 1.0;
  for (const auto& fp : flatten(topology)) {
    PortStability ps;
    ps.i = fp.i;
    ps.j = fp.j;
    ps.label = fp.port->label;
    ps.berths = fp.port->berth_count();
    ps.arrival_rate = port_arrival_rate(topology, traffic, fp.i, fp.j, routing);
    ps.utilization = ps.arrival_rate / fp.port->total_service_rate();
    ps.stable = ps.utilization < 1.0;
    report.ports.push_back(std::move(ps));
  }
  return report;
}

SystemMetrics system_totals(const SystemTopology& topology,
                            const TrafficSpec& traffic, RoutingMode routing) {
  validate_traffic(traffic);
  const StabilityReport stability = check_stability(topology, traffic, routing);
  if (!stability.system_stable) {
    throw Error(ErrorCode::UnstableSystem,
                "system occupancy " + std::to_string(stability.utilization) +
                    " is not below 1; no steady state exists");
  }
  for (const auto& ps : stability.ports) {
    if (!ps.stable) {
      throw Error(ErrorCode::UnstablePort,
                  "port " + ps.label + " occupancy " +
                      std::to_string(ps.utilization) + " is not below 1",
                  "subsystems[" + std::to_string(ps.i - 1) + "].ports[" +
                      std::to_string(ps.j - 1) + "]");
    }
  }

  SystemMetrics out;
  out.routing = routing;
  out.arrival_rate = traffic.arrival_rate;
  out.erlang_degree = traffic.erlang_degree;
  out.utilization = stability.utilization;
  out.split_probabilities = split_probabilities(topology);

  const double c = variation_coefficient(traffic.erlang_degree);
  const auto flat = flatten(topology);
  double weighted = 0.0;
  double rate_sum = 0.0;
  for (std::size_t idx = 0; idx < flat.size(); ++idx) {
    const auto& fp = flat[idx];
    const auto& ps = stability.ports[idx];
    PortMetrics pm;
    pm.i = fp.i;
    pm.j = fp.j;
    pm.label = fp.port->label;
    pm.berths = fp.port->berth_count();
    pm.homogeneous = fp.port->homogeneous();
    pm.arrival_rate = ps.arrival_rate;
    pm.utilization = ps.utilization;
    pm.base_wait = base_wait(*fp.port, pm.utilization);
    pm.wait = port_wait(pm.base_wait, c);
    pm.queue_length = port_queue_length(pm.arrival_rate, pm.wait);
    pm.population = port_population(pm.queue_length, pm.berths, pm.utilization);

    out.total_wait += pm.wait;
    out.total_queue_length += pm.queue_length;
    out.total_population += pm.population;
    weighted += pm.arrival_rate * pm.wait;
    rate_sum += pm.arrival_rate;
    out.ports.push_back(std::move(pm));
  }
  out.arrival_weighted_wait = weighted / rate_sum;
  return out;
}

}  // namespace seaport::analytic
