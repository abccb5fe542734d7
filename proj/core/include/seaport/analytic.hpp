#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "seaport/model.hpp"

namespace seaport::analytic {

/// Steady-state metrics of one port. Times share the unit of the rates.
struct PortMetrics {
  std::size_t i = 0;  // 1-based subsystem index
  std::size_t j = 0;  // 1-based port index
  std::string label;
  std::size_t berths = 0;
  bool homogeneous = true;
  double arrival_rate = 0.0;   // r_ij
  double utilization = 0.0;    // rho_ij
  double base_wait = 0.0;      // exponential-service mean delay
  double wait = 0.0;           // Erlang-corrected mean delay
  double queue_length = 0.0;   // mean ships waiting
  double population = 0.0;     // mean ships in port
};

struct SystemMetrics {
  RoutingMode routing = RoutingMode::Eq3;
  double arrival_rate = 0.0;
  int erlang_degree = 1;
  double utilization = 0.0;
  std::vector<double> split_probabilities;
  double total_wait = 0.0;
  double total_queue_length = 0.0;
  double total_population = 0.0;
  /// sum(r_ij * EW_ij) / sum(r_ij). Not part of the published totals; kept
  /// separate so it is never confused with `total_wait`.
  double arrival_weighted_wait = 0.0;
  std::vector<PortMetrics> ports;  // flatten order
};

struct PortStability {
  std::size_t i = 0;
  std::size_t j = 0;
  std::string label;
  std::size_t berths = 0;
  double arrival_rate = 0.0;
  double utilization = 0.0;
  bool stable = true;
};

struct StabilityReport {
  double utilization = 0.0;
  bool system_stable = true;
  std::vector<PortStability> ports;

  bool stable() const noexcept;
};

std::vector<double> split_probabilities(const SystemTopology& topology);

double system_utilization(const SystemTopology& topology,
                          const TrafficSpec& traffic);

/// Per-port Poisson rate. `i` and `j` are 1-based; throws IndexOutOfRange.
double port_arrival_rate(const SystemTopology& topology,
                         const TrafficSpec& traffic, std::size_t i,
                         std::size_t j,
                         RoutingMode routing = RoutingMode::Eq3);

double port_utilization(const SystemTopology& topology,
                        const TrafficSpec& traffic, std::size_t i,
                        std::size_t j,
                        RoutingMode routing = RoutingMode::Eq3);

/// c = sqrt(1/n). Throws InvalidDegree for n < 1.
double variation_coefficient(int degree);

/// Mean delay before service for `berths` parallel servers with aggregate
/// rate `total_service_rate` at occupancy `utilization`, exponential service.
///
/// The (S rho)^m / m! terms are carried as logarithms, so the result stays
/// finite for S in the tens of thousands. utilization == 0 returns 0.
/// Throws UnstablePort when utilization >= 1 and NumericOverflow if the
/// result is not finite.
double base_wait(std::size_t berths, double total_service_rate,
                 double utilization);
double base_wait(const PortSpec& port, double utilization);

/// ((1 + c^2) / 2) * base.
double port_wait(double base, double variation_coefficient);

/// Little's law: r * EW.
double port_queue_length(double arrival_rate, double wait);

/// En + S * rho.
double port_population(double queue_length, std::size_t berths,
                       double utilization);

StabilityReport check_stability(const SystemTopology& topology,
                                const TrafficSpec& traffic,
                                RoutingMode routing = RoutingMode::Eq3);

/// Full per-port pipeline plus plain-sum totals.
/// Throws UnstableSystem or UnstablePort when `check_stability` flags
/// anything.
SystemMetrics system_totals(const SystemTopology& topology,
                            const TrafficSpec& traffic,
                            RoutingMode routing = RoutingMode::Eq3);

}  // namespace seaport::analytic
