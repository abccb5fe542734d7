#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "seaport/model.hpp"

namespace seaport::planning {

struct PlanOptions {
  double sla_wait = 0.0;
  /// Rate given to every added berth; defaults to the port's mean rate.
  std::optional<double> added_berth_rate;
  std::size_t max_berths = 10'000;
};

/// Berth sizing for one port. The port's arrival rate stays fixed while
/// berths are added, so the mean wait only falls as S grows.
struct BerthPlan {
  std::size_t i = 0;
  std::size_t j = 0;
  std::string label;
  double arrival_rate = 0.0;
  double added_berth_rate = 0.0;
  std::size_t current_berths = 0;
  std::size_t required_berths = 0;       // 0 when no S <= max_berths works
  std::optional<double> current_wait;    // absent when currently unstable
  std::optional<double> required_wait;
  bool satisfied = false;
};

/// Mean wait with `berths` berths, the first `port.berth_count()` at their
/// configured rates and the rest at `added_rate`. Empty when unstable.
std::optional<double> wait_with_berths(const PortSpec& port,
                                       double arrival_rate, int erlang_degree,
                                       std::size_t berths, double added_rate);

BerthPlan size_port(const PortSpec& port, std::size_t i, std::size_t j,
                    double arrival_rate, int erlang_degree,
                    const PlanOptions& options);

/// Smallest S >= current with EW <= sla_wait (inclusive) for every port.
std::vector<BerthPlan> plan_berths(const SystemTopology& topology,
                                   const TrafficSpec& traffic,
                                   RoutingMode routing,
                                   const PlanOptions& options);

}  // namespace seaport::planning
