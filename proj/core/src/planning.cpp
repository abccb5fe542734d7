#include "seaport/planning.hpp"

#include <cmath>

#include "seaport/analytic.hpp"
#include "seaport/error.hpp"

namespace seaport::planning {

std::optional<double> wait_with_berths(const PortSpec& port,
                                       double arrival_rate, int erlang_degree,
                                       std::size_t berths, double added_rate) {
  const std::size_t existing = port.berth_count();
  double capacity = port.total_service_rate();
  if (berths > existing) {
    capacity += static_cast<double>(berths - existing) * added_rate;
  }
  const double rho = arrival_rate / capacity;
  if (!(rho < 1.0)) return std::nullopt;
  const double base = analytic::base_wait(berths, capacity, rho);
  return analytic::port_wait(base, analytic::variation_coefficient(erlang_degree));
}

BerthPlan size_port(const PortSpec& port, std::size_t i, std::size_t j,
                    double arrival_rate, int erlang_degree,
                    const PlanOptions& options) {
  if (!(options.sla_wait > 0.0) || !std::isfinite(options.sla_wait)) {
    throw Error(ErrorCode::InvalidTraffic, "SLA wait must be positive",
                "sla_wait");
  }
  const double added = options.added_berth_rate.value_or(port.mean_service_rate());
  if (!(added > 0.0) || !std::isfinite(added)) {
    throw Error(ErrorCode::NonPositiveRate,
                "added berth rate must be positive", "berth_rate");
  }

  BerthPlan plan;
  plan.i = i;
  plan.j = j;
  plan.label = port.label;
  plan.arrival_rate = arrival_rate;
  plan.added_berth_rate = added;
  plan.current_berths = port.berth_count();
  plan.current_wait = wait_with_berths(port, arrival_rate, erlang_degree,
                                       plan.current_berths, added);

  for (std::size_t s = plan.current_berths; s <= options.max_berths; ++s) {
    const auto w = s == plan.current_berths
                       ? plan.current_wait
                       : wait_with_berths(port, arrival_rate, erlang_degree, s,
                                          added);
    if (w && *w <= options.sla_wait) {
      plan.required_berths = s;
      plan.required_wait = w;
      plan.satisfied = true;
      break;
    }
  }
  return plan;
}

std::vector<BerthPlan> plan_berths(const SystemTopology& topology,
                                   const TrafficSpec& traffic,
                                   RoutingMode routing,
                                   const PlanOptions& options) {
  validate_traffic(traffic);
  std::vector<BerthPlan> plans;
  for (const auto& fp : flatten(topology)) {
    const double r =
        analytic::port_arrival_rate(topology, traffic, fp.i, fp.j, routing);
    plans.push_back(
        size_port(*fp.port, fp.i, fp.j, r, traffic.erlang_degree, options));
  }
  return plans;
}

}  // namespace seaport::planning
