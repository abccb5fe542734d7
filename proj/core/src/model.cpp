#include "seaport/model.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "seaport/error.hpp"

namespace seaport {

double PortSpec::total_service_rate() const noexcept {
  return std::accumulate(berths.begin(), berths.end(), 0.0,
                         [](double acc, const BerthSpec& b) {
                           return acc + b.service_rate;
                         });
}

double PortSpec::mean_service_rate() const noexcept {
  return berths.empty() ? 0.0
                        : total_service_rate() /
                              static_cast<double>(berths.size());
}

bool PortSpec::homogeneous() const noexcept {
  for (const auto& b : berths) {
    if (b.service_rate != berths.front().service_rate) return false;
  }
  return true;
}

std::string_view to_string(RoutingMode mode) noexcept {
  return mode == RoutingMode::Split ? "split" : "eq3";
}

std::optional<RoutingMode> parse_routing_mode(std::string_view text) noexcept {
  if (text == "eq3") return RoutingMode::Eq3;
  if (text == "split") return RoutingMode::Split;
  return std::nullopt;
}

std::size_t SystemTopology::port_count(std::size_t i) const {
  return subsystem(i).ports.size();
}

std::size_t SystemTopology::subsystem_berths(std::size_t i) const {
  subsystem(i);
  return subsystem_berths_[i - 1];
}

const SubsystemSpec& SystemTopology::subsystem(std::size_t i) const {
  if (i < 1 || i > subsystems_.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "subsystem index " + std::to_string(i) + " outside 1.." +
                    std::to_string(subsystems_.size()));
  }
  return subsystems_[i - 1];
}

const PortSpec& SystemTopology::port(std::size_t i, std::size_t j) const {
  const auto& sub = subsystem(i);
  if (j < 1 || j > sub.ports.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "port index " + std::to_string(j) + " outside 1.." +
                    std::to_string(sub.ports.size()) + " of subsystem " +
                    std::to_string(i));
  }
  return sub.ports[j - 1];
}

SystemTopology validate_topology(std::vector<SubsystemSpec> candidate) {
  if (candidate.empty()) {
    throw Error(ErrorCode::EmptyTopology, "topology has no subsystems",
                "subsystems");
  }

  SystemTopology topo;
  std::set<std::string> subsystem_labels;
  for (std::size_t si = 0; si < candidate.size(); ++si) {
    auto& sub = candidate[si];
    const std::string sub_path = "subsystems[" + std::to_string(si) + "]";
    if (sub.label.empty()) sub.label = "s" + std::to_string(si + 1);
    if (!subsystem_labels.insert(sub.label).second) {
      throw Error(ErrorCode::DuplicateLabel,
                  "subsystem label '" + sub.label + "' is not unique",
                  sub_path + ".label");
    }
    if (sub.ports.empty()) {
      throw Error(ErrorCode::EmptyTopology, "subsystem has no ports",
                  sub_path + ".ports");
    }

    std::set<std::string> port_labels;
    std::size_t sub_berths = 0;
    for (std::size_t pj = 0; pj < sub.ports.size(); ++pj) {
      auto& port = sub.ports[pj];
      const std::string port_path =
          sub_path + ".ports[" + std::to_string(pj) + "]";
      if (port.label.empty()) {
        port.label = "s" + std::to_string(si + 1) + ".p" + std::to_string(pj + 1);
      }
      if (!port_labels.insert(port.label).second) {
        throw Error(ErrorCode::DuplicateLabel,
                    "port label '" + port.label + "' is not unique",
                    port_path + ".label");
      }
      if (port.berths.empty()) {
        throw Error(ErrorCode::EmptyTopology, "port has no berths",
                    port_path + ".berth_rates");
      }
      for (std::size_t bk = 0; bk < port.berths.size(); ++bk) {
        const double rate = port.berths[bk].service_rate;
        if (!(rate > 0.0) || !std::isfinite(rate)) {
          throw Error(ErrorCode::NonPositiveRate,
                      "berth service rate must be positive and finite",
                      port_path + ".berth_rates[" + std::to_string(bk) + "]");
        }
        topo.total_service_rate_ += rate;
      }
      sub_berths += port.berths.size();
    }
    topo.subsystem_berths_.push_back(sub_berths);
    topo.total_berths_ += sub_berths;
    topo.total_ports_ += sub.ports.size();
  }

  topo.subsystems_ = std::move(candidate);
  return topo;
}

std::vector<FlatPort> flatten(const SystemTopology& topology) {
  std::vector<FlatPort> out;
  out.reserve(topology.total_ports());
  const auto& subs = topology.subsystems();
  for (std::size_t si = 0; si < subs.size(); ++si) {
    for (std::size_t pj = 0; pj < subs[si].ports.size(); ++pj) {
      out.push_back({si + 1, pj + 1, &subs[si].ports[pj]});
    }
  }
  return out;
}

void validate_traffic(const TrafficSpec& traffic) {
  if (!(traffic.arrival_rate > 0.0) || !std::isfinite(traffic.arrival_rate)) {
    throw Error(ErrorCode::InvalidTraffic,
                "arrival rate must be positive and finite",
                "traffic.arrival_rate");
  }
  if (traffic.erlang_degree < 1) {
    throw Error(ErrorCode::InvalidDegree, "Erlang degree must be at least 1",
                "traffic.erlang_degree");
  }
}

ErlangService::ErlangService(double mean_service_time, int degree)
    : mean_(mean_service_time), degree_(degree) {
  if (!(mean_service_time > 0.0) || !std::isfinite(mean_service_time)) {
    throw Error(ErrorCode::NonPositiveRate,
                "mean service time must be positive and finite");
  }
  if (degree < 1) {
    throw Error(ErrorCode::InvalidDegree, "Erlang degree must be at least 1");
  }
}

double ErlangService::variation_coefficient() const noexcept {
  return 1.0 / std::sqrt(static_cast<double>(degree_));
}

double ErlangService::variance() const noexcept {
  return mean_ * mean_ / static_cast<double>(degree_);
}

// E[G^2] for Erlang(n) with mean m is m^2 (n + 1) / n.
double ErlangService::second_moment() const noexcept {
  return mean_ * mean_ * (static_cast<double>(degree_) + 1.0) /
         static_cast<double>(degree_);
}

}  // namespace seaport
