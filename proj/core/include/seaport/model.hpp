#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace seaport {

/// A single berth (server). `service_rate` is in ships per unit time.
struct BerthSpec {
  double service_rate = 0.0;
};

/// A seaport: one FIFO waiting line in front of `berths.size()` berths.
/// An empty label is replaced by `s<i>.p<j>` during validation.
struct PortSpec {
  std::string label;
  std::vector<BerthSpec> berths;

  std::size_t berth_count() const noexcept { return berths.size(); }
  double total_service_rate() const noexcept;
  double mean_service_rate() const noexcept;
  bool homogeneous() const noexcept;
};

/// An empty label is replaced by `s<i>` during validation.
struct SubsystemSpec {
  std::string label;
  std::vector<PortSpec> ports;
};

/// How external arrivals are spread over ports.
///
/// `Eq3`: every subsystem sees the full arrival rate, split over its ports in
/// proportion to berth counts (the per-port rate formula taken literally).
/// `Split`: one arrival stream is first split over subsystems with the
/// berth-share probabilities, then over ports within the chosen subsystem.
enum class RoutingMode { Eq3, Split };

std::string_view to_string(RoutingMode mode) noexcept;
std::optional<RoutingMode> parse_routing_mode(std::string_view text) noexcept;

/// Validated, immutable port hierarchy. Only `validate_topology` creates one.
///
/// All index-taking accessors are 1-based: subsystem `i` in 1..A, port `j` in
/// 1..B_i.
class SystemTopology {
 public:
  const std::vector<SubsystemSpec>& subsystems() const noexcept {
    return subsystems_;
  }

  std::size_t subsystem_count() const noexcept { return subsystems_.size(); }
  std::size_t port_count(std::size_t i) const;
  std::size_t total_ports() const noexcept { return total_ports_; }
  std::size_t total_berths() const noexcept { return total_berths_; }
  std::size_t subsystem_berths(std::size_t i) const;
  double total_service_rate() const noexcept { return total_service_rate_; }

  const SubsystemSpec& subsystem(std::size_t i) const;
  const PortSpec& port(std::size_t i, std::size_t j) const;

 private:
  friend SystemTopology validate_topology(std::vector<SubsystemSpec>);
  SystemTopology() = default;

  std::vector<SubsystemSpec> subsystems_;
  std::vector<std::size_t> subsystem_berths_;
  std::size_t total_ports_ = 0;
  std::size_t total_berths_ = 0;
  double total_service_rate_ = 0.0;
};

/// Checks every structural invariant and fills in missing labels.
/// Throws Error with EmptyTopology, NonPositiveRate or DuplicateLabel; the
/// error path uses configuration-document notation with 0-based indices.
SystemTopology validate_topology(std::vector<SubsystemSpec> candidate);

/// One port in declaration order, with 1-based coordinates.
struct FlatPort {
  std::size_t i = 0;
  std::size_t j = 0;
  const PortSpec* port = nullptr;
};

std::vector<FlatPort> flatten(const SystemTopology& topology);

struct TrafficSpec {
  double arrival_rate = 0.0;  // ships per unit time
  int erlang_degree = 1;
};

/// Throws InvalidTraffic for a non-positive or non-finite arrival rate and
/// InvalidDegree for a degree below one.
void validate_traffic(const TrafficSpec& traffic);

/// Erlang service-time law parameterised by its mean and degree.
class ErlangService {
 public:
  ErlangService(double mean_service_time, int degree);

  double mean_service_time() const noexcept { return mean_; }
  int degree() const noexcept { return degree_; }
  double variation_coefficient() const noexcept;
  double variance() const noexcept;
  double second_moment() const noexcept;

 private:
  double mean_;
  int degree_;
};

}  // namespace seaport
