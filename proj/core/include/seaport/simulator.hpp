#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seaport/model.hpp"
#include "seaport/rng.hpp"

namespace seaport::sim {

/// Experiment controls. Exactly one of `horizon` / `ship_count` is set.
struct SimSettings {
  std::optional<double> horizon;
  std::optional<std::uint64_t> ship_count = 100'000;
  double warmup_fraction = 0.1;
  std::uint32_t replications = 10;
  std::uint32_t batch_count = 20;
  std::uint64_t seed = 20261016;
  bool confidence_intervals = true;
  bool record_trace = false;
};

struct SimConfig {
  SystemTopology topology;
  TrafficSpec traffic;
  RoutingMode routing = RoutingMode::Eq3;
  SimSettings settings;
};

/// Throws InvalidSimConfig (or the model-level code for bad traffic).
void validate_sim_config(const SimConfig& config);

enum class EventKind { Arrival, ServiceStart, Departure };

std::string_view to_string(EventKind kind) noexcept;

struct EventRecord {
  EventKind kind = EventKind::Arrival;
  double time = 0.0;
  std::uint64_t ship = 0;
  std::size_t i = 0;                  // 1-based
  std::size_t j = 0;                  // 1-based
  std::optional<std::size_t> berth;   // 1-based k; absent for arrivals

  bool operator==(const EventRecord&) const = default;
};

/// Point estimate with an optional 95% half-width (absent for one sample).
struct Estimate {
  double mean = 0.0;
  std::optional<double> half_width;

  bool contains(double value) const noexcept;
};

/// One port's statistics from a single replication, taken over the
/// observation window that follows warmup.
struct PortSample {
  std::size_t i = 0;
  std::size_t j = 0;
  std::uint64_t arrivals = 0;     // ships arriving inside the window
  double arrival_rate = 0.0;
  double wait = 0.0;              // per-ship mean delay before service
  double queue_length = 0.0;      // time-average ships waiting
  double population = 0.0;        // time-average ships in port
  double utilization = 0.0;       // time-average busy berths / S
  std::vector<double> berth_busy; // per-berth busy fraction
};

struct ReplicationResult {
  std::uint32_t index = 0;
  double window_start = 0.0;
  double window_end = 0.0;
  double end_time = 0.0;            // time the system drained
  std::uint64_t total_arrivals = 0; // including warmup
  std::uint64_t served_in_window = 0;
  std::vector<PortSample> ports;    // flatten order
  std::vector<EventRecord> trace;   // filled when settings.record_trace
};

struct PortSimMetrics {
  std::size_t i = 0;
  std::size_t j = 0;
  std::string label;
  std::size_t berths = 0;
  std::uint64_t served = 0;
  Estimate arrival_rate;
  Estimate wait;
  Estimate queue_length;
  Estimate population;
  Estimate utilization;
  std::vector<double> berth_busy;
};

struct SimMetrics {
  RoutingMode routing = RoutingMode::Eq3;
  double arrival_rate = 0.0;
  int erlang_degree = 1;
  SimSettings settings;
  std::uint64_t served = 0;
  Estimate total_wait;
  Estimate total_queue_length;
  Estimate total_population;
  std::vector<PortSimMetrics> ports;  // flatten order
};

/// Exponential variate with the given rate by inverse transform.
double sample_interarrival(double rate, Xoshiro256& rng);

/// Erlang(degree) variate with the given mean: the sum of `degree`
/// exponentials of mean `mean / degree`.
double sample_erlang_service(double mean, int degree, Xoshiro256& rng);

/// 1-based (i, j) for one ship of the system-wide stream: subsystem with
/// probability p_i, then port with probability S_ij / sum_j S_ij. Together
/// the port is chosen with probability S_ij / (total berths).
struct PortIndex {
  std::size_t i = 0;
  std::size_t j = 0;
  bool operator==(const PortIndex&) const = default;
};

PortIndex route_arrival(const SystemTopology& topology, Xoshiro256& rng);

/// Port j (1-based) within subsystem i, chosen proportionally to berths.
std::size_t route_within_subsystem(const SystemTopology& topology,
                                   std::size_t i, Xoshiro256& rng);

/// One independent replication, run until the system drains.
/// Throws HorizonTooShort when confidence intervals are requested and fewer
/// than batch_count * 10 ships are served inside the observation window.
ReplicationResult run_replication(const SimConfig& config,
                                  std::uint32_t replication_index);

/// Pools `replications` replications; half-widths use Student-t on the
/// replication means. Traces are never recorded here.
SimMetrics run_experiment(const SimConfig& config);

/// Two-sided 95% Student-t half-width for the given samples, or nothing
/// when fewer than two samples.
Estimate summarize(std::span<const double> samples);

struct LittleAudit {
  std::uint64_t ships = 0;
  double span = 0.0;          // [0, last event time]
  double queue_length = 0.0;  // time-average ships waiting
  double arrival_rate = 0.0;
  double wait = 0.0;          // per-ship mean delay
  double residual = 0.0;      // |L - lambda W| / max(L, eps)
};

/// Sample-path Little's law check on the waiting line of port (i, j).
/// Throws NonDrainedTrace if any ship at that port has not departed.
LittleAudit audit_littles_law(std::span<const EventRecord> trace,
                              std::size_t i, std::size_t j);

/// Newline-delimited `kind,time,ship_id,i,j,k`; k is empty for arrivals.
std::string format_trace(std::span<const EventRecord> trace);

}  // namespace seaport::sim
