#include "seaport/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <mutex>
#include <queue>
#include <random>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "seaport/error.hpp"

namespace seaport::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sum of up to this many uniforms is taken as one product before the log;
// 16 draws of at least 2^-54 stay above the smallest normal double.
constexpr int kProductChunk = 16;
// Above this degree the Erlang variate is drawn as a Gamma(n) variate.
constexpr int kDirectSumLimit = 64;

}  // namespace

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::Arrival: return "arrival";
    case EventKind::ServiceStart: return "service_start";
    case EventKind::Departure: return "departure";
  }
  return "unknown";
}

bool Estimate::contains(double value) const noexcept {
  if (!half_width) return false;
  return std::abs(value - mean) <= *half_width;
}

void validate_sim_config(const SimConfig& config) {
  validate_traffic(config.traffic);
  const auto& s = config.settings;
  auto fail = [](const std::string& path, const std::string& what) {
    throw Error(ErrorCode::InvalidSimConfig, what, "simulation." + path);
  };
  if (s.horizon.has_value() == s.ship_count.has_value()) {
    fail("horizon", "exactly one of horizon and ship_count must be set");
  }
  if (s.horizon && !(*s.horizon > 0.0 && std::isfinite(*s.horizon))) {
    fail("horizon", "horizon must be positive and finite");
  }
  if (s.ship_count && *s.ship_count == 0) {
    fail("ship_count", "ship_count must be positive");
  }
  if (!(s.warmup_fraction >= 0.0 && s.warmup_fraction <= 0.5)) {
    fail("warmup_fraction", "warmup_fraction must lie in [0, 0.5]");
  }
  if (s.replications < 1) fail("replications", "replications must be >= 1");
  if (s.batch_count < 1 || (s.confidence_intervals && s.batch_count < 10)) {
    fail("batch_count",
         "batch_count must be >= 10 when confidence intervals are requested");
  }
}

double sample_interarrival(double rate, Xoshiro256& rng) {
  return -std::log(rng.uniform_open()) / rate;
}

double sample_erlang_service(double mean, int degree, Xoshiro256& rng) {
  const double phase_mean = mean / static_cast<double>(degree);
  if (degree > kDirectSumLimit) {
    std::gamma_distribution<double> gamma(static_cast<double>(degree),
                                          phase_mean);
    return gamma(rng);
  }
  double log_sum = 0.0;
  int remaining = degree;
  while (remaining > 0) {
    const int chunk = std::min(remaining, kProductChunk);
    double product = 1.0;
    for (int k = 0; k < chunk; ++k) product *= rng.uniform_open();
    log_sum += std::log(product);
    remaining -= chunk;
  }
  return -log_sum * phase_mean;
}

std::size_t route_within_subsystem(const SystemTopology& topology,
                                   std::size_t i, Xoshiro256& rng) {
  const auto& sub = topology.subsystem(i);
  std::uint64_t pick = rng.below(topology.subsystem_berths(i));
  for (std::size_t j = 0; j < sub.ports.size(); ++j) {
    const auto s = sub.ports[j].berth_count();
    if (pick < s) return j + 1;
    pick -= s;
  }
  return sub.ports.size();
}

PortIndex route_arrival(const SystemTopology& topology, Xoshiro256& rng) {
  std::uint64_t pick = rng.below(topology.total_berths());
  const auto& subs = topology.subsystems();
  for (std::size_t i = 0; i < subs.size(); ++i) {
    for (std::size_t j = 0; j < subs[i].ports.size(); ++j) {
      const auto s = subs[i].ports[j].berth_count();
      if (pick < s) return {i + 1, j + 1};
      pick -= s;
    }
  }
  return {subs.size(), subs.back().ports.size()};
}

namespace {

struct Ship {
  std::uint64_t id = 0;
  double arrival = 0.0;
  bool observed = false;
};

enum class Pending : std::uint8_t { Arrival = 0, Departure = 1 };

struct Event {
  double time;
  Pending kind;
  std::uint64_t seq;
  std::uint32_t target;  // source index for arrivals, port index otherwise
  std::uint32_t berth;

  // Min-heap order: time, then arrivals before departures, then sequence.
  bool operator>(const Event& o) const noexcept {
    if (time != o.time) return time > o.time;
    if (kind != o.kind) return kind > o.kind;
    return seq > o.seq;
  }
};

struct PortState {
  const PortSpec* spec = nullptr;
  std::size_t i = 0;
  std::size_t j = 0;
  std::deque<Ship> line;
  std::vector<Ship> in_service;        // indexed by berth
  std::vector<double> service_start;   // indexed by berth
  std::vector<std::uint32_t> free_berths;
  std::size_t busy = 0;

  double last_time = 0.0;
  double queue_area = 0.0;
  double busy_area = 0.0;
  std::vector<double> berth_busy_area;
  double wait_sum = 0.0;
  std::uint64_t observed_ships = 0;
};

class Replication {
 public:
  Replication(const SimConfig& config, std::uint32_t index)
      : config_(config),
        index_(index),
        arrivals_rng_(derive_stream_seed(config.settings.seed, index,
                                         Stream::Arrivals)),
        routing_rng_(derive_stream_seed(config.settings.seed, index,
                                        Stream::Routing)),
        service_rng_(derive_stream_seed(config.settings.seed, index,
                                        Stream::Service)),
        choice_rng_(derive_stream_seed(config.settings.seed, index,
                                       Stream::BerthChoice)) {
    for (const auto& fp : flatten(config.topology)) {
      PortState ps;
      ps.spec = fp.port;
      ps.i = fp.i;
      ps.j = fp.j;
      const auto s = fp.port->berth_count();
      ps.in_service.resize(s);
      ps.service_start.assign(s, 0.0);
      ps.berth_busy_area.assign(s, 0.0);
      for (std::size_t k = 0; k < s; ++k) {
        ps.free_berths.push_back(static_cast<std::uint32_t>(k));
      }
      ports_.push_back(std::move(ps));
    }
    std::size_t offset = 0;
    for (std::size_t i = 1; i <= config.topology.subsystem_count(); ++i) {
      subsystem_offset_.push_back(offset);
      offset += config.topology.port_count(i);
    }

    const auto& s = config.settings;
    if (s.horizon) {
      window_start_ = s.warmup_fraction * *s.horizon;
      window_end_ = *s.horizon;
    } else {
      warmup_ships_ = static_cast<std::uint64_t>(
          std::floor(s.warmup_fraction * static_cast<double>(*s.ship_count)));
      window_start_ = warmup_ships_ == 0 ? 0.0 : kInf;
      window_end_ = kInf;
    }
  }

  ReplicationResult run() {
    const std::size_t sources = config_.routing == RoutingMode::Eq3
                                    ? config_.topology.subsystem_count()
                                    : 1;
    for (std::size_t src = 0; src < sources; ++src) {
      schedule_arrival(static_cast<std::uint32_t>(src), 0.0);
    }

    while (!events_.empty()) {
      const Event ev = events_.top();
      events_.pop();
      if (ev.kind == Pending::Arrival) {
        on_arrival(ev);
      } else {
        on_departure(ev);
      }
    }
    return finish();
  }

 private:
  void schedule_arrival(std::uint32_t source, double now) {
    const double t = now + sample_interarrival(config_.traffic.arrival_rate,
                                               arrivals_rng_);
    if (config_.settings.horizon && t > *config_.settings.horizon) return;
    events_.push({t, Pending::Arrival, seq_++, source, 0});
  }

  double overlap(double a, double b) const noexcept {
    const double lo = std::max(a, window_start_);
    const double hi = std::min(b, window_end_);
    return hi > lo ? hi - lo : 0.0;
  }

  void advance(PortState& ps, double now) {
    const double dt = overlap(ps.last_time, now);
    ps.queue_area += static_cast<double>(ps.line.size()) * dt;
    ps.busy_area += static_cast<double>(ps.busy) * dt;
    ps.last_time = now;
  }

  void record(EventKind kind, double t, std::uint64_t ship,
              const PortState& ps, std::optional<std::size_t> berth) {
    if (!config_.settings.record_trace) return;
    trace_.push_back({kind, t, ship, ps.i, ps.j, berth});
  }

  void start_service(PortState& ps, std::uint32_t berth, const Ship& ship,
                     double now) {
    ps.in_service[berth] = ship;
    ps.service_start[berth] = now;
    ++ps.busy;
    if (ship.observed) {
      ps.wait_sum += now - ship.arrival;
      ++ps.observed_ships;
    }
    record(EventKind::ServiceStart, now, ship.id, ps, berth + 1);
    const double mean = 1.0 / ps.spec->berths[berth].service_rate;
    const double duration = sample_erlang_service(
        mean, config_.traffic.erlang_degree, service_rng_);
    const auto port_index = static_cast<std::uint32_t>(&ps - ports_.data());
    events_.push({now + duration, Pending::Departure, seq_++, port_index, berth});
  }

  void on_arrival(const Event& ev) {
    if (!arrivals_open_) return;
    const double now = ev.time;
    const auto& s = config_.settings;

    const std::uint64_t id = arrivals_++;
    if (s.ship_count) {
      if (id == warmup_ships_) window_start_ = now;
      if (arrivals_ == *s.ship_count) {
        window_end_ = now;
        arrivals_open_ = false;
      }
    }

    std::size_t port_index = 0;
    if (config_.routing == RoutingMode::Eq3) {
      const std::size_t i = ev.target + 1;
      port_index = subsystem_offset_[ev.target] +
                   route_within_subsystem(config_.topology, i, routing_rng_) - 1;
    } else {
      const auto where = route_arrival(config_.topology, routing_rng_);
      port_index = subsystem_offset_[where.i - 1] + where.j - 1;
    }

    PortState& ps = ports_[port_index];
    advance(ps, now);
    Ship ship{id, now, now >= window_start_ && now <= window_end_};
    if (ship.observed) ++observed_arrivals_[port_index];
    record(EventKind::Arrival, now, id, ps, std::nullopt);

    if (!ps.free_berths.empty()) {
      // Uniform choice among the free berths.
      const auto pick = static_cast<std::size_t>(
          choice_rng_.below(ps.free_berths.size()));
      const std::uint32_t berth = ps.free_berths[pick];
      ps.free_berths[pick] = ps.free_berths.back();
      ps.free_berths.pop_back();
      start_service(ps, berth, ship, now);
    } else {
      ps.line.push_back(ship);
    }

    if (arrivals_open_) schedule_arrival(ev.target, now);
  }

  void on_departure(const Event& ev) {
    const double now = ev.time;
    PortState& ps = ports_[ev.target];
    advance(ps, now);
    const std::uint32_t berth = ev.berth;
    const Ship done = ps.in_service[berth];
    ps.berth_busy_area[berth] += overlap(ps.service_start[berth], now);
    --ps.busy;
    record(EventKind::Departure, now, done.id, ps, berth + 1);
    end_time_ = now;

    // A berth never idles while ships wait: the head of the line takes it.
    if (!ps.line.empty()) {
      const Ship next = ps.line.front();
      ps.line.pop_front();
      start_service(ps, berth, next, now);
    } else {
      ps.free_berths.push_back(berth);
    }
  }

  ReplicationResult finish() {
    ReplicationResult out;
    out.index = index_;
    out.total_arrivals = arrivals_;
    out.end_time = end_time_;
    if (arrivals_ == 0 || !std::isfinite(window_start_)) {
      window_start_ = 0.0;
      window_end_ = 0.0;
    } else if (!std::isfinite(window_end_)) {
      window_end_ = window_start_;
    }
    out.window_start = window_start_;
    out.window_end = window_end_;
    const double length = window_end_ - window_start_;

    for (std::size_t p = 0; p < ports_.size(); ++p) {
      const PortState& ps = ports_[p];
      PortSample sample;
      sample.i = ps.i;
      sample.j = ps.j;
      sample.arrivals = observed_arrivals_[p];
      const auto s = static_cast<double>(ps.spec->berth_count());
      sample.berth_busy.assign(ps.berth_busy_area.size(), 0.0);
      if (length > 0.0) {
        sample.arrival_rate = static_cast<double>(sample.arrivals) / length;
        sample.queue_length = ps.queue_area / length;
        sample.population = (ps.queue_area + ps.busy_area) / length;
        sample.utilization = ps.busy_area / (s * length);
        for (std::size_t k = 0; k < ps.berth_busy_area.size(); ++k) {
          sample.berth_busy[k] = std::min(1.0, ps.berth_busy_area[k] / length);
        }
      }
      if (ps.observed_ships > 0) {
        sample.wait = ps.wait_sum / static_cast<double>(ps.observed_ships);
      }
      out.served_in_window += ps.observed_ships;
      out.ports.push_back(std::move(sample));
    }
    out.trace = std::move(trace_);

    const auto& st = config_.settings;
    const std::uint64_t needed = std::uint64_t{st.batch_count} * 10;
    if (st.confidence_intervals && out.served_in_window < needed) {
      throw Error(ErrorCode::HorizonTooShort,
                  "replication " + std::to_string(index_) + " served " +
                      std::to_string(out.served_in_window) +
                      " ships after warmup; at least " +
                      std::to_string(needed) + " are needed",
                  "simulation");
    }
    return out;
  }

  const SimConfig& config_;
  std::uint32_t index_;
  Xoshiro256 arrivals_rng_;
  Xoshiro256 routing_rng_;
  Xoshiro256 service_rng_;
  Xoshiro256 choice_rng_;

  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::uint64_t seq_ = 0;
  std::vector<PortState> ports_;
  std::vector<std::size_t> subsystem_offset_;
  std::vector<std::uint64_t> observed_arrivals_ =
      std::vector<std::uint64_t>(config_.topology.total_ports(), 0);

  std::uint64_t arrivals_ = 0;
  std::uint64_t warmup_ships_ = 0;
  bool arrivals_open_ = true;
  double window_start_ = 0.0;
  double window_end_ = 0.0;
  double end_time_ = 0.0;
  std::vector<EventRecord> trace_;
};

}  // namespace

ReplicationResult run_replication(const SimConfig& config,
                                  std::uint32_t replication_index) {
  validate_sim_config(config);
  return Replication(config, replication_index).run();
}

Estimate summarize(std::span<const double> samples) {
  Estimate e;
  if (samples.empty()) return e;
  const auto n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double x : samples) sum += x;
  e.mean = sum / n;
  if (samples.size() < 2) return e;
  double ss = 0.0;
  for (double x : samples) ss += (x - e.mean) * (x - e.mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t dist(n - 1.0);
  const double t = boost::math::quantile(dist, 0.975);
  e.half_width = t * sd / std::sqrt(n);
  return e;
}

SimMetrics run_experiment(const SimConfig& config) {
  validate_sim_config(config);
  SimConfig quiet = config;
  quiet.settings.record_trace = false;

  const std::uint32_t reps = config.settings.replications;
  std::vector<std::optional<ReplicationResult>> results(reps);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<std::uint32_t> next{0};

  auto worker = [&] {
    for (std::uint32_t r = next++; r < reps; r = next++) {
      try {
        results[r] = Replication(quiet, r).run();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned threads = std::min<unsigned>(hw, reps);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  SimMetrics out;
  out.routing = config.routing;
  out.arrival_rate = config.traffic.arrival_rate;
  out.erlang_degree = config.traffic.erlang_degree;
  out.settings = config.settings;

  const auto flat = flatten(config.topology);
  std::vector<double> total_wait(reps), total_queue(reps), total_pop(reps);
  std::vector<double> wait(reps), queue(reps), pop(reps), util(reps), rate(reps);
  for (std::size_t p = 0; p < flat.size(); ++p) {
    PortSimMetrics pm;
    pm.i = flat[p].i;
    pm.j = flat[p].j;
    pm.label = flat[p].port->label;
    pm.berths = flat[p].port->berth_count();
    pm.berth_busy.assign(pm.berths, 0.0);
    for (std::uint32_t r = 0; r < reps; ++r) {
      const PortSample& s = results[r]->ports[p];
      wait[r] = s.wait;
      queue[r] = s.queue_length;
      pop[r] = s.population;
      util[r] = s.utilization;
      rate[r] = s.arrival_rate;
      total_wait[r] += s.wait;
      total_queue[r] += s.queue_length;
      total_pop[r] += s.population;
      pm.served += s.arrivals;
      for (std::size_t k = 0; k < pm.berths; ++k) {
        pm.berth_busy[k] += s.berth_busy[k] / static_cast<double>(reps);
      }
    }
    pm.wait = summarize(wait);
    pm.queue_length = summarize(queue);
    pm.population = summarize(pop);
    pm.utilization = summarize(util);
    pm.arrival_rate = summarize(rate);
    out.served += pm.served;
    out.ports.push_back(std::move(pm));
  }
  out.total_wait = summarize(total_wait);
  out.total_queue_length = summarize(total_queue);
  out.total_population = summarize(total_pop);
  return out;
}

}  // namespace seaport::sim
