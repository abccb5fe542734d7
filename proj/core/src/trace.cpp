#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "seaport/error.hpp"
#include "seaport/simulator.hpp"

namespace seaport::sim {

LittleAudit audit_littles_law(std::span<const EventRecord> trace,
                              std::size_t i, std::size_t j) {
  constexpr double kEpsilon = 1e-12;

  struct Visit {
    double arrival = 0.0;
    bool started = false;
    bool departed = false;
  };
  std::unordered_map<std::uint64_t, Visit> visits;

  LittleAudit audit;
  double last = 0.0;
  double area = 0.0;
  double wait_sum = 0.0;
  std::uint64_t waiting = 0;
  for (const auto& ev : trace) {
    if (ev.i != i || ev.j != j) continue;
    area += static_cast<double>(waiting) * (ev.time - last);
    last = ev.time;
    switch (ev.kind) {
      case EventKind::Arrival:
        visits[ev.ship] = {ev.time, false, false};
        ++waiting;
        ++audit.ships;
        break;
      case EventKind::ServiceStart: {
        auto& v = visits.at(ev.ship);
        v.started = true;
        wait_sum += ev.time - v.arrival;
        --waiting;
        break;
      }
      case EventKind::Departure:
        visits.at(ev.ship).departed = true;
        break;
    }
  }
  for (const auto& [id, v] : visits) {
    if (!v.departed) {
      throw Error(ErrorCode::NonDrainedTrace,
                  "ship " + std::to_string(id) + " never departed port (" +
                      std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  if (audit.ships == 0 || last <= 0.0) return audit;

  audit.span = last;
  audit.queue_length = area / last;
  audit.arrival_rate = static_cast<double>(audit.ships) / last;
  audit.wait = wait_sum / static_cast<double>(audit.ships);
  audit.residual = std::abs(audit.queue_length -
                            audit.arrival_rate * audit.wait) /
                   std::max(audit.queue_length, kEpsilon);
  return audit;
}

std::string format_trace(std::span<const EventRecord> trace) {
  std::string out;
  out.reserve(trace.size() * 48);
  char buf[64];
  for (const auto& ev : trace) {
    out += to_string(ev.kind);
    std::snprintf(buf, sizeof buf, ",%.17g,", ev.time);
    out += buf;
    out += std::to_string(ev.ship);
    out += ',';
    out += std::to_string(ev.i);
    out += ',';
    out += std::to_string(ev.j);
    out += ',';
    if (ev.berth) out += std::to_string(*ev.berth);
    out += '\n';
  }
  return out;
}

}  // namespace seaport::sim
