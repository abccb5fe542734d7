#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seaport/analytic.hpp"
#include "seaport/model.hpp"
#include "seaport/simulator.hpp"

namespace seaport::io {

struct MetricComparison {
  double analytic = 0.0;
  double simulated = 0.0;
  std::optional<double> half_width;
  double relative_error = 0.0;
  bool within_tolerance = false;
};

struct ComparisonRow {
  std::size_t i = 0;
  std::size_t j = 0;
  std::string label;
  std::size_t berths = 0;
  bool homogeneous = true;
  MetricComparison wait;
  MetricComparison queue_length;
  MetricComparison population;
  MetricComparison utilization;
  bool analytic_wait_in_ci = false;
  bool within_tolerance = false;
};

struct ComparisonTotals {
  MetricComparison wait;
  MetricComparison queue_length;
  MetricComparison population;
  bool within_tolerance = false;
};

struct ComparisonReport {
  double tolerance = 0.05;
  RoutingMode routing = RoutingMode::Eq3;
  double arrival_rate = 0.0;
  int erlang_degree = 1;
  sim::SimSettings settings;
  std::vector<ComparisonRow> ports;  // flatten order
  ComparisonTotals totals;
  std::vector<std::string> notes;
  bool within_tolerance = false;
};

/// |analytic - simulated| / max(|simulated|, 1e-12).
double relative_error(double analytic, double simulated) noexcept;

/// Pairs analytic and simulated metrics port by port. Both inputs must come
/// from the same topology in flatten order.
ComparisonReport compare(const SystemTopology& topology,
                         const analytic::SystemMetrics& analytic,
                         const sim::SimMetrics& simulated, double tolerance);

}  // namespace seaport::io
