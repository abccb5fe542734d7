#include "seaport/analytic.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "seaport/error.hpp"

namespace seaport::analytic {
namespace {

using testing::erlang_c_delay;
using testing::single_port;

PortSpec port_of(std::vector<double> rates) {
  PortSpec p;
  for (double r : rates) p.berths.push_back({r});
  return p;
}

SubsystemSpec subsystem_of(std::vector<std::vector<double>> ports) {
  SubsystemSpec s;
  for (auto& rates : ports) s.ports.push_back(port_of(rates));
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(SplitProbabilities, Examples) {
  auto p = split_probabilities(validate_topology(
      {subsystem_of({{1, 1}}), subsystem_of({{1, 1, 1}})}));
  ASSERT_EQ(p.size(), 2u);
  EXPECT_DOUBLE_EQ(p[0], 0.4);
  EXPECT_DOUBLE_EQ(p[1], 0.6);

  p = split_probabilities(validate_topology(single_port(3)));
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], 1.0);

  const auto eq = subsystem_of({{1}, {2, 2}});
  p = split_probabilities(validate_topology({eq, eq, eq}));
  for (double x : p) EXPECT_DOUBLE_EQ(x, 1.0 / 3.0);
}

TEST(SplitProbabilities, NormalisedOverRandomTopologies) {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = split_probabilities(validate_topology(testing::random_topology(gen)));
    double sum = 0.0;
    for (double x : p) sum += x;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(SystemUtilization, Examples) {
  const auto four = validate_topology({subsystem_of({{1, 1}, {2}})});
  EXPECT_DOUBLE_EQ(system_utilization(four, {2.0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(system_utilization(four, {4.0, 1}), 1.0);
  const auto mixed = validate_topology({subsystem_of({{0.5, 0.7}, {0.8}})});
  EXPECT_NEAR(system_utilization(mixed, {0.9, 1}), 0.45, 1e-15);
}

TEST(PortArrivalRate, Examples) {
  const auto topo = validate_topology({subsystem_of({{1, 1}, {1, 1, 1}})});
  EXPECT_DOUBLE_EQ(port_arrival_rate(topo, {10.0, 1}, 1, 1), 4.0);
  EXPECT_DOUBLE_EQ(port_arrival_rate(topo, {10.0, 1}, 1, 2), 6.0);

  const auto single = validate_topology(single_port(4));
  EXPECT_EQ(port_arrival_rate(single, {3.3, 1}, 1, 1), 3.3);

  const auto three = validate_topology({subsystem_of({{1}, {1}, {1}})});
  for (std::size_t j = 1; j <= 3; ++j) {
    EXPECT_DOUBLE_EQ(port_arrival_rate(three, {6.0, 1}, 1, j), 2.0);
  }
}

TEST(PortArrivalRate, Eq3NormalisesWithinEachSubsystem) {
  const auto topo = validate_topology(
      {subsystem_of({{1, 1}, {1}}), subsystem_of({{1, 1, 1, 1}})});
  const TrafficSpec t{3.0, 1};
  EXPECT_DOUBLE_EQ(port_arrival_rate(topo, t, 1, 1) + port_arrival_rate(topo, t, 1, 2), 3.0);
  EXPECT_DOUBLE_EQ(port_arrival_rate(topo, t, 2, 1), 3.0);
}

TEST(PortArrivalRate, SplitRoutingWeightsBySubsystemShare) {
  const auto topo = validate_topology(
      {subsystem_of({{1, 1}, {1}}), subsystem_of({{1, 1, 1, 1}})});
  const TrafficSpec t{7.0, 1};
  const auto p = split_probabilities(topo);
  EXPECT_NEAR(port_arrival_rate(topo, t, 1, 1, RoutingMode::Split),
              p[0] * 7.0 * 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(port_arrival_rate(topo, t, 2, 1, RoutingMode::Split), p[1] * 7.0,
              1e-15);
  double sum = 0.0;
  for (const auto& fp : flatten(topo)) {
    sum += port_arrival_rate(topo, t, fp.i, fp.j, RoutingMode::Split);
  }
  EXPECT_NEAR(sum, 7.0, 1e-14);
}

TEST(PortArrivalRate, IndexOutOfRange) {
  const auto topo = validate_topology(single_port(1));
  try {
    port_arrival_rate(topo, {1.0, 1}, 1, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
  }
  EXPECT_THROW(port_utilization(topo, {1.0, 1}, 0, 1), Error);
}

TEST(PortUtilization, Examples) {
  EXPECT_DOUBLE_EQ(port_utilization(validate_topology(single_port(2)), {1.0, 1}, 1, 1), 0.5);
  EXPECT_DOUBLE_EQ(port_utilization(validate_topology(single_port(1)), {0.5, 1}, 1, 1), 0.5);
  EXPECT_DOUBLE_EQ(port_utilization(validate_topology(single_port(2)), {1.8, 1}, 1, 1), 0.9);
}

TEST(VariationCoefficient, Examples) {
  EXPECT_EQ(variation_coefficient(1), 1.0);
  EXPECT_EQ(variation_coefficient(4), 0.5);
  EXPECT_DOUBLE_EQ(variation_coefficient(2), std::sqrt(0.5));
  try {
    variation_coefficient(0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidDegree);
  }
}

TEST(BaseWait, SingleBerthMatchesMM1) {
  const double expected = testing::mm1_delay(0.5, 1.0);
  ASSERT_EQ(expected, 1.0);
  EXPECT_NEAR(base_wait(port_of({1.0}), 0.5), expected, 1e-15);
}

TEST(BaseWait, TwoBerthsMatchErlangC) {
  const double expected = erlang_c_delay(2, 1.0, 1.0);
  EXPECT_NEAR(expected, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(base_wait(port_of({1.0, 1.0}), 0.5), expected, 1e-15);
}

TEST(BaseWait, EmptySystemLimit) {
  EXPECT_EQ(base_wait(3, 3.0, 0.0), 0.0);
  double previous = base_wait(3, 3.0, 0.1);
  for (double rho : {1e-2, 1e-4, 1e-8}) {
    const double w = base_wait(3, 3.0, rho);
    EXPECT_LT(w, previous);
    previous = w;
  }
  EXPECT_LT(previous, 1e-20);
}

TEST(BaseWait, UnstableAndInvalidInputs) {
  for (double rho : {1.0, 1.2}) {
    try {
      base_wait(2, 2.0, rho);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::UnstablePort);
    }
  }
  EXPECT_THROW(base_wait(0, 1.0, 0.5), Error);
  EXPECT_THROW(base_wait(1, 0.0, 0.5), Error);
  EXPECT_THROW(base_wait(1, 1.0, -0.1), Error);
}

TEST(BaseWait, NumericOverflowReported) {
  try {
    base_wait(1, 1e-310, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NumericOverflow);
  }
}

TEST(BaseWait, LargeBerthCountsStayFinite) {
  // Naive factorials overflow past S = 170.
  for (std::size_t s : {171u, 500u, 2'000u, 10'000u}) {
    const double total = static_cast<double>(s);
    for (double rho : {0.5, 0.9, 0.999}) {
      const double w = base_wait(s, total, rho);
      EXPECT_TRUE(std::isfinite(w));
      EXPECT_GE(w, 0.0);
    }
  }
  // Agreement with the Erlang-B recurrence well beyond the overflow point.
  EXPECT_LT(rel(base_wait(400, 400.0, 0.97), erlang_c_delay(400, 1.0, 388.0)), 1e-9);
}

TEST(BaseWait, ErlangCCollapse) {
  for (std::size_t s = 1; s <= 50; ++s) {
    for (int step = 1; step <= 9; ++step) {
      const double rho = step / 10.0;
      const double lambda = rho * static_cast<double>(s);
      const double analytic = port_wait(base_wait(s, static_cast<double>(s), rho),
                                        variation_coefficient(1));
      EXPECT_LT(rel(analytic, erlang_c_delay(s, 1.0, lambda)), 1e-10)
          << "S=" << s << " rho=" << rho;
    }
  }
}

TEST(BaseWait, StrictlyIncreasingInUtilization) {
  for (std::size_t s : {1u, 2u, 5u, 20u}) {
    double previous = 0.0;
    for (int k = 1; k < 1000; ++k) {
      const double w = base_wait(s, 2.5 * static_cast<double>(s), k / 1000.0);
      EXPECT_GT(w, previous) << "S=" << s << " rho=" << k / 1000.0;
      previous = w;
    }
  }
}

TEST(BaseWait, DivergesNearSaturation) {
  EXPECT_GT(base_wait(1, 1.0, 1.0 - 1e-6), 1e4 * base_wait(1, 1.0, 0.5));
}

TEST(PortWait, Examples) {
  EXPECT_EQ(port_wait(0.37, variation_coefficient(1)), 0.37);
  EXPECT_NEAR(port_wait(1.0 / 3.0, 0.5), 0.625 / 3.0, 1e-16);
  EXPECT_NEAR(port_wait(1.0 / 3.0, 0.5), 0.2083333, 1e-7);
  EXPECT_EQ(port_wait(0.0, 0.5), 0.0);
}

TEST(PortWait, CorrectionFactorBounds) {
  for (int n = 1; n <= 100; ++n) {
    const double factor = port_wait(1.0, variation_coefficient(n));
    EXPECT_GT(factor, 0.5);
    EXPECT_LE(factor, 1.0);
    EXPECT_EQ(factor == 1.0, n == 1);
    const double base = 0.8;
    EXPECT_LE(port_wait(base, variation_coefficient(n)), base);
  }
}

TEST(PortQueueLength, Examples) {
  EXPECT_EQ(port_queue_length(0.5, 1.0), 0.5);
  EXPECT_EQ(port_queue_length(0.5, 0.0), 0.0);
  // r = 1 into the M/M/2 example.
  EXPECT_NEAR(port_queue_length(1.0, erlang_c_delay(2, 1.0, 1.0)), 1.0 / 3.0, 1e-15);
}

TEST(PortPopulation, Examples) {
  EXPECT_NEAR(port_population(0.5, 1, 0.5), testing::mm1_population(0.5), 1e-15);
  EXPECT_EQ(port_population(0.0, 3, 0.25), 0.75);
  // M/M/2 at a = 1: Lq + a.
  const double lq = 1.0 * erlang_c_delay(2, 1.0, 1.0);
  EXPECT_NEAR(port_population(lq, 2, 0.5), lq + 1.0, 1e-15);
  EXPECT_NEAR(port_population(1.0 / 3.0, 2, 0.5), 4.0 / 3.0, 1e-15);
}

TEST(CheckStability, Examples) {
  const auto topo = validate_topology(single_port(2));
  auto report = check_stability(topo, {1.0, 1});
  EXPECT_TRUE(report.stable());
  EXPECT_DOUBLE_EQ(report.utilization, 0.5);
  EXPECT_DOUBLE_EQ(report.ports[0].utilization, 0.5);

  report = check_stability(topo, {2.0, 1});
  EXPECT_FALSE(report.system_stable);
  EXPECT_FALSE(report.stable());

  // Port (1,2) has rho_ij = 1.2 even though the system is at 0.6.
  const auto mixed = validate_topology(
      {subsystem_of({{10.0}, {0.5}}), subsystem_of({{10.0}})});
  report = check_stability(mixed, {1.2, 1});
  EXPECT_TRUE(report.system_stable);
  EXPECT_FALSE(report.stable());
  EXPECT_TRUE(report.ports[0].stable);
  EXPECT_FALSE(report.ports[1].stable);
  EXPECT_NEAR(report.ports[1].utilization, 1.2, 1e-15);
  EXPECT_TRUE(report.ports[2].stable);
}

TEST(SystemTotals, RefusesUnstableInputs) {
  const auto topo = validate_topology(single_port(2));
  try {
    system_totals(topo, {2.0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnstableSystem);
  }
  const auto mixed = validate_topology(
      {subsystem_of({{10.0}, {0.5}}), subsystem_of({{10.0}})});
  try {
    system_totals(mixed, {1.2, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnstablePort);
    EXPECT_EQ(e.path(), "subsystems[0].ports[1]");
  }
}

TEST(SystemTotals, SinglePortEqualsPortMetrics) {
  const auto m = system_totals(validate_topology(single_port(1)), {0.5, 1});
  ASSERT_EQ(m.ports.size(), 1u);
  EXPECT_EQ(m.total_wait, m.ports[0].wait);
  EXPECT_EQ(m.total_queue_length, m.ports[0].queue_length);
  EXPECT_EQ(m.total_population, m.ports[0].population);
  EXPECT_EQ(m.arrival_weighted_wait, m.ports[0].wait);
  EXPECT_NEAR(m.ports[0].wait, 1.0, 1e-15);
  EXPECT_NEAR(m.ports[0].queue_length, 0.5, 1e-15);
  EXPECT_NEAR(m.ports[0].population, 1.0, 1e-15);
}

TEST(SystemTotals, TwoIdenticalPortsSumWaits) {
  const auto one = system_totals(validate_topology(single_port(2)), {1.0, 4});
  const auto sub = subsystem_of({{1.0, 1.0}});
  const auto two = system_totals(validate_topology({sub, sub}), {1.0, 4});
  EXPECT_EQ(two.total_wait, 2.0 * one.ports[0].wait);
  EXPECT_EQ(two.arrival_weighted_wait, one.ports[0].wait);
}

TEST(SystemTotals, PlainSumsAndLittlesLaw) {
  std::mt19937_64 gen(5);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto topo = validate_topology(testing::random_topology(gen));
    // Load every subsystem so its busiest port sits at rho_ij = 0.7 or less.
    double lambda = std::numeric_limits<double>::infinity();
    for (const auto& fp : flatten(topo)) {
      const double share = static_cast<double>(fp.port->berth_count()) /
                           static_cast<double>(topo.subsystem_berths(fp.i));
      lambda = std::min(lambda, 0.7 * fp.port->total_service_rate() / share);
    }
    const TrafficSpec traffic{lambda, 1 + trial % 6};
    if (system_utilization(topo, traffic) >= 1.0) continue;
    const auto m = system_totals(topo, traffic);
    double w = 0.0, n = 0.0, q = 0.0;
    for (const auto& p : m.ports) {
      EXPECT_EQ(p.queue_length - p.arrival_rate * p.wait, 0.0);
      EXPECT_EQ(p.population, p.queue_length + static_cast<double>(p.berths) * p.utilization);
      EXPECT_GE(p.population, p.queue_length);
      w += p.wait;
      n += p.queue_length;
      q += p.queue_length + static_cast<double>(p.berths) * p.utilization;
    }
    EXPECT_EQ(m.total_wait, w);
    EXPECT_EQ(m.total_queue_length, n);
    EXPECT_EQ(m.total_population, q);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(SystemTotals, ScaleCovariance) {
  std::mt19937_64 gen(37);
  const double kappa = 3.7;
  for (int trial = 0; trial < 200; ++trial) {
    auto candidate = testing::random_topology(gen, 3, 3, 6);
    const auto base_topo = validate_topology(candidate);
    double lambda = std::numeric_limits<double>::infinity();
    for (const auto& fp : flatten(base_topo)) {
      const double share = static_cast<double>(fp.port->berth_count()) /
                           static_cast<double>(base_topo.subsystem_berths(fp.i));
      lambda = std::min(lambda, 0.8 * fp.port->total_service_rate() / share);
    }
    if (system_utilization(base_topo, {lambda, 1}) >= 1.0) continue;
    for (auto& s : candidate) {
      for (auto& p : s.ports) {
        for (auto& b : p.berths) b.service_rate *= kappa;
      }
    }
    const auto scaled_topo = validate_topology(candidate);
    const int n = 1 + trial % 5;
    const auto a = system_totals(base_topo, {lambda, n});
    const auto b = system_totals(scaled_topo, {lambda * kappa, n});
    EXPECT_NEAR(a.utilization, b.utilization, 1e-12);
    for (std::size_t k = 0; k < a.split_probabilities.size(); ++k) {
      EXPECT_NEAR(a.split_probabilities[k], b.split_probabilities[k], 1e-12);
    }
    for (std::size_t k = 0; k < a.ports.size(); ++k) {
      const auto& pa = a.ports[k];
      const auto& pb = b.ports[k];
      EXPECT_NEAR(pa.utilization, pb.utilization, 1e-12);
      EXPECT_NEAR(pa.queue_length, pb.queue_length, 1e-12 * std::max(1.0, pa.queue_length));
      EXPECT_NEAR(pa.population, pb.population, 1e-12 * std::max(1.0, pa.population));
      if (pa.wait > 0.0) {
        EXPECT_LT(rel(pb.wait, pa.wait / kappa), 1e-12);
        EXPECT_LT(rel(pb.base_wait, pa.base_wait / kappa), 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace seaport::analytic
