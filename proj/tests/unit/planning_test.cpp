#include "seaport/planning.hpp"

#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "seaport/analytic.hpp"
#include "seaport/error.hpp"

namespace seaport::planning {
namespace {

using testing::erlang_c_delay;
using testing::single_port;

std::vector<BerthPlan> plan_mm1(double sla) {
  PlanOptions options;
  options.sla_wait = sla;
  return plan_berths(validate_topology(single_port(1)), {0.5, 1},
                     RoutingMode::Eq3, options);
}

TEST(PlanBerths, BoundaryIsInclusive) {
  const auto plans = plan_mm1(1.0);
  ASSERT_EQ(plans.size(), 1u);
  EXPECT_TRUE(plans[0].satisfied);
  EXPECT_EQ(plans[0].required_berths, 1u);
  EXPECT_DOUBLE_EQ(*plans[0].required_wait, 1.0);
}

TEST(PlanBerths, TighterTargetMatchesErlangCSweep) {
  // Oracle: first S with the M/M/S delay at lambda = 0.5, mu = 1 below 0.3.
  std::size_t oracle = 1;
  while (erlang_c_delay(oracle, 1.0, 0.5) > 0.3) ++oracle;
  ASSERT_EQ(oracle, 2u);

  const auto plans = plan_mm1(0.3);
  EXPECT_EQ(plans[0].required_berths, oracle);
  EXPECT_NEAR(*plans[0].required_wait, erlang_c_delay(2, 1.0, 0.5), 1e-15);
  EXPECT_NEAR(*plans[0].required_wait, 1.0 / 15.0, 1e-15);
  EXPECT_DOUBLE_EQ(*plans[0].current_wait, 1.0);
}

TEST(PlanBerths, AlreadySatisfied) {
  const auto plans = plan_mm1(1e6);
  EXPECT_EQ(plans[0].required_berths, plans[0].current_berths);
}

TEST(PlanBerths, UnstablePortGrowsUntilStableAndMeetsTarget) {
  PlanOptions options;
  options.sla_wait = 0.5;
  const auto plans = plan_berths(validate_topology(single_port(1)), {2.5, 1},
                                 RoutingMode::Eq3, options);
  EXPECT_FALSE(plans[0].current_wait.has_value());
  ASSERT_TRUE(plans[0].satisfied);
  EXPECT_GE(plans[0].required_berths, 3u);
  EXPECT_LE(*plans[0].required_wait, 0.5);
}

TEST(PlanBerths, UnreachableTarget) {
  PlanOptions options;
  options.sla_wait = 1e-300;
  options.max_berths = 5;
  const auto plans = plan_berths(validate_topology(single_port(1)), {0.9, 1},
                                 RoutingMode::Eq3, options);
  EXPECT_FALSE(plans[0].satisfied);
  EXPECT_EQ(plans[0].required_berths, 0u);
}

TEST(PlanBerths, AddedBerthsUseMeanRateByDefault) {
  PortSpec port;
  port.berths = {{0.5}, {1.5}};
  PlanOptions options;
  options.sla_wait = 0.01;
  const auto plan = size_port(port, 1, 1, 1.5, 1, options);
  EXPECT_DOUBLE_EQ(plan.added_berth_rate, 1.0);
  options.added_berth_rate = 3.0;
  EXPECT_DOUBLE_EQ(size_port(port, 1, 1, 1.5, 1, options).added_berth_rate, 3.0);
}

TEST(PlanBerths, RejectsBadOptions) {
  PortSpec port;
  port.berths = {{1.0}};
  PlanOptions options;
  EXPECT_THROW(size_port(port, 1, 1, 0.5, 1, options), Error);
  options.sla_wait = 1.0;
  options.added_berth_rate = -1.0;
  EXPECT_THROW(size_port(port, 1, 1, 0.5, 1, options), Error);
}

TEST(PlanBerths, MinimalityGuard) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> sla(0.01, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto topo = validate_topology(testing::random_topology(gen, 2, 3, 4));
    const TrafficSpec traffic{0.5 + trial % 7, 1 + trial % 4};
    PlanOptions options;
    options.sla_wait = sla(gen);
    for (const auto& plan : plan_berths(topo, traffic, RoutingMode::Eq3, options)) {
      ASSERT_TRUE(plan.satisfied);
      EXPECT_LE(*plan.required_wait, options.sla_wait);
      if (plan.required_berths > plan.current_berths) {
        const auto& port = topo.port(plan.i, plan.j);
        const auto before = wait_with_berths(port, plan.arrival_rate,
                                             traffic.erlang_degree,
                                             plan.required_berths - 1,
                                             plan.added_berth_rate);
        EXPECT_TRUE(!before || *before > options.sla_wait);
      }
    }
  }
}

}  // namespace
}  // namespace seaport::planning
