#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "seaport/rng.hpp"
#include "seaport/simulator.hpp"

namespace seaport::sim {
namespace {

TEST(Rng, StreamsAreDistinctAndStable) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t rep = 0; rep < 64; ++rep) {
    for (auto s : {Stream::Arrivals, Stream::Routing, Stream::Service,
                   Stream::BerthChoice}) {
      EXPECT_TRUE(seeds.insert(derive_stream_seed(42, rep, s)).second);
    }
  }
  EXPECT_EQ(derive_stream_seed(42, 3, Stream::Service),
            derive_stream_seed(42, 3, Stream::Service));
  EXPECT_NE(derive_stream_seed(42, 3, Stream::Service),
            derive_stream_seed(43, 3, Stream::Service));
}

TEST(Rng, UniformOpenNeverHitsEndpoints) {
  Xoshiro256 rng(1);
  for (int k = 0; k < 1'000'000; ++k) {
    const double u = rng.uniform_open();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, BelowIsUniform) {
  Xoshiro256 rng(2);
  std::vector<int> counts(7, 0);
  const int n = 700'000;
  for (int k = 0; k < n; ++k) ++counts[rng.below(7)];
  const double expected = n / 7.0;
  const double sigma = std::sqrt(n * (1.0 / 7.0) * (6.0 / 7.0));
  for (int c : counts) EXPECT_LT(std::abs(c - expected), 4.0 * sigma);
}

TEST(SampleInterarrival, MeanMatchesRate) {
  Xoshiro256 rng(11);
  double sum = 0.0;
  const int n = 1'000'000;
  for (int k = 0; k < n; ++k) {
    const double x = sample_interarrival(2.0, rng);
    ASSERT_GT(x, 0.0);
    sum += x;
  }
  EXPECT_NEAR(sum / n / 0.5, 1.0, 0.005);
}

TEST(SampleInterarrival, DeterministicUnderSeed) {
  Xoshiro256 a(77), b(77);
  for (int k = 0; k < 1000; ++k) {
    EXPECT_EQ(sample_interarrival(1.3, a), sample_interarrival(1.3, b));
  }
}

TEST(SampleErlangService, DegreeOneIsExponential) {
  Xoshiro256 rng(5);
  std::vector<double> xs(100'000);
  for (auto& x : xs) x = sample_erlang_service(0.5, 1, rng);
  // 1% critical value of the one-sample KS statistic, large-n form.
  const double critical = 1.628 / std::sqrt(static_cast<double>(xs.size()));
  EXPECT_LT(testing::ks_exponential(xs, 2.0), critical);
}

TEST(SampleErlangService, VarianceIsMeanSquaredOverDegree) {
  Xoshiro256 rng(6);
  const int n = 1'000'000;
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = sample_erlang_service(1.0, 4, rng);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = (sq - n * mean * mean) / (n - 1);
  EXPECT_NEAR(mean, 1.0, 0.005);
  EXPECT_NEAR(var / 0.25, 1.0, 0.02);
}

TEST(SampleErlangService, HugeDegreeIsNearlyDeterministic) {
  Xoshiro256 rng(7);
  const int n = 4000;
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = sample_erlang_service(2.0, 1'000'000, rng);
    ASSERT_GT(x, 0.0);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double cv = std::sqrt((sq - n * mean * mean) / (n - 1)) / mean;
  EXPECT_NEAR(mean, 2.0, 1e-3);
  EXPECT_NEAR(cv, 0.001, 0.0001);
}

TEST(SampleErlangService, ChunkedAndGammaPathsAgreeInMoments) {
  for (int degree : {16, 17, 64, 65, 200}) {
    Xoshiro256 rng(100 + degree);
    const int n = 200'000;
    double sum = 0.0, sq = 0.0;
    for (int k = 0; k < n; ++k) {
      const double x = sample_erlang_service(3.0, degree, rng);
      sum += x;
      sq += x * x;
    }
    const double mean = sum / n;
    const double var = (sq - n * mean * mean) / (n - 1);
    EXPECT_NEAR(mean, 3.0, 0.01) << degree;
    EXPECT_NEAR(var / (9.0 / degree), 1.0, 0.03) << degree;
  }
}

PortSpec port_with_berths(std::size_t s) {
  PortSpec p;
  p.berths.assign(s, BerthSpec{1.0});
  return p;
}

TEST(RouteArrival, ProportionalToBerthsWithinSubsystem) {
  SubsystemSpec sub;
  sub.ports = {port_with_berths(2), port_with_berths(3)};
  const auto topo = validate_topology({sub});
  Xoshiro256 rng(9);
  const int n = 1'000'000;
  int first = 0;
  for (int k = 0; k < n; ++k) {
    const auto where = route_arrival(topo, rng);
    ASSERT_EQ(where.i, 1u);
    if (where.j == 1) ++first;
  }
  EXPECT_NEAR(static_cast<double>(first) / n, 0.4, 0.002);

  Xoshiro256 again(9);
  first = 0;
  for (int k = 0; k < n; ++k) {
    if (route_within_subsystem(topo, 1, again) == 1) ++first;
  }
  EXPECT_NEAR(static_cast<double>(first) / n, 0.4, 0.002);
}

TEST(RouteArrival, SinglePortAlwaysChosen) {
  const auto topo = validate_topology(testing::single_port(3));
  Xoshiro256 rng(10);
  for (int k = 0; k < 1000; ++k) {
    EXPECT_EQ(route_arrival(topo, rng), (PortIndex{1, 1}));
  }
}

TEST(RouteArrival, EqualSubsystemsSplitEvenly) {
  SubsystemSpec a;
  a.ports = {port_with_berths(1), port_with_berths(3)};
  SubsystemSpec b;
  b.ports = {port_with_berths(4)};
  const auto topo = validate_topology({a, b});
  Xoshiro256 rng(12);
  const int n = 1'000'000;
  int in_first = 0;
  for (int k = 0; k < n; ++k) {
    if (route_arrival(topo, rng).i == 1) ++in_first;
  }
  EXPECT_NEAR(static_cast<double>(in_first) / n, 0.5, 0.002);
}

TEST(Summarize, StudentTHalfWidth) {
  const std::vector<double> one{3.0};
  EXPECT_FALSE(summarize(one).half_width.has_value());
  EXPECT_EQ(summarize(one).mean, 3.0);

  // n = 4, sd = sqrt(5/3), t_{0.975,3} = 3.182446305284263.
  const std::vector<double> four{1.0, 2.0, 3.0, 4.0};
  const auto e = summarize(four);
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  ASSERT_TRUE(e.half_width.has_value());
  EXPECT_NEAR(*e.half_width, 3.182446305284263 * std::sqrt(5.0 / 3.0) / 2.0, 1e-12);
  EXPECT_TRUE(e.contains(2.5 + *e.half_width * 0.99));
  EXPECT_FALSE(e.contains(2.5 + *e.half_width * 1.01));
}

}  // namespace
}  // namespace seaport::sim
