#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ilbat/ilbat.hpp"
#include "support/scenarios.hpp"

namespace ilbat {
namespace {

constexpr double kTol = 1e-12;

Network bridge_with(double p4, double p5) {
  return Network::create(4, {{1, 2, 0.9}, {1, 3, 0.9}, {2, 3, 0.9}, {2, 4, p4}, {3, 4, p5}});
}

TEST(Oracle, BridgeMatchesClosedForm) {
  const double p = 0.9;
  const double closed = 2 * p * p + 2 * std::pow(p, 3) - 5 * std::pow(p, 4) + 2 * std::pow(p, 5);
  EXPECT_NEAR(oracle::brute_force_reliability(bridge_with(p, p)), 0.97848, kTol);
  EXPECT_NEAR(closed, 0.97848, kTol);
}

TEST(Oracle, SingleArc) {
  EXPECT_NEAR(oracle::brute_force_reliability(Network::create(2, {{1, 2, 0.7}})), 0.7, kTol);
}

TEST(Oracle, DeadSinkArcs) {
  EXPECT_EQ(oracle::brute_force_reliability(bridge_with(0.0, 0.0)), 0.0);
}

TEST(Oracle, BridgeFeasibleSet) {
  const auto feasible = oracle::brute_force_feasible_set(bridge_with(0.9, 0.9));
  EXPECT_EQ(feasible.size(), 16u);
  const std::set<std::uint64_t> infeasible_rows = {1,  2,  3,  4,  5,  6,  7,  8,
                                                   9,  11, 13, 17, 18, 21, 25, 29};
  std::uint64_t row = 0;
  for_each_bat_vector(5, false, [&](const StateVector& x) {
    ++row;
    EXPECT_EQ(feasible.contains(x), !infeasible_rows.contains(row)) << "row " << row;
  });
}

TEST(Oracle, EdgelessNetwork) {
  const Network net = Network::create(3, {});
  EXPECT_TRUE(oracle::brute_force_feasible_set(net).empty());
  const auto s = oracle::brute_force(net);
  EXPECT_EQ(s.vectors, 1u);
  EXPECT_EQ(s.feasible, 0u);
}

TEST(Oracle, TriangleNeedsAPath) {
  // Arcs (1,2), (2,3), (1,3): feasible iff x3 or both x1 and x2.
  const Network net = Network::create(3, {{1, 2, 0.5}, {2, 3, 0.5}, {1, 3, 0.5}});
  const auto feasible = oracle::brute_force_feasible_set(net);
  for (std::uint64_t k = 0; k < 8; ++k) {
    const auto x = StateVector::from_integer(k, 3);
    EXPECT_EQ(feasible.contains(x), x[2] || (x[0] && x[1])) << x.to_string();
  }
  EXPECT_NEAR(oracle::brute_force_reliability(net), 0.625, kTol);
}

TEST(Oracle, CapRefusesLargeNetworks) {
  std::vector<ArcSpec> arcs;
  for (NodeId v = 2; v <= 9; ++v) arcs.push_back({1, v, 0.5});
  const Network net = Network::create(9, arcs);
  EXPECT_THROW(oracle::brute_force(net, 7), CapExceeded);
  EXPECT_NO_THROW(oracle::brute_force(net, 8));
}

}  // namespace
}  // namespace ilbat
