#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace lohe;

namespace {

std::set<std::pair<int, int>> edge_set(const CouplingGraph& g) {
  std::set<std::pair<int, int>> out;
  for (const auto& e : g.edges()) out.insert({e.i, e.j});
  return out;
}

std::string error_of(int n, std::vector<WeightedPair> pairs) {
  try {
    from_edge_list(n, pairs);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(PathGraph, Examples) {
  EXPECT_EQ(edge_set(path_graph(3, 1.0)), (std::set<std::pair<int, int>>{{0, 1}, {1, 2}}));
  EXPECT_EQ(path_graph(2, 1.0).edges().size(), 1u);
  const auto g = path_graph(5, 2.0);
  EXPECT_EQ(g.edges().size(), 4u);
  for (const auto& e : g.edges()) EXPECT_EQ(e.gain, 2.0);
  EXPECT_THROW(path_graph(1, 1.0), std::invalid_argument);
}

TEST(CycleGraph, Examples) {
  EXPECT_EQ(cycle_graph(3, 1.0).edges().size(), 3u);
  EXPECT_EQ(cycle_graph(4, 1.0).edges().size(), 4u);
  const auto g = cycle_graph(6, 0.5);
  EXPECT_EQ(g.edges().size(), 6u);
  for (const auto& e : g.edges()) EXPECT_EQ(e.gain, 0.5);
  EXPECT_TRUE(g.has_edge(0, 5));
  EXPECT_THROW(cycle_graph(2, 1.0), std::invalid_argument);
}

TEST(CompleteGraph, Examples) {
  EXPECT_EQ(complete_graph(3, 1.0).edges().size(), 3u);
  EXPECT_EQ(complete_graph(5, 1.0).edges().size(), 10u);
  EXPECT_EQ(complete_graph(2, 1.0).edges().size(), 1u);
}

TEST(FromEdgeList, Examples) {
  EXPECT_NO_THROW(from_edge_list(2, {{1, 2, 1.0}}));
  EXPECT_NE(error_of(3, {{1, 2, 1.0}}).find("graph not connected"), std::string::npos);
  EXPECT_FALSE(error_of(3, {{1, 2, 1.0}, {2, 3, -1.0}}).empty());
  EXPECT_FALSE(error_of(3, {{1, 2, 1.0}, {2, 3, 0.0}}).empty());
  EXPECT_FALSE(error_of(2, {{1, 1, 1.0}, {1, 2, 1.0}}).empty());
  EXPECT_FALSE(error_of(2, {{1, 2, 1.0}, {2, 1, 1.0}}).empty());
  EXPECT_FALSE(error_of(2, {{1, 3, 1.0}}).empty());
}

TEST(CouplingGraph, NeighborsAreSymmetric) {
  lohe::testing::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = lohe::testing::random_graph(rng, 2 + trial % 9);
    std::size_t incidences = 0;
    for (int i = 0; i < g.node_count(); ++i) {
      for (const auto& nb : g.neighbors(i)) {
        ++incidences;
        bool back = false;
        for (const auto& other : g.neighbors(nb.index)) back = back || (other.index == i && other.gain == nb.gain);
        EXPECT_TRUE(back);
        EXPECT_TRUE(g.has_edge(i, nb.index));
      }
    }
    EXPECT_EQ(incidences, 2 * g.edges().size());
  }
}

TEST(MinGain, Examples) {
  EXPECT_EQ(min_gain(path_graph(4, 1.0)), 1.0);
  EXPECT_EQ(min_gain(from_edge_list(4, {{1, 2, 1.0}, {2, 3, 0.2}, {3, 4, 3.0}})), 0.2);
  EXPECT_EQ(min_gain(from_edge_list(2, {{1, 2, 7.0}})), 7.0);
  EXPECT_EQ(min_gain(path_graph(4, 2.0).scaled(0.25)), 0.5);
}
