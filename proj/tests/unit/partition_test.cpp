#include <gtest/gtest.h>

#include <map>
#include <set>

#include "oracles.hpp"
#include "unirank/partition.hpp"

namespace unirank {
namespace {

OrderedPartition parse(const char* text, std::size_t n) { return OrderedPartition::parse(text, n); }

TEST(OrderedPartition, ParseAndRender) {
  const auto p = parse("({2,1}|{3}|{5,4}|{6,7})", 7);
  EXPECT_EQ(p.to_string(), "({1,2}|{3}|{4,5}|{6,7})");
  EXPECT_EQ(p.size(), 4u);
  EXPECT_EQ(p.subset_of(4), 2u);
  EXPECT_EQ(parse("({1}|{})", 1).size(), 2u);
}

TEST(OrderedPartition, RejectsMalformed) {
  EXPECT_THROW(parse("({1,2}|{2,3})", 3), std::invalid_argument);
  EXPECT_THROW(parse("({1,2})", 3), std::invalid_argument);
  EXPECT_THROW(parse("({}|{1,2})", 2), std::invalid_argument);
  EXPECT_THROW(parse("({1,4})", 3), std::invalid_argument);
}

TEST(OrderedPartition, LeaderShape) {
  EXPECT_TRUE(parse("({1,2}|{3}|{4,5}|{6,7})", 7).has_leader_shape(4));
  EXPECT_TRUE(parse("({1,2}|{3}|{4,5}|{6,7})", 7).has_leader_shape(5));
  EXPECT_FALSE(parse("({1,2}|{3}|{4,5}|{6,7})", 7).has_leader_shape(3));
  EXPECT_TRUE(parse("({1}|{2}|{})", 2).has_leader_shape(2));
}

TEST(Neighborhood, WorkedIteration) {
  const auto nb = neighborhood(parse("({1,2}|{3}|{4,5}|{6,7})", 7));
  ASSERT_EQ(nb.size(), 4u);
  EXPECT_EQ(nb[0].partition.to_string(), "({1,2,3}|{4,5}|{6,7})");
  EXPECT_EQ(nb[1].partition.to_string(), "({1,2}|{3,4,5}|{6,7})");
  EXPECT_EQ(nb[2].partition.to_string(), "({1,2}|{3}|{4,5,6}|{7})");
  EXPECT_EQ(nb[3].partition.to_string(), "({1,2}|{3}|{4,5,7}|{6})");
  // Merge of {3} and {4,5}: indices of 4 and 5 beating 3.
  const std::vector<std::pair<Item, Item>> pairs{{2, 3}, {2, 4}};
  EXPECT_EQ(nb[1].index_pairs, pairs);
  const std::vector<std::pair<Item, Item>> add{{3, 5}, {4, 5}};
  EXPECT_EQ(nb[2].index_pairs, add);
}

TEST(Neighborhood, EmptyLastSubsetHasNoAddItems) {
  const auto nb = neighborhood(parse("({1}|{2}|{3}|{})", 3));
  ASSERT_EQ(nb.size(), 2u);
  for (const auto& n : nb) EXPECT_EQ(n.kind, NeighborDescriptor::Kind::kMerge);
}

TEST(CompatibleSample, RespectsSubsetsAndIsUniform) {
  const auto p = parse("({1,2}|{3,4,5}|{6,7})", 7);
  const auto support = compatible_recommendations(p, 4);
  EXPECT_EQ(support.size(), 2u * 6u);
  std::map<std::string, double> counts;
  for (const auto& r : support) counts[r.to_string()] = 0.0;
  Rng rng(7);
  const int draws = 60000;
  for (int n = 0; n < draws; ++n) {
    const auto r = compatible_sample(p, 4, rng);
    ASSERT_TRUE(counts.count(r.to_string())) << r.to_string();
    counts[r.to_string()] += 1.0;
  }
  std::vector<double> observed;
  for (const auto& [key, c] : counts) observed.push_back(c);
  const std::vector<double> expected(observed.size(), static_cast<double>(draws) / static_cast<double>(observed.size()));
  EXPECT_GT(testing::chi_square_p_value(observed, expected), 1e-4);
  EXPECT_TRUE(counts.count("(2,1,3,5)"));
}

TEST(CompatibleSample, TooFewItems) {
  Rng rng(1);
  EXPECT_THROW(compatible_sample(parse("({1}|{2})", 2), 3, rng), std::invalid_argument);
}

TEST(AllRecommendations, Counts) {
  EXPECT_EQ(all_recommendations(5, 3).size(), 60u);
  EXPECT_EQ(all_recommendations(4, 4).size(), 24u);
}

TEST(EnumerateOrderedPartitions, FubiniNumbers) {
  const std::vector<std::size_t> fubini{1, 3, 13, 75, 541};
  for (std::size_t n = 1; n <= 5; ++n) {
    std::set<std::string> seen;
    enumerate_ordered_partitions(n, [&](const OrderedPartition& p) { seen.insert(p.key()); });
    EXPECT_EQ(seen.size(), fubini[n - 1]) << n;
  }
  EXPECT_THROW(enumerate_ordered_partitions(kMaxEnumeratedItems + 1, [](const OrderedPartition&) {}),
               std::invalid_argument);
}

TEST(EnumerateOrderedPartitions, LeaderShapeForThreeItems) {
  std::set<std::string> seen;
  enumerate_ordered_partitions(
      3,
      [&](const OrderedPartition& p) {
        EXPECT_TRUE(p.has_leader_shape(2)) << p.key();
        seen.insert(p.key());
      },
      2);
  EXPECT_EQ(seen.size(), 13u);
  EXPECT_TRUE(seen.count("({1}|{2}|{3})"));
  EXPECT_TRUE(seen.count("({1,2,3}|{})"));
}

TEST(WeakOrder, Compatibility) {
  const auto order = WeakOrder::from_scores(std::vector<double>{0.5, 0.5, 0.3, 0.1});
  EXPECT_TRUE(order.equivalent(0, 1));
  EXPECT_TRUE(order.prefers(1, 2));
  EXPECT_TRUE(is_compatible(Recommendation({1, 0}, 4), order));
  EXPECT_TRUE(is_compatible(Recommendation({0, 1, 2}, 4), order));
  EXPECT_FALSE(is_compatible(Recommendation({0, 2}, 4), order));
  EXPECT_FALSE(is_compatible(Recommendation({2, 0}, 4), order));
}

}  // namespace
}  // namespace unirank
