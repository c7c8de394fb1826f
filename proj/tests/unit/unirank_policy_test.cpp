#include <gtest/gtest.h>

#include <sstream>

#include "worked_iteration.hpp"
#include "unirank/unirank_policy.hpp"

namespace unirank {
namespace {

using testing::worked_iteration_stats;
using testing::kWorkedLeaderCount;
using testing::kWorkedSlots;

TEST(ElectLeader, WorkedIteration) {
  const auto leader = elect_leader(worked_iteration_stats(), kWorkedSlots);
  EXPECT_EQ(leader.to_string(), "({1,2}|{3}|{4,5}|{6,7})");
}

TEST(SelectPartition, WorkedIterationSecondNeighborWins) {
  const auto stats = worked_iteration_stats();
  const auto leader = elect_leader(stats, kWorkedSlots);
  const auto choice = select_partition(leader, stats, kWorkedLeaderCount);
  EXPECT_EQ(choice.chosen.to_string(), "({1,2}|{3,4,5}|{6,7})");
  EXPECT_EQ(choice.chosen_rank, 2u);
  ASSERT_EQ(choice.scores.size(), 5u);
  EXPECT_EQ(choice.scores[0].index, 0.0);
  for (std::size_t n : {1u, 3u, 4u}) EXPECT_LT(choice.scores[n].index, 0.0);
  EXPECT_GT(choice.scores[2].index, 0.0);
}

// The worked example states its inequality on the pairs (3,1), (3,2); under the
// neighborhood definition they belong to the merge of {1,2} and {3}.
TEST(SelectPartition, StatedPairsSelectFirstNeighbor) {
  const auto stats = worked_iteration_stats({0, 2});
  const auto leader = elect_leader(stats, kWorkedSlots);
  ASSERT_EQ(leader.to_string(), "({1,2}|{3}|{4,5}|{6,7})");
  EXPECT_EQ(select_partition(leader, stats, kWorkedLeaderCount).chosen.to_string(), "({1,2,3}|{4,5}|{6,7})");
}

TEST(ElectLeader, EmptyStatisticsGiveOneBlock) {
  PairwiseStats s(4);
  EXPECT_EQ(elect_leader(s, 2).to_string(), "({1,2,3,4}|{})");
}

TEST(ElectLeader, TotalOrderGivesOptimalShape) {
  PairwiseStats s(5);
  for (Item i = 0; i < 5; ++i) {
    for (Item j = i + 1; j < 5; ++j) s.assign_pair(i, j, 1, 1, 1);
  }
  EXPECT_EQ(elect_leader(s, 3).to_string(), "({1}|{2}|{3}|{4,5})");
  EXPECT_EQ(elect_leader(s, 5).to_string(), "({1}|{2}|{3}|{4}|{5}|{})");
}

TEST(ElectLeader, CycleStaysTogether) {
  PairwiseStats s(4);
  s.assign_pair(0, 1, 1, 1, 1);
  s.assign_pair(1, 2, 1, 1, 1);
  s.assign_pair(2, 0, 1, 1, 1);
  for (Item i = 0; i < 3; ++i) s.assign_pair(i, 3, 1, 1, 1);
  EXPECT_EQ(elect_leader(s, 4).to_string(), "({1,2,3}|{4}|{})");
}

TEST(SelectPartition, TieKeepsLeader) {
  PairwiseStats s(3);
  const auto leader = OrderedPartition::parse("({1,2,3}|{})", 3);
  const auto choice = select_partition(leader, s, 5);
  EXPECT_EQ(choice.chosen, leader);
  EXPECT_EQ(choice.chosen_rank, 0u);
}

TEST(UniRankPolicy, ProtocolAlternation) {
  UniRankPolicy p(4, 2);
  Rng rng(1);
  EXPECT_THROW(p.feedback(ClickVector{{0, 0, 0, 0}}), ProtocolError);
  p.step(rng);
  EXPECT_THROW(p.step(rng), ProtocolError);
  p.feedback(ClickVector{{0, 0, 0, 0}});
  EXPECT_NO_THROW(p.step(rng));
}

TEST(UniRankPolicy, FirstStepIsUniformOverAllItems) {
  UniRankPolicy p(5, 3);
  Rng rng(2);
  const auto rec = p.step(rng);
  EXPECT_EQ(rec.size(), 3u);
  EXPECT_EQ(p.last_leader()->to_string(), "({1,2,3,4,5}|{})");
  EXPECT_EQ(p.stats().leader_count(*p.last_leader()), 1u);
}

TEST(UniRankPolicy, ZeroClicksOnlyMoveColocation) {
  UniRankPolicy p(4, 2);
  Rng rng(3);
  p.step(rng);
  p.feedback(ClickVector{{0, 0, 0, 0}});
  EXPECT_EQ(p.stats().coloc_count(0, 1), 1u);
  EXPECT_EQ(p.stats().diff_count(0, 1), 0u);
}

TEST(UniRankPolicy, SameSeedSameRecommendations) {
  auto play = [](std::uint64_t seed) {
    UniRankPolicy p(6, 3);
    Rng rng(seed);
    std::vector<std::string> out;
    for (int t = 0; t < 200; ++t) {
      const auto rec = p.step(rng);
      std::vector<std::uint8_t> c(6, 0);
      c[rec[0]] = (t % 3 == 0);
      p.feedback(ClickVector{c});
      out.push_back(rec.to_string());
    }
    return out;
  };
  EXPECT_EQ(play(9), play(9));
  EXPECT_NE(play(9), play(10));
}

TEST(UniRankPolicy, TraceLines) {
  UniRankPolicy p(3, 2);
  std::ostringstream sink;
  p.set_trace(&sink);
  Rng rng(4);
  const auto rec = p.step(rng);
  std::vector<std::uint8_t> c(3, 0);
  c[rec[0]] = 1;
  p.feedback(ClickVector{c});
  const auto line = nlohmann::json::parse(sink.str());
  EXPECT_EQ(line["iteration"], 1);
  EXPECT_EQ(line["leader"], "({1,2,3}|{})");
  EXPECT_EQ(line["clicks"].size(), 1u);
  EXPECT_EQ(line["clicks"][0], rec[0] + 1);
}

TEST(UniRankPolicy, RejectsBadSizes) {
  EXPECT_THROW(UniRankPolicy(3, 4), std::invalid_argument);
  EXPECT_THROW(UniRankPolicy(3, 0), std::invalid_argument);
}

}  // namespace
}  // namespace unirank
