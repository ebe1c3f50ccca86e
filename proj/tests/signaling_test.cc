// Copyright 2026 The sigauction Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sigauction/signaling.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "sigauction/error.h"
#include "sigauction/model.h"
#include "sigauction/random.h"

namespace sigauction {
namespace {

constexpr double kFractions[] = {0.0, 0.1, 0.2, 0.25, 0.4, 0.5,
                                 0.6, 0.8, 0.95, 1.0};

std::vector<int> Ids(const std::vector<BidderId>& ids) {
  std::vector<int> out;
  for (BidderId b : ids) out.push_back(b.index);
  return out;
}

// Valuations with frequent exact ties.
std::vector<double> TieProneValues(Rng& rng, int n) {
  std::vector<double> v(n);
  for (double& x : v) x = static_cast<double>(rng.UniformIndex(5)) / 4.0;
  return v;
}

TEST(DisclosedCountTest, HalfUp) {
  EXPECT_EQ(DisclosedCount(0.2, 10), 2);
  EXPECT_EQ(DisclosedCount(0.4, 10), 4);
  EXPECT_EQ(DisclosedCount(0.6, 10), 6);
  EXPECT_EQ(DisclosedCount(0.8, 10), 8);
  EXPECT_EQ(DisclosedCount(0.25, 10), 3);
  EXPECT_EQ(DisclosedCount(0.05, 10), 1);
  EXPECT_EQ(DisclosedCount(0.0, 10), 0);
  EXPECT_EQ(DisclosedCount(1.0, 10), 10);
}

TEST(AssignSignalsTest, PoolHighTierOnlySortedInput) {
  std::vector<double> v;
  for (int i = 0; i < 10; ++i) v.push_back(0.05 + 0.1 * i);
  Rng rng(1);
  const auto a = AssignSignals(
      DisclosureStrategy::PoolHigh(0.2, PooledInfo::kTierOnly), v, rng);
  EXPECT_EQ(Ids(a.disclosed), (std::vector<int>{0, 1}));
  EXPECT_EQ(Ids(a.pooled), (std::vector<int>{2, 3, 4, 5, 6, 7, 8, 9}));
  EXPECT_EQ(a.signals[0], Signal(ExactSignal{v[0]}));
  EXPECT_EQ(a.signals[1], Signal(ExactSignal{v[1]}));
  for (int i = 2; i < 10; ++i) {
    EXPECT_EQ(a.signals[i], Signal(TierSignal{TierLevel::kHigh, std::nullopt}));
  }
}

TEST(AssignSignalsTest, FullDisclosureIsIdentity) {
  Rng rng(2);
  const auto v = SampleValuations(ValuePrior(), 10, rng);
  const auto a = AssignSignals(DisclosureStrategy::FullDisclosure(), v, rng);
  ASSERT_EQ(a.signals.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(a.signals[i], Signal(ExactSignal{v[i]}));
  }
  EXPECT_TRUE(a.pooled.empty());
}

TEST(AssignSignalsTest, PoolHighWithAverage) {
  const std::vector<double> v = {0.1, 0.6, 0.2, 0.3, 0.05,
                                 0.15, 0.7, 0.25, 0.35, 0.4};
  Rng rng(3);
  const auto a = AssignSignals(
      DisclosureStrategy::PoolHigh(0.8, PooledInfo::kTierWithAverage), v, rng);
  EXPECT_EQ(Ids(a.pooled), (std::vector<int>{1, 6}));
  for (int id : {1, 6}) {
    const auto* t = std::get_if<TierSignal>(&a.signals[id]);
    ASSERT_NE(t, nullptr);
    EXPECT_EQ(t->level, TierLevel::kHigh);
    ASSERT_TRUE(t->tier_average.has_value());
    EXPECT_DOUBLE_EQ(*t->tier_average, 0.65);
  }
}

TEST(AssignSignalsTest, PoolLowMirrorsPoolHigh) {
  const std::vector<double> v = {0.9, 0.1, 0.5, 0.3};
  Rng rng(4);
  const auto a = AssignSignals(
      DisclosureStrategy::PoolLow(0.5, PooledInfo::kTierWithAverage), v, rng);
  EXPECT_EQ(Ids(a.disclosed), (std::vector<int>{0, 2}));
  EXPECT_EQ(Ids(a.pooled), (std::vector<int>{1, 3}));
  const auto* t = std::get_if<TierSignal>(&a.signals[1]);
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->level, TierLevel::kLow);
  EXPECT_DOUBLE_EQ(*t->tier_average, 0.2);
}

TEST(AssignSignalsTest, RandomizedEndpoints) {
  Rng rng(5);
  const auto v = SampleValuations(ValuePrior(), 10, rng);
  const auto all = AssignSignals(DisclosureStrategy::Randomized(1.0), v, rng);
  const auto none = AssignSignals(DisclosureStrategy::Randomized(0.0), v, rng);
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(all.signals[i], Signal(ExactSignal{v[i]}));
    EXPECT_EQ(none.signals[i], Signal(NoInfoSignal{}));
  }
}

TEST(AssignSignalsTest, RejectsSingleBidderAndBadStrategy) {
  Rng rng(6);
  const std::vector<double> one = {0.5};
  EXPECT_THROW(AssignSignals(DisclosureStrategy::FullDisclosure(), one, rng),
               ConfigError);
  const std::vector<double> two = {0.5, 0.6};
  EXPECT_THROW(AssignSignals(DisclosureStrategy::PoolHigh(
                                 0.5, PooledInfo::kNoInfo),
                             two, rng),
               ConfigError);
}

TEST(AssignSignalsTest, DegenerateFractions) {
  Rng rng(7);
  const auto v = SampleValuations(ValuePrior(), 10, rng);
  const auto zero = AssignSignals(
      DisclosureStrategy::PoolHigh(0.0, PooledInfo::kTierOnly), v, rng);
  EXPECT_TRUE(zero.disclosed.empty());
  EXPECT_EQ(zero.pooled.size(), 10u);
  const auto one = AssignSignals(
      DisclosureStrategy::PoolLow(1.0, PooledInfo::kTierWithAverage), v, rng);
  EXPECT_TRUE(one.pooled.empty());
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(one.signals[i], Signal(ExactSignal{v[i]}));
  }
}

// Partition, cardinality, rank correctness and tier contents against the
// insertion-sort rank oracle, with tie-prone inputs.
TEST(AssignSignalsPropertyTest, TieredMatchesRankOracle) {
  Rng values_rng(8);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 2 + static_cast<int>(values_rng.UniformIndex(14));
    const auto v = (trial % 2 == 0)
                       ? TieProneValues(values_rng, n)
                       : SampleValuations(ValuePrior(), n, values_rng);
    const auto rank = oracle::RankOrder(v);
    for (double d : kFractions) {
      for (bool high : {true, false}) {
        for (PooledInfo info :
             {PooledInfo::kTierOnly, PooledInfo::kTierWithAverage}) {
          const auto strategy = high ? DisclosureStrategy::PoolHigh(d, info)
                                     : DisclosureStrategy::PoolLow(d, info);
          Rng rng(trial);
          const auto a = AssignSignals(strategy, v, rng);
          const int k = DisclosedCount(d, n);
          ASSERT_EQ(static_cast<int>(a.disclosed.size()), k);
          ASSERT_EQ(a.disclosed.size() + a.pooled.size(),
                    static_cast<std::size_t>(n));

          std::set<int> expected_disclosed;
          for (int r = 0; r < k; ++r) {
            expected_disclosed.insert(high ? rank[r] : rank[n - 1 - r]);
          }
          const auto got = Ids(a.disclosed);
          ASSERT_EQ(std::set<int>(got.begin(), got.end()), expected_disclosed);

          double pooled_sum = 0.0;
          std::vector<int> pooled = Ids(a.pooled);
          for (int id : pooled) pooled_sum += v[id];
          for (int id : got) {
            ASSERT_EQ(a.signals[id], Signal(ExactSignal{v[id]}));
            for (int p : pooled) {
              if (high) {
                ASSERT_LE(v[id], v[p]);
              } else {
                ASSERT_GE(v[id], v[p]);
              }
            }
          }
          for (int id : pooled) {
            ASSERT_EQ(a.signals[id], a.signals[pooled.front()]);
            const auto& t = std::get<TierSignal>(a.signals[id]);
            ASSERT_EQ(t.level, high ? TierLevel::kHigh : TierLevel::kLow);
            if (info == PooledInfo::kTierWithAverage) {
              ASSERT_DOUBLE_EQ(*t.tier_average, pooled_sum / pooled.size());
            } else {
              ASSERT_FALSE(t.tier_average.has_value());
            }
          }
        }
      }
    }
  }
}

TEST(AssignSignalsPropertyTest, TieredDoesNotConsumeRng) {
  Rng a(9);
  Rng b(9);
  const std::vector<double> v = {0.3, 0.1, 0.2};
  AssignSignals(DisclosureStrategy::PoolHigh(0.4, PooledInfo::kTierOnly), v, a);
  EXPECT_EQ(a.NextU64(), b.NextU64());
}

TEST(AssignSignalsPropertyTest, RandomizedCardinality) {
  const int n = 10;
  std::vector<double> v(n, 0.5);
  for (double d : {0.2, 0.4, 0.6, 0.8}) {
    double disclosed = 0.0;
    for (int s = 0; s < 10000; ++s) {
      Rng rng(StableHash(1234, "randomized", s));
      const auto a = AssignSignals(DisclosureStrategy::Randomized(d), v, rng);
      ASSERT_EQ(a.disclosed.size() + a.pooled.size(),
                static_cast<std::size_t>(n));
      for (BidderId p : a.pooled) {
        ASSERT_EQ(a.signals[p.index], Signal(NoInfoSignal{}));
      }
      disclosed += a.disclosed.size();
    }
    EXPECT_NEAR(disclosed / (10000.0 * n), d, 0.02) << "d=" << d;
  }
}

TEST(RenderTest, ExactSignal) {
  EXPECT_EQ(RenderPrivateMessage(ExactSignal{0.3568638462861372}),
            "Your true value towards this current auctioned item is "
            "0.3568638462861372");
}

TEST(RenderTest, TierHighWithAverage) {
  const std::string m = RenderPrivateMessage(
      TierSignal{TierLevel::kHigh, 0.6657625810811798});
  EXPECT_NE(m.find("your value is being in the high value tier"),
            std::string::npos);
  EXPECT_NE(m.find("higher than some of other bidders"), std::string::npos);
  EXPECT_NE(m.find("The average value of all bidders in the same tier with "
                   "you is 0.6657625810811798"),
            std::string::npos);
}

TEST(RenderTest, TierLowWithoutAverage) {
  const std::string m =
      RenderPrivateMessage(TierSignal{TierLevel::kLow, std::nullopt});
  EXPECT_NE(m.find("your value is being in the low value tier"),
            std::string::npos);
  EXPECT_NE(m.find("lower than some of other bidders"), std::string::npos);
  EXPECT_EQ(m.find("average"), std::string::npos);
  EXPECT_EQ(m.find("{"), std::string::npos);
}

TEST(RenderTest, NoInfo) {
  EXPECT_EQ(RenderPrivateMessage(NoInfoSignal{}),
            "You have no information about your true value.");
}

TEST(RenderTest, NeverMentionsStrategyParameters) {
  for (const Signal& s :
       {Signal(ExactSignal{0.2}), Signal(TierSignal{TierLevel::kHigh, 0.8}),
        Signal(TierSignal{TierLevel::kLow, std::nullopt}),
        Signal(NoInfoSignal{})}) {
    const std::string m = RenderPrivateMessage(s);
    for (const char* word : {"quantile", "fraction", "pool_", "threshold",
                             "probability", "strategy"}) {
      EXPECT_EQ(m.find(word), std::string::npos) << m;
    }
  }
}

TEST(RenderPropertyTest, Injective) {
  Rng rng(10);
  std::vector<Signal> signals = {NoInfoSignal{},
                                 TierSignal{TierLevel::kHigh, std::nullopt},
                                 TierSignal{TierLevel::kLow, std::nullopt}};
  for (int i = 0; i < 3000; ++i) {
    const double x = rng.Uniform01();
    signals.push_back(ExactSignal{x});
    signals.push_back(TierSignal{TierLevel::kHigh, x});
    signals.push_back(TierSignal{TierLevel::kLow, x});
  }
  // Adjacent doubles must stay distinguishable.
  signals.push_back(ExactSignal{0.1});
  signals.push_back(ExactSignal{std::nextafter(0.1, 1.0)});
  std::set<std::string> seen;
  std::size_t distinct = 0;
  std::vector<Signal> unique_signals;
  for (const Signal& s : signals) {
    if (std::find(unique_signals.begin(), unique_signals.end(), s) ==
        unique_signals.end()) {
      unique_signals.push_back(s);
    }
  }
  for (const Signal& s : unique_signals) {
    seen.insert(RenderPrivateMessage(s));
    ++distinct;
  }
  EXPECT_EQ(seen.size(), distinct);
}

}  // namespace
}  // namespace sigauction
