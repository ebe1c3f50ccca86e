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

// Independent reference implementations used by the tests. Nothing here
// calls into the library; the random sources are deliberately different
// from sigauction::Rng.

#ifndef SIGAUCTION_TESTS_ORACLES_H_
#define SIGAUCTION_TESTS_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace sigauction::oracle {

struct SecondPrice {
  int winner = -1;
  double price = 0.0;
  double winning_bid = 0.0;
};

// Sort descending by bid, ascending by index among equal bids; the first
// entry wins and the second entry's bid is the price.
inline SecondPrice SecondPriceLowestIndex(const std::vector<double>& bids) {
  std::vector<std::pair<double, int>> order;
  for (int i = 0; i < static_cast<int>(bids.size()); ++i) {
    order.emplace_back(bids[i], i);
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  return {order[0].second, order[1].first, order[0].first};
}

// Indices tied at the maximum bid.
inline std::vector<int> TopTied(const std::vector<double>& bids) {
  const double top = *std::max_element(bids.begin(), bids.end());
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(bids.size()); ++i) {
    if (bids[i] == top) out.push_back(i);
  }
  return out;
}

// Bidder indices ordered from lowest to highest rank (value, then index).
inline std::vector<int> RankOrder(const std::vector<double>& values) {
  std::vector<int> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  // Insertion sort keeps this independent of std::stable_sort.
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0; --j) {
      const int a = idx[j - 1];
      const int b = idx[j];
      const bool swap =
          values[a] > values[b] || (values[a] == values[b] && a > b);
      if (!swap) break;
      std::swap(idx[j - 1], idx[j]);
    }
  }
  return idx;
}

// Exact posterior mean as a reduced fraction: the average of the
// order-statistic means j/(n+1) over the top (or bottom) k ranks.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

inline Fraction TierMeanExact(int n, int k, bool high) {
  std::int64_t sum = 0;
  for (int j = 1; j <= n; ++j) {
    const bool in_tier = high ? j > n - k : j <= k;
    if (in_tier) sum += j;
  }
  std::int64_t num = sum;
  std::int64_t den = static_cast<std::int64_t>(k) * (n + 1);
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

// Monte Carlo conditional mean of a uniform valuation given that it ranks
// in the top (or bottom) k of n.
inline double TierMeanMonteCarlo(int n, int k, bool high, int samples,
                                 std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, k - 1);
  std::vector<double> v(n);
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    for (double& x : v) x = u(gen);
    std::sort(v.begin(), v.end());
    const int r = pick(gen);
    acc += high ? v[n - 1 - r] : v[r];
  }
  return acc / samples;
}

// Monte Carlo E[second highest] and E[highest] of n uniforms.
inline std::pair<double, double> OrderStatMeansMonteCarlo(int n, int samples,
                                                          std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double second = 0.0;
  double first = 0.0;
  for (int s = 0; s < samples; ++s) {
    double a = 0.0;
    double b = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = u(gen);
      if (x > a) {
        b = a;
        a = x;
      } else if (x > b) {
        b = x;
      }
    }
    first += a;
    second += b;
  }
  return {second / samples, first / samples};
}

}  // namespace sigauction::oracle

#endif  // SIGAUCTION_TESTS_ORACLES_H_
