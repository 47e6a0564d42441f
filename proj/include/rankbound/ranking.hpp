/*
 * Copyright 2026 The rankbound Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RANKBOUND_RANKING_HPP_
#define RANKBOUND_RANKING_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace rankbound {

// Heaviside step with H(0) = 1: a tied instance counts as ranked above.
inline double heaviside(double t) { return t >= 0.0 ? 1.0 : 0.0; }

// One query against its retrieval set (the query itself excluded).
//
// `relevance` is non-negative; zero marks a negative. `level` holds the
// semantic level in [0, depth] of each instance; level 0 iff relevance 0.
class RankingProblem {
 public:
  RankingProblem() = default;

  // Binary labels: any non-zero label is a positive of relevance 1.
  static RankingProblem Binary(std::vector<double> scores,
                               std::span<const int> labels);
  // Graded relevances; levels are the dense rank of the distinct positive
  // relevance values (so depth = number of distinct positive values).
  static RankingProblem Graded(std::vector<double> scores,
                               std::vector<double> relevance);
  // Explicit levels; relevance must be zero exactly on level 0. Rank sets
  // are defined by relevance values, so relevance need not be monotone in
  // level (the hierarchical rule is not when coarse sets are small).
  static RankingProblem WithLevels(std::vector<double> scores,
                                   std::vector<double> relevance,
                                   std::vector<int> level, int depth);

  std::size_t size() const { return scores_.size(); }
  int depth() const { return depth_; }
  const std::vector<double>& scores() const { return scores_; }
  const std::vector<double>& relevance() const { return relevance_; }
  const std::vector<int>& level() const { return level_; }
  double score(std::size_t k) const { return scores_[k]; }
  double relevance(std::size_t k) const { return relevance_[k]; }
  bool is_positive(std::size_t k) const { return relevance_[k] > 0.0; }
  std::size_t num_positives() const;
  std::size_t num_at_least(int level) const;
  double relevance_sum() const;

  // Same relevances and levels with a different score vector.
  RankingProblem WithScores(std::vector<double> scores) const;
  // Restriction to `indices` (used for batch splits).
  RankingProblem Subset(std::span<const std::size_t> indices) const;
  // Binary problem whose positives are the instances at level >= `level`.
  RankingProblem Binarized(int level = 1) const;

 private:
  void Validate() const;

  std::vector<double> scores_;
  std::vector<double> relevance_;
  std::vector<int> level_;
  int depth_ = 1;
};

struct ExactRanks {
  std::size_t plus = 0;   // rank+: 1 + higher-scored of relevance >= rel(k)
  std::size_t minus = 0;  // rank-: higher-scored of relevance < rel(k)
  std::size_t total() const { return plus + minus; }
};

// Literal O(N) evaluation for a single positive; throws if k is negative.
ExactRanks exact_ranks(const RankingProblem& problem, std::size_t k);
double h_rank_plus(const RankingProblem& problem, std::size_t k);

// Rank quantities of every positive at once in O(N log N + N V), V being the
// number of distinct relevance values.
struct PositiveRanks {
  std::vector<std::size_t> index;  // positives, in input order
  std::vector<double> rank_plus;
  std::vector<double> rank;
  std::vector<double> h_rank_plus;
};

PositiveRanks positive_ranks(const RankingProblem& problem);

// Instance indices by descending score; ties place lower relevance first,
// then higher index, so prefix-based metrics are pessimistic like H(0) = 1.
std::vector<std::size_t> descending_order(const RankingProblem& problem);

}  // namespace rankbound

#endif  // RANKBOUND_RANKING_HPP_
