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

#include "rankbound/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rankbound/error.hpp"

namespace rankbound {

RankingProblem RankingProblem::Binary(std::vector<double> scores,
                                      std::span<const int> labels) {
  if (labels.size() != scores.size()) {
    throw Error("scores and labels differ in length");
  }
  std::vector<double> relevance(labels.size());
  std::vector<int> level(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    relevance[k] = labels[k] != 0 ? 1.0 : 0.0;
    level[k] = labels[k] != 0 ? 1 : 0;
  }
  return WithLevels(std::move(scores), std::move(relevance), std::move(level),
                    1);
}

RankingProblem RankingProblem::Graded(std::vector<double> scores,
                                      std::vector<double> relevance) {
  std::vector<double> distinct;
  for (double r : relevance) {
    if (r > 0.0) distinct.push_back(r);
  }
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<int> level(relevance.size(), 0);
  for (std::size_t k = 0; k < relevance.size(); ++k) {
    if (relevance[k] > 0.0) {
      level[k] = 1 + static_cast<int>(std::lower_bound(distinct.begin(),
                                                       distinct.end(),
                                                       relevance[k]) -
                                      distinct.begin());
    }
  }
  const int depth = std::max<int>(1, static_cast<int>(distinct.size()));
  return WithLevels(std::move(scores), std::move(relevance), std::move(level),
                    depth);
}

RankingProblem RankingProblem::WithLevels(std::vector<double> scores,
                                          std::vector<double> relevance,
                                          std::vector<int> level, int depth) {
  RankingProblem problem;
  problem.scores_ = std::move(scores);
  problem.relevance_ = std::move(relevance);
  problem.level_ = std::move(level);
  problem.depth_ = depth;
  problem.Validate();
  return problem;
}

void RankingProblem::Validate() const {
  const std::size_t n = scores_.size();
  if (n == 0) throw Error("ranking problem is empty");
  if (relevance_.size() != n || level_.size() != n) {
    throw Error("scores and relevances differ in length");
  }
  if (depth_ < 1) throw Error("depth must be positive");
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(scores_[k])) throw Error("non-finite score");
    if (!(relevance_[k] >= 0.0) || !std::isfinite(relevance_[k])) {
      throw Error("relevance must be finite and non-negative");
    }
    if (level_[k] < 0 || level_[k] > depth_) throw Error("level out of range");
    if ((level_[k] == 0) != (relevance_[k] == 0.0)) {
      throw Error("relevance is zero exactly on level 0");
    }
  }
}

std::size_t RankingProblem::num_positives() const {
  return static_cast<std::size_t>(std::count_if(
      relevance_.begin(), relevance_.end(), [](double r) { return r > 0.0; }));
}

std::size_t RankingProblem::num_at_least(int l) const {
  return static_cast<std::size_t>(std::count_if(
      level_.begin(), level_.end(), [l](int q) { return q >= l; }));
}

double RankingProblem::relevance_sum() const {
  return std::accumulate(relevance_.begin(), relevance_.end(), 0.0);
}

RankingProblem RankingProblem::WithScores(std::vector<double> scores) const {
  if (scores.size() != size()) throw Error("score vector has wrong length");
  RankingProblem out = *this;
  out.scores_ = std::move(scores);
  for (double s : out.scores_) {
    if (!std::isfinite(s)) throw Error("non-finite score");
  }
  return out;
}

RankingProblem RankingProblem::Subset(
    std::span<const std::size_t> indices) const {
  std::vector<double> scores, relevance;
  std::vector<int> level;
  for (std::size_t i : indices) {
    if (i >= size()) throw Error("subset index out of range");
    scores.push_back(scores_[i]);
    relevance.push_back(relevance_[i]);
    level.push_back(level_[i]);
  }
  return WithLevels(std::move(scores), std::move(relevance), std::move(level),
                    depth_);
}

RankingProblem RankingProblem::Binarized(int l) const {
  std::vector<int> labels(size());
  for (std::size_t k = 0; k < size(); ++k) labels[k] = level_[k] >= l ? 1 : 0;
  return Binary(scores_, labels);
}

ExactRanks exact_ranks(const RankingProblem& problem, std::size_t k) {
  if (k >= problem.size() || !problem.is_positive(k)) {
    throw Error("exact_ranks: instance is not a positive");
  }
  const double rel_k = problem.relevance(k);
  const double s_k = problem.score(k);
  ExactRanks ranks;
  ranks.plus = 1;
  for (std::size_t j = 0; j < problem.size(); ++j) {
    if (j == k || problem.score(j) < s_k) continue;
    if (problem.relevance(j) >= rel_k) {
      ++ranks.plus;
    } else {
      ++ranks.minus;
    }
  }
  return ranks;
}

double h_rank_plus(const RankingProblem& problem, std::size_t k) {
  if (k >= problem.size() || !problem.is_positive(k)) {
    throw Error("h_rank_plus: instance is not a positive");
  }
  const double rel_k = problem.relevance(k);
  double value = rel_k;
  for (std::size_t j = 0; j < problem.size(); ++j) {
    if (j == k || !problem.is_positive(j)) continue;
    value += std::min(rel_k, problem.relevance(j)) *
             heaviside(problem.score(j) - problem.score(k));
  }
  return value;
}

PositiveRanks positive_ranks(const RankingProblem& problem) {
  const std::size_t n = problem.size();
  const auto& rel = problem.relevance();

  std::vector<double> values(rel.begin(), rel.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<std::size_t> value_of(n);
  for (std::size_t k = 0; k < n; ++k) {
    value_of[k] = static_cast<std::size_t>(
        std::lower_bound(values.begin(), values.end(), rel[k]) -
        values.begin());
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return problem.score(a) > problem.score(b);
  });

  std::vector<double> rank_plus(n, 0.0), rank(n, 0.0), hrank(n, 0.0);
  std::vector<double> count(values.size(), 0.0);
  double seen = 0.0;
  std::size_t group_begin = 0;
  while (group_begin < n) {
    std::size_t group_end = group_begin + 1;
    while (group_end < n &&
           problem.score(order[group_end]) == problem.score(order[group_begin])) {
      ++group_end;
    }
    for (std::size_t g = group_begin; g < group_end; ++g) {
      count[value_of[order[g]]] += 1.0;
      seen += 1.0;
    }
    for (std::size_t g = group_begin; g < group_end; ++g) {
      const std::size_t k = order[g];
      if (rel[k] <= 0.0) continue;
      double plus = 0.0, h = 0.0;
      for (std::size_t v = 0; v < values.size(); ++v) {
        if (v >= value_of[k]) plus += count[v];
        // The self term min(rel_k, rel_k) equals the leading rel(k).
        h += std::min(values[v], rel[k]) * count[v];
      }
      rank_plus[k] = plus;
      rank[k] = seen;
      hrank[k] = h;
    }
    group_begin = group_end;
  }

  PositiveRanks out;
  for (std::size_t k = 0; k < n; ++k) {
    if (rel[k] <= 0.0) continue;
    out.index.push_back(k);
    out.rank_plus.push_back(rank_plus[k]);
    out.rank.push_back(rank[k]);
    out.h_rank_plus.push_back(hrank[k]);
  }
  return out;
}

std::vector<std::size_t> descending_order(const RankingProblem& problem) {
  std::vector<std::size_t> order(problem.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (problem.score(a) != problem.score(b)) {
      return problem.score(a) > problem.score(b);
    }
    if (problem.relevance(a) != problem.relevance(b)) {
      return problem.relevance(a) < problem.relevance(b);
    }
    return a > b;
  });
  return order;
}

}  // namespace rankbound
