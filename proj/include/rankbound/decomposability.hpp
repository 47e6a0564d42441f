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

#ifndef RANKBOUND_DECOMPOSABILITY_HPP_
#define RANKBOUND_DECOMPOSABILITY_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rankbound/ranking.hpp"
#include "rankbound/surrogates.hpp"

namespace rankbound {

struct DecompConfig {
  double lambda = 0.1;       // weight of the decomposability term
  double pos_margin = 0.9;   // positives should score at least this
  double neg_margin = 0.6;   // negatives should score at most this
  double eta = 0.05;         // proxy softmax temperature

  void Validate() const;
};

enum class DgKind { kNone, kPair, kProxy };
DgKind parse_dg_kind(const std::string& name);
std::string to_string(DgKind kind);

// K disjoint index sets of equal size partitioning a retrieval set.
struct BatchSplit {
  std::vector<std::vector<std::size_t>> batches;

  // Throws unless the batches are an equal-size disjoint cover of [0, n).
  void Validate(std::size_t n) const;
};

// Consecutive chunks of size `batch_size`; n must be a multiple of it.
BatchSplit contiguous_split(std::size_t n, std::size_t batch_size);
// Random equal-size split; n must be a multiple of `batch_size`.
BatchSplit random_split(std::size_t n, std::size_t batch_size,
                        std::mt19937_64& rng);

using MetricFn = std::function<double(const RankingProblem&)>;

// mean_b metric(batch b) - metric(all). Empty when some batch has no
// positive, so the caller can resample the split.
std::optional<double> decomposability_gap(const MetricFn& metric,
                                          const RankingProblem& problem,
                                          const BatchSplit& split);

// Worst-case gap when every batch is perfectly ranked and the global ranking
// juxtaposes the batches in order.
double dg_upper_bound_plain(std::span<const std::size_t> positives,
                            std::span<const std::size_t> negatives);

// Per-batch counts of positives / negatives that satisfy (G) or violate (E)
// the score margins.
struct BatchCalibration {
  std::size_t good_pos = 0;
  std::size_t bad_pos = 0;
  std::size_t good_neg = 0;
  std::size_t bad_neg = 0;

  std::size_t positives() const { return good_pos + bad_pos; }
  std::size_t negatives() const { return good_neg + bad_neg; }
};

double dg_upper_bound_calibrated(std::span<const BatchCalibration> batches);

// Counts G/E for one batch from its scores and binary labels.
BatchCalibration calibration_counts(std::span<const double> scores,
                                    std::span<const int> labels,
                                    double pos_margin, double neg_margin);

// Pair-margin calibration loss on a single score vector (labels != 0 are
// positives). The result has one gradient row.
LossResult l_dg(std::span<const double> scores, std::span<const int> labels,
                double pos_margin, double neg_margin);
// Mean of l_dg over problems (positives: relevance > 0).
LossResult l_dg_batch(std::span<const RankingProblem> problems,
                      double pos_margin, double neg_margin);

struct ProxyLossResult {
  double value = 0.0;
  Eigen::MatrixXd grad_embeddings;  // same shape as the embeddings
  Eigen::MatrixXd grad_proxies;     // same shape as the proxies
};

// Mean softmax cross-entropy of embeddings (rows) against class proxies
// (rows) with logits v^T p / eta.
ProxyLossResult l_dg_star(const Eigen::MatrixXd& embeddings,
                          const Eigen::MatrixXd& proxies,
                          std::span<const int> class_ids, double eta);

// (1 - lambda) * surrogate + lambda * dg, values and gradients.
LossResult combined_loss(const LossResult& surrogate, const LossResult& dg,
                         double lambda);

}  // namespace rankbound

#endif  // RANKBOUND_DECOMPOSABILITY_HPP_
