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

#ifndef RANKBOUND_RELEVANCE_HPP_
#define RANKBOUND_RELEVANCE_HPP_

#include <string>
#include <vector>

#include "rankbound/hierarchy.hpp"

namespace rankbound {

enum class RelevanceKind { kHierarchical, kWeightedAp, kNdcg, kBinary };

struct RelevanceSpec {
  RelevanceKind kind = RelevanceKind::kHierarchical;
  double alpha = 1.0;           // hierarchical decrease rate
  std::vector<double> weights;  // weighted-AP level weights w_1..w_L

  void Validate(int depth) const;
};

RelevanceKind parse_relevance_kind(const std::string& name);
std::string to_string(RelevanceKind kind);

// (l/L)^alpha / |Omega^(l)| on level l >= 1, zero on negatives.
std::vector<double> hierarchical_relevance(const LevelPartition& partition,
                                           double alpha);

// sum_{p<=l} w_p / |Omega^{+,p}| on level l >= 1; relevances of the positives
// sum to one, which makes H-AP the w-weighted mean of the per-level APs.
std::vector<double> weighted_ap_relevance(const LevelPartition& partition,
                                          const std::vector<double>& weights);

// 2^l - 1.
std::vector<double> ndcg_relevance(const LevelPartition& partition);

// Relevance 1 on the finest level, 0 elsewhere.
std::vector<double> binary_relevance(const LevelPartition& partition);

std::vector<double> make_relevance(const RelevanceSpec& spec,
                                   const LevelPartition& partition);

}  // namespace rankbound

#endif  // RANKBOUND_RELEVANCE_HPP_
