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

#include "rankbound/relevance.hpp"

#include <cmath>

#include "rankbound/error.hpp"

namespace rankbound {

void RelevanceSpec::Validate(int depth) const {
  switch (kind) {
    case RelevanceKind::kHierarchical:
      if (!(alpha > 0.0)) throw Error("relevance alpha must be positive");
      break;
    case RelevanceKind::kWeightedAp: {
      if (static_cast<int>(weights.size()) != depth) {
        throw Error("weighted-AP relevance needs " + std::to_string(depth) +
                    " weights, got " + std::to_string(weights.size()));
      }
      double total = 0.0;
      for (double w : weights) {
        if (!(w >= 0.0)) throw Error("weighted-AP weights must be >= 0");
        total += w;
      }
      if (std::abs(total - 1.0) > 1e-9) {
        throw Error("weighted-AP weights must sum to 1");
      }
      break;
    }
    case RelevanceKind::kNdcg:
    case RelevanceKind::kBinary:
      break;
  }
}

RelevanceKind parse_relevance_kind(const std::string& name) {
  if (name == "hierarchical" || name == "hap") return RelevanceKind::kHierarchical;
  if (name == "weighted_ap" || name == "weighted-ap") return RelevanceKind::kWeightedAp;
  if (name == "ndcg" || name == "ndcg_exponential") return RelevanceKind::kNdcg;
  if (name == "binary") return RelevanceKind::kBinary;
  throw Error("unknown relevance kind: " + name +
              " (expected hierarchical, weighted_ap, ndcg or binary)");
}

std::string to_string(RelevanceKind kind) {
  switch (kind) {
    case RelevanceKind::kHierarchical: return "hierarchical";
    case RelevanceKind::kWeightedAp: return "weighted_ap";
    case RelevanceKind::kNdcg: return "ndcg";
    case RelevanceKind::kBinary: return "binary";
  }
  return "?";
}

std::vector<double> hierarchical_relevance(const LevelPartition& partition,
                                           double alpha) {
  if (!(alpha > 0.0)) throw Error("relevance alpha must be positive");
  if (partition.num_positives() == 0) {
    throw Error("hierarchical relevance: empty positive set");
  }
  const double depth = partition.depth;
  std::vector<double> rel(partition.size(), 0.0);
  for (int l = 1; l <= partition.depth; ++l) {
    const auto& members = partition.sets[l];
    if (members.empty()) continue;
    const double value = std::pow(l / depth, alpha) /
                         static_cast<double>(members.size());
    for (std::size_t k : members) rel[k] = value;
  }
  return rel;
}

std::vector<double> weighted_ap_relevance(const LevelPartition& partition,
                                          const std::vector<double>& weights) {
  RelevanceSpec{RelevanceKind::kWeightedAp, 1.0, weights}.Validate(
      partition.depth);
  std::vector<double> level_value(partition.depth + 1, 0.0);
  double running = 0.0;
  for (int p = 1; p <= partition.depth; ++p) {
    const std::size_t at_least = partition.at_least(p);
    if (at_least > 0) running += weights[p - 1] / static_cast<double>(at_least);
    level_value[p] = running;
  }
  std::vector<double> rel(partition.size(), 0.0);
  for (std::size_t k = 0; k < partition.size(); ++k) {
    rel[k] = level_value[partition.level[k]];
  }
  return rel;
}

std::vector<double> ndcg_relevance(const LevelPartition& partition) {
  std::vector<double> rel(partition.size());
  for (std::size_t k = 0; k < partition.size(); ++k) {
    rel[k] = std::ldexp(1.0, partition.level[k]) - 1.0;
  }
  return rel;
}

std::vector<double> binary_relevance(const LevelPartition& partition) {
  std::vector<double> rel(partition.size());
  for (std::size_t k = 0; k < partition.size(); ++k) {
    rel[k] = partition.level[k] == partition.depth ? 1.0 : 0.0;
  }
  return rel;
}

std::vector<double> make_relevance(const RelevanceSpec& spec,
                                   const LevelPartition& partition) {
  switch (spec.kind) {
    case RelevanceKind::kHierarchical:
      return hierarchical_relevance(partition, spec.alpha);
    case RelevanceKind::kWeightedAp:
      return weighted_ap_relevance(partition, spec.weights);
    case RelevanceKind::kNdcg:
      return ndcg_relevance(partition);
    case RelevanceKind::kBinary:
      return binary_relevance(partition);
  }
  return {};
}

}  // namespace rankbound
