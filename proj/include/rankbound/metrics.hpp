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

#ifndef RANKBOUND_METRICS_HPP_
#define RANKBOUND_METRICS_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rankbound/hierarchy.hpp"
#include "rankbound/ranking.hpp"
#include "rankbound/relevance.hpp"

namespace rankbound {

// Exact ranking metrics. Binary metrics (AP, mAP@R, R@k, TR@k) treat every
// instance of positive relevance as a positive; use
// RankingProblem::Binarized(l) or per_level_ap to select a level. All
// functions throw Error when the problem has no positives.

double average_precision(const RankingProblem& problem);
// Precision terms truncated at R = |positives|, normalized by R.
double map_at_r(const RankingProblem& problem);
// 1 if a positive has rank <= k (k is clamped to N).
double recall_at_k(const RankingProblem& problem, std::size_t k);
double true_recall_at_k(const RankingProblem& problem, std::size_t k);
double ndcg(const RankingProblem& problem);
double h_ap(const RankingProblem& problem);
// Binary AP with positives at level >= l.
double per_level_ap(const RankingProblem& problem, int level);

// Prefix metrics over descending_order(problem); `position` is 1-based.
double h_recall_at(const RankingProblem& problem, std::size_t position);
// Empty when the item at `position` is not a positive.
std::optional<double> h_precision_at(const RankingProblem& problem,
                                     std::size_t position);
// Plain binary curves (positives counted in the top `position`).
double recall_curve_at(const RankingProblem& problem, std::size_t position);
double precision_at(const RankingProblem& problem, std::size_t position);

// Average set intersection over the first |positives| prefixes; sets are
// compared as multisets of relevance values.
double asi(const RankingProblem& problem);

struct MetricReport {
  int depth = 0;
  std::vector<std::size_t> k_list;
  std::size_t num_queries = 0;
  std::size_t skipped_queries = 0;

  double ap = 0.0;     // fine level
  double map_at_r = 0.0;
  std::vector<double> recall_at_k;       // per k_list entry
  std::vector<double> true_recall_at_k;  // per k_list entry
  double ndcg = 0.0;
  double h_ap = 0.0;
  double asi = 0.0;
  std::vector<double> level_ap;          // AP^(l), index l-1
  std::vector<double> h_recall_at_k;     // per k_list entry
  std::vector<double> h_precision_at_k;  // mean over queries where defined
  std::vector<std::size_t> h_precision_count;

  // Per-query values, in query order, for the evaluated queries.
  std::vector<std::size_t> query_index;
  std::vector<double> query_ap;
  std::vector<double> query_h_ap;
  std::vector<double> query_ndcg;
};

// Every row is a query scored by cosine similarity against all other rows.
// Queries with no fine-level positive are skipped and counted.
MetricReport evaluate_all(const Eigen::MatrixXd& embeddings,
                          const LabelTable& labels,
                          const RelevanceSpec& relevance,
                          const std::vector<std::size_t>& k_list);

// Mean binary AP over queries (cosine similarity, all other rows), where
// positives share the query's label down to `level`. Queries without a
// positive are skipped; returns 0 when none remain.
double mean_average_precision(const Eigen::MatrixXd& embeddings,
                              const LabelTable& labels, int level);

// Row-normalized cosine similarity matrix.
Eigen::MatrixXd cosine_similarity(const Eigen::MatrixXd& embeddings);

// CSV `metric,level,k,value`; empty cells where a column does not apply.
void write_report_csv(std::ostream& out, const MetricReport& report);

}  // namespace rankbound

#endif  // RANKBOUND_METRICS_HPP_
