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

#include "rankbound/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "rankbound/error.hpp"

namespace rankbound {
namespace {

void RequirePositives(const RankingProblem& problem, const char* metric) {
  if (problem.num_positives() == 0) {
    throw Error(std::string(metric) + ": no positives");
  }
}

double ApFromRanks(const PositiveRanks& ranks) {
  double total = 0.0;
  for (std::size_t p = 0; p < ranks.index.size(); ++p) {
    total += ranks.rank_plus[p] / ranks.rank[p];
  }
  return total / static_cast<double>(ranks.index.size());
}

double BinaryAp(const RankingProblem& binary) {
  return ApFromRanks(positive_ranks(binary));
}

double MapAtRFromRanks(const PositiveRanks& ranks) {
  const double r = static_cast<double>(ranks.index.size());
  double total = 0.0;
  for (std::size_t p = 0; p < ranks.index.size(); ++p) {
    if (ranks.rank[p] <= r) total += ranks.rank_plus[p] / ranks.rank[p];
  }
  return total / r;
}

double RecallFromRanks(const PositiveRanks& ranks, std::size_t k,
                       std::size_t n) {
  const double cutoff = static_cast<double>(std::min(k, n));
  for (double r : ranks.rank) {
    if (r <= cutoff) return 1.0;
  }
  return 0.0;
}

double TrueRecallFromRanks(const PositiveRanks& ranks, std::size_t k) {
  double hits = 0.0;
  for (double r : ranks.rank) {
    if (r <= static_cast<double>(k)) hits += 1.0;
  }
  return hits / static_cast<double>(std::min(k, ranks.index.size()));
}

double NdcgFromRanks(const RankingProblem& problem,
                     const PositiveRanks& ranks) {
  double dcg = 0.0;
  for (std::size_t p = 0; p < ranks.index.size(); ++p) {
    dcg += problem.relevance(ranks.index[p]) / std::log2(1.0 + ranks.rank[p]);
  }
  std::vector<double> ideal = problem.relevance();
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  double idcg = 0.0;
  for (std::size_t i = 0; i < ideal.size() && ideal[i] > 0.0; ++i) {
    idcg += ideal[i] / std::log2(2.0 + static_cast<double>(i));
  }
  return dcg / idcg;
}

double HApFromRanks(const RankingProblem& problem,
                    const PositiveRanks& ranks) {
  double total = 0.0;
  for (std::size_t p = 0; p < ranks.index.size(); ++p) {
    total += ranks.h_rank_plus[p] / ranks.rank[p];
  }
  return total / problem.relevance_sum();
}

double HRecallFromOrder(const RankingProblem& problem,
                        const std::vector<std::size_t>& order,
                        std::size_t position) {
  const std::size_t n = std::min(position, order.size());
  double prefix = 0.0;
  for (std::size_t i = 0; i < n; ++i) prefix += problem.relevance(order[i]);
  return prefix / problem.relevance_sum();
}

std::optional<double> HPrecisionFromOrder(const RankingProblem& problem,
                                          const std::vector<std::size_t>& order,
                                          std::size_t position) {
  const double rel_k = problem.relevance(order[position - 1]);
  if (rel_k <= 0.0) return std::nullopt;
  double prefix = 0.0;
  for (std::size_t i = 0; i < position; ++i) {
    prefix += std::min(problem.relevance(order[i]), rel_k);
  }
  return prefix / (static_cast<double>(position) * rel_k);
}

double AsiFromOrder(const RankingProblem& problem,
                    const std::vector<std::size_t>& order) {
  std::vector<double> truth = problem.relevance();
  std::sort(truth.begin(), truth.end(), std::greater<>());
  const std::size_t n_pos = problem.num_positives();

  std::map<double, std::size_t> predicted_count, truth_count;
  std::size_t intersection = 0;
  double total = 0.0;
  for (std::size_t n = 0; n < n_pos; ++n) {
    const double predicted = problem.relevance(order[n]);
    if (predicted_count[predicted]++ < truth_count[predicted]) ++intersection;
    const double expected = truth[n];
    if (truth_count[expected]++ < predicted_count[expected]) ++intersection;
    total += static_cast<double>(intersection) / static_cast<double>(n + 1);
  }
  return total / static_cast<double>(n_pos);
}

double MeanOf(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double total = 0.0;
  for (double x : v) total += x;
  return total / static_cast<double>(v.size());
}

}  // namespace

double average_precision(const RankingProblem& problem) {
  RequirePositives(problem, "average_precision");
  return BinaryAp(problem.Binarized(1));
}

double map_at_r(const RankingProblem& problem) {
  RequirePositives(problem, "map_at_r");
  return MapAtRFromRanks(positive_ranks(problem.Binarized(1)));
}

double recall_at_k(const RankingProblem& problem, std::size_t k) {
  RequirePositives(problem, "recall_at_k");
  if (k == 0) throw Error("recall_at_k: k must be >= 1");
  return RecallFromRanks(positive_ranks(problem), k, problem.size());
}

double true_recall_at_k(const RankingProblem& problem, std::size_t k) {
  RequirePositives(problem, "true_recall_at_k");
  if (k == 0) throw Error("true_recall_at_k: k must be >= 1");
  return TrueRecallFromRanks(positive_ranks(problem), k);
}

double ndcg(const RankingProblem& problem) {
  RequirePositives(problem, "ndcg");
  return NdcgFromRanks(problem, positive_ranks(problem));
}

double h_ap(const RankingProblem& problem) {
  RequirePositives(problem, "h_ap");
  return HApFromRanks(problem, positive_ranks(problem));
}

double per_level_ap(const RankingProblem& problem, int level) {
  if (level < 1 || level > problem.depth()) {
    throw Error("per_level_ap: level out of range");
  }
  if (problem.num_at_least(level) == 0) {
    throw Error("per_level_ap: no positives at level " + std::to_string(level));
  }
  return BinaryAp(problem.Binarized(level));
}

double h_recall_at(const RankingProblem& problem, std::size_t position) {
  RequirePositives(problem, "h_recall_at");
  return HRecallFromOrder(problem, descending_order(problem), position);
}

std::optional<double> h_precision_at(const RankingProblem& problem,
                                     std::size_t position) {
  if (position == 0 || position > problem.size()) {
    throw Error("h_precision_at: position out of range");
  }
  return HPrecisionFromOrder(problem, descending_order(problem), position);
}

double recall_curve_at(const RankingProblem& problem, std::size_t position) {
  RequirePositives(problem, "recall_curve_at");
  const auto order = descending_order(problem);
  const std::size_t n = std::min(position, order.size());
  double hits = 0.0;
  for (std::size_t i = 0; i < n; ++i) hits += problem.is_positive(order[i]);
  return hits / static_cast<double>(problem.num_positives());
}

double precision_at(const RankingProblem& problem, std::size_t position) {
  if (position == 0 || position > problem.size()) {
    throw Error("precision_at: position out of range");
  }
  const auto order = descending_order(problem);
  double hits = 0.0;
  for (std::size_t i = 0; i < position; ++i) hits += problem.is_positive(order[i]);
  return hits / static_cast<double>(position);
}

double asi(const RankingProblem& problem) {
  RequirePositives(problem, "asi");
  return AsiFromOrder(problem, descending_order(problem));
}

Eigen::MatrixXd cosine_similarity(const Eigen::MatrixXd& embeddings) {
  Eigen::MatrixXd normalized = embeddings;
  for (Eigen::Index i = 0; i < normalized.rows(); ++i) {
    const double norm = normalized.row(i).norm();
    normalized.row(i) /= std::max(norm, 1e-12);
  }
  return normalized * normalized.transpose();
}

double mean_average_precision(const Eigen::MatrixXd& embeddings,
                              const LabelTable& labels, int level) {
  const std::size_t n = labels.size();
  if (static_cast<std::size_t>(embeddings.rows()) != n) {
    throw Error("dimension mismatch: " + std::to_string(embeddings.rows()) +
                " embeddings for " + std::to_string(n) + " labels");
  }
  if (level < 1 || level > labels.depth()) throw Error("level out of range");
  const Eigen::MatrixXd sims = cosine_similarity(embeddings);
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t q = 0; q < n; ++q) {
    std::vector<double> scores;
    std::vector<int> positive;
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == q) continue;
      scores.push_back(sims(static_cast<Eigen::Index>(q),
                            static_cast<Eigen::Index>(j)));
      positive.push_back(shared_level(labels.codes[q], labels.codes[j]) >=
                         level);
      any = any || positive.back();
    }
    if (!any) continue;
    total += BinaryAp(RankingProblem::Binary(std::move(scores), positive));
    ++used;
  }
  return used == 0 ? 0.0 : total / static_cast<double>(used);
}

MetricReport evaluate_all(const Eigen::MatrixXd& embeddings,
                          const LabelTable& labels,
                          const RelevanceSpec& relevance,
                          const std::vector<std::size_t>& k_list) {
  const std::size_t n = labels.size();
  if (static_cast<std::size_t>(embeddings.rows()) != n) {
    throw Error("dimension mismatch: " + std::to_string(embeddings.rows()) +
                " embeddings for " + std::to_string(n) + " labels");
  }
  if (n < 2) throw Error("evaluate_all needs at least two instances");
  const int depth = labels.depth();
  relevance.Validate(depth);
  for (std::size_t k : k_list) {
    if (k == 0) throw Error("k values must be >= 1");
  }

  const Eigen::MatrixXd sims = cosine_similarity(embeddings);

  MetricReport report;
  report.depth = depth;
  report.k_list = k_list;
  const std::size_t nk = k_list.size();
  std::vector<double> map_r, ndcg_v, asi_v;
  std::vector<std::vector<double>> level_ap(depth), r_at(nk), tr_at(nk),
      hr_at(nk), hp_at(nk);

  for (std::size_t q = 0; q < n; ++q) {
    std::vector<double> scores;
    std::vector<int> levels;
    scores.reserve(n - 1);
    levels.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == q) continue;
      scores.push_back(sims(static_cast<Eigen::Index>(q),
                            static_cast<Eigen::Index>(j)));
      levels.push_back(shared_level(labels.codes[q], labels.codes[j]));
    }
    const LevelPartition partition = partition_from_levels(levels, depth);
    if (partition.level_size(depth) == 0) {
      ++report.skipped_queries;
      continue;
    }
    const RankingProblem fine = RankingProblem::WithLevels(
        scores, binary_relevance(partition),
        [&] {
          std::vector<int> b(levels.size());
          for (std::size_t i = 0; i < levels.size(); ++i) b[i] = levels[i] == depth;
          return b;
        }(),
        1);
    const RankingProblem graded =
        relevance.kind == RelevanceKind::kBinary
            ? fine
            : RankingProblem::WithLevels(scores,
                                         make_relevance(relevance, partition),
                                         levels, depth);
    const RankingProblem gain = RankingProblem::WithLevels(
        scores, ndcg_relevance(partition), levels, depth);

    const PositiveRanks fine_ranks = positive_ranks(fine);
    const PositiveRanks graded_ranks = positive_ranks(graded);
    const std::vector<std::size_t> graded_order = descending_order(graded);

    report.query_index.push_back(q);
    report.query_ap.push_back(ApFromRanks(fine_ranks));
    report.query_h_ap.push_back(HApFromRanks(graded, graded_ranks));
    report.query_ndcg.push_back(NdcgFromRanks(gain, positive_ranks(gain)));
    map_r.push_back(MapAtRFromRanks(fine_ranks));
    asi_v.push_back(AsiFromOrder(graded, graded_order));
    for (int l = 1; l <= depth; ++l) {
      level_ap[l - 1].push_back(per_level_ap(gain, l));
    }
    for (std::size_t i = 0; i < nk; ++i) {
      r_at[i].push_back(RecallFromRanks(fine_ranks, k_list[i], fine.size()));
      tr_at[i].push_back(TrueRecallFromRanks(fine_ranks, k_list[i]));
      const std::size_t pos = std::min(k_list[i], graded.size());
      hr_at[i].push_back(HRecallFromOrder(graded, graded_order, pos));
      if (auto hp = HPrecisionFromOrder(graded, graded_order, pos)) {
        hp_at[i].push_back(*hp);
      }
    }
  }

  report.num_queries = report.query_index.size();
  report.ap = MeanOf(report.query_ap);
  report.h_ap = MeanOf(report.query_h_ap);
  report.ndcg = MeanOf(report.query_ndcg);
  report.map_at_r = MeanOf(map_r);
  report.asi = MeanOf(asi_v);
  for (const auto& v : level_ap) report.level_ap.push_back(MeanOf(v));
  for (std::size_t i = 0; i < nk; ++i) {
    report.recall_at_k.push_back(MeanOf(r_at[i]));
    report.true_recall_at_k.push_back(MeanOf(tr_at[i]));
    report.h_recall_at_k.push_back(MeanOf(hr_at[i]));
    report.h_precision_at_k.push_back(MeanOf(hp_at[i]));
    report.h_precision_count.push_back(hp_at[i].size());
  }
  return report;
}

void write_report_csv(std::ostream& out, const MetricReport& report) {
  const auto old_precision = out.precision(17);
  const std::string fine = std::to_string(report.depth);
  out << "metric,level,k,value\n";
  out << "queries,,," << report.num_queries << '\n';
  out << "skipped_queries,,," << report.skipped_queries << '\n';
  out << "AP," << fine << ",," << report.ap << '\n';
  out << "mAP@R," << fine << ",," << report.map_at_r << '\n';
  for (std::size_t i = 0; i < report.k_list.size(); ++i) {
    out << "R@k," << fine << ',' << report.k_list[i] << ','
        << report.recall_at_k[i] << '\n';
  }
  for (std::size_t i = 0; i < report.k_list.size(); ++i) {
    out << "TR@k," << fine << ',' << report.k_list[i] << ','
        << report.true_recall_at_k[i] << '\n';
  }
  out << "NDCG,,," << report.ndcg << '\n';
  out << "H-AP,,," << report.h_ap << '\n';
  out << "ASI,,," << report.asi << '\n';
  for (std::size_t l = 0; l < report.level_ap.size(); ++l) {
    out << "AP_level," << l + 1 << ",," << report.level_ap[l] << '\n';
  }
  for (std::size_t i = 0; i < report.k_list.size(); ++i) {
    out << "H-R@k,," << report.k_list[i] << ',' << report.h_recall_at_k[i]
        << '\n';
  }
  for (std::size_t i = 0; i < report.k_list.size(); ++i) {
    out << "H-P@k,," << report.k_list[i] << ',' << report.h_precision_at_k[i]
        << '\n';
  }
  out.precision(old_precision);
}

}  // namespace rankbound
