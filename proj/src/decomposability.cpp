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

#include "rankbound/decomposability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rankbound/error.hpp"

namespace rankbound {

void DecompConfig::Validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("lambda must lie in [0, 1]");
  if (!(neg_margin >= -1.0 && neg_margin < pos_margin && pos_margin <= 1.0)) {
    throw Error("margins must satisfy -1 <= neg_margin < pos_margin <= 1");
  }
  if (!(eta > 0.0)) throw Error("eta must be positive");
}

DgKind parse_dg_kind(const std::string& name) {
  if (name == "none") return DgKind::kNone;
  if (name == "pair") return DgKind::kPair;
  if (name == "proxy") return DgKind::kProxy;
  throw Error("unknown decomposability loss: " + name +
              " (expected none, pair or proxy)");
}

std::string to_string(DgKind kind) {
  switch (kind) {
    case DgKind::kNone: return "none";
    case DgKind::kPair: return "pair";
    case DgKind::kProxy: return "proxy";
  }
  return "?";
}

void BatchSplit::Validate(std::size_t n) const {
  if (batches.empty()) throw Error("batch split has no batches");
  const std::size_t size = batches.front().size();
  std::vector<char> seen(n, 0);
  std::size_t total = 0;
  for (const auto& batch : batches) {
    if (batch.size() != size || size == 0) {
      throw Error("batch split: batches must have equal non-zero size");
    }
    for (std::size_t i : batch) {
      if (i >= n || seen[i]) throw Error("batch split is not a disjoint cover");
      seen[i] = 1;
      ++total;
    }
  }
  if (total != n) throw Error("batch split is not a disjoint cover");
}

BatchSplit contiguous_split(std::size_t n, std::size_t batch_size) {
  if (batch_size == 0 || n % batch_size != 0) {
    throw Error("retrieval set size must be a multiple of the batch size");
  }
  BatchSplit split;
  for (std::size_t start = 0; start < n; start += batch_size) {
    std::vector<std::size_t> batch(batch_size);
    std::iota(batch.begin(), batch.end(), start);
    split.batches.push_back(std::move(batch));
  }
  return split;
}

BatchSplit random_split(std::size_t n, std::size_t batch_size,
                        std::mt19937_64& rng) {
  BatchSplit split = contiguous_split(n, batch_size);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (auto& batch : split.batches) {
    for (auto& i : batch) i = perm[i];
  }
  return split;
}

std::optional<double> decomposability_gap(const MetricFn& metric,
                                          const RankingProblem& problem,
                                          const BatchSplit& split) {
  split.Validate(problem.size());
  double batch_mean = 0.0;
  for (const auto& batch : split.batches) {
    const RankingProblem sub = problem.Subset(batch);
    if (sub.num_positives() == 0) return std::nullopt;
    batch_mean += metric(sub);
  }
  batch_mean /= static_cast<double>(split.batches.size());
  return batch_mean - metric(problem);
}

double dg_upper_bound_plain(std::span<const std::size_t> positives,
                            std::span<const std::size_t> negatives) {
  if (positives.size() != negatives.size()) {
    throw Error("per-batch positive and negative counts differ in length");
  }
  const double total = std::accumulate(positives.begin(), positives.end(), 0.0);
  if (total == 0.0) throw Error("dg bound: zero positives overall");
  double pos_before = 0.0, neg_before = 0.0, sum = 0.0;
  for (std::size_t b = 0; b < positives.size(); ++b) {
    for (std::size_t j = 1; j <= positives[b]; ++j) {
      const double above = static_cast<double>(j) + pos_before;
      sum += above / (above + neg_before);
    }
    pos_before += static_cast<double>(positives[b]);
    neg_before += static_cast<double>(negatives[b]);
  }
  return 1.0 - sum / total;
}

double dg_upper_bound_calibrated(std::span<const BatchCalibration> batches) {
  if (batches.empty()) throw Error("dg bound: no batches");
  const std::size_t size =
      batches.front().positives() + batches.front().negatives();
  double total = 0.0;
  for (const auto& b : batches) {
    if (b.positives() + b.negatives() != size) {
      throw Error("inconsistent counts: batches differ in size");
    }
    total += static_cast<double>(b.positives());
  }
  if (total == 0.0) throw Error("dg bound: zero positives overall");

  double good_pos_before = 0.0, bad_neg_before = 0.0;
  double pos_before = 0.0, neg_before = 0.0, sum = 0.0;
  for (const auto& b : batches) {
    // Positives within the margin are preceded by earlier in-margin positives
    // and earlier margin-violating negatives.
    for (std::size_t j = 1; j <= b.good_pos; ++j) {
      const double above = static_cast<double>(j) + good_pos_before;
      sum += above / (above + bad_neg_before);
    }
    // Violating positives come after all earlier batches and the current
    // batch's in-margin positives.
    for (std::size_t j = 1; j <= b.bad_pos; ++j) {
      const double above = static_cast<double>(j + b.good_pos) + pos_before;
      sum += above / (above + neg_before);
    }
    good_pos_before += static_cast<double>(b.good_pos);
    bad_neg_before += static_cast<double>(b.bad_neg);
    pos_before += static_cast<double>(b.positives());
    neg_before += static_cast<double>(b.negatives());
  }
  return 1.0 - sum / total;
}

BatchCalibration calibration_counts(std::span<const double> scores,
                                    std::span<const int> labels,
                                    double pos_margin, double neg_margin) {
  if (scores.size() != labels.size()) {
    throw Error("scores and labels differ in length");
  }
  BatchCalibration counts;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 0) {
      (scores[i] >= pos_margin ? counts.good_pos : counts.bad_pos) += 1;
    } else {
      (scores[i] <= neg_margin ? counts.good_neg : counts.bad_neg) += 1;
    }
  }
  return counts;
}

LossResult l_dg(std::span<const double> scores, std::span<const int> labels,
                double pos_margin, double neg_margin) {
  if (scores.size() != labels.size()) {
    throw Error("scores and labels differ in length");
  }
  const auto n_pos = static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](int y) { return y != 0; }));
  const std::size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0) throw Error("l_dg: empty positive set");
  if (n_neg == 0) throw Error("l_dg: empty negative set");
  const double inv_pos = 1.0 / static_cast<double>(n_pos);
  const double inv_neg = 1.0 / static_cast<double>(n_neg);

  LossResult result;
  result.grad.assign(1, std::vector<double>(scores.size(), 0.0));
  auto& grad = result.grad[0];
  double pos_sum = 0.0, neg_sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 0) {
      if (scores[i] < pos_margin) {
        pos_sum += pos_margin - scores[i];
        grad[i] = -inv_pos;
      }
    } else if (scores[i] > neg_margin) {
      neg_sum += scores[i] - neg_margin;
      grad[i] = inv_neg;
    }
  }
  result.value = pos_sum * inv_pos + neg_sum * inv_neg;
  return result;
}

LossResult l_dg_batch(std::span<const RankingProblem> problems,
                      double pos_margin, double neg_margin) {
  if (problems.empty()) throw Error("loss needs at least one ranking problem");
  const double inv_m = 1.0 / static_cast<double>(problems.size());
  LossResult result;
  for (const auto& problem : problems) {
    std::vector<int> labels(problem.size());
    for (std::size_t k = 0; k < problem.size(); ++k) {
      labels[k] = problem.is_positive(k) ? 1 : 0;
    }
    LossResult one = l_dg(problem.scores(), labels, pos_margin, neg_margin);
    result.value += one.value * inv_m;
    for (double& g : one.grad[0]) g *= inv_m;
    result.grad.push_back(std::move(one.grad[0]));
  }
  return result;
}

ProxyLossResult l_dg_star(const Eigen::MatrixXd& embeddings,
                          const Eigen::MatrixXd& proxies,
                          std::span<const int> class_ids, double eta) {
  if (!(eta > 0.0)) throw Error("eta must be positive");
  const Eigen::Index n = embeddings.rows();
  if (static_cast<std::size_t>(n) != class_ids.size()) {
    throw Error("one class id per embedding required");
  }
  if (n == 0) throw Error("l_dg_star: empty batch");
  if (proxies.cols() != embeddings.cols()) {
    throw Error("dimension mismatch between embeddings and proxies");
  }
  for (int y : class_ids) {
    if (y < 0 || y >= proxies.rows()) {
      throw Error("unknown class id " + std::to_string(y));
    }
  }
  const Eigen::MatrixXd logits = embeddings * proxies.transpose() / eta;
  Eigen::MatrixXd dlogits(n, proxies.rows());
  double value = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double top = logits.row(i).maxCoeff();
    const Eigen::RowVectorXd e = (logits.row(i).array() - top).exp().matrix();
    const double z = e.sum();
    value += std::log(z) + top - logits(i, class_ids[i]);
    dlogits.row(i) = e / z;
    dlogits(i, class_ids[i]) -= 1.0;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  dlogits *= inv_n;
  ProxyLossResult result;
  result.value = value * inv_n;
  result.grad_embeddings = dlogits * proxies / eta;
  result.grad_proxies = dlogits.transpose() * embeddings / eta;
  return result;
}

LossResult combined_loss(const LossResult& surrogate, const LossResult& dg,
                         double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("lambda must lie in [0, 1]");
  if (surrogate.grad.size() != dg.grad.size()) {
    throw Error("dimension mismatch between combined gradients");
  }
  LossResult out;
  out.value = (1.0 - lambda) * surrogate.value + lambda * dg.value;
  out.grad.resize(surrogate.grad.size());
  for (std::size_t i = 0; i < surrogate.grad.size(); ++i) {
    if (surrogate.grad[i].size() != dg.grad[i].size()) {
      throw Error("dimension mismatch between combined gradients");
    }
    out.grad[i].resize(surrogate.grad[i].size());
    for (std::size_t j = 0; j < surrogate.grad[i].size(); ++j) {
      out.grad[i][j] =
          (1.0 - lambda) * surrogate.grad[i][j] + lambda * dg.grad[i][j];
    }
  }
  return out;
}

}  // namespace rankbound
