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

#include "rankbound/surrogates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rankbound/error.hpp"

namespace rankbound {
namespace {

struct ValueSlope {
  double value;
  double slope;
};

ValueSlope HMinusWithSlope(double t, const SurrogateConfig& cfg) {
  const double delta = cfg.delta();
  if (t > delta) {
    return {cfg.rho * (t - delta) + sigmoid(delta / cfg.tau) + 0.5, cfg.rho};
  }
  const double s = sigmoid(t / cfg.tau);
  const double slope = s * (1.0 - s) / cfg.tau;
  return {t >= 0.0 ? s + 0.5 : s, slope};
}

// Adds `coeff` times the gradient of rank_s^-(k) to `grad` and returns the
// value of rank_s^-(k). Lower relevance is taken from `problem`.
double AccumulateSmoothRank(const RankingProblem& problem, std::size_t k,
                            const SurrogateConfig& cfg, double coeff,
                            std::vector<double>* grad) {
  const double rel_k = problem.relevance(k);
  const double s_k = problem.score(k);
  double value = 0.0;
  double self = 0.0;
  for (std::size_t j = 0; j < problem.size(); ++j) {
    if (problem.relevance(j) >= rel_k) continue;
    const ValueSlope h = HMinusWithSlope(problem.score(j) - s_k, cfg);
    value += h.value;
    if (grad != nullptr) {
      (*grad)[j] += coeff * h.slope;
      self += h.slope;
    }
  }
  if (grad != nullptr) (*grad)[k] -= coeff * self;
  return value;
}

void RequirePositives(const RankingProblem& problem, const char* loss) {
  if (problem.num_positives() == 0) {
    throw Error(std::string(loss) + ": empty positive set");
  }
}

void RequireNonEmpty(std::span<const RankingProblem> problems) {
  if (problems.empty()) throw Error("loss needs at least one ranking problem");
}

// Shared driver for losses of the form 1 - mean_i sum_k term(a_k, r_k) where
// a_k is a hard constant and r_k = rank_s^-(k). `term` returns the value of
// positive `p` of problem `i` and its derivative with respect to r_k.
template <typename Term>
LossResult SmoothRankLoss(std::span<const RankingProblem> problems,
                          const SurrogateConfig& cfg, Term&& term) {
  RequireNonEmpty(problems);
  cfg.Validate();
  const double inv_m = 1.0 / static_cast<double>(problems.size());
  LossResult result;
  result.grad.reserve(problems.size());
  double metric_sum = 0.0;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    const RankingProblem& problem = problems[i];
    const PositiveRanks ranks = positive_ranks(problem);
    std::vector<double> grad(problem.size(), 0.0);
    // First pass collects rank_s^-, second pass scatters the gradient.
    std::vector<double> smooth(ranks.index.size());
    for (std::size_t p = 0; p < ranks.index.size(); ++p) {
      smooth[p] = AccumulateSmoothRank(problem, ranks.index[p], cfg, 0.0,
                                       nullptr);
    }
    double metric = 0.0;
    for (std::size_t p = 0; p < ranks.index.size(); ++p) {
      const ValueSlope t = term(i, problem, ranks, p, smooth[p]);
      metric += t.value;
      // loss = 1 - mean(metric): d loss / d r = -slope / M.
      AccumulateSmoothRank(problem, ranks.index[p], cfg, -t.slope * inv_m,
                           &grad);
    }
    metric_sum += metric;
    result.grad.push_back(std::move(grad));
  }
  result.value = 1.0 - metric_sum * inv_m;
  return result;
}

}  // namespace

double SurrogateConfig::delta() const {
  return tau * std::log((1.0 - epsilon) / epsilon);
}

void SurrogateConfig::Validate() const {
  if (!(tau > 0.0)) throw Error("tau must be positive");
  if (!(rho >= 0.0)) throw Error("rho must be non-negative");
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw Error("epsilon must lie in (0, 0.5)");
  }
  if (!(tau_star > 0.0)) throw Error("tau_star must be positive");
  for (std::size_t k : k_list) {
    if (k == 0) throw Error("recall levels must be >= 1");
  }
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double h_minus(double t, const SurrogateConfig& cfg) {
  return HMinusWithSlope(t, cfg).value;
}

double h_minus_prime(double t, const SurrogateConfig& cfg) {
  return HMinusWithSlope(t, cfg).slope;
}

SmoothRank smooth_rank_minus(const RankingProblem& problem, std::size_t k,
                             const SurrogateConfig& cfg) {
  if (k >= problem.size() || !problem.is_positive(k)) {
    throw Error("smooth_rank_minus: instance is not a positive");
  }
  SmoothRank out;
  out.grad.assign(problem.size(), 0.0);
  out.value = AccumulateSmoothRank(problem, k, cfg, 1.0, &out.grad);
  return out;
}

LossResult sup_ap_loss(std::span<const RankingProblem> problems,
                       const SurrogateConfig& cfg) {
  std::vector<RankingProblem> binary;
  binary.reserve(problems.size());
  for (const auto& problem : problems) {
    RequirePositives(problem, "sup_ap_loss");
    binary.push_back(problem.Binarized(1));
  }
  return SmoothRankLoss(
      binary, cfg,
      [](std::size_t, const RankingProblem&, const PositiveRanks& ranks,
         std::size_t p, double smooth) {
        const double n_pos = static_cast<double>(ranks.index.size());
        const double a = ranks.rank_plus[p];
        const double denom = a + smooth;
        return ValueSlope{a / denom / n_pos, -a / (denom * denom) / n_pos};
      });
}

LossResult sup_rk_loss(std::span<const RankingProblem> problems,
                       const SurrogateConfig& cfg) {
  if (cfg.k_list.empty()) throw Error("sup_rk_loss: empty recall level list");
  std::vector<RankingProblem> binary;
  binary.reserve(problems.size());
  for (const auto& problem : problems) {
    RequirePositives(problem, "sup_rk_loss");
    binary.push_back(problem.Binarized(1));
  }
  const double inv_levels = 1.0 / static_cast<double>(cfg.k_list.size());
  // Per query: mean_k [1 - (1/min(P,k)) sum_p sigma((k - rank_p)/tau*)].
  // The driver computes 1 - mean_i sum_p term, so term folds the 1/|K|
  // average over recall levels.
  return SmoothRankLoss(
      binary, cfg,
      [&cfg, inv_levels](std::size_t, const RankingProblem&,
                         const PositiveRanks& ranks, std::size_t p,
                         double smooth) {
        const double n_pos = static_cast<double>(ranks.index.size());
        const double rank = ranks.rank_plus[p] + smooth;
        double value = 0.0, slope = 0.0;
        for (std::size_t k : cfg.k_list) {
          const double kk = static_cast<double>(k);
          const double norm = std::min(n_pos, kk);
          const double s = sigmoid((kk - rank) / cfg.tau_star);
          value += s / norm;
          slope -= s * (1.0 - s) / cfg.tau_star / norm;
        }
        return ValueSlope{value * inv_levels, slope * inv_levels};
      });
}

LossResult sup_hap_loss(std::span<const RankingProblem> problems,
                        const SurrogateConfig& cfg) {
  for (const auto& problem : problems) RequirePositives(problem, "sup_hap_loss");
  return SmoothRankLoss(
      problems, cfg,
      [](std::size_t, const RankingProblem& problem, const PositiveRanks& ranks,
         std::size_t p, double smooth) {
        const double norm = problem.relevance_sum();
        const double denom = ranks.rank_plus[p] + smooth;
        const double h = ranks.h_rank_plus[p];
        return ValueSlope{h / denom / norm, -h / (denom * denom) / norm};
      });
}

LossResult sup_ndcg_loss(std::span<const RankingProblem> problems,
                         const SurrogateConfig& cfg) {
  std::vector<double> ideal_dcg;
  for (const auto& problem : problems) {
    std::vector<double> ideal = problem.relevance();
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    double idcg = 0.0;
    for (std::size_t i = 0; i < ideal.size() && ideal[i] > 0.0; ++i) {
      idcg += ideal[i] / std::log2(2.0 + static_cast<double>(i));
    }
    if (!(idcg > 0.0)) throw Error("sup_ndcg_loss: ideal DCG is zero");
    ideal_dcg.push_back(idcg);
  }
  return SmoothRankLoss(
      problems, cfg,
      [&ideal_dcg](std::size_t i, const RankingProblem& problem,
                   const PositiveRanks& ranks, std::size_t p, double smooth) {
        const double idcg = ideal_dcg[i];
        const double rel = problem.relevance(ranks.index[p]);
        const double x = 1.0 + ranks.rank_plus[p] + smooth;
        const double log_x = std::log2(x);
        const double slope =
            -rel / (x * std::numbers::ln2 * log_x * log_x) / idcg;
        return ValueSlope{rel / log_x / idcg, slope};
      });
}

LossResult sigmoid_rank_baseline(std::span<const RankingProblem> problems,
                                 const SurrogateConfig& cfg) {
  RequireNonEmpty(problems);
  cfg.Validate();
  const double inv_m = 1.0 / static_cast<double>(problems.size());
  LossResult result;
  double metric_sum = 0.0;
  for (const RankingProblem& problem : problems) {
    RequirePositives(problem, "sigmoid_rank_baseline");
    const std::size_t n = problem.size();
    std::vector<double> grad(n, 0.0);
    std::vector<std::size_t> positives;
    for (std::size_t k = 0; k < n; ++k) {
      if (problem.is_positive(k)) positives.push_back(k);
    }
    const double inv_p = 1.0 / static_cast<double>(positives.size());
    double metric = 0.0;
    std::vector<double> sig(n), slope(n);
    for (std::size_t k : positives) {
      double plus = 1.0, minus = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k) continue;
        sig[j] = sigmoid((problem.score(j) - problem.score(k)) / cfg.tau);
        slope[j] = sig[j] * (1.0 - sig[j]) / cfg.tau;
        (problem.is_positive(j) ? plus : minus) += sig[j];
      }
      const double denom = plus + minus;
      metric += plus / denom * inv_p;
      // loss = 1 - mean(metric).
      const double c_plus = -minus / (denom * denom) * inv_p * inv_m;
      const double c_minus = plus / (denom * denom) * inv_p * inv_m;
      double self = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k) continue;
        const double c = (problem.is_positive(j) ? c_plus : c_minus) * slope[j];
        grad[j] += c;
        self += c;
      }
      grad[k] -= self;
    }
    metric_sum += metric;
    result.grad.push_back(std::move(grad));
  }
  result.value = 1.0 - metric_sum * inv_m;
  return result;
}

SurrogateKind parse_surrogate_kind(const std::string& name) {
  if (name == "sup-ap") return SurrogateKind::kSupAp;
  if (name == "sup-rk") return SurrogateKind::kSupRk;
  if (name == "sup-hap") return SurrogateKind::kSupHap;
  if (name == "sup-ndcg") return SurrogateKind::kSupNdcg;
  if (name == "smooth-ap" || name == "sigmoid") return SurrogateKind::kSmoothAp;
  throw Error("unknown loss: " + name +
              " (expected sup-ap, sup-rk, sup-hap, sup-ndcg or smooth-ap)");
}

std::string to_string(SurrogateKind kind) {
  switch (kind) {
    case SurrogateKind::kSupAp: return "sup-ap";
    case SurrogateKind::kSupRk: return "sup-rk";
    case SurrogateKind::kSupHap: return "sup-hap";
    case SurrogateKind::kSupNdcg: return "sup-ndcg";
    case SurrogateKind::kSmoothAp: return "smooth-ap";
  }
  return "?";
}

LossFn surrogate_loss(SurrogateKind kind) {
  switch (kind) {
    case SurrogateKind::kSupAp: return sup_ap_loss;
    case SurrogateKind::kSupRk: return sup_rk_loss;
    case SurrogateKind::kSupHap: return sup_hap_loss;
    case SurrogateKind::kSupNdcg: return sup_ndcg_loss;
    case SurrogateKind::kSmoothAp: return sigmoid_rank_baseline;
  }
  throw Error("unknown loss kind");
}

}  // namespace rankbound
