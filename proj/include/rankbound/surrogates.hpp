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

#ifndef RANKBOUND_SURROGATES_HPP_
#define RANKBOUND_SURROGATES_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rankbound/ranking.hpp"

namespace rankbound {

// Hyper-parameters of the smooth rank surrogate and its losses.
struct SurrogateConfig {
  double tau = 0.01;       // sigmoid temperature
  double rho = 100.0;      // slope of the linear regime beyond delta
  double epsilon = 1e-2;   // sigmoid saturation level, defines delta
  double tau_star = 0.01;  // outer sigmoid temperature of the recall loss
  std::vector<std::size_t> k_list = {1, 2, 4, 8};

  // delta = tau * ln((1 - eps) / eps); sigma(delta / tau) = 1 - eps.
  double delta() const;
  void Validate() const;
};

// Loss value and its gradient with respect to each problem's scores
// (grad[i][j] = d loss / d s_j of problem i).
struct LossResult {
  double value = 0.0;
  std::vector<std::vector<double>> grad;
};

double sigmoid(double x);

// Upper bound of the Heaviside step:
//   sigma(t/tau)                          t < 0
//   sigma(t/tau) + 0.5                    0 <= t <= delta
//   rho (t - delta) + sigma(delta/tau) + 0.5   t > delta
double h_minus(double t, const SurrogateConfig& cfg);
double h_minus_prime(double t, const SurrogateConfig& cfg);

struct SmoothRank {
  double value = 0.0;
  std::vector<double> grad;  // d value / d s_j
};

// sum over lower-relevance j of h_minus(s_j - s_k).
SmoothRank smooth_rank_minus(const RankingProblem& problem, std::size_t k,
                             const SurrogateConfig& cfg);

// 1 - mean_i AP_s(i) where the negative rank is smoothed; the hard rank+
// is held constant in the gradient. Graded problems are binarized (rel > 0).
LossResult sup_ap_loss(std::span<const RankingProblem> problems,
                       const SurrogateConfig& cfg);
// Mean over cfg.k_list of the smoothed recall@k loss (binary relevance).
LossResult sup_rk_loss(std::span<const RankingProblem> problems,
                       const SurrogateConfig& cfg);
LossResult sup_hap_loss(std::span<const RankingProblem> problems,
                        const SurrogateConfig& cfg);
// Uses the problems' relevances as gains.
LossResult sup_ndcg_loss(std::span<const RankingProblem> problems,
                         const SurrogateConfig& cfg);
// Sigmoid-smoothed AP (both rank terms smoothed with temperature tau).
LossResult sigmoid_rank_baseline(std::span<const RankingProblem> problems,
                                 const SurrogateConfig& cfg);

enum class SurrogateKind { kSupAp, kSupRk, kSupHap, kSupNdcg, kSmoothAp };

SurrogateKind parse_surrogate_kind(const std::string& name);
std::string to_string(SurrogateKind kind);

using LossFn = std::function<LossResult(std::span<const RankingProblem>,
                                        const SurrogateConfig&)>;
LossFn surrogate_loss(SurrogateKind kind);

}  // namespace rankbound

#endif  // RANKBOUND_SURROGATES_HPP_
