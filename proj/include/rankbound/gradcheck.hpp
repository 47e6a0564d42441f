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

#ifndef RANKBOUND_GRADCHECK_HPP_
#define RANKBOUND_GRADCHECK_HPP_

#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "rankbound/ranking.hpp"
#include "rankbound/surrogates.hpp"

namespace rankbound {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;   // coordinates compared
  std::size_t excluded = 0;  // coordinates skipped near a kink
};

// Relative error |a - f| / max(|a|, |f|, floor) of one coordinate.
double relative_error(double analytic, double numeric, double floor = 1e-6);

// Central-difference check of d loss / d scores on a single problem. A
// coordinate is skipped when any pairwise score difference involving it lies
// within 10 h of a kink of the step surrogate (t = 0 or t = delta).
GradCheckResult finite_diff_check(const LossFn& loss,
                                  const RankingProblem& problem,
                                  const SurrogateConfig& cfg, double h = 1e-6);

// Generic check of a scalar function of a flat parameter vector. Errors are
// relative_error with floor max(1e-5, 1e-3 * max |analytic|).
// `skip`, when set, excludes coordinates from the comparison.
GradCheckResult finite_diff_check_flat(
    const std::function<double(const std::vector<double>&)>& value,
    const std::vector<double>& point, const std::vector<double>& analytic,
    double h, const std::function<bool(std::size_t)>& skip = {});

// Random problem for gradient checks: scores uniform in [-1, 1], levels
// uniform in 0..depth with at least one instance at level `depth`, relevance
// from the hierarchical rule with alpha = 1 (binary when depth = 1).
RankingProblem random_check_problem(std::size_t n, int depth,
                                    std::mt19937_64& rng);

}  // namespace rankbound

#endif  // RANKBOUND_GRADCHECK_HPP_
