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

#include "rankbound/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "rankbound/error.hpp"
#include "rankbound/relevance.hpp"

namespace rankbound {
namespace {

constexpr double kAbsoluteFloor = 1e-5;
constexpr double kScaleFloor = 1e-3;

}  // namespace

double relative_error(double analytic, double numeric, double floor) {
  const double scale =
      std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / scale;
}

GradCheckResult finite_diff_check_flat(
    const std::function<double(const std::vector<double>&)>& value,
    const std::vector<double>& point, const std::vector<double>& analytic,
    double h, const std::function<bool(std::size_t)>& skip) {
  if (!(h > 0.0)) throw Error("finite difference step must be positive");
  if (analytic.size() != point.size()) {
    throw Error("gradient and point differ in length");
  }
  // Coordinates far below the largest gradient are compared on that scale;
  // central differences cannot resolve them more finely.
  double scale = 0.0;
  for (double g : analytic) scale = std::max(scale, std::abs(g));
  const double floor = std::max(kAbsoluteFloor, kScaleFloor * scale);
  GradCheckResult result;
  std::vector<double> x = point;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (skip && skip(i)) {
      ++result.excluded;
      continue;
    }
    x[i] = point[i] + h;
    const double up = value(x);
    x[i] = point[i] - h;
    const double down = value(x);
    x[i] = point[i];
    const double numeric = (up - down) / (2.0 * h);
    result.max_rel_error =
        std::max(result.max_rel_error, relative_error(analytic[i], numeric, floor));
    ++result.checked;
  }
  return result;
}

GradCheckResult finite_diff_check(const LossFn& loss,
                                  const RankingProblem& problem,
                                  const SurrogateConfig& cfg, double h) {
  const std::vector<RankingProblem> batch{problem};
  const LossResult analytic = loss(batch, cfg);
  const double delta = cfg.delta();
  const double margin = 10.0 * h;
  const auto& scores = problem.scores();
  auto near_kink = [&](std::size_t i) {
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (j == i) continue;
      const double t = std::abs(scores[i] - scores[j]);
      if (t < margin || std::abs(t - delta) < margin) return true;
    }
    return false;
  };
  auto value = [&](const std::vector<double>& s) {
    const std::vector<RankingProblem> moved{problem.WithScores(s)};
    return loss(moved, cfg).value;
  };
  return finite_diff_check_flat(value, scores, analytic.grad.at(0), h,
                                near_kink);
}

RankingProblem random_check_problem(std::size_t n, int depth,
                                    std::mt19937_64& rng) {
  if (n < 1 || depth < 1) throw Error("problem needs n >= 1 and depth >= 1");
  std::uniform_real_distribution<double> score(-1.0, 1.0);
  std::uniform_int_distribution<int> level(0, depth);
  std::vector<double> scores(n);
  std::vector<int> levels(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = score(rng);
    levels[i] = level(rng);
  }
  levels[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] = depth;
  const LevelPartition partition = partition_from_levels(levels, depth);
  return RankingProblem::WithLevels(std::move(scores),
                                    hierarchical_relevance(partition, 1.0),
                                    std::move(levels), depth);
}

}  // namespace rankbound
