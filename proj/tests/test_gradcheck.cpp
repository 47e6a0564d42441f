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

#include <cmath>

#include "doctest.h"
#include "rankbound/error.hpp"
#include "rankbound/gradcheck.hpp"

using namespace rankbound;

TEST_CASE("relative error with a floor") {
  CHECK(relative_error(1.0, 1.0) == 0.0);
  CHECK(relative_error(1.0, -1.0) == doctest::Approx(2.0));
  CHECK(relative_error(0.0, 1e-9, 1e-6) == doctest::Approx(1e-3));
}

TEST_CASE("sup-ap passes the harness on random problems") {
  std::mt19937_64 rng(51);
  const SurrogateConfig cfg;
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_check_problem(32, 1 + trial % 3, rng);
    const auto r = finite_diff_check(sup_ap_loss, p, cfg, 1e-6);
    CHECK(r.max_rel_error < 1e-4);
    CHECK(r.checked + r.excluded == p.size());
  }
}

TEST_CASE("saturated pairs with rho = 0 give a zero gradient on both sides") {
  SurrogateConfig cfg;
  cfg.rho = 0.0;
  const std::vector<int> labels = {1, 0, 1, 0};
  // Every pair is more than 0.3 apart, beyond both sigmoid regimes.
  const auto p = RankingProblem::Binary({0.9, -0.9, 0.2, 0.55}, labels);
  const std::vector<RankingProblem> batch{p};
  const auto loss = sup_ap_loss(batch, cfg);
  for (double g : loss.grad[0]) CHECK(std::abs(g) < 1e-12);
  const auto r = finite_diff_check(sup_ap_loss, p, cfg, 1e-6);
  CHECK(r.max_rel_error < 1e-4);
}

TEST_CASE("a sign-flipped gradient is detected") {
  std::mt19937_64 rng(52);
  const SurrogateConfig cfg;
  const LossFn broken = [](std::span<const RankingProblem> ps,
                           const SurrogateConfig& c) {
    LossResult r = sup_ap_loss(ps, c);
    for (auto& row : r.grad) {
      for (auto& g : row) g = -g;
    }
    return r;
  };
  const auto p = random_check_problem(32, 2, rng);
  const auto r = finite_diff_check(broken, p, cfg, 1e-6);
  CHECK(r.max_rel_error == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("coordinates next to a kink are excluded") {
  const SurrogateConfig cfg;
  const std::vector<int> labels = {1, 0, 0};
  const double d = cfg.delta();
  const auto p = RankingProblem::Binary({0.0, d, 0.5}, labels);
  const auto r = finite_diff_check(sup_ap_loss, p, cfg, 1e-6);
  CHECK(r.excluded == 2);
  CHECK(r.checked == 1);
}

TEST_CASE("flat harness on a smooth function") {
  const auto f = [](const std::vector<double>& x) {
    return std::sin(x[0]) * x[1] + x[1] * x[1];
  };
  const std::vector<double> x = {0.3, -1.2};
  const std::vector<double> g = {std::cos(0.3) * -1.2, std::sin(0.3) - 2.4};
  CHECK(finite_diff_check_flat(f, x, g, 1e-6).max_rel_error < 1e-8);
  const auto skipped =
      finite_diff_check_flat(f, x, g, 1e-6, [](std::size_t i) { return i == 1; });
  CHECK(skipped.excluded == 1);
  CHECK_THROWS_AS(finite_diff_check_flat(f, x, {1.0}, 1e-6), Error);
  CHECK_THROWS_AS(finite_diff_check_flat(f, x, g, 0.0), Error);
}

TEST_CASE("random check problems have a fine positive") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const int depth = 1 + trial % 3;
    const auto p = random_check_problem(1 + trial % 10, depth, rng);
    CHECK(p.num_at_least(depth) >= 1);
  }
  CHECK_THROWS_AS(random_check_problem(0, 1, rng), Error);
}
