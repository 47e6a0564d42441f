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
#include "oracles.hpp"
#include "rankbound/decomposability.hpp"
#include "rankbound/error.hpp"
#include "rankbound/gradcheck.hpp"
#include "rankbound/metrics.hpp"

using namespace rankbound;

namespace {

// Batches laid out one after the other in score order, each batch with its
// positives above its negatives, so every batch AP is 1.
RankingProblem Juxtaposed(const std::vector<std::size_t>& pos,
                          const std::vector<std::size_t>& neg,
                          BatchSplit* split) {
  std::vector<double> scores;
  std::vector<int> labels;
  double s = 1.0;
  for (std::size_t b = 0; b < pos.size(); ++b) {
    std::vector<std::size_t> batch;
    for (std::size_t i = 0; i < pos[b] + neg[b]; ++i) {
      batch.push_back(scores.size());
      labels.push_back(i < pos[b]);
      scores.push_back(s);
      s -= 1.0;
    }
    split->batches.push_back(batch);
  }
  return RankingProblem::Binary(scores, labels);
}

}  // namespace

TEST_CASE("a single batch has no gap") {
  oracle::ProblemGen gen(61);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = gen.binary(gen.size(1, 30), trial % 2);
    const auto gap =
        decomposability_gap(average_precision, p, contiguous_split(p.size(), p.size()));
    REQUIRE(gap.has_value());
    CHECK(*gap == 0.0);
  }
}

TEST_CASE("two juxtaposed batches give a gap of one sixth") {
  const std::vector<int> labels = {1, 0, 1, 0};
  const auto p = RankingProblem::Binary({4, 3, 2, 1}, labels);
  const auto gap = decomposability_gap(average_precision, p, contiguous_split(4, 2));
  CHECK(gap.value() == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  const std::vector<std::size_t> ones = {1, 1};
  CHECK(dg_upper_bound_plain(ones, ones) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("calibrated scores have no gap") {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t b = 2 + trial % 4, k = 2 + trial % 3;
    std::vector<double> scores;
    std::vector<int> labels;
    std::uniform_real_distribution<double> hi(0.5, 1.0), lo(-1.0, 0.4);
    for (std::size_t i = 0; i < b * k; ++i) {
      labels.push_back(i % b == 0 || rng() % 3 == 0);
      scores.push_back(labels.back() ? hi(rng) : lo(rng));
    }
    const auto p = RankingProblem::Binary(scores, labels);
    // Positives sit at every b-th index, so contiguous batches all hold one.
    const auto gap = decomposability_gap(average_precision, p, contiguous_split(b * k, b));
    CHECK(gap.value() == 0.0);
  }
}

TEST_CASE("a batch without positives yields no gap value") {
  const std::vector<int> labels = {1, 1, 0, 0};
  const auto p = RankingProblem::Binary({4, 3, 2, 1}, labels);
  CHECK_FALSE(decomposability_gap(average_precision, p, contiguous_split(4, 2)));
}

TEST_CASE("splits are equal-size disjoint covers") {
  std::mt19937_64 rng(63);
  const auto split = random_split(12, 4, rng);
  CHECK(split.batches.size() == 3);
  CHECK_NOTHROW(split.Validate(12));
  CHECK_THROWS_AS(contiguous_split(10, 4), Error);
  BatchSplit overlap{{{0, 1}, {1, 2}}};
  CHECK_THROWS_AS(overlap.Validate(4), Error);
  BatchSplit ragged{{{0, 1}, {2}}};
  CHECK_THROWS_AS(ragged.Validate(3), Error);
}

TEST_CASE("plain bound examples") {
  const std::vector<std::size_t> p1 = {3}, n1 = {5};
  CHECK(dg_upper_bound_plain(p1, n1) == 0.0);
  const std::vector<std::size_t> p2 = {1, 2}, n2 = {1};
  CHECK_THROWS_AS(dg_upper_bound_plain(p2, n2), Error);
  const std::vector<std::size_t> zero = {0, 0};
  CHECK_THROWS_AS(dg_upper_bound_plain(zero, zero), Error);
}

TEST_CASE("measured gap equals the plain bound on juxtaposed splits") {
  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + rng() % 5, size = 2 + rng() % 6;
    std::vector<std::size_t> pos(k), neg(k);
    for (std::size_t b = 0; b < k; ++b) {
      pos[b] = 1 + rng() % (size - 1);
      neg[b] = size - pos[b];
    }
    BatchSplit split;
    const auto p = Juxtaposed(pos, neg, &split);
    const auto gap = decomposability_gap(average_precision, p, split);
    const double bound = dg_upper_bound_plain(pos, neg);
    CHECK(gap.value() <= bound + 1e-12);
    CHECK(gap.value() == doctest::Approx(bound).epsilon(1e-12));
  }
}

TEST_CASE("calibrated bound limits") {
  std::mt19937_64 rng(65);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + rng() % 5, size = 2 + rng() % 6;
    std::vector<BatchCalibration> good(k), bad(k);
    std::vector<std::size_t> pos(k), neg(k);
    for (std::size_t b = 0; b < k; ++b) {
      pos[b] = 1 + rng() % (size - 1);
      neg[b] = size - pos[b];
      good[b] = {pos[b], 0, neg[b], 0};
      bad[b] = {0, pos[b], 0, neg[b]};
    }
    CHECK(dg_upper_bound_calibrated(good) == doctest::Approx(0.0));
    CHECK(dg_upper_bound_calibrated(bad) ==
          doctest::Approx(dg_upper_bound_plain(pos, neg)).epsilon(1e-12));
  }
}

TEST_CASE("calibrated bound is not pointwise below the plain bound") {
  // An early batch with a violating positive and violating negatives.
  const std::vector<BatchCalibration> counts = {{0, 1, 0, 3}, {1, 0, 3, 0}};
  const std::vector<std::size_t> pos = {1, 1}, neg = {3, 3};
  CHECK(dg_upper_bound_calibrated(counts) == doctest::Approx(0.375));
  CHECK(dg_upper_bound_plain(pos, neg) == doctest::Approx(0.3));
  const std::vector<BatchCalibration> uneven = {{1, 0, 1, 0}, {1, 0, 2, 0}};
  CHECK_THROWS_AS(dg_upper_bound_calibrated(uneven), Error);
}

TEST_CASE("calibration counts and zero pair loss") {
  const std::vector<double> s = {0.95, 0.8, 0.5, 0.7};
  const std::vector<int> y = {1, 1, 0, 0};
  const auto c = calibration_counts(s, y, 0.9, 0.6);
  CHECK(c.good_pos == 1);
  CHECK(c.bad_pos == 1);
  CHECK(c.good_neg == 1);
  CHECK(c.bad_neg == 1);

  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int zero_batches = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> scores(4);
    std::vector<int> labels = {1, 0, 0, 0};
    for (auto& x : scores) x = u(rng);
    scores[0] = 0.8 + 0.2 * std::abs(u(rng));
    const auto loss = l_dg(scores, labels, 0.9, 0.6);
    if (loss.value == 0.0) {
      ++zero_batches;
      const auto counts = calibration_counts(scores, labels, 0.9, 0.6);
      CHECK(counts.bad_pos == 0);
      CHECK(counts.bad_neg == 0);
    }
  }
  CHECK(zero_batches > 0);
}

TEST_CASE("pair loss example and gradient") {
  const std::vector<double> s = {0.95, 0.8, 0.5, 0.7};
  const std::vector<int> y = {1, 1, 0, 0};
  const auto r = l_dg(s, y, 0.9, 0.6);
  CHECK(r.value == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(r.grad[0] == std::vector<double>{0.0, -0.5, 0.0, 0.5});

  const std::vector<double> ok = {0.95, 0.92, 0.5, 0.1};
  CHECK(l_dg(ok, y, 0.9, 0.6).value == 0.0);

  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> scores(10);
    std::vector<int> labels(10);
    for (std::size_t i = 0; i < 10; ++i) {
      scores[i] = u(rng);
      labels[i] = i < 4;
    }
    const auto a = l_dg(scores, labels, 0.9, 0.6);
    const auto f = [&](const std::vector<double>& x) {
      return l_dg(x, labels, 0.9, 0.6).value;
    };
    const auto near_hinge = [&](std::size_t i) {
      return std::abs(scores[i] - 0.9) < 1e-4 || std::abs(scores[i] - 0.6) < 1e-4;
    };
    CHECK(finite_diff_check_flat(f, scores, a.grad[0], 1e-6, near_hinge)
              .max_rel_error < 1e-4);
  }
  const std::vector<int> all_pos = {1, 1};
  CHECK_THROWS_AS(l_dg(std::vector<double>{0.1, 0.2}, all_pos, 0.9, 0.6), Error);
}

TEST_CASE("pair loss over problems averages") {
  const std::vector<int> y = {1, 1, 0, 0};
  const std::vector<RankingProblem> ps = {
      RankingProblem::Binary({0.95, 0.8, 0.5, 0.7}, y),
      RankingProblem::Binary({0.95, 0.95, 0.5, 0.5}, y)};
  const auto r = l_dg_batch(ps, 0.9, 0.6);
  CHECK(r.value == doctest::Approx(0.05));
  CHECK(r.grad[0][1] == doctest::Approx(-0.25));
  CHECK(r.grad[1][1] == 0.0);
}

TEST_CASE("proxy loss examples") {
  Eigen::MatrixXd one(1, 2);
  one << 1, 0;
  const std::vector<int> cls0 = {0};
  CHECK(l_dg_star(one, one, cls0, 0.05).value == doctest::Approx(0.0).epsilon(1e-15));

  Eigen::MatrixXd proxies(2, 2);
  proxies << 1, 0, 0, 1;
  const auto r = l_dg_star(one, proxies, cls0, 1.0);
  CHECK(r.value == doctest::Approx(std::log1p(std::exp(-1.0))).epsilon(1e-15));
  CHECK(r.value == doctest::Approx(0.3133).epsilon(1e-4));
  const std::vector<int> bad = {2};
  CHECK_THROWS_AS(l_dg_star(one, proxies, bad, 1.0), Error);
  CHECK_THROWS_AS(l_dg_star(one, proxies, cls0, 0.0), Error);
}

TEST_CASE("proxy loss gradients match finite differences") {
  std::mt19937_64 rng(68);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 6, d = 4, c = 5;
    Eigen::MatrixXd e(n, d), p(c, d);
    for (int i = 0; i < n * d; ++i) e.data()[i] = 0.5 * g(rng);
    for (int i = 0; i < c * d; ++i) p.data()[i] = 0.5 * g(rng);
    std::vector<int> ids(n);
    for (auto& y : ids) y = static_cast<int>(rng() % c);
    const double eta = trial % 2 ? 0.05 : 1.0;
    const auto r = l_dg_star(e, p, ids, eta);

    std::vector<double> point(e.data(), e.data() + e.size());
    point.insert(point.end(), p.data(), p.data() + p.size());
    std::vector<double> analytic(r.grad_embeddings.data(),
                                 r.grad_embeddings.data() + r.grad_embeddings.size());
    analytic.insert(analytic.end(), r.grad_proxies.data(),
                    r.grad_proxies.data() + r.grad_proxies.size());
    const auto f = [&](const std::vector<double>& x) {
      const Eigen::MatrixXd ee = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, d);
      const Eigen::MatrixXd pp = Eigen::Map<const Eigen::MatrixXd>(x.data() + n * d, c, d);
      return l_dg_star(ee, pp, ids, eta).value;
    };
    CHECK(finite_diff_check_flat(f, point, analytic, 1e-6).max_rel_error < 1e-5);
  }
}

TEST_CASE("combined loss endpoints") {
  LossResult a{0.7, {{1.0, -2.0}}};
  LossResult b{0.2, {{0.5, 0.5}}};
  const auto zero = combined_loss(a, b, 0.0);
  CHECK(zero.value == 0.7);
  CHECK(zero.grad == a.grad);
  const auto one = combined_loss(a, b, 1.0);
  CHECK(one.value == 0.2);
  CHECK(one.grad == b.grad);
  const auto mid = combined_loss(a, b, 0.1);
  CHECK(mid.value == doctest::Approx(0.9 * 0.7 + 0.1 * 0.2));
  CHECK(DecompConfig{}.lambda == 0.1);
  CHECK_THROWS_AS(combined_loss(a, b, 1.5), Error);
  LossResult c{0.0, {{1.0}}};
  CHECK_THROWS_AS(combined_loss(a, c, 0.5), Error);
}

TEST_CASE("decomposability names and config") {
  for (auto k : {DgKind::kNone, DgKind::kPair, DgKind::kProxy}) {
    CHECK(parse_dg_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_dg_kind("memory"), Error);
  DecompConfig cfg;
  CHECK_NOTHROW(cfg.Validate());
  cfg.neg_margin = 0.95;
  CHECK_THROWS_AS(cfg.Validate(), Error);
}
