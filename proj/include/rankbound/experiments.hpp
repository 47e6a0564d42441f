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

#ifndef RANKBOUND_EXPERIMENTS_HPP_
#define RANKBOUND_EXPERIMENTS_HPP_

#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rankbound/config.hpp"

namespace rankbound {

struct SuiteConfig {
  std::string experiment;
  RunConfig base;  // data source and training setup shared by every cell
  int seeds = 3;   // training seeds base.train.seed, +1, ...
  std::vector<int> batch_sizes = {32, 64, 128, 256};
  std::vector<double> alphas = {1.0, 2.0, 3.0, 5.0};
  std::vector<double> lambdas = {0.0, 0.1, 0.5, 0.9, 1.0};
  std::vector<double> rhos = {0.0, 1.0, 10.0, 100.0, 1000.0};

  void Validate() const;
};

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for a single value
  std::size_t n = 0;
};
Summary summarize(std::span<const double> values);

// One grid cell: its setting and the summarized metrics.
struct SuiteRow {
  std::vector<std::pair<std::string, std::string>> setting;
  std::vector<std::pair<std::string, Summary>> values;
};

struct SuiteTable {
  std::string experiment;
  std::vector<SuiteRow> rows;

  // Summary of `metric` in the first row whose setting matches all pairs.
  const Summary& Find(
      const std::vector<std::pair<std::string, std::string>>& setting,
      const std::string& metric) const;
};

// ablation, dg-vs-batchsize, alpha-sweep, lambda-sweep, rho-sweep.
const std::vector<std::string>& experiment_names();

// Called after every finished training run with a short description.
using ProgressFn = std::function<void(const std::string&)>;

// Throws Error on an unknown experiment name.
SuiteTable run_experiment_suite(const SuiteConfig& cfg,
                                const ProgressFn& progress = nullptr);

// Decomposability gap of AP measured on embeddings. For every query,
// K = min(|positives|, floor((N - 1) / B)) batches of size B are formed from
// all of its positives, dealt round-robin, and randomly drawn negatives, so
// that each batch holds at least one positive. Queries with no positive or
// too few negatives are skipped.
struct DgMeasurement {
  std::size_t batch_size = 0;
  std::size_t queries = 0;
  std::size_t skipped = 0;
  double gap = 0.0;
  double plain_bound = 0.0;
  double calibrated_bound = 0.0;
  double full_ap = 0.0;  // AP over the union of the batches
};
DgMeasurement measure_dg(const Eigen::MatrixXd& embeddings,
                         const LabelTable& labels, std::size_t batch_size,
                         const DecompConfig& decomp, std::mt19937_64& rng);

// Setting columns, then `<metric>_mean,<metric>_sd` per metric, then `seeds`.
void write_suite_csv(std::ostream& out, const SuiteTable& table);

}  // namespace rankbound

#endif  // RANKBOUND_EXPERIMENTS_HPP_
