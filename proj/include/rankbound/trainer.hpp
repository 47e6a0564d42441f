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

#ifndef RANKBOUND_TRAINER_HPP_
#define RANKBOUND_TRAINER_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rankbound/dataset.hpp"
#include "rankbound/decomposability.hpp"
#include "rankbound/encoder.hpp"
#include "rankbound/metrics.hpp"
#include "rankbound/optimizer.hpp"
#include "rankbound/relevance.hpp"
#include "rankbound/surrogates.hpp"

namespace rankbound {

// Which losses make up the training objective.
struct LossSpec {
  SurrogateKind surrogate = SurrogateKind::kSupAp;
  DgKind dg = DgKind::kNone;
  SurrogateConfig surrogate_cfg;
  DecompConfig decomp;
  // Relevance used by sup-hap; sup-ndcg always uses 2^l - 1 gains and the
  // binary losses use fine-level labels.
  RelevanceSpec relevance;
};

struct TrainConfig {
  EncoderKind encoder = EncoderKind::kLinear;
  int hidden = 64;
  int embed_dim = 16;
  int batch_size = 32;
  int samples_per_class = 4;
  int epochs = 30;
  bool use_sgd = false;
  AdamConfig adam;
  double proxy_lr = 0.1;
  LossSpec loss;
  std::vector<std::size_t> eval_k = {1, 2, 4, 8};
  int eval_every = 1;  // test metrics every n epochs (and always the last)
  std::uint64_t seed = 0;

  void Validate() const;
};

// One fine-class-balanced batch: B/m distinct classes, m instances each,
// drawn without replacement inside a class (with replacement when the class
// has fewer than m instances).
std::vector<std::size_t> sample_batch(std::span<const int> fine_classes,
                                      int batch_size, int per_class,
                                      std::mt19937_64& rng);

// Batches covering one epoch: every class is shuffled and cut into groups
// of m; each batch takes one group from each of B/m distinct classes, so no
// instance repeats within the epoch (except padding of short classes).
std::vector<std::vector<std::size_t>> epoch_batches(
    std::span<const int> fine_classes, int batch_size, int per_class,
    std::mt19937_64& rng);

struct BatchLossResult {
  double value = 0.0;
  double surrogate_value = 0.0;
  double dg_value = 0.0;
  std::size_t queries = 0;
  std::vector<double> grad_params;
  Eigen::MatrixXd grad_proxies;  // empty unless the proxy loss is active
  Eigen::MatrixXd scores;        // cosine similarities of the batch
};

// Every batch element is a query against the rest of the batch. Throws when
// no element has a positive.
BatchLossResult batch_loss(const Encoder& encoder,
                           const Eigen::MatrixXd& proxies,
                           const Eigen::MatrixXd& inputs,
                           std::span<const LabelCode> codes,
                           const LossSpec& spec);

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double train_ap = 0.0;  // fine AP over the full training set
  bool evaluated = false;
  MetricReport test;
};

struct TrainLog {
  EpochLog initial;  // before the first update
  std::vector<EpochLog> epochs;
  Encoder encoder;
  Eigen::MatrixXd proxies;

  const EpochLog& last() const {
    return epochs.empty() ? initial : epochs.back();
  }
};

class TrainingDiverged : public Error {
 public:
  using Error::Error;
};

TrainLog train(const Dataset& train_set, const Dataset& test_set,
               const TrainConfig& cfg);

Eigen::MatrixXd embed(const Encoder& encoder, const FeatureMatrix& features);

void write_trainlog_csv(std::ostream& out, const TrainLog& log);

// "RLCK1", encoder kind as u64, tensor count as u64, then per tensor rows
// and cols as u64 followed by row-major binary64 values, all little-endian.
// The proxy matrix is the last tensor.
void write_checkpoint(const std::string& path, const Encoder& encoder,
                      const Eigen::MatrixXd& proxies);
std::pair<Encoder, Eigen::MatrixXd> read_checkpoint(const std::string& path);

}  // namespace rankbound

#endif  // RANKBOUND_TRAINER_HPP_
