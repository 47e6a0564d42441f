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

#include "rankbound/trainer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <ostream>

#include "rankbound/error.hpp"

namespace rankbound {
namespace {

constexpr char kCheckpointMagic[5] = {'R', 'L', 'C', 'K', '1'};

std::map<int, std::vector<std::size_t>> GroupByClass(
    std::span<const int> fine_classes) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < fine_classes.size(); ++i) {
    groups[fine_classes[i]].push_back(i);
  }
  return groups;
}

void CheckBatchShape(int batch_size, int per_class) {
  if (per_class < 1 || batch_size < per_class || batch_size % per_class != 0) {
    throw Error("batch size must be a positive multiple of samples per class");
  }
}

std::vector<std::size_t> DrawFromClass(const std::vector<std::size_t>& members,
                                       int count, std::mt19937_64& rng) {
  std::vector<std::size_t> out;
  if (static_cast<int>(members.size()) >= count) {
    std::vector<std::size_t> shuffled = members;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    out.assign(shuffled.begin(), shuffled.begin() + count);
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    for (int i = 0; i < count; ++i) out.push_back(members[pick(rng)]);
  }
  return out;
}

Eigen::MatrixXd RandomUnitRows(Eigen::Index rows, Eigen::Index cols,
                               std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = normal(rng);
  }
  return normalize_rows(m);
}

// Builds the per-query ranking problem for `spec`; empty when the query has
// no positive under that relevance.
std::optional<RankingProblem> QueryProblem(std::vector<double> scores,
                                           std::vector<int> levels, int depth,
                                           const LossSpec& spec) {
  switch (spec.surrogate) {
    case SurrogateKind::kSupAp:
    case SurrogateKind::kSupRk:
    case SurrogateKind::kSmoothAp: {
      std::vector<int> labels(levels.size());
      bool any = false;
      for (std::size_t i = 0; i < levels.size(); ++i) {
        labels[i] = levels[i] == depth ? 1 : 0;
        any = any || labels[i];
      }
      if (!any) return std::nullopt;
      return RankingProblem::Binary(std::move(scores), labels);
    }
    case SurrogateKind::kSupHap:
    case SurrogateKind::kSupNdcg: {
      const LevelPartition partition = partition_from_levels(levels, depth);
      if (partition.num_positives() == 0) return std::nullopt;
      std::vector<double> rel =
          spec.surrogate == SurrogateKind::kSupNdcg
              ? ndcg_relevance(partition)
              : make_relevance(spec.relevance, partition);
      if (spec.surrogate == SurrogateKind::kSupHap &&
          spec.relevance.kind == RelevanceKind::kBinary) {
        std::vector<int> labels(levels.size());
        bool any = false;
        for (std::size_t i = 0; i < levels.size(); ++i) {
          labels[i] = levels[i] == depth ? 1 : 0;
          any = any || labels[i];
        }
        if (!any) return std::nullopt;
        return RankingProblem::Binary(std::move(scores), labels);
      }
      return RankingProblem::WithLevels(std::move(scores), std::move(rel),
                                        std::move(levels), depth);
    }
  }
  return std::nullopt;
}

LossResult ZerosLike(const LossResult& like) {
  LossResult zero;
  zero.grad.reserve(like.grad.size());
  for (const auto& g : like.grad) zero.grad.emplace_back(g.size(), 0.0);
  return zero;
}

void WriteMatrix(std::ostream& out, const Eigen::MatrixXd& m) {
  write_u64_le(out, static_cast<std::uint64_t>(m.rows()));
  write_u64_le(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      write_u64_le(out, std::bit_cast<std::uint64_t>(m(r, c)));
    }
  }
}

Eigen::MatrixXd ReadMatrix(std::istream& in) {
  const std::uint64_t rows = read_u64_le(in, "tensor rows");
  const std::uint64_t cols = read_u64_le(in, "tensor cols");
  if (rows > (1u << 24) || cols > (1u << 24)) {
    throw Error("malformed checkpoint: implausible tensor shape");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows),
                    static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      unsigned char bytes[8];
      if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
        throw Error("truncated payload in checkpoint");
      }
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) {
        bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
      }
      m(r, c) = std::bit_cast<double>(bits);
    }
  }
  return m;
}

}  // namespace

void TrainConfig::Validate() const {
  if (embed_dim < 2) throw Error("embed_dim must be >= 2");
  if (hidden < 1) throw Error("hidden width must be positive");
  CheckBatchShape(batch_size, samples_per_class);
  if (epochs < 0) throw Error("epochs must be non-negative");
  if (!(adam.lr > 0.0)) throw Error("learning rate must be positive");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) ||
      !(adam.beta2 >= 0.0 && adam.beta2 < 1.0) || !(adam.eps > 0.0)) {
    throw Error("invalid Adam hyper-parameters");
  }
  if (!(proxy_lr > 0.0)) throw Error("proxy_lr must be positive");
  if (eval_every < 1) throw Error("eval_every must be >= 1");
  loss.surrogate_cfg.Validate();
  loss.decomp.Validate();
}

std::vector<std::size_t> sample_batch(std::span<const int> fine_classes,
                                      int batch_size, int per_class,
                                      std::mt19937_64& rng) {
  CheckBatchShape(batch_size, per_class);
  const auto groups = GroupByClass(fine_classes);
  const std::size_t need = static_cast<std::size_t>(batch_size / per_class);
  if (groups.size() < need) {
    throw Error("infeasible batch: " + std::to_string(need) +
                " classes needed, " + std::to_string(groups.size()) +
                " available");
  }
  std::vector<int> classes;
  for (const auto& [c, members] : groups) classes.push_back(c);
  std::shuffle(classes.begin(), classes.end(), rng);
  std::vector<std::size_t> batch;
  for (std::size_t i = 0; i < need; ++i) {
    const auto drawn = DrawFromClass(groups.at(classes[i]), per_class, rng);
    batch.insert(batch.end(), drawn.begin(), drawn.end());
  }
  return batch;
}

std::vector<std::vector<std::size_t>> epoch_batches(
    std::span<const int> fine_classes, int batch_size, int per_class,
    std::mt19937_64& rng) {
  CheckBatchShape(batch_size, per_class);
  const auto groups = GroupByClass(fine_classes);
  const std::size_t need = static_cast<std::size_t>(batch_size / per_class);
  if (groups.size() < need) {
    throw Error("infeasible batch: " + std::to_string(need) +
                " classes needed, " + std::to_string(groups.size()) +
                " available");
  }
  // Per class, a stack of disjoint groups of `per_class` instances.
  std::vector<std::vector<std::vector<std::size_t>>> chunks;
  for (const auto& [c, members] : groups) {
    std::vector<std::vector<std::size_t>> stack;
    if (static_cast<int>(members.size()) < per_class) {
      stack.push_back(DrawFromClass(members, per_class, rng));
    } else {
      std::vector<std::size_t> shuffled = members;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      for (std::size_t s = 0; s + per_class <= shuffled.size(); s += per_class) {
        stack.emplace_back(shuffled.begin() + s,
                           shuffled.begin() + s + per_class);
      }
    }
    chunks.push_back(std::move(stack));
  }

  std::vector<std::vector<std::size_t>> batches;
  while (true) {
    std::vector<std::size_t> open;
    for (std::size_t c = 0; c < chunks.size(); ++c) {
      if (!chunks[c].empty()) open.push_back(c);
    }
    if (open.size() < need) break;
    std::shuffle(open.begin(), open.end(), rng);
    std::vector<std::size_t> batch;
    for (std::size_t i = 0; i < need; ++i) {
      auto& stack = chunks[open[i]];
      batch.insert(batch.end(), stack.back().begin(), stack.back().end());
      stack.pop_back();
    }
    batches.push_back(std::move(batch));
  }
  return batches;
}

BatchLossResult batch_loss(const Encoder& encoder,
                           const Eigen::MatrixXd& proxies,
                           const Eigen::MatrixXd& inputs,
                           std::span<const LabelCode> codes,
                           const LossSpec& spec) {
  const Eigen::Index b = inputs.rows();
  if (static_cast<std::size_t>(b) != codes.size() || b < 2) {
    throw Error("batch needs at least two labelled instances");
  }
  const int depth = static_cast<int>(codes[0].size());

  Encoder::Cache cache;
  const Eigen::MatrixXd raw = encoder.Forward(inputs, &cache);
  Eigen::VectorXd norms;
  const Eigen::MatrixXd emb = normalize_rows(raw, &norms);
  BatchLossResult result;
  result.scores = emb * emb.transpose();

  std::vector<RankingProblem> problems;
  std::vector<Eigen::Index> query_of;
  for (Eigen::Index i = 0; i < b; ++i) {
    std::vector<double> scores;
    std::vector<int> levels;
    scores.reserve(b - 1);
    levels.reserve(b - 1);
    for (Eigen::Index j = 0; j < b; ++j) {
      if (j == i) continue;
      scores.push_back(result.scores(i, j));
      levels.push_back(shared_level(codes[i], codes[j]));
    }
    auto problem = QueryProblem(std::move(scores), std::move(levels), depth, spec);
    if (!problem) continue;
    problems.push_back(std::move(*problem));
    query_of.push_back(i);
  }
  if (problems.empty()) throw Error("batch with no valid query");
  result.queries = problems.size();

  const LossResult surrogate =
      surrogate_loss(spec.surrogate)(problems, spec.surrogate_cfg);
  result.surrogate_value = surrogate.value;
  const double lambda = spec.decomp.lambda;

  LossResult on_scores;
  if (spec.dg == DgKind::kPair) {
    LossResult dg = ZerosLike(surrogate);
    std::vector<RankingProblem> usable;
    std::vector<std::size_t> slot;
    for (std::size_t q = 0; q < problems.size(); ++q) {
      if (problems[q].num_positives() < problems[q].size()) {
        usable.push_back(problems[q]);
        slot.push_back(q);
      }
    }
    if (!usable.empty()) {
      LossResult pair = l_dg_batch(usable, spec.decomp.pos_margin,
                                   spec.decomp.neg_margin);
      dg.value = pair.value;
      for (std::size_t u = 0; u < usable.size(); ++u) {
        dg.grad[slot[u]] = std::move(pair.grad[u]);
      }
    }
    result.dg_value = dg.value;
    on_scores = combined_loss(surrogate, dg, lambda);
  } else if (spec.dg == DgKind::kProxy) {
    on_scores = combined_loss(surrogate, ZerosLike(surrogate), lambda);
  } else {
    on_scores = surrogate;
  }

  // d loss / d S for the off-diagonal similarities.
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(b, b);
  for (std::size_t q = 0; q < problems.size(); ++q) {
    const Eigen::Index i = query_of[q];
    std::size_t slot = 0;
    for (Eigen::Index j = 0; j < b; ++j) {
      if (j == i) continue;
      g(i, j) = on_scores.grad[q][slot++];
    }
  }
  Eigen::MatrixXd d_emb = (g + g.transpose()) * emb;
  result.value = on_scores.value;

  if (spec.dg == DgKind::kProxy) {
    std::vector<int> fine(codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i) fine[i] = codes[i].back();
    const ProxyLossResult proxy =
        l_dg_star(emb, proxies, fine, spec.decomp.eta);
    result.dg_value = proxy.value;
    result.value += lambda * proxy.value;
    d_emb += lambda * proxy.grad_embeddings;
    result.grad_proxies = lambda * proxy.grad_proxies;
  }

  const Eigen::MatrixXd d_raw = normalize_rows_backward(emb, norms, d_emb);
  result.grad_params = encoder.Backward(cache, d_raw);
  return result;
}

Eigen::MatrixXd embed(const Encoder& encoder, const FeatureMatrix& features) {
  return encoder.Forward(features.cast<double>(), nullptr);
}

TrainLog train(const Dataset& train_set, const Dataset& test_set,
               const TrainConfig& cfg) {
  cfg.Validate();
  if (train_set.features.cols() != test_set.features.cols()) {
    throw Error("train and test feature dimensions differ");
  }
  std::mt19937_64 rng(cfg.seed);
  const int in_dim = static_cast<int>(train_set.features.cols());
  TrainLog log;
  log.encoder = cfg.encoder == EncoderKind::kLinear
                    ? Encoder::Linear(in_dim, cfg.embed_dim, rng)
                    : Encoder::Mlp(in_dim, cfg.hidden, cfg.embed_dim, rng);
  const int depth = train_set.labels.depth();
  const auto num_classes =
      static_cast<Eigen::Index>(train_set.labels.tree.num_nodes(depth));
  if (cfg.loss.dg == DgKind::kProxy) {
    log.proxies = RandomUnitRows(num_classes, cfg.embed_dim, rng);
  } else {
    log.proxies = Eigen::MatrixXd(0, cfg.embed_dim);
  }

  const Eigen::MatrixXd train_x = train_set.features.cast<double>();
  const std::vector<int> fine = train_set.labels.fine_classes();
  RelevanceSpec eval_relevance = cfg.loss.relevance;
  if (eval_relevance.kind == RelevanceKind::kWeightedAp) {
    eval_relevance = RelevanceSpec{};
  }

  auto evaluate = [&](EpochLog& entry, bool with_test) {
    entry.train_ap = mean_average_precision(
        log.encoder.Forward(train_x, nullptr), train_set.labels, depth);
    if (with_test) {
      entry.test = evaluate_all(embed(log.encoder, test_set.features),
                                test_set.labels, eval_relevance, cfg.eval_k);
      entry.evaluated = true;
    }
  };
  evaluate(log.initial, true);

  Adam optimizer(log.encoder.num_parameters(), cfg.adam);
  AdamConfig proxy_cfg = cfg.adam;
  proxy_cfg.lr = cfg.proxy_lr;
  Adam proxy_optimizer(static_cast<std::size_t>(log.proxies.size()), proxy_cfg);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto batches =
        epoch_batches(fine, cfg.batch_size, cfg.samples_per_class, rng);
    if (batches.empty()) throw Error("training set too small for one batch");
    double loss_sum = 0.0;
    for (std::size_t bi = 0; bi < batches.size(); ++bi) {
      const auto& batch = batches[bi];
      Eigen::MatrixXd inputs(static_cast<Eigen::Index>(batch.size()), in_dim);
      std::vector<LabelCode> codes;
      codes.reserve(batch.size());
      for (std::size_t r = 0; r < batch.size(); ++r) {
        inputs.row(static_cast<Eigen::Index>(r)) =
            train_x.row(static_cast<Eigen::Index>(batch[r]));
        codes.push_back(train_set.labels.codes[batch[r]]);
      }
      const BatchLossResult step =
          batch_loss(log.encoder, log.proxies, inputs, codes, cfg.loss);
      if (!std::isfinite(step.value)) {
        throw TrainingDiverged("training diverged: non-finite loss at epoch " +
                               std::to_string(epoch) + ", batch " +
                               std::to_string(bi));
      }
      loss_sum += step.value;

      std::vector<double> params = log.encoder.parameters();
      if (cfg.use_sgd) {
        sgd_step(params, step.grad_params, cfg.adam.lr);
      } else {
        optimizer.Step(params, step.grad_params);
      }
      log.encoder.set_parameters(params);

      if (cfg.loss.dg == DgKind::kProxy) {
        Eigen::MatrixXd grad = step.grad_proxies;
        if (cfg.use_sgd) {
          log.proxies -= cfg.proxy_lr * grad;
        } else {
          proxy_optimizer.Step(
              std::span<double>(log.proxies.data(),
                                static_cast<std::size_t>(log.proxies.size())),
              std::span<const double>(grad.data(),
                                      static_cast<std::size_t>(grad.size())));
        }
        log.proxies = normalize_rows(log.proxies);
      }
    }
    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = loss_sum / static_cast<double>(batches.size());
    evaluate(entry, epoch % cfg.eval_every == 0 || epoch == cfg.epochs);
    log.epochs.push_back(std::move(entry));
  }
  return log;
}

void write_trainlog_csv(std::ostream& out, const TrainLog& log) {
  const auto old_precision = out.precision(17);
  const int depth = log.initial.test.depth;
  out << "epoch,train_loss,train_ap,test_ap,test_map_at_r,test_h_ap,"
         "test_ndcg,test_asi";
  for (int l = 1; l <= depth; ++l) out << ",test_ap_level_" << l;
  out << '\n';
  auto row = [&](const EpochLog& e) {
    out << e.epoch << ',' << e.train_loss << ',' << e.train_ap;
    if (e.evaluated) {
      out << ',' << e.test.ap << ',' << e.test.map_at_r << ',' << e.test.h_ap
          << ',' << e.test.ndcg << ',' << e.test.asi;
      for (double v : e.test.level_ap) out << ',' << v;
    } else {
      out << ",,,,,";
      for (int l = 1; l <= depth; ++l) out << ',';
    }
    out << '\n';
  };
  row(log.initial);
  for (const auto& e : log.epochs) row(e);
  out.precision(old_precision);
}

void write_checkpoint(const std::string& path, const Encoder& encoder,
                      const Eigen::MatrixXd& proxies) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open checkpoint for writing: " + path);
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  write_u64_le(out, encoder.kind() == EncoderKind::kLinear ? 0 : 1);
  const auto tensors = encoder.tensors();
  write_u64_le(out, tensors.size() + 1);
  for (const auto& t : tensors) WriteMatrix(out, t);
  WriteMatrix(out, proxies);
  if (!out) throw Error("failed to write checkpoint: " + path);
}

std::pair<Encoder, Eigen::MatrixXd> read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint: " + path);
  char magic[sizeof(kCheckpointMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
    throw Error("malformed header: bad checkpoint magic (expected RLCK1)");
  }
  const std::uint64_t kind = read_u64_le(in, "encoder kind");
  if (kind > 1) throw Error("malformed header: unknown encoder kind");
  const std::uint64_t count = read_u64_le(in, "tensor count");
  if (count < 2 || count > 4) throw Error("malformed header: tensor count");
  std::vector<Eigen::MatrixXd> tensors;
  for (std::uint64_t t = 0; t + 1 < count; ++t) tensors.push_back(ReadMatrix(in));
  Eigen::MatrixXd proxies = ReadMatrix(in);
  return {Encoder::FromTensors(kind == 0 ? EncoderKind::kLinear
                                         : EncoderKind::kMlp,
                               tensors),
          std::move(proxies)};
}

}  // namespace rankbound
