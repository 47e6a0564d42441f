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

#include "rankbound/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "rankbound/error.hpp"

namespace rankbound {
namespace {

using Setting = std::vector<std::pair<std::string, std::string>>;

struct Cell {
  Setting setting;
  TrainConfig train;
};

// Metric name -> one value per seed.
using Samples = std::vector<std::pair<std::string, std::vector<double>>>;

void Record(Samples& samples, const std::string& name, double value) {
  for (auto& [key, values] : samples) {
    if (key == name) {
      values.push_back(value);
      return;
    }
  }
  samples.push_back({name, {value}});
}

void RecordReport(Samples& samples, const MetricReport& report,
                  const std::string& suffix) {
  Record(samples, "ap" + suffix, report.ap);
  Record(samples, "map_at_r" + suffix, report.map_at_r);
  Record(samples, "h_ap" + suffix, report.h_ap);
  Record(samples, "ap_coarse" + suffix, report.level_ap.front());
}

SuiteRow Summarize(Setting setting, const Samples& samples) {
  SuiteRow row;
  row.setting = std::move(setting);
  for (const auto& [name, values] : samples) {
    row.values.push_back({name, summarize(values)});
  }
  return row;
}

class Runner {
 public:
  Runner(const SuiteConfig& cfg, const ProgressFn& progress)
      : cfg_(cfg), progress_(progress) {
    std::tie(train_set_, test_set_) = load_data(cfg.base.data);
  }

  MetricReport Run(TrainConfig train, int seed_offset,
                   const std::string& label) {
    train.seed = cfg_.base.train.seed + static_cast<std::uint64_t>(seed_offset);
    train.eval_every = train.epochs;  // only the final metrics are kept
    const TrainLog log = rankbound::train(train_set_, test_set_, train);
    if (progress_) {
      progress_(label + " seed=" + std::to_string(train.seed) +
                " ap=" + format_double(log.last().test.ap));
    }
    return log.last().test;
  }

  SuiteRow Grid(const Cell& cell) {
    Samples samples;
    std::string label;
    for (const auto& [k, v] : cell.setting) label += k + "=" + v + " ";
    for (int s = 0; s < cfg_.seeds; ++s) {
      RecordReport(samples, Run(cell.train, s, label), "");
    }
    return Summarize(cell.setting, samples);
  }

  const SuiteConfig& cfg() const { return cfg_; }

 private:
  const SuiteConfig& cfg_;
  const ProgressFn& progress_;
  Dataset train_set_;
  Dataset test_set_;
};

SuiteTable Ablation(Runner& runner) {
  SuiteTable table;
  for (SurrogateKind surrogate :
       {SurrogateKind::kSmoothAp, SurrogateKind::kSupAp}) {
    for (DgKind dg : {DgKind::kNone, DgKind::kPair, DgKind::kProxy}) {
      TrainConfig t = runner.cfg().base.train;
      t.loss.surrogate = surrogate;
      t.loss.dg = dg;
      table.rows.push_back(runner.Grid(
          {{{"surrogate", to_string(surrogate)}, {"dg", to_string(dg)}}, t}));
    }
  }
  return table;
}

SuiteTable DgVsBatchSize(Runner& runner) {
  SuiteTable table;
  for (int b : runner.cfg().batch_sizes) {
    TrainConfig plain = runner.cfg().base.train;
    plain.batch_size = b;
    plain.loss.surrogate = SurrogateKind::kSupAp;
    plain.loss.dg = DgKind::kNone;
    TrainConfig with_dg = plain;
    with_dg.loss.dg = DgKind::kProxy;
    Samples samples;
    const std::string label = "batch_size=" + std::to_string(b);
    for (int s = 0; s < runner.cfg().seeds; ++s) {
      const MetricReport base = runner.Run(plain, s, label + " dg=none");
      const MetricReport dg = runner.Run(with_dg, s, label + " dg=proxy");
      RecordReport(samples, base, "_none");
      RecordReport(samples, dg, "_dg");
      Record(samples, "relative_gain", (dg.ap - base.ap) / base.ap);
    }
    table.rows.push_back(
        Summarize({{"batch_size", std::to_string(b)}}, samples));
  }
  return table;
}

SuiteTable AlphaSweep(Runner& runner) {
  SuiteTable table;
  // Both arms use the proxy objective: ROADMAP versus HAPPIER.
  TrainConfig fine_only = runner.cfg().base.train;
  fine_only.loss.surrogate = SurrogateKind::kSupAp;
  fine_only.loss.dg = DgKind::kProxy;
  table.rows.push_back(runner.Grid(
      {{{"surrogate", "sup-ap"}, {"alpha", ""}}, fine_only}));
  for (double alpha : runner.cfg().alphas) {
    TrainConfig t = runner.cfg().base.train;
    t.loss.surrogate = SurrogateKind::kSupHap;
    t.loss.dg = DgKind::kProxy;
    t.loss.relevance = RelevanceSpec{RelevanceKind::kHierarchical, alpha, {}};
    table.rows.push_back(runner.Grid(
        {{{"surrogate", "sup-hap"}, {"alpha", format_double(alpha)}}, t}));
  }
  return table;
}

SuiteTable LambdaSweep(Runner& runner) {
  SuiteTable table;
  for (double lambda : runner.cfg().lambdas) {
    TrainConfig t = runner.cfg().base.train;
    t.loss.surrogate = SurrogateKind::kSupAp;
    t.loss.dg = DgKind::kProxy;
    t.loss.decomp.lambda = lambda;
    table.rows.push_back(
        runner.Grid({{{"lambda", format_double(lambda)}}, t}));
  }
  return table;
}

SuiteTable RhoSweep(Runner& runner) {
  SuiteTable table;
  for (double rho : runner.cfg().rhos) {
    TrainConfig t = runner.cfg().base.train;
    t.loss.surrogate = SurrogateKind::kSupAp;
    t.loss.surrogate_cfg.rho = rho;
    table.rows.push_back(runner.Grid({{{"rho", format_double(rho)}}, t}));
  }
  return table;
}

}  // namespace

void SuiteConfig::Validate() const {
  if (seeds < 1) throw Error("seeds must be >= 1");
  if (batch_sizes.empty() || alphas.empty() || lambdas.empty() ||
      rhos.empty()) {
    throw Error("sweep lists must not be empty");
  }
  for (double a : alphas) {
    if (!(a > 0.0)) throw Error("alpha values must be positive");
  }
  for (double l : lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) throw Error("lambda values must be in [0, 1]");
  }
  for (double r : rhos) {
    if (!(r >= 0.0)) throw Error("rho values must be non-negative");
  }
  base.train.Validate();
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.n = values.size();
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

const Summary& SuiteTable::Find(const Setting& setting,
                                const std::string& metric) const {
  for (const auto& row : rows) {
    bool match = true;
    for (const auto& want : setting) {
      bool found = false;
      for (const auto& have : row.setting) found = found || have == want;
      match = match && found;
    }
    if (!match) continue;
    for (const auto& [name, summary] : row.values) {
      if (name == metric) return summary;
    }
  }
  throw Error("no suite cell with metric " + metric);
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "ablation", "dg-vs-batchsize", "alpha-sweep", "lambda-sweep",
      "rho-sweep"};
  return names;
}

SuiteTable run_experiment_suite(const SuiteConfig& cfg,
                                const ProgressFn& progress) {
  using Fn = SuiteTable (*)(Runner&);
  static const std::map<std::string, Fn> table = {
      {"ablation", Ablation},          {"dg-vs-batchsize", DgVsBatchSize},
      {"alpha-sweep", AlphaSweep},     {"lambda-sweep", LambdaSweep},
      {"rho-sweep", RhoSweep}};
  const auto it = table.find(cfg.experiment);
  if (it == table.end()) {
    throw Error("unknown experiment: " + cfg.experiment +
                " (expected ablation, dg-vs-batchsize, alpha-sweep, "
                "lambda-sweep or rho-sweep)");
  }
  cfg.Validate();
  Runner runner(cfg, progress);
  SuiteTable result = it->second(runner);
  result.experiment = cfg.experiment;
  return result;
}

DgMeasurement measure_dg(const Eigen::MatrixXd& embeddings,
                         const LabelTable& labels, std::size_t batch_size,
                         const DecompConfig& decomp, std::mt19937_64& rng) {
  const std::size_t n = labels.size();
  if (static_cast<std::size_t>(embeddings.rows()) != n) {
    throw Error("dimension mismatch between embeddings and labels");
  }
  if (batch_size < 1 || batch_size > n - 1) {
    throw Error("batch size must be in [1, N - 1]");
  }
  decomp.Validate();
  const Eigen::MatrixXd sims = cosine_similarity(embeddings);
  const int depth = labels.depth();

  DgMeasurement m;
  m.batch_size = batch_size;
  for (std::size_t q = 0; q < n; ++q) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == q) continue;
      (shared_level(labels.codes[q], labels.codes[j]) == depth ? pos : neg)
          .push_back(j);
    }
    const std::size_t k = std::min(pos.size(), (n - 1) / batch_size);
    if (k == 0 || pos.size() > k * batch_size) {
      ++m.skipped;
      continue;
    }
    std::shuffle(pos.begin(), pos.end(), rng);
    std::shuffle(neg.begin(), neg.end(), rng);
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < pos.size(); ++i) members[i % k].push_back(pos[i]);
    std::size_t next_neg = 0;
    for (auto& batch : members) {
      while (batch.size() < batch_size) batch.push_back(neg[next_neg++]);
    }

    std::vector<double> scores;
    std::vector<int> positive;
    BatchSplit split;
    std::vector<std::size_t> pos_counts, neg_counts;
    std::vector<BatchCalibration> calibration;
    for (const auto& batch : members) {
      std::vector<std::size_t> slots;
      std::vector<double> bs;
      std::vector<int> bl;
      for (std::size_t j : batch) {
        slots.push_back(scores.size());
        bs.push_back(sims(static_cast<Eigen::Index>(q),
                          static_cast<Eigen::Index>(j)));
        bl.push_back(shared_level(labels.codes[q], labels.codes[j]) == depth);
        scores.push_back(bs.back());
        positive.push_back(bl.back());
      }
      const BatchCalibration c = calibration_counts(
          bs, bl, decomp.pos_margin, decomp.neg_margin);
      pos_counts.push_back(c.positives());
      neg_counts.push_back(c.negatives());
      calibration.push_back(c);
      split.batches.push_back(std::move(slots));
    }
    const RankingProblem problem = RankingProblem::Binary(scores, positive);
    const auto gap = decomposability_gap(
        [](const RankingProblem& p) { return average_precision(p); }, problem,
        split);
    if (!gap) {
      ++m.skipped;
      continue;
    }
    m.gap += *gap;
    m.plain_bound += dg_upper_bound_plain(pos_counts, neg_counts);
    m.calibrated_bound += dg_upper_bound_calibrated(calibration);
    m.full_ap += average_precision(problem);
    ++m.queries;
  }
  if (m.queries > 0) {
    const double count = static_cast<double>(m.queries);
    m.gap /= count;
    m.plain_bound /= count;
    m.calibrated_bound /= count;
    m.full_ap /= count;
  }
  return m;
}

void write_suite_csv(std::ostream& out, const SuiteTable& table) {
  if (table.rows.empty()) return;
  const auto old_precision = out.precision(17);
  const SuiteRow& first = table.rows.front();
  bool lead = true;
  auto sep = [&] {
    if (!lead) out << ',';
    lead = false;
  };
  for (const auto& [key, value] : first.setting) {
    sep();
    out << key;
  }
  for (const auto& [name, summary] : first.values) {
    sep();
    out << name << "_mean," << name << "_sd";
  }
  sep();
  out << "seeds\n";
  for (const auto& row : table.rows) {
    lead = true;
    for (const auto& [key, value] : row.setting) {
      sep();
      out << value;
    }
    std::size_t n = 0;
    for (const auto& [name, summary] : row.values) {
      sep();
      out << summary.mean << ',' << summary.sd;
      n = summary.n;
    }
    sep();
    out << n << '\n';
  }
  out.precision(old_precision);
}

}  // namespace rankbound
