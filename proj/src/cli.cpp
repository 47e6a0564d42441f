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

#include "rankbound/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rankbound/config.hpp"
#include "rankbound/dataset.hpp"
#include "rankbound/error.hpp"
#include "rankbound/experiments.hpp"
#include "rankbound/gradcheck.hpp"
#include "rankbound/metrics.hpp"
#include "rankbound/trainer.hpp"

namespace rankbound {
namespace {

struct GenSynthArgs {
  std::string branching = "8,8";
  int samples_per_class = 32;
  int dim = 32;
  std::string spreads = "1.0,0.6";
  double noise = 0.45;
  std::uint64_t seed = 0;
  std::string features;
  std::string labels;
};

struct EvalArgs {
  std::string embeddings;
  std::string labels;
  std::string relevance = "hierarchical";
  double alpha = 1.0;
  std::string weights;
  std::string k = "1,2,4,8";
  std::string out = "report.csv";
};

struct TrainArgs {
  std::string config;
  std::string out;
};

struct GradCheckArgs {
  std::string loss;
  int n = 32;
  std::uint64_t seed = 0;
  int problems = 8;
  int depth = 2;
  double h = 1e-6;
  double tol = 1e-4;
  bool broken = false;
};

struct DgReportArgs {
  std::string batch_sizes = "32,64,128,256";
  std::string with_dg = "none";
  std::uint64_t seed = 0;
  std::string config;
  std::string out = "dg.csv";
};

struct SuiteArgs {
  std::string experiment;
  std::string config;
  int seeds = 3;
  std::string batch_sizes;
  std::string alphas;
  std::string lambdas;
  std::string rhos;
  std::string out;
};

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  return out;
}

RunConfig LoadRunConfig(const std::string& path) {
  return run_config_from(path.empty() ? ConfigMap{} : parse_config_file(path));
}

int GenSynth(const GenSynthArgs& a, std::ostream& out) {
  SynthConfig cfg;
  cfg.branching = parse_int_list(a.branching, "--branching");
  cfg.samples_per_class = a.samples_per_class;
  cfg.dim = a.dim;
  cfg.spreads = parse_double_list(a.spreads, "--spreads");
  cfg.noise = a.noise;
  cfg.seed = a.seed;
  cfg.Validate();
  out << "gen-synth\n"
      << "branching = " << a.branching << "\n"
      << "samples_per_class = " << cfg.samples_per_class << "\n"
      << "dim = " << cfg.dim << "\n"
      << "spreads = " << a.spreads << "\n"
      << "noise = " << format_double(cfg.noise) << "\n"
      << "seed = " << cfg.seed << "\n";
  const Dataset data = generate_synthetic(cfg);
  write_dataset(a.features, a.labels, data);
  out << "wrote " << data.size() << " instances, "
      << cfg.num_fine_classes() << " fine classes\n";
  return kExitOk;
}

int Eval(const EvalArgs& a, std::ostream& out) {
  RelevanceSpec spec;
  spec.kind = parse_relevance_kind(a.relevance);
  spec.alpha = a.alpha;
  if (!a.weights.empty()) spec.weights = parse_double_list(a.weights, "--weights");
  const std::vector<std::size_t> k_list = parse_size_list(a.k, "--k");
  const Dataset data = read_dataset(a.embeddings, a.labels);
  out << "eval\n"
      << "embeddings = " << a.embeddings << "\n"
      << "labels = " << a.labels << "\n"
      << "relevance = " << to_string(spec.kind) << "\n"
      << "alpha = " << format_double(spec.alpha) << "\n"
      << "k = " << a.k << "\n"
      << "seed = none\n";
  const MetricReport report = evaluate_all(data.features.cast<double>(),
                                           data.labels, spec, k_list);
  std::ofstream file = OpenOut(a.out);
  write_report_csv(file, report);
  out << "queries = " << report.num_queries
      << ", skipped = " << report.skipped_queries
      << ", ap = " << format_double(report.ap)
      << ", h_ap = " << format_double(report.h_ap) << "\n";
  return kExitOk;
}

int Train(const TrainArgs& a, std::ostream& out) {
  const RunConfig cfg = LoadRunConfig(a.config);
  out << "train\n" << cfg.Describe();
  const auto [train_set, test_set] = load_data(cfg.data);
  const TrainLog log = train(train_set, test_set, cfg.train);
  std::filesystem::create_directories(a.out);
  const std::filesystem::path dir(a.out);
  {
    std::ofstream file = OpenOut((dir / "trainlog.csv").string());
    write_trainlog_csv(file, log);
  }
  {
    std::ofstream file = OpenOut((dir / "config.txt").string());
    file << cfg.Describe();
  }
  write_checkpoint((dir / "checkpoint.rlck").string(), log.encoder,
                   log.proxies);
  const EpochLog& last = log.last();
  out << "epochs = " << log.epochs.size()
      << ", test ap = " << format_double(last.test.ap)
      << ", test h_ap = " << format_double(last.test.h_ap) << "\n";
  return kExitOk;
}

int GradCheck(const GradCheckArgs& a, std::ostream& out) {
  const SurrogateKind kind = parse_surrogate_kind(a.loss);
  if (a.n < 2) throw Error("--n must be >= 2");
  if (a.problems < 1) throw Error("--problems must be >= 1");
  if (a.depth < 1) throw Error("--depth must be >= 1");
  if (!(a.h > 0.0)) throw Error("--step must be positive");
  const SurrogateConfig cfg;
  LossFn loss = surrogate_loss(kind);
  if (a.broken) {
    loss = [inner = loss](std::span<const RankingProblem> problems,
                          const SurrogateConfig& c) {
      LossResult r = inner(problems, c);
      for (auto& row : r.grad) {
        for (double& g : row) g = -g;
      }
      return r;
    };
  }
  out << "grad-check\n"
      << "loss = " << to_string(kind) << "\n"
      << "n = " << a.n << "\n"
      << "problems = " << a.problems << "\n"
      << "depth = " << a.depth << "\n"
      << "h = " << format_double(a.h) << "\n"
      << "tol = " << format_double(a.tol) << "\n"
      << "seed = " << a.seed << "\n";
  std::mt19937_64 rng(a.seed);
  double worst = 0.0;
  for (int p = 0; p < a.problems; ++p) {
    const RankingProblem problem =
        random_check_problem(static_cast<std::size_t>(a.n), a.depth, rng);
    const GradCheckResult r = finite_diff_check(loss, problem, cfg, a.h);
    worst = std::max(worst, r.max_rel_error);
    out << "problem " << p << ": max_rel_error = "
        << format_double(r.max_rel_error) << ", checked = " << r.checked
        << ", excluded = " << r.excluded << "\n";
  }
  const bool ok = worst < a.tol;
  out << (ok ? "PASS" : "FAIL") << " max_rel_error = " << format_double(worst)
      << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

int DgReport(const DgReportArgs& a, std::ostream& out) {
  RunConfig cfg = LoadRunConfig(a.config);
  cfg.train.loss.dg = parse_dg_kind(a.with_dg);
  cfg.train.seed = a.seed;
  const std::vector<int> sizes = parse_int_list(a.batch_sizes, "--batch-sizes");
  out << "dg-report\n"
      << "batch_sizes = " << a.batch_sizes << "\n"
      << cfg.Describe();
  const auto [train_set, test_set] = load_data(cfg.data);
  std::ofstream file = OpenOut(a.out);
  file.precision(17);
  file << "batch_size,queries,skipped,dg,plain_bound,calibrated_bound,"
          "full_ap,test_ap\n";
  for (int b : sizes) {
    TrainConfig t = cfg.train;
    t.batch_size = b;
    t.eval_every = t.epochs;
    const TrainLog log = train(train_set, test_set, t);
    std::mt19937_64 rng(a.seed);
    const DgMeasurement m =
        measure_dg(embed(log.encoder, test_set.features), test_set.labels,
                   static_cast<std::size_t>(b), t.loss.decomp, rng);
    file << b << ',' << m.queries << ',' << m.skipped << ',' << m.gap << ','
         << m.plain_bound << ',' << m.calibrated_bound << ',' << m.full_ap
         << ',' << log.last().test.ap << '\n';
    out << "batch_size = " << b << ": dg = " << format_double(m.gap)
        << ", plain_bound = " << format_double(m.plain_bound)
        << ", calibrated_bound = " << format_double(m.calibrated_bound)
        << "\n";
  }
  return kExitOk;
}

int RunSuite(const SuiteArgs& a, std::ostream& out) {
  SuiteConfig cfg;
  cfg.experiment = a.experiment;
  cfg.base = LoadRunConfig(a.config);
  cfg.seeds = a.seeds;
  if (!a.batch_sizes.empty()) {
    cfg.batch_sizes = parse_int_list(a.batch_sizes, "--batch-sizes");
  }
  if (!a.alphas.empty()) cfg.alphas = parse_double_list(a.alphas, "--alphas");
  if (!a.lambdas.empty()) {
    cfg.lambdas = parse_double_list(a.lambdas, "--lambdas");
  }
  if (!a.rhos.empty()) cfg.rhos = parse_double_list(a.rhos, "--rhos");
  out << "run-suite\n"
      << "experiment = " << cfg.experiment << "\n"
      << "seeds = " << cfg.seeds << "\n"
      << cfg.base.Describe();
  const SuiteTable table = run_experiment_suite(
      cfg, [&out](const std::string& line) { out << line << "\n"; });
  std::ofstream file = OpenOut(a.out);
  write_suite_csv(file, table);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Ranking metrics, smooth rank losses and decomposability tools",
               "rankbound"};
  app.require_subcommand(1);

  GenSynthArgs gen;
  auto* gen_cmd = app.add_subcommand(
      "gen-synth", "Generate a hierarchical Gaussian mixture dataset");
  gen_cmd->add_option("--branching", gen.branching,
                      "Children per node, coarse to fine (comma list)")
      ->capture_default_str();
  gen_cmd->add_option("--samples-per-class", gen.samples_per_class,
                      "Samples per fine class")
      ->capture_default_str();
  gen_cmd->add_option("--dim", gen.dim, "Feature dimension")
      ->capture_default_str();
  gen_cmd->add_option("--spreads", gen.spreads,
                      "Center spread per level, strictly decreasing")
      ->capture_default_str();
  gen_cmd->add_option("--noise", gen.noise, "Sample noise scale")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  gen_cmd->add_option("--features", gen.features, "Output feature file")
      ->required();
  gen_cmd->add_option("--labels", gen.labels, "Output label CSV")->required();

  EvalArgs ev;
  auto* eval_cmd =
      app.add_subcommand("eval", "Evaluate embeddings with every metric");
  eval_cmd->add_option("--embeddings", ev.embeddings, "Embedding feature file")
      ->required();
  eval_cmd->add_option("--labels", ev.labels, "Label CSV")->required();
  eval_cmd->add_option("--relevance", ev.relevance,
                       "hierarchical, weighted_ap, ndcg or binary")
      ->capture_default_str();
  eval_cmd->add_option("--alpha", ev.alpha, "Hierarchical decrease rate")
      ->capture_default_str();
  eval_cmd->add_option("--weights", ev.weights,
                       "Weighted-AP level weights (comma list)");
  eval_cmd->add_option("--k", ev.k, "Recall cutoffs (comma list)")
      ->capture_default_str();
  eval_cmd->add_option("--out", ev.out, "Report CSV")->capture_default_str();

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train an embedding encoder");
  train_cmd->add_option("--config", tr.config, "key = value config file")
      ->required();
  train_cmd->add_option("--out", tr.out,
                        "Output directory (trainlog.csv, checkpoint.rlck)")
      ->required();

  GradCheckArgs gc;
  auto* gc_cmd = app.add_subcommand(
      "grad-check", "Compare analytic and finite-difference gradients");
  gc_cmd->add_option("--loss", gc.loss,
                     "sup-ap, sup-rk, sup-hap, sup-ndcg or smooth-ap")
      ->required();
  gc_cmd->add_option("--n", gc.n, "Instances per problem")
      ->capture_default_str();
  gc_cmd->add_option("--seed", gc.seed, "RNG seed")->capture_default_str();
  gc_cmd->add_option("--problems", gc.problems, "Number of random problems")
      ->capture_default_str();
  gc_cmd->add_option("--depth", gc.depth, "Relevance levels")
      ->capture_default_str();
  gc_cmd->add_option("--step", gc.h, "Finite-difference step")
      ->capture_default_str();
  gc_cmd->add_option("--tol", gc.tol, "Maximum relative error")
      ->capture_default_str();
  gc_cmd->add_flag("--inject-broken-gradient", gc.broken)->group("");

  DgReportArgs dg;
  auto* dg_cmd = app.add_subcommand(
      "dg-report", "Measure the decomposability gap and its bounds");
  dg_cmd->add_option("--batch-sizes", dg.batch_sizes,
                     "Training and measurement batch sizes")
      ->capture_default_str();
  dg_cmd->add_option("--with-dg", dg.with_dg, "none, pair or proxy")
      ->capture_default_str();
  dg_cmd->add_option("--seed", dg.seed, "RNG seed")->capture_default_str();
  dg_cmd->add_option("--config", dg.config,
                     "key = value config file for data and training");
  dg_cmd->add_option("--out", dg.out, "Output CSV")->capture_default_str();

  SuiteArgs su;
  auto* suite_cmd =
      app.add_subcommand("run-suite", "Run a multi-seed experiment grid");
  suite_cmd->add_option("--experiment", su.experiment,
                        "ablation, dg-vs-batchsize, alpha-sweep, "
                        "lambda-sweep or rho-sweep")
      ->required();
  suite_cmd->add_option("--config", su.config,
                        "key = value config file for data and training");
  suite_cmd->add_option("--seeds", su.seeds, "Seeds per cell")
      ->capture_default_str();
  suite_cmd->add_option("--batch-sizes", su.batch_sizes,
                        "dg-vs-batchsize values");
  suite_cmd->add_option("--alphas", su.alphas, "alpha-sweep values");
  suite_cmd->add_option("--lambdas", su.lambdas, "lambda-sweep values");
  suite_cmd->add_option("--rhos", su.rhos, "rho-sweep values");
  suite_cmd->add_option("--out", su.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  try {
    if (gen_cmd->parsed()) return GenSynth(gen, out);
    if (eval_cmd->parsed()) return Eval(ev, out);
    if (train_cmd->parsed()) return Train(tr, out);
    if (gc_cmd->parsed()) return GradCheck(gc, out);
    if (dg_cmd->parsed()) return DgReport(dg, out);
    if (suite_cmd->parsed()) return RunSuite(su, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace rankbound
