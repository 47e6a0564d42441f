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

#include "rankbound/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "rankbound/error.hpp"

namespace rankbound {
namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> SplitCommas(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(Trim(item));
  if (!text.empty() && text.back() == ',') parts.emplace_back();
  return parts;
}

template <typename T>
T ParseNumber(const std::string& raw, const std::string& what) {
  const std::string text = Trim(raw);
  T value{};
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && text[0] == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw Error("invalid value for " + what + ": '" + raw + "'");
  }
  return value;
}

template <typename T>
std::string JoinList(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    if constexpr (std::is_floating_point_v<T>) {
      out += format_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

}  // namespace

int parse_int(const std::string& text, const std::string& what) {
  return ParseNumber<int>(text, what);
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  return ParseNumber<std::uint64_t>(text, what);
}

double parse_double(const std::string& text, const std::string& what) {
  return ParseNumber<double>(text, what);
}

bool parse_bool(const std::string& text, const std::string& what) {
  const std::string t = Trim(text);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw Error("invalid value for " + what + ": '" + text +
              "' (expected true or false)");
}

std::vector<int> parse_int_list(const std::string& text,
                                const std::string& what) {
  std::vector<int> out;
  for (const auto& part : SplitCommas(text)) out.push_back(parse_int(part, what));
  if (out.empty()) throw Error("empty list for " + what);
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text,
                                         const std::string& what) {
  std::vector<std::size_t> out;
  for (const auto& part : SplitCommas(text)) {
    out.push_back(ParseNumber<std::size_t>(part, what));
  }
  if (out.empty()) throw Error("empty list for " + what);
  return out;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& what) {
  std::vector<double> out;
  for (const auto& part : SplitCommas(text)) {
    out.push_back(parse_double(part, what));
  }
  if (out.empty()) throw Error("empty list for " + what);
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

ConfigMap parse_config(std::istream& in) {
  ConfigMap values;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("config line " + std::to_string(number) +
                  ": expected 'key = value'");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key.empty()) {
      throw Error("config line " + std::to_string(number) + ": empty key");
    }
    if (!values.emplace(key, value).second) {
      throw Error("config line " + std::to_string(number) +
                  ": duplicate key '" + key + "'");
    }
  }
  return values;
}

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  return parse_config(in);
}

void RunConfig::Apply(const std::string& key, const std::string& value) {
  TrainConfig& t = train;
  SynthConfig& s = data.synth;
  if (key == "seed") {
    t.seed = parse_u64(value, key);
  } else if (key == "encoder") {
    t.encoder = parse_encoder_kind(value);
  } else if (key == "hidden") {
    t.hidden = parse_int(value, key);
  } else if (key == "embed_dim") {
    t.embed_dim = parse_int(value, key);
  } else if (key == "batch_size") {
    t.batch_size = parse_int(value, key);
  } else if (key == "samples_per_class") {
    t.samples_per_class = parse_int(value, key);
  } else if (key == "epochs") {
    t.epochs = parse_int(value, key);
  } else if (key == "optimizer") {
    if (value == "adam") {
      t.use_sgd = false;
    } else if (value == "sgd") {
      t.use_sgd = true;
    } else {
      throw Error("unknown optimizer: " + value + " (expected adam or sgd)");
    }
  } else if (key == "lr") {
    t.adam.lr = parse_double(value, key);
  } else if (key == "adam.beta1") {
    t.adam.beta1 = parse_double(value, key);
  } else if (key == "adam.beta2") {
    t.adam.beta2 = parse_double(value, key);
  } else if (key == "adam.eps") {
    t.adam.eps = parse_double(value, key);
  } else if (key == "proxy_lr") {
    t.proxy_lr = parse_double(value, key);
  } else if (key == "eval.k") {
    t.eval_k = parse_size_list(value, key);
  } else if (key == "eval.every") {
    t.eval_every = parse_int(value, key);
  } else if (key == "loss.surrogate") {
    t.loss.surrogate = parse_surrogate_kind(value);
  } else if (key == "loss.dg") {
    t.loss.dg = parse_dg_kind(value);
  } else if (key == "loss.lambda") {
    t.loss.decomp.lambda = parse_double(value, key);
  } else if (key == "loss.pos_margin") {
    t.loss.decomp.pos_margin = parse_double(value, key);
  } else if (key == "loss.neg_margin") {
    t.loss.decomp.neg_margin = parse_double(value, key);
  } else if (key == "loss.eta") {
    t.loss.decomp.eta = parse_double(value, key);
  } else if (key == "suprank.tau") {
    t.loss.surrogate_cfg.tau = parse_double(value, key);
  } else if (key == "suprank.rho") {
    t.loss.surrogate_cfg.rho = parse_double(value, key);
  } else if (key == "suprank.epsilon") {
    t.loss.surrogate_cfg.epsilon = parse_double(value, key);
  } else if (key == "suprank.tau_star") {
    t.loss.surrogate_cfg.tau_star = parse_double(value, key);
  } else if (key == "suprank.k") {
    t.loss.surrogate_cfg.k_list = parse_size_list(value, key);
  } else if (key == "relevance.kind") {
    t.loss.relevance.kind = parse_relevance_kind(value);
  } else if (key == "relevance.alpha") {
    t.loss.relevance.alpha = parse_double(value, key);
  } else if (key == "relevance.weights") {
    t.loss.relevance.weights = parse_double_list(value, key);
  } else if (key == "data.features") {
    data.features = value;
  } else if (key == "data.labels") {
    data.labels = value;
  } else if (key == "data.train_per_class") {
    data.train_per_class = parse_int(value, key);
  } else if (key == "synth.branching") {
    s.branching = parse_int_list(value, key);
  } else if (key == "synth.samples_per_class") {
    s.samples_per_class = parse_int(value, key);
  } else if (key == "synth.dim") {
    s.dim = parse_int(value, key);
  } else if (key == "synth.spreads") {
    s.spreads = parse_double_list(value, key);
  } else if (key == "synth.noise") {
    s.noise = parse_double(value, key);
  } else if (key == "synth.seed") {
    s.seed = parse_u64(value, key);
  } else {
    throw Error("unknown config key: " + key);
  }
}

std::string RunConfig::Describe() const {
  const TrainConfig& t = train;
  const SynthConfig& s = data.synth;
  ConfigMap out;
  out["seed"] = std::to_string(t.seed);
  out["encoder"] = to_string(t.encoder);
  out["hidden"] = std::to_string(t.hidden);
  out["embed_dim"] = std::to_string(t.embed_dim);
  out["batch_size"] = std::to_string(t.batch_size);
  out["samples_per_class"] = std::to_string(t.samples_per_class);
  out["epochs"] = std::to_string(t.epochs);
  out["optimizer"] = t.use_sgd ? "sgd" : "adam";
  out["lr"] = format_double(t.adam.lr);
  out["adam.beta1"] = format_double(t.adam.beta1);
  out["adam.beta2"] = format_double(t.adam.beta2);
  out["adam.eps"] = format_double(t.adam.eps);
  out["proxy_lr"] = format_double(t.proxy_lr);
  out["eval.k"] = JoinList(t.eval_k);
  out["eval.every"] = std::to_string(t.eval_every);
  out["loss.surrogate"] = to_string(t.loss.surrogate);
  out["loss.dg"] = to_string(t.loss.dg);
  out["loss.lambda"] = format_double(t.loss.decomp.lambda);
  out["loss.pos_margin"] = format_double(t.loss.decomp.pos_margin);
  out["loss.neg_margin"] = format_double(t.loss.decomp.neg_margin);
  out["loss.eta"] = format_double(t.loss.decomp.eta);
  out["suprank.tau"] = format_double(t.loss.surrogate_cfg.tau);
  out["suprank.rho"] = format_double(t.loss.surrogate_cfg.rho);
  out["suprank.epsilon"] = format_double(t.loss.surrogate_cfg.epsilon);
  out["suprank.tau_star"] = format_double(t.loss.surrogate_cfg.tau_star);
  out["suprank.k"] = JoinList(t.loss.surrogate_cfg.k_list);
  out["relevance.kind"] = to_string(t.loss.relevance.kind);
  out["relevance.alpha"] = format_double(t.loss.relevance.alpha);
  out["relevance.weights"] = JoinList(t.loss.relevance.weights);
  out["data.train_per_class"] = std::to_string(data.train_per_class);
  if (data.synthetic()) {
    out["synth.branching"] = JoinList(s.branching);
    out["synth.samples_per_class"] = std::to_string(s.samples_per_class);
    out["synth.dim"] = std::to_string(s.dim);
    out["synth.spreads"] = JoinList(s.spreads);
    out["synth.noise"] = format_double(s.noise);
    out["synth.seed"] = std::to_string(s.seed);
  } else {
    out["data.features"] = data.features;
    out["data.labels"] = data.labels;
  }
  std::string text;
  for (const auto& [key, value] : out) text += key + " = " + value + "\n";
  return text;
}

RunConfig run_config_from(const ConfigMap& values) {
  RunConfig cfg;
  for (const auto& [key, value] : values) cfg.Apply(key, value);
  if (cfg.data.features.empty() != cfg.data.labels.empty()) {
    throw Error("data.features and data.labels must be given together");
  }
  cfg.train.Validate();
  if (cfg.data.synthetic()) cfg.data.synth.Validate();
  if (cfg.data.train_per_class < 1) {
    throw Error("data.train_per_class must be positive");
  }
  return cfg;
}

std::pair<Dataset, Dataset> load_data(const DataSource& source) {
  const Dataset all = source.synthetic()
                          ? generate_synthetic(source.synth)
                          : read_dataset(source.features, source.labels);
  return split_per_class(all, source.train_per_class);
}

}  // namespace rankbound
