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

#include "rankbound/dataset.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>

#include "rankbound/error.hpp"

namespace rankbound {
namespace {

constexpr char kFeatureMagic[5] = {'R', 'L', 'D', 'S', '1'};

struct SynthNode {
  Eigen::VectorXd center;
  LabelPath path;
};

}  // namespace

SynthConfig SynthConfig::Separable() {
  SynthConfig cfg;
  cfg.noise = 0.45;
  return cfg;
}

int SynthConfig::num_fine_classes() const {
  int total = 1;
  for (int b : branching) total *= b;
  return total;
}

void SynthConfig::Validate() const {
  if (branching.empty()) throw Error("synthetic data needs at least one level");
  for (int b : branching) {
    if (b < 1) throw Error("branching factors must be positive");
  }
  if (spreads.size() != branching.size()) {
    throw Error("one center spread per level required");
  }
  for (std::size_t l = 0; l < spreads.size(); ++l) {
    if (!(spreads[l] > 0.0)) throw Error("center spreads must be positive");
    if (l > 0 && !(spreads[l] < spreads[l - 1])) {
      throw Error("center spreads must shrink with depth");
    }
  }
  if (samples_per_class < 1) throw Error("samples_per_class must be positive");
  if (dim < 1) throw Error("degenerate dimension: dim must be positive");
  if (!(noise >= 0.0)) throw Error("noise must be non-negative");
}

Dataset generate_synthetic(const SynthConfig& cfg) {
  cfg.Validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto gaussian = [&](double scale) {
    Eigen::VectorXd v(cfg.dim);
    for (int d = 0; d < cfg.dim; ++d) v[d] = scale * normal(rng);
    return v;
  };

  std::vector<SynthNode> frontier{{Eigen::VectorXd::Zero(cfg.dim), {}}};
  for (int l = 0; l < cfg.levels(); ++l) {
    std::vector<SynthNode> next;
    for (const auto& parent : frontier) {
      for (int c = 0; c < cfg.branching[l]; ++c) {
        SynthNode child{parent.center + gaussian(cfg.spreads[l]), parent.path};
        child.path.push_back("l" + std::to_string(l + 1) + "_" +
                             std::to_string(c));
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }

  const std::size_t n = frontier.size() *
                        static_cast<std::size_t>(cfg.samples_per_class);
  Dataset data;
  data.features.resize(static_cast<Eigen::Index>(n), cfg.dim);
  std::vector<std::string> ids;
  std::vector<LabelPath> paths;
  ids.reserve(n);
  paths.reserve(n);
  Eigen::Index row = 0;
  for (const auto& fine : frontier) {
    for (int s = 0; s < cfg.samples_per_class; ++s, ++row) {
      data.features.row(row) =
          (fine.center + gaussian(cfg.noise)).cast<float>().transpose();
      ids.push_back("s" + std::to_string(row));
      paths.push_back(fine.path);
    }
  }
  data.labels = make_label_table(std::move(ids), std::move(paths));
  return data;
}

std::pair<Dataset, Dataset> split_per_class(const Dataset& data,
                                            int train_per_class) {
  const auto fine = data.labels.fine_classes();
  std::vector<int> seen;
  std::vector<Eigen::Index> first_rows, second_rows;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    if (static_cast<std::size_t>(fine[i]) >= seen.size()) {
      seen.resize(fine[i] + 1, 0);
    }
    auto& target = seen[fine[i]]++ < train_per_class ? first_rows : second_rows;
    target.push_back(static_cast<Eigen::Index>(i));
  }
  auto take = [&](const std::vector<Eigen::Index>& rows) {
    Dataset out;
    out.features.resize(static_cast<Eigen::Index>(rows.size()),
                        data.features.cols());
    std::vector<std::string> ids;
    std::vector<LabelPath> paths;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      out.features.row(static_cast<Eigen::Index>(r)) = data.features.row(rows[r]);
      ids.push_back(data.labels.ids[rows[r]]);
      paths.push_back(data.labels.paths[rows[r]]);
    }
    if (rows.empty()) throw Error("split_per_class produced an empty side");
    out.labels = make_label_table(std::move(ids), std::move(paths));
    return out;
  };
  return {take(first_rows), take(second_rows)};
}

void write_u64_le(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

std::uint64_t read_u64_le(std::istream& in, const char* what) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
    throw Error(std::string("malformed header: missing ") + what);
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

void write_features(std::ostream& out, const FeatureMatrix& features) {
  out.write(kFeatureMagic, sizeof(kFeatureMagic));
  write_u64_le(out, static_cast<std::uint64_t>(features.rows()));
  write_u64_le(out, static_cast<std::uint64_t>(features.cols()));
  std::vector<char> payload(static_cast<std::size_t>(features.size()) * 4);
  for (Eigen::Index i = 0; i < features.size(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(features.data()[i]);
    for (int b = 0; b < 4; ++b) {
      payload[static_cast<std::size_t>(i) * 4 + b] =
          static_cast<char>((bits >> (8 * b)) & 0xff);
    }
  }
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw Error("failed to write feature payload");
}

void write_features(const std::string& path, const FeatureMatrix& features) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open feature file for writing: " + path);
  write_features(out, features);
}

FeatureMatrix read_features(std::istream& in) {
  char magic[sizeof(kFeatureMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kFeatureMagic, sizeof(magic)) != 0) {
    throw Error("malformed header: bad magic (expected RLDS1)");
  }
  const std::uint64_t n = read_u64_le(in, "row count");
  const std::uint64_t d = read_u64_le(in, "column count");
  if (d == 0 && n > 0) throw Error("malformed header: zero dimension");
  if (d != 0 && n > (std::uint64_t{1} << 40) / d) {
    throw Error("malformed header: implausible size");
  }
  const std::size_t count = static_cast<std::size_t>(n * d);
  std::vector<unsigned char> payload(count * 4);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(payload.size()));
  if (static_cast<std::size_t>(in.gcount()) != payload.size()) {
    throw Error("truncated payload: expected " + std::to_string(count) +
                " values");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error("header count mismatch: payload longer than N*D values");
  }
  FeatureMatrix features(static_cast<Eigen::Index>(n),
                         static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) {
      bits |= static_cast<std::uint32_t>(payload[i * 4 + b]) << (8 * b);
    }
    features.data()[i] = std::bit_cast<float>(bits);
  }
  return features;
}

FeatureMatrix read_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open feature file: " + path);
  return read_features(in);
}

void write_dataset(const std::string& features_path,
                   const std::string& labels_path, const Dataset& data) {
  write_features(features_path, data.features);
  write_labels_csv(labels_path, data.labels);
}

Dataset read_dataset(const std::string& features_path,
                     const std::string& labels_path) {
  Dataset data;
  data.features = read_features(features_path);
  data.labels = read_labels_csv(labels_path);
  if (static_cast<std::size_t>(data.features.rows()) != data.labels.size()) {
    throw Error("header count mismatch: " +
                std::to_string(data.features.rows()) + " feature rows vs " +
                std::to_string(data.labels.size()) + " label rows");
  }
  return data;
}

}  // namespace rankbound
