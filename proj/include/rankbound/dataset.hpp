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

#ifndef RANKBOUND_DATASET_HPP_
#define RANKBOUND_DATASET_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rankbound/hierarchy.hpp"

namespace rankbound {

using FeatureMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Dataset {
  FeatureMatrix features;  // N x D
  LabelTable labels;

  std::size_t size() const { return labels.size(); }
};

// Hierarchical Gaussian mixture. Level-1 centers are drawn around the origin
// with spread spreads[0]; each child center is its parent plus Gaussian noise
// of spread spreads[l]; samples are fine centers plus isotropic noise.
struct SynthConfig {
  std::vector<int> branching = {8, 8};  // children per node, coarse to fine
  int samples_per_class = 32;
  int dim = 32;
  std::vector<double> spreads = {1.0, 0.6};
  double noise = 0.7;
  std::uint64_t seed = 0;

  // Same hierarchy with less noise; linear encoders reach test AP above 0.9.
  static SynthConfig Separable();

  int levels() const { return static_cast<int>(branching.size()); }
  int num_fine_classes() const;
  void Validate() const;
};

Dataset generate_synthetic(const SynthConfig& cfg);

// Splits each fine class: its first `train_per_class` samples (in dataset
// order) go to the first output, the rest to the second.
std::pair<Dataset, Dataset> split_per_class(const Dataset& data,
                                            int train_per_class);

// Feature file: "RLDS1", N and D as little-endian u64, then N*D
// little-endian binary32 values, row-major.
void write_features(std::ostream& out, const FeatureMatrix& features);
void write_features(const std::string& path, const FeatureMatrix& features);
FeatureMatrix read_features(std::istream& in);
FeatureMatrix read_features(const std::string& path);

void write_dataset(const std::string& features_path,
                   const std::string& labels_path, const Dataset& data);
// Throws when the label rows do not match the feature header count.
Dataset read_dataset(const std::string& features_path,
                     const std::string& labels_path);

// Shared little-endian helpers for the binary formats.
void write_u64_le(std::ostream& out, std::uint64_t v);
std::uint64_t read_u64_le(std::istream& in, const char* what);

}  // namespace rankbound

#endif  // RANKBOUND_DATASET_HPP_
