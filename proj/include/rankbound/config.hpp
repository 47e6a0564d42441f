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

#ifndef RANKBOUND_CONFIG_HPP_
#define RANKBOUND_CONFIG_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rankbound/dataset.hpp"
#include "rankbound/trainer.hpp"

namespace rankbound {

// Flat `key = value` text, one entry per line. `#` starts a comment; blank
// lines are ignored. Duplicate keys are an error.
using ConfigMap = std::map<std::string, std::string>;
ConfigMap parse_config(std::istream& in);
ConfigMap parse_config_file(const std::string& path);

// Where training data comes from: a feature/label file pair split per class,
// or a synthetic dataset when no files are given.
struct DataSource {
  std::string features;
  std::string labels;
  int train_per_class = 16;
  SynthConfig synth;

  bool synthetic() const { return features.empty(); }
};

struct RunConfig {
  TrainConfig train;
  DataSource data;

  // Throws Error on unknown keys or unparsable values.
  void Apply(const std::string& key, const std::string& value);
  // Resolved configuration as sorted `key = value` lines.
  std::string Describe() const;
};

RunConfig run_config_from(const ConfigMap& values);

// Loads or generates the data and returns (train, test).
std::pair<Dataset, Dataset> load_data(const DataSource& source);

// Strict scalar and list parsers shared with the CLI.
int parse_int(const std::string& text, const std::string& what);
std::uint64_t parse_u64(const std::string& text, const std::string& what);
double parse_double(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);
std::vector<int> parse_int_list(const std::string& text,
                                const std::string& what);
std::vector<std::size_t> parse_size_list(const std::string& text,
                                         const std::string& what);
std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& what);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace rankbound

#endif  // RANKBOUND_CONFIG_HPP_
