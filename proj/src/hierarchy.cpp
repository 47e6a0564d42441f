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

#include "rankbound/hierarchy.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rankbound/error.hpp"

namespace rankbound {
namespace {

std::vector<std::string> SplitCsvLine(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

HierarchyTree HierarchyTree::Build(std::span<const LabelPath> paths) {
  if (paths.empty()) throw Error("empty hierarchy: no label paths given");
  const std::size_t depth = paths.front().size();
  if (depth == 0) throw Error("empty hierarchy: label path has no levels");
  HierarchyTree tree;
  tree.depth_ = static_cast<int>(depth);
  tree.nodes_.resize(depth);
  for (const LabelPath& path : paths) {
    if (path.size() != depth) {
      throw Error("ragged hierarchy: expected " + std::to_string(depth) +
                  " levels, got " + std::to_string(path.size()));
    }
    for (std::size_t l = 0; l < depth; ++l) {
      LabelPath prefix(path.begin(), path.begin() + l + 1);
      auto& level_nodes = tree.nodes_[l];
      level_nodes.try_emplace(std::move(prefix),
                              static_cast<int>(level_nodes.size()));
    }
  }
  return tree;
}

std::size_t HierarchyTree::num_nodes(int level) const {
  if (level < 1 || level > depth_) throw Error("level out of range");
  return nodes_[level - 1].size();
}

bool HierarchyTree::contains(const LabelPath& path) const {
  return static_cast<int>(path.size()) == depth_ &&
         nodes_.back().count(path) > 0;
}

LabelCode HierarchyTree::Encode(const LabelPath& path) const {
  if (!contains(path)) {
    std::string joined;
    for (const auto& p : path) joined += (joined.empty() ? "" : "/") + p;
    throw Error("unknown label: " + joined);
  }
  LabelCode code(depth_);
  for (int l = 0; l < depth_; ++l) {
    LabelPath prefix(path.begin(), path.begin() + l + 1);
    code[l] = nodes_[l].at(prefix);
  }
  return code;
}

int shared_level(const LabelCode& query, const LabelCode& instance) {
  const std::size_t n = std::min(query.size(), instance.size());
  int l = 0;
  while (static_cast<std::size_t>(l) < n && query[l] == instance[l]) ++l;
  return l;
}

std::size_t LevelPartition::at_least(int l) const {
  std::size_t total = 0;
  for (int q = std::max(l, 0); q <= depth; ++q) total += sets[q].size();
  return total;
}

LevelPartition partition_from_levels(std::vector<int> levels, int depth) {
  LevelPartition partition;
  partition.depth = depth;
  partition.sets.resize(depth + 1);
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (levels[k] < 0 || levels[k] > depth) throw Error("level out of range");
    partition.sets[levels[k]].push_back(k);
  }
  partition.level = std::move(levels);
  return partition;
}

LevelPartition level_partition(const HierarchyTree& tree,
                               const LabelPath& query_label,
                               std::span<const LabelPath> instance_labels) {
  const LabelCode query = tree.Encode(query_label);
  std::vector<int> levels;
  levels.reserve(instance_labels.size());
  for (const LabelPath& label : instance_labels) {
    levels.push_back(shared_level(query, tree.Encode(label)));
  }
  return partition_from_levels(std::move(levels), tree.depth());
}

std::vector<int> LabelTable::fine_classes() const {
  std::vector<int> out;
  out.reserve(codes.size());
  for (const auto& code : codes) out.push_back(code.back());
  return out;
}

LabelTable make_label_table(std::vector<std::string> ids,
                            std::vector<LabelPath> paths) {
  if (ids.size() != paths.size()) throw Error("id/label count mismatch");
  LabelTable table{HierarchyTree::Build(paths), std::move(ids),
                   std::move(paths), {}};
  table.codes.reserve(table.paths.size());
  for (const auto& path : table.paths) {
    table.codes.push_back(table.tree.Encode(path));
  }
  return table;
}

LabelTable read_labels_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("malformed label header: empty file");
  const auto header = SplitCsvLine(line);
  if (header.size() < 2 || header[0] != "id") {
    throw Error("malformed label header: expected id,level_1,...,level_L");
  }
  for (std::size_t l = 1; l < header.size(); ++l) {
    if (header[l] != "level_" + std::to_string(l)) {
      throw Error("malformed label header: column " + std::to_string(l) +
                  " should be level_" + std::to_string(l));
    }
  }
  const std::size_t depth = header.size() - 1;
  std::vector<std::string> ids;
  std::vector<LabelPath> paths;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    auto fields = SplitCsvLine(line);
    if (fields.size() != depth + 1) {
      throw Error("ragged hierarchy: row " + std::to_string(row) + " has " +
                  std::to_string(fields.size()) + " fields, expected " +
                  std::to_string(depth + 1));
    }
    ids.push_back(fields[0]);
    paths.emplace_back(fields.begin() + 1, fields.end());
  }
  return make_label_table(std::move(ids), std::move(paths));
}

LabelTable read_labels_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open label file: " + path);
  return read_labels_csv(in);
}

void write_labels_csv(std::ostream& out, const LabelTable& table) {
  out << "id";
  for (int l = 1; l <= table.depth(); ++l) out << ",level_" << l;
  out << '\n';
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.ids[i];
    for (const auto& node : table.paths[i]) out << ',' << node;
    out << '\n';
  }
}

void write_labels_csv(const std::string& path, const LabelTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open label file for writing: " + path);
  write_labels_csv(out, table);
}

}  // namespace rankbound
