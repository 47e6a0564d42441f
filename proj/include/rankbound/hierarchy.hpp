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

#ifndef RANKBOUND_HIERARCHY_HPP_
#define RANKBOUND_HIERARCHY_HPP_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace rankbound {

// A label path lists node identifiers from the coarsest level (index 0) down
// to the finest level (index depth-1).
using LabelPath = std::vector<std::string>;

// Per-level integer node ids of a label path. Two codes agree at level l iff
// the underlying paths share the same prefix of length l.
using LabelCode = std::vector<int>;

// L-level label taxonomy. Nodes are identified by their full prefix, so two
// children named "x" under different parents are distinct nodes.
class HierarchyTree {
 public:
  // Throws Error("empty hierarchy") or Error("ragged hierarchy ...").
  static HierarchyTree Build(std::span<const LabelPath> paths);

  int depth() const { return depth_; }
  // Number of distinct nodes at `level` in [1, depth].
  std::size_t num_nodes(int level) const;
  bool contains(const LabelPath& path) const;
  // Throws Error("unknown label ...") when the path is not in the tree.
  LabelCode Encode(const LabelPath& path) const;

 private:
  int depth_ = 0;
  // nodes_[l] maps a prefix of length l+1 to its stable id at that level.
  std::vector<std::map<LabelPath, int>> nodes_;
};

inline HierarchyTree build_hierarchy(std::span<const LabelPath> paths) {
  return HierarchyTree::Build(paths);
}

// Length of the longest common prefix of two codes, i.e. the level l such
// that the instance belongs to Omega^(l) of the query.
int shared_level(const LabelCode& query, const LabelCode& instance);

// Disjoint sets Omega^(0) .. Omega^(L) for a single query.
struct LevelPartition {
  int depth = 0;
  std::vector<int> level;                      // per instance, in [0, depth]
  std::vector<std::vector<std::size_t>> sets;  // sets[l] = Omega^(l)

  std::size_t size() const { return level.size(); }
  std::size_t level_size(int l) const { return sets.at(l).size(); }
  // |Omega^{+,l}| = sum of level sizes q >= l.
  std::size_t at_least(int l) const;
  std::size_t num_positives() const { return at_least(1); }
};

LevelPartition partition_from_levels(std::vector<int> levels, int depth);

LevelPartition level_partition(const HierarchyTree& tree,
                               const LabelPath& query_label,
                               std::span<const LabelPath> instance_labels);

// Labelled instances: string ids plus label paths and their encodings.
struct LabelTable {
  HierarchyTree tree;
  std::vector<std::string> ids;
  std::vector<LabelPath> paths;
  std::vector<LabelCode> codes;

  std::size_t size() const { return paths.size(); }
  int depth() const { return tree.depth(); }
  // Dense fine-class index per instance (id of the finest node).
  std::vector<int> fine_classes() const;
};

LabelTable make_label_table(std::vector<std::string> ids,
                            std::vector<LabelPath> paths);

// CSV with header `id,level_1,...,level_L`.
LabelTable read_labels_csv(std::istream& in);
LabelTable read_labels_csv(const std::string& path);
void write_labels_csv(std::ostream& out, const LabelTable& table);
void write_labels_csv(const std::string& path, const LabelTable& table);

}  // namespace rankbound

#endif  // RANKBOUND_HIERARCHY_HPP_
