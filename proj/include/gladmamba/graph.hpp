// Copyright 2026 The gladmamba Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GLADMAMBA_GRAPH_HPP
#define GLADMAMBA_GRAPH_HPP

#include "gladmamba/tensor.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gladmamba {

/// Undirected edge stored canonically with first < second.
using Edge = std::pair<int, int>;

/// An attributed, undirected, simple graph.
struct Graph {
  int id = 0;
  int node_count = 0;
  std::vector<Edge> edges;     ///< sorted, unique, no self-loops
  Matrix features;             ///< node_count x d_f (d_f may be 0)
  int label = 0;
  std::vector<int> node_labels;  ///< empty when the dataset carries none
  bool has_attributes = false;   ///< features came from a node-attribute file

  /// Sorts, deduplicates and drops self-loops; orients each pair (lo, hi).
  void canonicalize_edges();

  std::vector<int> degrees() const;
  std::vector<std::vector<int>> adjacency_list() const;
  Matrix dense_adjacency() const;
  bool operator==(const Graph& other) const;
};

struct GraphDataset {
  std::string name;
  std::vector<Graph> graphs;
  std::optional<int> anomaly_class;

  bool is_anomaly(const Graph& g) const { return anomaly_class && g.label == *anomaly_class; }
  std::size_t anomaly_count() const;
  double anomaly_ratio() const;
  const Graph& by_id(int id) const;
};

/// Several graphs flattened into one node sequence; graph i occupies rows
/// [node_offsets[i], node_offsets[i + 1]).
struct GraphBatch {
  Matrix node_features;
  std::vector<Edge> edge_index;  ///< offsets applied, one entry per undirected edge
  std::vector<int> graph_membership;
  std::vector<int> node_offsets;  ///< size graph_count + 1
  int graph_count = 0;

  int node_count() const { return node_offsets.empty() ? 0 : node_offsets.back(); }
  int graph_size(int slot) const { return node_offsets[slot + 1] - node_offsets[slot]; }

  /// Recovers the edge list of the graph in `slot` with local node indices.
  std::vector<Edge> local_edges(int slot) const;
};

GraphBatch make_batch(std::span<const Graph* const> graphs);

/// Stacks per-graph row blocks in order.
Matrix stack_rows(std::span<const Matrix* const> blocks);

struct SplitSpec {
  std::vector<int> train_ids;
  std::vector<int> test_ids;
  std::uint64_t seed = 0;
};

}  // namespace gladmamba

#endif  // GLADMAMBA_GRAPH_HPP
