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

#include "gladmamba/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace gladmamba {

void Graph::canonicalize_edges() {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u == v) continue;
    out.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  edges = std::move(out);
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(node_count, 0);
  for (auto [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

std::vector<std::vector<int>> Graph::adjacency_list() const {
  std::vector<std::vector<int>> adj(node_count);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return adj;
}

Matrix Graph::dense_adjacency() const {
  Matrix a = Matrix::Zero(node_count, node_count);
  for (auto [u, v] : edges) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return a;
}

bool Graph::operator==(const Graph& other) const {
  return id == other.id && node_count == other.node_count && edges == other.edges &&
         label == other.label && node_labels == other.node_labels &&
         has_attributes == other.has_attributes && features.rows() == other.features.rows() &&
         features.cols() == other.features.cols() && features == other.features;
}

std::size_t GraphDataset::anomaly_count() const {
  return static_cast<std::size_t>(
      std::count_if(graphs.begin(), graphs.end(), [&](const Graph& g) { return is_anomaly(g); }));
}

double GraphDataset::anomaly_ratio() const {
  return graphs.empty() ? 0.0 : static_cast<double>(anomaly_count()) / static_cast<double>(graphs.size());
}

const Graph& GraphDataset::by_id(int id) const {
  if (id >= 0 && static_cast<std::size_t>(id) < graphs.size() && graphs[id].id == id) return graphs[id];
  auto it = std::find_if(graphs.begin(), graphs.end(), [id](const Graph& g) { return g.id == id; });
  if (it == graphs.end()) throw std::out_of_range("no graph with id " + std::to_string(id));
  return *it;
}

std::vector<Edge> GraphBatch::local_edges(int slot) const {
  const int lo = node_offsets[slot];
  const int hi = node_offsets[slot + 1];
  std::vector<Edge> out;
  for (auto [u, v] : edge_index) {
    if (u >= lo && u < hi) out.emplace_back(u - lo, v - lo);
  }
  return out;
}

GraphBatch make_batch(std::span<const Graph* const> graphs) {
  GraphBatch batch;
  batch.graph_count = static_cast<int>(graphs.size());
  batch.node_offsets.reserve(graphs.size() + 1);
  batch.node_offsets.push_back(0);
  for (const Graph* g : graphs) batch.node_offsets.push_back(batch.node_offsets.back() + g->node_count);

  std::vector<const Matrix*> blocks;
  for (const Graph* g : graphs) blocks.push_back(&g->features);
  batch.node_features = stack_rows(blocks);

  batch.graph_membership.reserve(batch.node_count());
  for (int slot = 0; slot < batch.graph_count; ++slot) {
    const Graph& g = *graphs[slot];
    const int off = batch.node_offsets[slot];
    batch.graph_membership.insert(batch.graph_membership.end(), g.node_count, slot);
    for (auto [u, v] : g.edges) batch.edge_index.emplace_back(u + off, v + off);
  }
  return batch;
}

Matrix stack_rows(std::span<const Matrix* const> blocks) {
  Eigen::Index rows = 0;
  Eigen::Index cols = blocks.empty() ? 0 : blocks.front()->cols();
  for (const Matrix* m : blocks) {
    if (m->cols() != cols && m->rows() > 0) throw ShapeError("stack_rows: column mismatch");
    rows += m->rows();
  }
  Matrix out(rows, cols);
  Eigen::Index r = 0;
  for (const Matrix* m : blocks) {
    if (m->rows() == 0) continue;
    out.middleRows(r, m->rows()) = *m;
    r += m->rows();
  }
  return out;
}

}  // namespace gladmamba
