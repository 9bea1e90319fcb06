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

#include "gladmamba/augmentation.hpp"

#include <algorithm>

namespace gladmamba {

Matrix build_feature_view(const Graph& g, int max_degree_onehot) {
  if (g.features.cols() > 0) return g.features;
  const int cap = std::max(max_degree_onehot, 1);
  Matrix out = Matrix::Zero(g.node_count, cap + 1);
  const auto deg = g.degrees();
  for (int v = 0; v < g.node_count; ++v) out(v, std::min(deg[v], cap)) = 1.0;
  return out;
}

Matrix build_structure_view(const Graph& g, int walk_steps) {
  const int n = g.node_count;
  const int steps = std::max(walk_steps, 1);
  Matrix out = Matrix::Zero(n, steps);
  if (n == 0) return out;

  // Sparse row-stochastic P; repeated products P^t e_v are carried for all
  // sources at once as dense columns of `walk` (n x n), which is fine for
  // the molecule/social graph sizes handled here.
  const auto adj = g.adjacency_list();
  SparseMatrix p(n, n);
  std::vector<Eigen::Triplet<double>> trip;
  for (int v = 0; v < n; ++v) {
    const double w = adj[v].empty() ? 0.0 : 1.0 / static_cast<double>(adj[v].size());
    for (int u : adj[v]) trip.emplace_back(v, u, w);
  }
  p.setFromTriplets(trip.begin(), trip.end());

  Matrix walk = Matrix::Identity(n, n);
  for (int t = 0; t < steps; ++t) {
    walk = p * walk;
    out.col(t) = walk.diagonal();
  }
  return out;
}

ViewPair build_views(const Graph& g, const AugmentConfig& cfg) {
  return ViewPair{build_feature_view(g, cfg.degree_cap), build_structure_view(g, cfg.walk_steps)};
}

}  // namespace gladmamba
