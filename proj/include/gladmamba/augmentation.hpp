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

#ifndef GLADMAMBA_AUGMENTATION_HPP
#define GLADMAMBA_AUGMENTATION_HPP

#include "gladmamba/graph.hpp"

namespace gladmamba {

struct AugmentConfig {
  int walk_steps = 16;
  int degree_cap = 64;
};

/// Node features of the two views, rows in the graph's node order.
struct ViewPair {
  Matrix features_o;  ///< semantic view
  Matrix features_a;  ///< structural view
};

/// Semantic view: node attributes (or label one-hot) when the graph carries
/// any; otherwise a degree one-hot with buckets 0..cap-1 plus an overflow
/// bucket at index cap.
Matrix build_feature_view(const Graph& g, int max_degree_onehot);

/// Structural view: row v holds the t-step return probabilities (P^t)_vv for
/// t = 1..walk_steps, with P = D^-1 A. Isolated nodes get zero rows.
Matrix build_structure_view(const Graph& g, int walk_steps);

ViewPair build_views(const Graph& g, const AugmentConfig& cfg);

}  // namespace gladmamba

#endif  // GLADMAMBA_AUGMENTATION_HPP
