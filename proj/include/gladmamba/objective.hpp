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

#ifndef GLADMAMBA_OBJECTIVE_HPP
#define GLADMAMBA_OBJECTIVE_HPP

#include "gladmamba/autodiff.hpp"

#include <optional>
#include <span>
#include <vector>

namespace gladmamba {

struct LossConfig {
  double tau = 0.2;
  double alpha = 1.0;

  void validate() const;
};

/// Symmetrized cross-view InfoNCE per row. Row i belongs to the segment
/// [offsets[s], offsets[s + 1]) containing it; its negatives are the other
/// rows of that segment and the positive pair is *not* part of the
/// denominator:
///
///   l(i) = -cos(o_i, a_i)/tau + log sum_{k != i} exp(cos(o_i, a_k)/tau)
///   out_i = (l_o(i) + l_a(i)) / 2
///
/// where l_a swaps the roles of the two views. Rows of single-row segments
/// are 0. The value can be negative.
ad::Var contrastive_rows(const ad::Var& z_o, const ad::Var& z_a, std::span<const int> offsets, double tau);

/// Per-graph node-scale loss (graph_count x 1): the mean of contrastive_rows
/// over each graph's nodes, negatives drawn from the same graph only.
ad::Var node_infonce(const ad::Var& z_o, const ad::Var& z_a, std::span<const int> node_offsets,
                     const LossConfig& cfg);

/// Per-graph graph-scale loss (|B| x 1), negatives are the other graphs of
/// the batch. Throws std::invalid_argument for |B| < 2.
ad::Var graph_infonce(const ad::Var& zg_o, const ad::Var& zg_a, const LossConfig& cfg);

/// Population standard deviation.
double population_std(std::span<const double> xs);
double mean_of(std::span<const double> xs);

struct AdaptiveLoss {
  ad::Var total;
  double sigma_node = 0.0;
  double sigma_graph = 0.0;
};

/// sigma_node^alpha * mean(node) + sigma_graph^alpha * mean(graph). The
/// sigmas are batch-local population stds of the per-graph losses, carried as
/// constants. `fixed_sigmas` replaces them (used when differentiating
/// numerically around a point).
AdaptiveLoss adaptive_total_loss(const ad::Var& node_losses, const ad::Var& graph_losses, const LossConfig& cfg,
                                 std::optional<std::pair<double, double>> fixed_sigmas = std::nullopt);

inline constexpr double kSigmaFloor = 1e-12;

struct ScoreNormalizer {
  double mu_node = 0.0;
  double sigma_node = 1.0;
  double mu_graph = 0.0;
  double sigma_graph = 1.0;
};

/// Training-set error statistics; sigmas are floored at kSigmaFloor.
ScoreNormalizer fit_normalizer(std::span<const double> train_node_losses, std::span<const double> train_graph_losses);

/// (L_n - mu_n) / sigma_n + (L_g - mu_g) / sigma_g.
double anomaly_score(double loss_node, double loss_graph, const ScoreNormalizer& norm);

/// Rank-based (Mann-Whitney) AUC with midranks for ties; label 1 = positive.
/// Throws std::invalid_argument unless both classes are present.
double auc(std::span<const double> scores, std::span<const int> labels);

struct ScoreReport {
  std::vector<int> graph_ids;
  std::vector<double> loss_node;
  std::vector<double> loss_graph;
  std::vector<double> score;
  std::vector<int> is_anomaly;
  double auc = 0.0;
};

}  // namespace gladmamba

#endif  // GLADMAMBA_OBJECTIVE_HPP
