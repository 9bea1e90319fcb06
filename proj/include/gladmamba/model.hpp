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

#ifndef GLADMAMBA_MODEL_HPP
#define GLADMAMBA_MODEL_HPP

#include "gladmamba/augmentation.hpp"
#include "gladmamba/config.hpp"
#include "gladmamba/gnn_encoder.hpp"
#include "gladmamba/sgm.hpp"
#include "gladmamba/spectral.hpp"
#include "gladmamba/vfm.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace gladmamba {

/// One graph with both views and their Rayleigh vectors computed once.
struct PreparedGraph {
  const Graph* graph = nullptr;
  Matrix x_o;
  Matrix x_a;
  RowVector rq_o;  ///< 1 x d_o
  RowVector rq_a;  ///< 1 x walk_steps
};

PreparedGraph prepare_graph(const Graph& g, const AugmentConfig& aug, LaplacianKind rayleigh);
std::vector<PreparedGraph> prepare_graphs(const GraphDataset& ds, const AugmentConfig& aug, LaplacianKind rayleigh);

struct ModelConfig {
  EncoderConfig enc_o;
  EncoderConfig enc_a;
  VfmConfig vfm;
  SgmConfig sgm_o;
  SgmConfig sgm_a;
  Variant variant = Variant::full;
  LossConfig loss;

  /// Derives every block's sizes from the run config and the view widths.
  static ModelConfig from_run(const RunConfig& run, int feature_dim_o, int feature_dim_a);
  int model_dim() const { return enc_o.output_dim(); }
};

struct ForwardResult {
  EncoderOutput enc_o;
  EncoderOutput enc_a;
  ad::Var z_o;   ///< node embeddings after VFM (or H under a bypass)
  ad::Var z_a;
  ad::Var zg_o;  ///< graph embeddings after SGM (or h_G under a bypass)
  ad::Var zg_a;
  ad::Var node_loss;   ///< graph_count x 1
  ad::Var graph_loss;  ///< graph_count x 1
  std::vector<int> node_offsets;
};

class GladModel {
 public:
  /// Parameters come from per-component substreams of `seed`, so components
  /// shared between variants start from identical values.
  GladModel(const ModelConfig& cfg, std::uint64_t seed);

  const ModelConfig& config() const { return cfg_; }
  ParamStore& params() { return store_; }
  const ParamStore& params() const { return store_; }

  /// Full forward pass with both per-graph losses. Needs >= 2 graphs.
  ForwardResult forward(std::span<const PreparedGraph* const> graphs) const;

 private:
  ModelConfig cfg_;
  ParamStore store_;
  EncoderParams enc_o_;
  EncoderParams enc_a_;
  std::optional<VfmParams> vfm_;
  std::optional<SgmParams> sgm_o_;
  std::optional<SgmParams> sgm_a_;
};

/// First-order adaptive-moment optimizer without weight decay.
class Adam {
 public:
  explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  /// Applies one update from the accumulated gradients; params without a
  /// gradient are left alone.
  void step(ParamStore& store);
  long long steps() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  long long t_ = 0;
  std::unordered_map<const ad::Node*, std::pair<Matrix, Matrix>> moments_;
};

}  // namespace gladmamba

#endif  // GLADMAMBA_MODEL_HPP
