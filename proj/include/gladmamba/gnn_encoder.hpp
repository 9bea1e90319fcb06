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

#ifndef GLADMAMBA_GNN_ENCODER_HPP
#define GLADMAMBA_GNN_ENCODER_HPP

#include "gladmamba/graph.hpp"
#include "gladmamba/layers.hpp"

#include <memory>
#include <string>
#include <vector>

namespace gladmamba {

enum class EncoderKind { gcn, gin };

EncoderKind parse_encoder_kind(const std::string& s);
std::string to_string(EncoderKind kind);

struct EncoderConfig {
  EncoderKind kind = EncoderKind::gcn;
  int layers = 2;
  int hidden_dim = 16;
  int input_dim = 0;
  double gin_eps = 0.0;

  /// Width of the concatenated node embedding, layers * hidden_dim.
  int output_dim() const { return layers * hidden_dim; }
  void validate() const;
};

/// Fixed sparse operators derived from a batch's structure.
struct BatchGraphOps {
  std::shared_ptr<const SparseMatrix> gcn_propagation;  ///< D~^-1/2 (A + I) D~^-1/2
  std::shared_ptr<const SparseMatrix> gin_aggregation;  ///< A + (1 + eps) I
  std::shared_ptr<const SparseMatrix> mean_readout;     ///< graph_count x nodes, rows sum to 1
};

BatchGraphOps build_graph_ops(const GraphBatch& batch, double gin_eps = 0.0);

/// relu(P H W + b) with P the symmetric-normalized propagation with self-loops.
ad::Var gcn_layer(const ad::Var& h, const SparseMatrix& propagation, const Linear& w);
ad::Var gcn_layer(const ad::Var& h, std::shared_ptr<const SparseMatrix> propagation, const Linear& w);

/// mlp((1 + eps) h_v + sum_{u in N(v)} h_u); the aggregation operator carries eps.
ad::Var gin_layer(const ad::Var& h, std::shared_ptr<const SparseMatrix> aggregation, const Mlp2& mlp);

struct EncoderParams {
  std::vector<Linear> gcn;
  std::vector<Mlp2> gin;

  static EncoderParams create(ParamStore& store, const std::string& prefix, const EncoderConfig& cfg, Rng& rng);
};

struct EncoderOutput {
  ad::Var nodes;   ///< sum |V_i| x (layers * hidden_dim)
  ad::Var graphs;  ///< graph_count x (layers * hidden_dim), mean readout
};

/// Runs the L layers, concatenates every layer's output per node and mean-
/// pools per graph. GIN layer outputs pass through a ReLU before the next
/// layer and before concatenation.
EncoderOutput encode(const BatchGraphOps& ops, const ad::Var& features, const EncoderConfig& cfg,
                     const EncoderParams& params);
EncoderOutput encode(const GraphBatch& batch, const Matrix& features, const EncoderConfig& cfg,
                     const EncoderParams& params);

}  // namespace gladmamba

#endif  // GLADMAMBA_GNN_ENCODER_HPP
