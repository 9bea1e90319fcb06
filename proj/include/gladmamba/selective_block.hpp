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

#ifndef GLADMAMBA_SELECTIVE_BLOCK_HPP
#define GLADMAMBA_SELECTIVE_BLOCK_HPP

#include "gladmamba/layers.hpp"

#include <string>

// Building blocks shared by the view-fused and spectrum-guided blocks.
namespace gladmamba {

struct SelectiveConfig {
  int model_dim = 32;
  int state_size = 8;
  int conv_width = 4;
  int delta_rank = 4;

  void validate() const;
};

/// LayerNorm -> Linear -> causal depthwise Conv1D -> SiLU along the rows.
struct SequencePreprocess {
  LayerNorm norm;
  Linear in_proj;
  CausalConv1d conv;

  static SequencePreprocess create(ParamStore& store, const std::string& prefix, int in_dim, int model_dim,
                                   int conv_width, Rng& rng);
  ad::Var operator()(const ad::Var& h) const;
};

/// Maps a processed sequence to the input-dependent (B, C, delta).
struct SelectiveProjections {
  Linear w_b;           ///< d -> N
  Linear w_c;           ///< d -> N
  Linear w_delta_down;  ///< d -> r
  Linear w_delta_up;    ///< r -> d, with bias
  ad::Var a_log;        ///< d x N

  static SelectiveProjections create(ParamStore& store, const std::string& prefix, const SelectiveConfig& cfg,
                                     Rng& rng);
};

struct SsmInputs {
  ad::Var b;      ///< T x N
  ad::Var c;      ///< T x N
  ad::Var delta;  ///< T x d, strictly positive
};

/// B = W_B h, C = W_C h, delta = softplus(W_up W_down h + bias) per row.
SsmInputs project_selective(const ad::Var& source, const SelectiveProjections& proj);

/// LayerNorm(LayerNorm(Linear(y * u)) + residual).
struct GatedResidual {
  Linear gate_proj;  ///< u = SiLU(gate_proj(norm(H)))
  Linear out_proj;
  LayerNorm inner_norm;
  LayerNorm out_norm;

  static GatedResidual create(ParamStore& store, const std::string& prefix, int model_dim, Rng& rng);
  ad::Var gate(const ad::Var& normed) const { return ad::silu(gate_proj(normed)); }
  ad::Var operator()(const ad::Var& y, const ad::Var& u, const ad::Var& residual) const;
};

}  // namespace gladmamba

#endif  // GLADMAMBA_SELECTIVE_BLOCK_HPP
