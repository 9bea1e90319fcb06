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

#ifndef GLADMAMBA_SGM_HPP
#define GLADMAMBA_SGM_HPP

#include "gladmamba/selective_block.hpp"

#include <optional>
#include <string>

// Spectrum-guided selective block over the batch's graph sequence.
//
// Each graph contributes one step. The per-graph Rayleigh-quotient vector is
// embedded by a small MLP and, after its own preprocess branch, produces the
// (B, C, delta) of the scan, so state updates depend on the graph's spectral
// content. One instance exists per view.
namespace gladmamba {

struct SgmConfig {
  SelectiveConfig ssm;
  int rq_dim = 1;  ///< length of the Rayleigh vector (feature width of the view)
  /// false drives (B, C, delta) from the graph embedding branch instead and
  /// builds no Rayleigh parameters.
  bool spectrum_guided = true;
};

struct SgmParams {
  std::optional<Mlp2> rq_mlp;
  SequencePreprocess graph_pre;
  std::optional<SequencePreprocess> rq_pre;
  SelectiveProjections sel;
  GatedResidual out;

  static SgmParams create(ParamStore& store, const std::string& prefix, const SgmConfig& cfg, Rng& rng);
};

/// h_RQ = MLP(rq) with hidden and output width model_dim.
ad::Var rq_embed(const ad::Var& rq, const Mlp2& mlp);

/// z_G = LN(LN(Linear(y_ssm * u)) + h_G); rows of `rq` align with rows of
/// `h_graph`. Throws ShapeError on misalignment.
ad::Var sgm_forward(const ad::Var& h_graph, const ad::Var& rq, const SgmParams& params, const SgmConfig& cfg);

}  // namespace gladmamba

#endif  // GLADMAMBA_SGM_HPP
