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

#ifndef GLADMAMBA_VFM_HPP
#define GLADMAMBA_VFM_HPP

#include "gladmamba/selective_block.hpp"

#include <string>
#include <utility>

// View-fused selective block over the batch node sequence.
//
// Each view is preprocessed on its own; the (B, C, delta) driving one view's
// scan are projected from the *other* view's preprocessed sequence, so the
// two views exchange information through the SSM parameters only. The scan
// runs over all nodes of the batch in batch order (graphs contiguous, nodes
// in dataset order within a graph).
namespace gladmamba {

struct VfmConfig {
  SelectiveConfig ssm;
  /// false wires each view's (B, C, delta) to its own sequence.
  bool cross_view = true;
};

struct VfmViewParams {
  SequencePreprocess pre;  ///< its norm is shared with the gate branch
  SelectiveProjections sel;
  GatedResidual out;
};

struct VfmParams {
  VfmViewParams o;
  VfmViewParams a;

  static VfmParams create(ParamStore& store, const std::string& prefix, const VfmConfig& cfg, Rng& rng);
};

ad::Var vfm_preprocess(const ad::Var& h, const VfmViewParams& p);

/// (B, C, delta) for one view from the other view's processed sequence.
SsmInputs cross_parameterize(const ad::Var& h_input_other, const SelectiveProjections& proj);

struct VfmOutput {
  ad::Var z_o;
  ad::Var z_a;
};

/// Z = LN(LN(Linear(y_ssm * u)) + H) per view, same shape as H.
VfmOutput vfm_forward(const ad::Var& h_o, const ad::Var& h_a, const VfmParams& params, const VfmConfig& cfg);

}  // namespace gladmamba

#endif  // GLADMAMBA_VFM_HPP
