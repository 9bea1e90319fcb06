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

#include "gladmamba/vfm.hpp"

#include "gladmamba/ssm_core.hpp"

namespace gladmamba {

namespace {

VfmViewParams create_view(ParamStore& store, const std::string& prefix, const SelectiveConfig& cfg, Rng& rng) {
  VfmViewParams v;
  v.pre = SequencePreprocess::create(store, prefix + ".pre", cfg.model_dim, cfg.model_dim, cfg.conv_width, rng);
  v.sel = SelectiveProjections::create(store, prefix + ".sel", cfg, rng);
  v.out = GatedResidual::create(store, prefix + ".out", cfg.model_dim, rng);
  return v;
}

}  // namespace

VfmParams VfmParams::create(ParamStore& store, const std::string& prefix, const VfmConfig& cfg, Rng& rng) {
  cfg.ssm.validate();
  VfmParams p;
  p.o = create_view(store, prefix + ".o", cfg.ssm, rng);
  p.a = create_view(store, prefix + ".a", cfg.ssm, rng);
  return p;
}

ad::Var vfm_preprocess(const ad::Var& h, const VfmViewParams& p) { return p.pre(h); }

SsmInputs cross_parameterize(const ad::Var& h_input_other, const SelectiveProjections& proj) {
  return project_selective(h_input_other, proj);
}

VfmOutput vfm_forward(const ad::Var& h_o, const ad::Var& h_a, const VfmParams& params, const VfmConfig& cfg) {
  if (h_o.rows() != h_a.rows()) {
    throw ShapeError("vfm_forward: views disagree on node count (" + std::to_string(h_o.rows()) + " vs " +
                     std::to_string(h_a.rows()) + ")");
  }
  const ad::Var in_o = vfm_preprocess(h_o, params.o);
  const ad::Var in_a = vfm_preprocess(h_a, params.a);

  const SsmInputs s_o = cross_parameterize(cfg.cross_view ? in_a : in_o, params.o.sel);
  const SsmInputs s_a = cross_parameterize(cfg.cross_view ? in_o : in_a, params.a.sel);

  const ad::Var y_o = selective_scan_zoh(in_o, s_o.delta, params.o.sel.a_log, s_o.b, s_o.c);
  const ad::Var y_a = selective_scan_zoh(in_a, s_a.delta, params.a.sel.a_log, s_a.b, s_a.c);

  const ad::Var u_o = params.o.out.gate(params.o.pre.norm(h_o));
  const ad::Var u_a = params.a.out.gate(params.a.pre.norm(h_a));

  return {params.o.out(y_o, u_o, h_o), params.a.out(y_a, u_a, h_a)};
}

}  // namespace gladmamba
