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

#include "gladmamba/sgm.hpp"

#include "gladmamba/ssm_core.hpp"

namespace gladmamba {

SgmParams SgmParams::create(ParamStore& store, const std::string& prefix, const SgmConfig& cfg, Rng& rng) {
  cfg.ssm.validate();
  const int d = cfg.ssm.model_dim;
  SgmParams p;
  if (cfg.spectrum_guided) {
    if (cfg.rq_dim < 1) throw ConfigError("sgm: Rayleigh vector width must be positive");
    p.rq_mlp = Mlp2::create(store, prefix + ".rq_mlp", cfg.rq_dim, d, d, rng);
  }
  p.graph_pre = SequencePreprocess::create(store, prefix + ".graph_pre", d, d, cfg.ssm.conv_width, rng);
  if (cfg.spectrum_guided) {
    p.rq_pre = SequencePreprocess::create(store, prefix + ".rq_pre", d, d, cfg.ssm.conv_width, rng);
  }
  p.sel = SelectiveProjections::create(store, prefix + ".sel", cfg.ssm, rng);
  p.out = GatedResidual::create(store, prefix + ".out", d, rng);
  return p;
}

ad::Var rq_embed(const ad::Var& rq, const Mlp2& mlp) { return mlp(rq); }

ad::Var sgm_forward(const ad::Var& h_graph, const ad::Var& rq, const SgmParams& params, const SgmConfig& cfg) {
  const ad::Var h_input = params.graph_pre(h_graph);

  ad::Var source = h_input;
  if (cfg.spectrum_guided) {
    if (rq.rows() != h_graph.rows()) {
      throw ShapeError("sgm_forward: " + std::to_string(rq.rows()) + " Rayleigh rows for " +
                       std::to_string(h_graph.rows()) + " graphs");
    }
    if (rq.cols() != cfg.rq_dim) throw ShapeError("sgm_forward: Rayleigh width does not match rq_dim");
    source = (*params.rq_pre)(rq_embed(rq, *params.rq_mlp));
  }

  const SsmInputs s = project_selective(source, params.sel);
  const ad::Var y = selective_scan_zoh(h_input, s.delta, params.sel.a_log, s.b, s.c);
  const ad::Var u = params.out.gate(params.graph_pre.norm(h_graph));
  return params.out(y, u, h_graph);
}

}  // namespace gladmamba
