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

#include "gladmamba/selective_block.hpp"

#include "gladmamba/ssm_core.hpp"

#include <cmath>

namespace gladmamba {

void SelectiveConfig::validate() const {
  if (model_dim < 1 || state_size < 1 || conv_width < 1 || delta_rank < 1) {
    throw ConfigError("selective block: model_dim, state_size, conv_width and delta_rank must be positive");
  }
}

SequencePreprocess SequencePreprocess::create(ParamStore& store, const std::string& prefix, int in_dim,
                                              int model_dim, int conv_width, Rng& rng) {
  SequencePreprocess p;
  p.norm = LayerNorm::create(store, prefix + ".norm", in_dim);
  p.in_proj = Linear::create(store, prefix + ".in_proj", in_dim, model_dim, rng);
  p.conv = CausalConv1d::create(store, prefix + ".conv", model_dim, conv_width, rng);
  return p;
}

ad::Var SequencePreprocess::operator()(const ad::Var& h) const { return ad::silu(conv(in_proj(norm(h)))); }

SelectiveProjections SelectiveProjections::create(ParamStore& store, const std::string& prefix,
                                                  const SelectiveConfig& cfg, Rng& rng) {
  cfg.validate();
  SelectiveProjections p;
  p.w_b = Linear::create(store, prefix + ".w_b", cfg.model_dim, cfg.state_size, rng, false);
  p.w_c = Linear::create(store, prefix + ".w_c", cfg.model_dim, cfg.state_size, rng, false);
  p.w_delta_down = Linear::create(store, prefix + ".w_delta_down", cfg.model_dim, cfg.delta_rank, rng, false);

  // Step sizes start log-uniform in [1e-3, 1e-1]; the bias stores their
  // softplus preimage.
  const double bound = 1.0 / std::sqrt(static_cast<double>(cfg.delta_rank));
  p.w_delta_up.weight = store.add(prefix + ".w_delta_up.weight",
                                  uniform_matrix(cfg.delta_rank, cfg.model_dim, bound, rng));
  Matrix bias(1, cfg.model_dim);
  for (int c = 0; c < cfg.model_dim; ++c) {
    const double dt = std::exp(rng.uniform(std::log(1e-3), std::log(1e-1)));
    bias(0, c) = dt + std::log(-std::expm1(-dt));
  }
  p.w_delta_up.bias = store.add(prefix + ".w_delta_up.bias", std::move(bias));
  p.a_log = store.add(prefix + ".a_log", init_A_log(cfg.model_dim, cfg.state_size));
  return p;
}

SsmInputs project_selective(const ad::Var& source, const SelectiveProjections& proj) {
  return SsmInputs{proj.w_b(source), proj.w_c(source), ad::softplus(proj.w_delta_up(proj.w_delta_down(source)))};
}

GatedResidual GatedResidual::create(ParamStore& store, const std::string& prefix, int model_dim, Rng& rng) {
  GatedResidual g;
  g.gate_proj = Linear::create(store, prefix + ".gate_proj", model_dim, model_dim, rng);
  g.out_proj = Linear::create(store, prefix + ".out_proj", model_dim, model_dim, rng);
  g.inner_norm = LayerNorm::create(store, prefix + ".inner_norm", model_dim);
  g.out_norm = LayerNorm::create(store, prefix + ".out_norm", model_dim);
  return g;
}

ad::Var GatedResidual::operator()(const ad::Var& y, const ad::Var& u, const ad::Var& residual) const {
  return out_norm(ad::add(inner_norm(out_proj(ad::mul(y, u))), residual));
}

}  // namespace gladmamba
