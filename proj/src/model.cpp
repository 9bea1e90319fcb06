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

#include "gladmamba/model.hpp"

#include <cmath>
#include <stdexcept>

namespace gladmamba {

PreparedGraph prepare_graph(const Graph& g, const AugmentConfig& aug, LaplacianKind rayleigh) {
  PreparedGraph p;
  p.graph = &g;
  ViewPair views = build_views(g, aug);
  p.x_o = std::move(views.features_o);
  p.x_a = std::move(views.features_a);
  p.rq_o = rayleigh_quotient_diag(g, p.x_o, rayleigh).transpose();
  p.rq_a = rayleigh_quotient_diag(g, p.x_a, rayleigh).transpose();
  return p;
}

std::vector<PreparedGraph> prepare_graphs(const GraphDataset& ds, const AugmentConfig& aug, LaplacianKind rayleigh) {
  std::vector<PreparedGraph> out;
  out.reserve(ds.graphs.size());
  for (const Graph& g : ds.graphs) {
    out.push_back(prepare_graph(g, aug, rayleigh));
    if (out.back().x_o.cols() != out.front().x_o.cols()) {
      throw ShapeError("graph " + std::to_string(g.id) + " has a feature width different from graph " +
                       std::to_string(out.front().graph->id));
    }
  }
  return out;
}

ModelConfig ModelConfig::from_run(const RunConfig& run, int feature_dim_o, int feature_dim_a) {
  ModelConfig m;
  m.variant = run.variant;
  m.loss = run.loss;
  for (EncoderConfig* e : {&m.enc_o, &m.enc_a}) {
    e->kind = run.resolved_encoder_kind();
    e->layers = run.encoder_layers;
    e->hidden_dim = run.hidden_dim;
  }
  m.enc_o.input_dim = feature_dim_o;
  m.enc_a.input_dim = feature_dim_a;

  const int d = m.enc_o.output_dim();
  m.vfm.ssm = SelectiveConfig{d, run.vfm_state_size, run.vfm_conv_width, run.vfm_delta_rank};
  m.vfm.cross_view = run.variant != Variant::no_vf_ssm;

  const SelectiveConfig sg{d, run.sgm_state_size, run.sgm_conv_width, run.sgm_delta_rank};
  const bool guided = run.variant != Variant::no_sg_ssm;
  m.sgm_o = SgmConfig{sg, feature_dim_o, guided};
  m.sgm_a = SgmConfig{sg, feature_dim_a, guided};
  return m;
}

GladModel::GladModel(const ModelConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
  cfg_.enc_o.validate();
  cfg_.enc_a.validate();
  cfg_.loss.validate();
  Rng r_enc_o = Rng::substream(seed, "init.enc_o");
  Rng r_enc_a = Rng::substream(seed, "init.enc_a");
  enc_o_ = EncoderParams::create(store_, "enc_o", cfg_.enc_o, r_enc_o);
  enc_a_ = EncoderParams::create(store_, "enc_a", cfg_.enc_a, r_enc_a);
  if (uses_vfm(cfg_.variant)) {
    Rng r = Rng::substream(seed, "init.vfm");
    vfm_ = VfmParams::create(store_, "vfm", cfg_.vfm, r);
  }
  if (uses_sgm(cfg_.variant)) {
    Rng r_o = Rng::substream(seed, "init.sgm_o");
    Rng r_a = Rng::substream(seed, "init.sgm_a");
    sgm_o_ = SgmParams::create(store_, "sgm_o", cfg_.sgm_o, r_o);
    sgm_a_ = SgmParams::create(store_, "sgm_a", cfg_.sgm_a, r_a);
  }
}

ForwardResult GladModel::forward(std::span<const PreparedGraph* const> graphs) const {
  if (graphs.size() < 2) throw std::invalid_argument("forward: a batch needs at least 2 graphs");
  std::vector<const Graph*> raw;
  std::vector<const Matrix*> xo, xa;
  raw.reserve(graphs.size());
  for (const PreparedGraph* p : graphs) {
    raw.push_back(p->graph);
    xo.push_back(&p->x_o);
    xa.push_back(&p->x_a);
  }
  const GraphBatch batch = make_batch(raw);
  const BatchGraphOps ops = build_graph_ops(batch, cfg_.enc_o.gin_eps);

  Matrix rq_o(static_cast<Eigen::Index>(graphs.size()), cfg_.sgm_o.rq_dim);
  Matrix rq_a(static_cast<Eigen::Index>(graphs.size()), cfg_.sgm_a.rq_dim);
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (graphs[i]->rq_o.size() != rq_o.cols() || graphs[i]->rq_a.size() != rq_a.cols()) {
      throw ShapeError("forward: Rayleigh vector width does not match the model");
    }
    rq_o.row(static_cast<Eigen::Index>(i)) = graphs[i]->rq_o;
    rq_a.row(static_cast<Eigen::Index>(i)) = graphs[i]->rq_a;
  }

  ForwardResult r;
  r.node_offsets = batch.node_offsets;
  r.enc_o = encode(ops, ad::constant(stack_rows(xo)), cfg_.enc_o, enc_o_);
  r.enc_a = encode(ops, ad::constant(stack_rows(xa)), cfg_.enc_a, enc_a_);

  if (vfm_) {
    VfmOutput v = vfm_forward(r.enc_o.nodes, r.enc_a.nodes, *vfm_, cfg_.vfm);
    r.z_o = v.z_o;
    r.z_a = v.z_a;
  } else {
    r.z_o = r.enc_o.nodes;
    r.z_a = r.enc_a.nodes;
  }

  if (sgm_o_) {
    r.zg_o = sgm_forward(r.enc_o.graphs, ad::constant(std::move(rq_o)), *sgm_o_, cfg_.sgm_o);
    r.zg_a = sgm_forward(r.enc_a.graphs, ad::constant(std::move(rq_a)), *sgm_a_, cfg_.sgm_a);
  } else {
    r.zg_o = r.enc_o.graphs;
    r.zg_a = r.enc_a.graphs;
  }

  r.node_loss = node_infonce(r.z_o, r.z_a, r.node_offsets, cfg_.loss);
  r.graph_loss = graph_infonce(r.zg_o, r.zg_a, cfg_.loss);
  return r;
}

void Adam::step(ParamStore& store) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (const NamedParam& p : store.entries()) {
    if (!p.var.has_grad()) continue;
    const Matrix& g = p.var.node()->grad;
    auto [it, fresh] = moments_.try_emplace(p.var.node().get());
    auto& [m, v] = it->second;
    if (fresh) {
      m = Matrix::Zero(g.rows(), g.cols());
      v = Matrix::Zero(g.rows(), g.cols());
    }
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
    Matrix& w = p.var.node()->value;
    w.array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
  }
}

}  // namespace gladmamba
