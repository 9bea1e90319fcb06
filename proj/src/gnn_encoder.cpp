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

#include "gladmamba/gnn_encoder.hpp"

#include <cmath>

namespace gladmamba {

EncoderKind parse_encoder_kind(const std::string& s) {
  if (s == "gcn") return EncoderKind::gcn;
  if (s == "gin") return EncoderKind::gin;
  throw ConfigError("unknown encoder kind '" + s + "' (expected gcn or gin)");
}

std::string to_string(EncoderKind kind) { return kind == EncoderKind::gcn ? "gcn" : "gin"; }

void EncoderConfig::validate() const {
  if (layers < 1 || hidden_dim < 1 || input_dim < 1) {
    throw ConfigError("encoder: layers, hidden_dim and input_dim must be positive");
  }
}

BatchGraphOps build_graph_ops(const GraphBatch& batch, double gin_eps) {
  const int n = batch.node_count();
  std::vector<double> deg(n, 1.0);  // self-loop
  for (auto [u, v] : batch.edge_index) {
    deg[u] += 1.0;
    deg[v] += 1.0;
  }

  std::vector<Eigen::Triplet<double>> gcn;
  std::vector<Eigen::Triplet<double>> gin;
  gcn.reserve(n + 2 * batch.edge_index.size());
  gin.reserve(n + 2 * batch.edge_index.size());
  for (int v = 0; v < n; ++v) {
    gcn.emplace_back(v, v, 1.0 / deg[v]);
    gin.emplace_back(v, v, 1.0 + gin_eps);
  }
  for (auto [u, v] : batch.edge_index) {
    const double w = 1.0 / std::sqrt(deg[u] * deg[v]);
    gcn.emplace_back(u, v, w);
    gcn.emplace_back(v, u, w);
    gin.emplace_back(u, v, 1.0);
    gin.emplace_back(v, u, 1.0);
  }

  std::vector<Eigen::Triplet<double>> readout;
  readout.reserve(n);
  for (int slot = 0; slot < batch.graph_count; ++slot) {
    const int size = batch.graph_size(slot);
    for (int v = batch.node_offsets[slot]; v < batch.node_offsets[slot + 1]; ++v) {
      readout.emplace_back(slot, v, 1.0 / size);
    }
  }

  auto make = [](Eigen::Index rows, Eigen::Index cols, const std::vector<Eigen::Triplet<double>>& t) {
    auto m = std::make_shared<SparseMatrix>(rows, cols);
    m->setFromTriplets(t.begin(), t.end());
    return std::shared_ptr<const SparseMatrix>(std::move(m));
  };
  return BatchGraphOps{make(n, n, gcn), make(n, n, gin), make(batch.graph_count, n, readout)};
}

ad::Var gcn_layer(const ad::Var& h, std::shared_ptr<const SparseMatrix> propagation, const Linear& w) {
  return ad::relu(w(ad::spmm(std::move(propagation), h)));
}

ad::Var gcn_layer(const ad::Var& h, const SparseMatrix& propagation, const Linear& w) {
  return gcn_layer(h, std::make_shared<const SparseMatrix>(propagation), w);
}

ad::Var gin_layer(const ad::Var& h, std::shared_ptr<const SparseMatrix> aggregation, const Mlp2& mlp) {
  return mlp(ad::spmm(std::move(aggregation), h));
}

EncoderParams EncoderParams::create(ParamStore& store, const std::string& prefix, const EncoderConfig& cfg,
                                    Rng& rng) {
  cfg.validate();
  EncoderParams p;
  for (int l = 0; l < cfg.layers; ++l) {
    const int in = l == 0 ? cfg.input_dim : cfg.hidden_dim;
    const std::string name = prefix + ".layer" + std::to_string(l);
    if (cfg.kind == EncoderKind::gcn) {
      p.gcn.push_back(Linear::create(store, name, in, cfg.hidden_dim, rng));
    } else {
      p.gin.push_back(Mlp2::create(store, name + ".mlp", in, cfg.hidden_dim, cfg.hidden_dim, rng));
    }
  }
  return p;
}

EncoderOutput encode(const BatchGraphOps& ops, const ad::Var& features, const EncoderConfig& cfg,
                     const EncoderParams& params) {
  if (features.cols() != cfg.input_dim) {
    throw ShapeError("encode: feature width " + std::to_string(features.cols()) + " != input_dim " +
                     std::to_string(cfg.input_dim));
  }
  std::vector<ad::Var> per_layer;
  ad::Var h = features;
  for (int l = 0; l < cfg.layers; ++l) {
    if (cfg.kind == EncoderKind::gcn) {
      h = gcn_layer(h, ops.gcn_propagation, params.gcn[l]);
    } else {
      h = ad::relu(gin_layer(h, ops.gin_aggregation, params.gin[l]));
    }
    per_layer.push_back(h);
  }
  ad::Var nodes = per_layer.size() == 1 ? per_layer.front() : ad::concat_cols(per_layer);
  ad::Var graphs = ad::spmm(ops.mean_readout, nodes);
  return {nodes, graphs};
}

EncoderOutput encode(const GraphBatch& batch, const Matrix& features, const EncoderConfig& cfg,
                     const EncoderParams& params) {
  return encode(build_graph_ops(batch, cfg.gin_eps), ad::constant(features), cfg, params);
}

}  // namespace gladmamba
