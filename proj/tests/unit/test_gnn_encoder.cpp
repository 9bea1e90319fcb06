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

#include "gladmamba/config.hpp"
#include "gladmamba/gnn_encoder.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numeric>

namespace gladmamba {
namespace {

struct Fixture {
  ParamStore store;
  EncoderConfig cfg;
  EncoderParams params;

  Fixture(EncoderKind kind, int input_dim, int layers = 2, int hidden = 8, std::uint64_t seed = 1) {
    cfg.kind = kind;
    cfg.input_dim = input_dim;
    cfg.layers = layers;
    cfg.hidden_dim = hidden;
    Rng rng(seed);
    params = EncoderParams::create(store, "enc", cfg, rng);
  }

  EncoderOutput run(const std::vector<const Graph*>& graphs, const Matrix& x) const {
    return encode(make_batch(graphs), x, cfg, params);
  }
};

Graph with_features(Graph g, Matrix x) {
  g.features = std::move(x);
  return g;
}

Graph permuted(const Graph& g, const std::vector<int>& perm) {
  Graph out = g;
  for (auto& [u, v] : out.edges) {
    u = perm[u];
    v = perm[v];
  }
  for (int v = 0; v < g.node_count; ++v) out.features.row(perm[v]) = g.features.row(v);
  return out;
}

TEST(GraphOps, IsolatedNodesKeepSelfLoopOnly) {
  Graph g;
  g.node_count = 3;
  g.features = Matrix::Ones(3, 1);
  const BatchGraphOps ops = build_graph_ops(make_batch(std::vector<const Graph*>{&g}), 0.25);
  EXPECT_EQ(Matrix(*ops.gcn_propagation), Matrix::Identity(3, 3));
  EXPECT_EQ(Matrix(*ops.gin_aggregation), 1.25 * Matrix::Identity(3, 3));
  EXPECT_EQ(Matrix(*ops.mean_readout), Matrix::Constant(1, 3, 1.0 / 3.0));
}

TEST(GraphOps, PropagationMatchesDenseNormalization) {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const Graph g = testing::random_graph(rng, 2 + static_cast<int>(rng.below(10)), 0.4);
    const BatchGraphOps ops = build_graph_ops(make_batch(std::vector<const Graph*>{&g}));
    const Matrix at = g.dense_adjacency() + Matrix::Identity(g.node_count, g.node_count);
    const Vector d = at.rowwise().sum().cwiseSqrt().cwiseInverse();
    EXPECT_LT((Matrix(*ops.gcn_propagation) - d.asDiagonal() * at * d.asDiagonal()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(GcnEncoder, K2WithEqualFeaturesGivesEqualRows) {
  Fixture f(EncoderKind::gcn, 2);
  const Graph g = testing::complete_graph(2);
  Matrix x(2, 2);
  x << 0.3, -0.7, 0.3, -0.7;
  const Matrix h = f.run({&g}, x).nodes.value();
  EXPECT_LT((h.row(0) - h.row(1)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(GcnEncoder, PathMatchesDenseOracle) {
  Fixture f(EncoderKind::gcn, 3);
  const Graph g = testing::path_graph(3);
  Rng rng(3);
  const Matrix x = testing::random_matrix(rng, 3, 3);
  const Matrix h = f.run({&g}, x).nodes.value();
  const Matrix adj = g.dense_adjacency();
  const Matrix h1 = testing::dense_gcn_layer(adj, x, f.params.gcn[0].weight.value(), f.params.gcn[0].bias.value());
  const Matrix h2 = testing::dense_gcn_layer(adj, h1, f.params.gcn[1].weight.value(), f.params.gcn[1].bias.value());
  ASSERT_EQ(h.cols(), 16);
  EXPECT_LT((h.leftCols(8) - h1).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((h.rightCols(8) - h2).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(GinEncoder, AggregationMatchesDenseOracle) {
  Rng rng(4);
  for (double eps : {0.0, 0.5}) {
    const Graph g = testing::random_graph(rng, 7, 0.5);
    const Matrix x = testing::random_matrix(rng, 7, 3);
    const BatchGraphOps ops = build_graph_ops(make_batch(std::vector<const Graph*>{&g}), eps);
    EXPECT_LT((*ops.gin_aggregation * x - testing::dense_gin_aggregate(g.dense_adjacency(), x, eps))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-14);
  }
}

TEST(GinEncoder, LayersMatchDenseOracle) {
  Fixture f(EncoderKind::gin, 2, 2, 4);
  const Graph g = testing::cycle_graph(5);
  Rng rng(5);
  const Matrix x = testing::random_matrix(rng, 5, 2);
  const Matrix h = f.run({&g}, x).nodes.value();
  auto mlp = [](const Mlp2& m, const Matrix& in) {
    Matrix z = in * m.first.weight.value();
    z.rowwise() += m.first.bias.value().row(0);
    z = z.cwiseMax(0.0);
    Matrix out = z * m.second.weight.value();
    out.rowwise() += m.second.bias.value().row(0);
    return Matrix(out.cwiseMax(0.0));
  };
  const Matrix adj = g.dense_adjacency();
  const Matrix h1 = mlp(f.params.gin[0], testing::dense_gin_aggregate(adj, x, 0.0));
  const Matrix h2 = mlp(f.params.gin[1], testing::dense_gin_aggregate(adj, h1, 0.0));
  EXPECT_LT((h.leftCols(4) - h1).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((h.rightCols(4) - h2).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Encoder, OutputWidthIsLayersTimesHidden) {
  for (EncoderKind kind : {EncoderKind::gcn, EncoderKind::gin}) {
    for (int layers : {1, 2, 3}) {
      Fixture f(kind, 4, layers, 5);
      const Graph g = testing::path_graph(4);
      const EncoderOutput out = f.run({&g}, Matrix::Ones(4, 4));
      EXPECT_EQ(out.nodes.cols(), layers * 5);
      EXPECT_EQ(out.graphs.cols(), layers * 5);
      EXPECT_EQ(f.cfg.output_dim(), layers * 5);
    }
  }
}

TEST(Encoder, MeanReadoutExample) {
  Graph g;
  g.node_count = 2;
  const BatchGraphOps ops = build_graph_ops(make_batch(std::vector<const Graph*>{&g}));
  Matrix h(2, 2);
  h << 0, 2, 2, 0;
  EXPECT_EQ(Matrix(*ops.mean_readout * h), Matrix::Ones(1, 2));
}

TEST(Encoder, BatchOfTwoReadsOutPerGraph) {
  Fixture f(EncoderKind::gcn, 1);
  const Graph a = testing::path_graph(3);
  const Graph b = testing::complete_graph(4);
  const EncoderOutput out = f.run({&a, &b}, Matrix::Ones(7, 1));
  ASSERT_EQ(out.graphs.rows(), 2);
  const Matrix nodes = out.nodes.value();
  EXPECT_LT((out.graphs.value().row(0) - nodes.topRows(3).colwise().mean()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((out.graphs.value().row(1) - nodes.bottomRows(4).colwise().mean()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Encoder, PermutationEquivariantNodesInvariantGraphs) {
  Rng rng(6);
  for (EncoderKind kind : {EncoderKind::gcn, EncoderKind::gin}) {
    Fixture f(kind, 3);
    for (int t = 0; t < 10; ++t) {
      const int n = 3 + static_cast<int>(rng.below(10));
      const Graph g = with_features(testing::random_graph(rng, n, 0.4), testing::random_matrix(rng, n, 3));
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      rng.shuffle(std::span<int>(perm));
      const Graph gp = permuted(g, perm);
      const EncoderOutput o = f.run({&g}, g.features);
      const EncoderOutput p = f.run({&gp}, gp.features);
      const Matrix on = o.nodes.value();
      const Matrix pn = p.nodes.value();
      for (int v = 0; v < n; ++v) EXPECT_LT((on.row(v) - pn.row(perm[v])).cwiseAbs().maxCoeff(), 1e-8);
      EXPECT_LT((o.graphs.value() - p.graphs.value()).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(Encoder, BatchedEqualsPerGraph) {
  Rng rng(7);
  for (EncoderKind kind : {EncoderKind::gcn, EncoderKind::gin}) {
    Fixture f(kind, 2);
    std::vector<Graph> graphs;
    for (int i = 0; i < 5; ++i) {
      const int n = 1 + static_cast<int>(rng.below(8));
      graphs.push_back(with_features(testing::random_graph(rng, n, 0.5, i), testing::random_matrix(rng, n, 2)));
    }
    std::vector<const Graph*> ptrs;
    for (const Graph& g : graphs) ptrs.push_back(&g);
    const GraphBatch batch = make_batch(ptrs);
    const Matrix all = f.run(ptrs, batch.node_features).graphs.value();
    for (int i = 0; i < 5; ++i) {
      const Matrix one = f.run({&graphs[i]}, graphs[i].features).graphs.value();
      EXPECT_LT((all.row(i) - one.row(0)).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Encoder, RejectsWrongFeatureWidth) {
  Fixture f(EncoderKind::gcn, 3);
  const Graph g = testing::path_graph(2);
  EXPECT_THROW(f.run({&g}, Matrix::Ones(2, 2)), ShapeError);
  EncoderConfig bad;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(EncoderKind, ParseAndDatasetDefaults) {
  EXPECT_EQ(parse_encoder_kind("gin"), EncoderKind::gin);
  EXPECT_EQ(parse_encoder_kind(to_string(EncoderKind::gcn)), EncoderKind::gcn);
  EXPECT_THROW(parse_encoder_kind("gat"), ConfigError);
  EXPECT_EQ(default_encoder_for("AIDS"), EncoderKind::gin);
  EXPECT_EQ(default_encoder_for("Tox21_MMP"), EncoderKind::gin);
  EXPECT_EQ(default_encoder_for("BZR"), EncoderKind::gcn);
  EXPECT_EQ(default_encoder_for("COX2"), EncoderKind::gcn);
}

}  // namespace
}  // namespace gladmamba
