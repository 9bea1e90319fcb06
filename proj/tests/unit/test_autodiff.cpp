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

#include "gladmamba/autodiff.hpp"
#include "gladmamba/layers.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <functional>

namespace gladmamba {
namespace {

using Builder = std::function<ad::Var(const ParamStore&)>;

/// Projects the op output onto a fixed random matrix and checks every
/// parameter gradient by central differences.
void expect_gradients(ParamStore& store, const Builder& build, std::uint64_t seed = 1, double tol = 1e-6) {
  Rng rng(seed);
  const ad::Var probe_out = build(store);
  const ad::Var weights = ad::constant(testing::random_matrix(rng, probe_out.rows(), probe_out.cols()));
  auto loss = [&] { return ad::sum(ad::mul(build(store), weights)); };
  store.zero_grad();
  ad::backward(loss());
  const auto results = testing::finite_difference_check(store, [&] { return loss().scalar(); }, rng, 50);
  for (const auto& r : results) {
    EXPECT_LT(r.max_rel_error, tol) << r.name;
    EXPECT_GT(r.checked, 0) << r.name;
  }
}

TEST(Autodiff, MatmulAddSubMulScale) {
  Rng rng(1);
  ParamStore s;
  s.add("a", testing::random_matrix(rng, 3, 4));
  s.add("b", testing::random_matrix(rng, 4, 2));
  s.add("c", testing::random_matrix(rng, 3, 2));
  expect_gradients(s, [](const ParamStore& p) {
    const ad::Var ab = ad::matmul(p.get("a"), p.get("b"));
    return ad::scale(ad::sub(ad::mul(ab, p.get("c")), ad::add(ab, p.get("c"))), -1.5);
  });
}

TEST(Autodiff, AddRowAndActivations) {
  Rng rng(2);
  ParamStore s;
  s.add("x", testing::random_matrix(rng, 5, 3, -2, 2));
  s.add("r", testing::random_matrix(rng, 1, 3));
  expect_gradients(s, [](const ParamStore& p) {
    const ad::Var h = ad::add_row(p.get("x"), p.get("r"));
    return ad::concat_cols({ad::silu(h), ad::softplus(h), ad::relu(h)});
  });
}

TEST(Autodiff, SparseProductAndReductions) {
  Rng rng(3);
  ParamStore s;
  s.add("x", testing::random_matrix(rng, 4, 3));
  auto sp = std::make_shared<SparseMatrix>(2, 4);
  std::vector<Eigen::Triplet<double>> t{{0, 0, 0.5}, {0, 3, -1.0}, {1, 1, 2.0}, {1, 2, 0.25}};
  sp->setFromTriplets(t.begin(), t.end());
  expect_gradients(s, [sp](const ParamStore& p) {
    const ad::Var y = ad::spmm(sp, p.get("x"));
    return ad::add(ad::scale(ad::sum(ad::mul(y, y)), 0.5), ad::mean(ad::mul(p.get("x"), p.get("x"))));
  });
}

TEST(Autodiff, LayerNormGradients) {
  Rng rng(4);
  ParamStore s;
  s.add("x", testing::random_matrix(rng, 6, 5, -3, 3));
  s.add("g", testing::random_matrix(rng, 1, 5));
  s.add("b", testing::random_matrix(rng, 1, 5));
  expect_gradients(s, [](const ParamStore& p) { return ad::layer_norm(p.get("x"), p.get("g"), p.get("b"), 1e-5); });
}

TEST(Autodiff, LayerNormOfConstantRowsIsBeta) {
  const ad::Var x = ad::constant(Matrix::Constant(3, 4, 2.5));
  const ad::Var g = ad::constant(Matrix::Ones(1, 4));
  Matrix beta(1, 4);
  beta << 1, 2, 3, 4;
  const Matrix y = ad::layer_norm(x, g, ad::constant(beta), 1e-5).value();
  for (int r = 0; r < 3; ++r) EXPECT_EQ(y.row(r), beta.row(0));
}

TEST(Autodiff, CausalConvGradientsAndValues) {
  Rng rng(5);
  ParamStore s;
  s.add("x", testing::random_matrix(rng, 7, 3));
  s.add("k", testing::random_matrix(rng, 3, 4));
  s.add("b", testing::random_matrix(rng, 1, 3));
  expect_gradients(s, [](const ParamStore& p) { return ad::causal_conv1d(p.get("x"), p.get("k"), p.get("b")); });

  // out[t, c] = bias[c] + sum_k kernel[c, k] x[t - (w - 1) + k, c]
  const Matrix x = s.get("x").value();
  const Matrix k = s.get("k").value();
  const Matrix y = ad::causal_conv1d(s.get("x"), s.get("k"), s.get("b")).value();
  for (int t = 0; t < 7; ++t) {
    for (int c = 0; c < 3; ++c) {
      double ref = s.get("b").value()(0, c);
      for (int j = 0; j < 4; ++j) {
        const int src = t - 3 + j;
        if (src >= 0) ref += k(c, j) * x(src, c);
      }
      EXPECT_NEAR(y(t, c), ref, 1e-14);
    }
  }
}

TEST(Autodiff, CausalConvIgnoresFuture) {
  Rng rng(6);
  Matrix x = testing::random_matrix(rng, 6, 2);
  const ad::Var k = ad::constant(testing::random_matrix(rng, 2, 3));
  const ad::Var b = ad::constant(Matrix::Zero(1, 2));
  const Matrix y0 = ad::causal_conv1d(ad::constant(x), k, b).value();
  x.row(4).array() += 10.0;
  const Matrix y1 = ad::causal_conv1d(ad::constant(x), k, b).value();
  EXPECT_EQ(y0.topRows(4), y1.topRows(4));
  EXPECT_NE(y0.row(4), y1.row(4));
}

TEST(Autodiff, SharedSubexpressionsAccumulate) {
  const ad::Var x = ad::parameter(Matrix::Constant(1, 1, 3.0));
  const ad::Var y = ad::mul(x, x);             // x^2
  const ad::Var z = ad::add(y, ad::mul(y, x));  // x^2 + x^3
  ad::backward(z);
  EXPECT_DOUBLE_EQ(x.grad()(0, 0), 2 * 3.0 + 3 * 9.0);
}

TEST(Autodiff, DetachBlocksGradient) {
  const ad::Var x = ad::parameter(Matrix::Constant(1, 1, 2.0));
  ad::backward(ad::mul(x, ad::detach(x)));
  EXPECT_DOUBLE_EQ(x.grad()(0, 0), 2.0);
}

TEST(Autodiff, ShapeErrors) {
  const ad::Var a = ad::constant(Matrix::Zero(2, 3));
  const ad::Var b = ad::constant(Matrix::Zero(2, 2));
  EXPECT_THROW(ad::matmul(a, b), ShapeError);
  EXPECT_THROW(ad::add(a, b), ShapeError);
  EXPECT_THROW(ad::add_row(a, b), ShapeError);
  EXPECT_THROW(ad::backward(a), ShapeError);
  EXPECT_THROW(ad::concat_cols({a, ad::constant(Matrix::Zero(3, 1))}), ShapeError);
}

TEST(Autodiff, SoftplusAndSigmoidValues) {
  EXPECT_NEAR(ad::softplus_value(0.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(ad::softplus_value(800.0), 800.0, 1e-12);
  EXPECT_GT(ad::softplus_value(-800.0), -1.0);
  EXPECT_NEAR(ad::sigmoid_value(0.0), 0.5, 1e-15);
  EXPECT_TRUE(std::isfinite(ad::sigmoid_value(-1000.0)));
}

TEST(Layers, LinearMlpAndStoreBookkeeping) {
  Rng rng(7);
  ParamStore s;
  const Linear lin = Linear::create(s, "lin", 4, 3, rng);
  const Linear nob = Linear::create(s, "nob", 3, 2, rng, false);
  const Mlp2 mlp = Mlp2::create(s, "mlp", 2, 5, 3, rng);
  EXPECT_EQ(s.scalar_count(), 4u * 3 + 3 + 3 * 2 + 2 * 5 + 5 + 5 * 3 + 3);
  EXPECT_EQ(s.scalar_count("mlp"), 2u * 5 + 5 + 5 * 3 + 3);
  EXPECT_TRUE(s.contains("lin.bias"));
  EXPECT_FALSE(s.contains("nob.bias"));
  EXPECT_THROW(s.add("lin.weight", Matrix::Zero(1, 1)), std::invalid_argument);
  EXPECT_THROW(s.get("missing"), std::out_of_range);
  const double bound = 1.0 / std::sqrt(4.0);
  EXPECT_LE(lin.weight.value().cwiseAbs().maxCoeff(), bound);

  s.add("x", testing::random_matrix(rng, 5, 4, -2, 2));
  expect_gradients(s, [&](const ParamStore& p) { return mlp(nob(lin(p.get("x")))); }, 8);
}

}  // namespace
}  // namespace gladmamba
