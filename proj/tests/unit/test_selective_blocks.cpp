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
#include "gladmamba/vfm.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace gladmamba {
namespace {

// Plain-Eigen forward passes written straight from the block definitions.
namespace ref {

Matrix linear(const Linear& l, const Matrix& x) {
  Matrix y = x * l.weight.value();
  if (l.bias) y.rowwise() += l.bias.value().row(0);
  return y;
}

Matrix layer_norm(const LayerNorm& ln, const Matrix& x) {
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double mu = x.row(r).mean();
    const double var = (x.row(r).array() - mu).square().mean();
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      y(r, c) = (x(r, c) - mu) / std::sqrt(var + ln.eps) * ln.gamma.value()(0, c) + ln.beta.value()(0, c);
    }
  }
  return y;
}

Matrix conv(const CausalConv1d& cv, const Matrix& x) {
  const Matrix& k = cv.kernel.value();
  const Eigen::Index w = k.cols();
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      double acc = cv.bias.value()(0, c);
      for (Eigen::Index j = 0; j < w; ++j) {
        const Eigen::Index src = t - (w - 1) + j;
        if (src >= 0) acc += k(c, j) * x(src, c);
      }
      y(t, c) = acc;
    }
  }
  return y;
}

Matrix silu(const Matrix& x) { return x.unaryExpr([](double v) { return v / (1.0 + std::exp(-v)); }); }
Matrix softplus(const Matrix& x) { return x.unaryExpr([](double v) { return std::log1p(std::exp(v)); }); }
Matrix relu(const Matrix& x) { return x.cwiseMax(0.0); }

Matrix preprocess(const SequencePreprocess& p, const Matrix& h) {
  return silu(conv(p.conv, linear(p.in_proj, layer_norm(p.norm, h))));
}

Matrix scan(const Matrix& x, const Matrix& delta, const Matrix& a_log, const Matrix& b, const Matrix& c) {
  const Eigen::Index T = x.rows();
  const Eigen::Index D = x.cols();
  const Eigen::Index N = b.cols();
  Matrix y = Matrix::Zero(T, D);
  for (Eigen::Index ch = 0; ch < D; ++ch) {
    Eigen::VectorXd h = Eigen::VectorXd::Zero(N);
    for (Eigen::Index t = 0; t < T; ++t) {
      for (Eigen::Index n = 0; n < N; ++n) {
        const double a = -std::exp(a_log(ch, n));
        const double dt = delta(t, ch);
        h[n] = std::exp(dt * a) * h[n] + (std::exp(dt * a) - 1.0) / a * b(t, n) * x(t, ch);
      }
      y(t, ch) = c.row(t).dot(h.transpose());
    }
  }
  return y;
}

Matrix selective(const SelectiveProjections& p, const Matrix& input, const Matrix& source) {
  const Matrix b = linear(p.w_b, source);
  const Matrix c = linear(p.w_c, source);
  const Matrix delta = softplus(linear(p.w_delta_up, linear(p.w_delta_down, source)));
  return scan(input, delta, p.a_log.value(), b, c);
}

Matrix gated(const GatedResidual& g, const Matrix& y, const Matrix& normed, const Matrix& residual) {
  const Matrix u = silu(linear(g.gate_proj, normed));
  return layer_norm(g.out_norm,
                    Matrix(layer_norm(g.inner_norm, linear(g.out_proj, y.cwiseProduct(u))) + residual));
}

std::pair<Matrix, Matrix> vfm(const Matrix& h_o, const Matrix& h_a, const VfmParams& p) {
  const Matrix in_o = preprocess(p.o.pre, h_o);
  const Matrix in_a = preprocess(p.a.pre, h_a);
  const Matrix y_o = selective(p.o.sel, in_o, in_a);
  const Matrix y_a = selective(p.a.sel, in_a, in_o);
  return {gated(p.o.out, y_o, layer_norm(p.o.pre.norm, h_o), h_o),
          gated(p.a.out, y_a, layer_norm(p.a.pre.norm, h_a), h_a)};
}

Matrix sgm(const Matrix& hg, const Matrix& rq, const SgmParams& p) {
  const Matrix input = preprocess(p.graph_pre, hg);
  const Matrix e = linear(p.rq_mlp->second, relu(linear(p.rq_mlp->first, rq)));
  const Matrix source = preprocess(*p.rq_pre, e);
  return gated(p.out, selective(p.sel, input, source), layer_norm(p.graph_pre.norm, hg), hg);
}

}  // namespace ref

SelectiveConfig small_ssm(int d = 6) {
  SelectiveConfig c;
  c.model_dim = d;
  c.state_size = 3;
  c.conv_width = 3;
  c.delta_rank = 2;
  return c;
}

/// Moves every parameter off its initial value so norms and biases matter.
void jitter(ParamStore& store, Rng& rng, double scale = 0.1) {
  for (const NamedParam& p : store.entries()) {
    ad::Var v = p.var;
    v.mutable_value() += testing::random_matrix(rng, v.rows(), v.cols(), -scale, scale);
  }
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

TEST(SequencePreprocess, ZeroInputGivesSiluOfConvBias) {
  Rng rng(1);
  ParamStore s;
  const SequencePreprocess p = SequencePreprocess::create(s, "pre", 4, 5, 3, rng);
  const Matrix out = p(ad::constant(Matrix::Zero(6, 4))).value();
  // LayerNorm of a zero row is beta = 0, so the projection emits its bias.
  const Matrix expect = ref::silu(ref::conv(p.conv, ref::linear(p.in_proj, Matrix::Zero(6, 4))));
  EXPECT_LT(max_abs(out - expect), 1e-14);
  EXPECT_EQ(out.rows(), 6);
  EXPECT_EQ(out.cols(), 5);
}

TEST(SelectiveProjections, DeltaIsSoftplusOfBiasOnZeroSourceAndPositive) {
  Rng rng(2);
  ParamStore s;
  const SelectiveProjections p = SelectiveProjections::create(s, "sel", small_ssm(), rng);
  const SsmInputs z = project_selective(ad::constant(Matrix::Zero(4, 6)), p);
  for (int c = 0; c < 6; ++c) {
    const double expect = std::log1p(std::exp(p.w_delta_up.bias.value()(0, c)));
    EXPECT_NEAR(z.delta.value()(0, c), expect, 1e-15);
    EXPECT_GE(expect, 1e-3 * (1 - 1e-9));
    EXPECT_LE(expect, 1e-1 * (1 + 1e-9));
  }
  EXPECT_EQ(max_abs(z.b.value()), 0.0);

  ParamStore s2;
  Rng rng2(3);
  SelectiveProjections q = SelectiveProjections::create(s2, "sel", small_ssm(), rng2);
  q.w_delta_up.bias.mutable_value().setZero();
  const SsmInputs zero = project_selective(ad::constant(Matrix::Zero(2, 6)), q);
  EXPECT_NEAR(zero.delta.value()(1, 3), std::log(2.0), 1e-15);

  const SsmInputs r = project_selective(ad::constant(testing::random_matrix(rng, 20, 6, -50, 50)), p);
  EXPECT_GT(r.delta.value().minCoeff(), 0.0);
}

TEST(Vfm, MatchesStraightLineReference) {
  Rng rng(4);
  ParamStore s;
  VfmConfig cfg{small_ssm(), true};
  const VfmParams p = VfmParams::create(s, "vfm", cfg, rng);
  jitter(s, rng);
  const Matrix h_o = testing::random_matrix(rng, 3, 6);
  const Matrix h_a = testing::random_matrix(rng, 3, 6);
  const VfmOutput out = vfm_forward(ad::constant(h_o), ad::constant(h_a), p, cfg);
  const auto [z_o, z_a] = ref::vfm(h_o, h_a, p);
  EXPECT_LT(max_abs(out.z_o.value() - z_o), 1e-8);
  EXPECT_LT(max_abs(out.z_a.value() - z_a), 1e-8);
}

TEST(Vfm, PreservesShapeAndIsDeterministic) {
  Rng rng(5);
  ParamStore s;
  VfmConfig cfg{small_ssm(), true};
  const VfmParams p = VfmParams::create(s, "vfm", cfg, rng);
  const ad::Var h_o = ad::constant(testing::random_matrix(rng, 17, 6));
  const ad::Var h_a = ad::constant(testing::random_matrix(rng, 17, 6));
  const VfmOutput a = vfm_forward(h_o, h_a, p, cfg);
  const VfmOutput b = vfm_forward(h_o, h_a, p, cfg);
  EXPECT_EQ(a.z_o.rows(), 17);
  EXPECT_EQ(a.z_a.cols(), 6);
  EXPECT_EQ(a.z_o.value(), b.z_o.value());
  EXPECT_EQ(a.z_a.value(), b.z_a.value());
  EXPECT_TRUE(a.z_o.value().allFinite());
}

TEST(Vfm, EachViewDependsOnTheOtherOnlyWhenCrossWired) {
  Rng rng(6);
  ParamStore s;
  VfmConfig cfg{small_ssm(), true};
  const VfmParams p = VfmParams::create(s, "vfm", cfg, rng);
  jitter(s, rng);
  for (bool cross : {true, false}) {
    cfg.cross_view = cross;
    const ad::Var h_o = ad::constant(testing::random_matrix(rng, 5, 6));
    const ad::Var h_a = ad::parameter(testing::random_matrix(rng, 5, 6));
    ad::backward(ad::sum(vfm_forward(h_o, h_a, p, cfg).z_o));
    if (cross) {
      EXPECT_GT(max_abs(h_a.grad()), 1e-8);
    } else {
      EXPECT_EQ(max_abs(h_a.grad()), 0.0);
    }
  }
}

TEST(Vfm, RejectsMismatchedViews) {
  Rng rng(7);
  ParamStore s;
  VfmConfig cfg{small_ssm(), true};
  const VfmParams p = VfmParams::create(s, "vfm", cfg, rng);
  EXPECT_THROW(vfm_forward(ad::constant(Matrix::Zero(3, 6)), ad::constant(Matrix::Zero(4, 6)), p, cfg), ShapeError);
  EXPECT_THROW(vfm_forward(ad::constant(Matrix::Zero(3, 5)), ad::constant(Matrix::Zero(3, 5)), p, cfg), ShapeError);
}

TEST(Sgm, MatchesStraightLineReference) {
  Rng rng(8);
  ParamStore s;
  SgmConfig cfg{small_ssm(), 4, true};
  const SgmParams p = SgmParams::create(s, "sgm", cfg, rng);
  jitter(s, rng);
  const Matrix hg = testing::random_matrix(rng, 3, 6);
  const Matrix rq = testing::random_matrix(rng, 3, 4, 0.0, 2.0);
  const Matrix out = sgm_forward(ad::constant(hg), ad::constant(rq), p, cfg).value();
  EXPECT_LT(max_abs(out - ref::sgm(hg, rq, p)), 1e-8);
}

TEST(Sgm, SpectralInputOnlyAffectsCurrentAndLaterGraphs) {
  Rng rng(9);
  ParamStore s;
  SgmConfig cfg{small_ssm(), 2, true};
  const SgmParams p = SgmParams::create(s, "sgm", cfg, rng);
  jitter(s, rng);
  const ad::Var hg = ad::constant(testing::random_matrix(rng, 8, 6));
  Matrix rq = testing::random_matrix(rng, 8, 2, 0.0, 2.0);
  const Matrix y0 = sgm_forward(hg, ad::constant(rq), p, cfg).value();
  rq.row(5).array() += 0.5;
  const Matrix y1 = sgm_forward(hg, ad::constant(rq), p, cfg).value();
  EXPECT_EQ(y0.topRows(5), y1.topRows(5));
  EXPECT_GT(max_abs(y0.bottomRows(3) - y1.bottomRows(3)), 0.0);
}

TEST(Sgm, WithoutSpectrumGuidanceIgnoresRayleighInputAndHasNoRqParams) {
  Rng rng(10);
  ParamStore s;
  SgmConfig cfg{small_ssm(), 3, false};
  const SgmParams p = SgmParams::create(s, "sgm", cfg, rng);
  EXPECT_FALSE(p.rq_mlp.has_value());
  EXPECT_FALSE(p.rq_pre.has_value());
  EXPECT_EQ(s.scalar_count("sgm.rq"), 0u);
  const ad::Var hg = ad::constant(testing::random_matrix(rng, 4, 6));
  const Matrix a = sgm_forward(hg, ad::constant(Matrix::Zero(4, 3)), p, cfg).value();
  const Matrix b = sgm_forward(hg, ad::constant(Matrix::Ones(4, 3)), p, cfg).value();
  EXPECT_EQ(a, b);
}

TEST(Sgm, SingleGraphSequenceAndShapes) {
  Rng rng(11);
  ParamStore s;
  SgmConfig cfg{small_ssm(), 2, true};
  const SgmParams p = SgmParams::create(s, "sgm", cfg, rng);
  const Matrix y = sgm_forward(ad::constant(testing::random_matrix(rng, 1, 6)),
                               ad::constant(testing::random_matrix(rng, 1, 2)), p, cfg)
                       .value();
  EXPECT_EQ(y.rows(), 1);
  EXPECT_EQ(y.cols(), 6);
  EXPECT_TRUE(y.allFinite());
  EXPECT_THROW(sgm_forward(ad::constant(Matrix::Zero(3, 6)), ad::constant(Matrix::Zero(2, 2)), p, cfg), ShapeError);
  EXPECT_THROW(sgm_forward(ad::constant(Matrix::Zero(3, 6)), ad::constant(Matrix::Zero(3, 5)), p, cfg), ShapeError);
}

TEST(Sgm, IdenticalLeadingGraphsShareOutputAtFirstStep) {
  Rng rng(12);
  ParamStore s;
  SgmConfig cfg{small_ssm(), 2, true};
  const SgmParams p = SgmParams::create(s, "sgm", cfg, rng);
  jitter(s, rng);
  Matrix hg(2, 6);
  hg.row(0) = testing::random_matrix(rng, 1, 6);
  hg.row(1) = hg.row(0);
  Matrix rq(2, 2);
  rq << 0.5, 1.0, 0.5, 1.0;
  const Matrix single = sgm_forward(ad::constant(Matrix(hg.topRows(1))), ad::constant(Matrix(rq.topRows(1))), p, cfg)
                            .value();
  const Matrix pair = sgm_forward(ad::constant(hg), ad::constant(rq), p, cfg).value();
  EXPECT_LT(max_abs(pair.row(0) - single.row(0)), 1e-15);
  EXPECT_TRUE(pair.allFinite());
}

TEST(SelectiveConfig, Validates) {
  SelectiveConfig c = small_ssm();
  c.state_size = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  SgmConfig sg{small_ssm(), 0, true};
  ParamStore s;
  Rng rng(13);
  EXPECT_THROW(SgmParams::create(s, "sgm", sg, rng), ConfigError);
}

}  // namespace
}  // namespace gladmamba
