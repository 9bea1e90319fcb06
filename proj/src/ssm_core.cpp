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

#include "gladmamba/ssm_core.hpp"

#include <cmath>
#include <string>

namespace gladmamba {

namespace {

/// d/da of (exp(delta a) - 1) / a.
double zoh_gain_da(double a, double delta) {
  const double z = delta * a;
  if (std::abs(z) < 1e-4) return delta * delta * (0.5 + z / 3.0 + z * z / 8.0);
  return (z * std::exp(z) - std::expm1(z)) / (a * a);
}

void check_scan_shapes(Eigen::Index t_len, Eigen::Index channels, Eigen::Index state, const Matrix& delta,
                       const Matrix& a, const Matrix& b, const Matrix& c) {
  if (delta.rows() != t_len || delta.cols() != channels) throw ShapeError("scan: delta must be T x D");
  if (a.rows() != channels || a.cols() != state) throw ShapeError("scan: A must be D x N");
  if (b.rows() != t_len || b.cols() != state) throw ShapeError("scan: B must be T x N");
  if (c.rows() != t_len || c.cols() != state) throw ShapeError("scan: C must be T x N");
}

}  // namespace

Vector init_A(int state_size) {
  Vector a(state_size);
  for (int n = 0; n < state_size; ++n) a[n] = -static_cast<double>(n + 1);
  return a;
}

Matrix init_A_log(int channels, int state_size) {
  Matrix m(channels, state_size);
  for (int n = 0; n < state_size; ++n) m.col(n).setConstant(std::log(static_cast<double>(n + 1)));
  return m;
}

Matrix A_from_log(const Matrix& a_log) { return -a_log.array().exp().matrix(); }

double zoh_input_gain(double a, double delta) {
  const double z = delta * a;
  if (std::abs(z) < kZohSeriesThreshold) return delta * (1.0 + 0.5 * z);
  return std::expm1(z) / a;
}

ZohScalar discretize_zoh(double a, double b, double delta) {
  if (!(delta > 0.0)) throw DomainError("discretize_zoh: step size must be positive");
  return {std::exp(delta * a), zoh_input_gain(a, delta) * b};
}

SsmDiscrete discretize_zoh(const Matrix& a, const Matrix& b, const Matrix& delta) {
  const auto t_len = delta.rows();
  const auto channels = delta.cols();
  const auto state = a.cols();
  if (a.rows() != channels) throw ShapeError("discretize_zoh: A must be D x N");
  if (b.rows() != t_len || b.cols() != state) throw ShapeError("discretize_zoh: B must be T x N");

  SsmDiscrete d;
  d.steps = static_cast<int>(t_len);
  d.channels = static_cast<int>(channels);
  d.state = static_cast<int>(state);
  d.abar.resize(static_cast<std::size_t>(t_len * channels * state));
  d.bbar.resize(d.abar.size());
  for (int t = 0; t < d.steps; ++t) {
    for (int c = 0; c < d.channels; ++c) {
      const double dt = delta(t, c);
      if (!(dt > 0.0)) throw DomainError("discretize_zoh: step size must be positive");
      for (int n = 0; n < d.state; ++n) {
        const std::size_t i = d.index(t, c, n);
        d.abar[i] = std::exp(dt * a(c, n));
        d.bbar[i] = zoh_input_gain(a(c, n), dt) * b(t, n);
      }
    }
  }
  return d;
}

Matrix selective_scan(const SsmDiscrete& disc, const Matrix& c, const Matrix& x) {
  if (x.rows() != disc.steps || x.cols() != disc.channels) {
    throw ShapeError("selective_scan: input is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                     ", parameters cover " + std::to_string(disc.steps) + "x" + std::to_string(disc.channels));
  }
  if (c.rows() != disc.steps || c.cols() != disc.state) throw ShapeError("selective_scan: C must be T x N");

  Matrix y(disc.steps, disc.channels);
  std::vector<double> h(static_cast<std::size_t>(disc.channels) * disc.state, 0.0);
  for (int t = 0; t < disc.steps; ++t) {
    for (int ch = 0; ch < disc.channels; ++ch) {
      double acc = 0.0;
      for (int n = 0; n < disc.state; ++n) {
        const std::size_t i = disc.index(t, ch, n);
        double& hs = h[static_cast<std::size_t>(ch) * disc.state + n];
        hs = disc.abar[i] * hs + disc.bbar[i] * x(t, ch);
        acc += c(t, n) * hs;
      }
      y(t, ch) = acc;
    }
  }
  return y;
}

ad::Var selective_scan_zoh(const ad::Var& x, const ad::Var& delta, const ad::Var& a_log, const ad::Var& b,
                           const ad::Var& c) {
  const auto t_len = x.rows();
  const auto channels = x.cols();
  const auto state = a_log.cols();
  check_scan_shapes(t_len, channels, state, delta.value(), a_log.value(), b.value(), c.value());

  const Matrix a = A_from_log(a_log.value());
  const SsmDiscrete disc = discretize_zoh(a, b.value(), delta.value());

  // Keep every state for the backward pass: T x D x N.
  auto states = std::make_shared<std::vector<double>>(disc.abar.size());
  Matrix y(t_len, channels);
  for (int t = 0; t < disc.steps; ++t) {
    for (int ch = 0; ch < disc.channels; ++ch) {
      double acc = 0.0;
      for (int n = 0; n < disc.state; ++n) {
        const std::size_t i = disc.index(t, ch, n);
        const double prev = t > 0 ? (*states)[disc.index(t - 1, ch, n)] : 0.0;
        const double hs = disc.abar[i] * prev + disc.bbar[i] * x.value()(t, ch);
        (*states)[i] = hs;
        acc += c.value()(t, n) * hs;
      }
      y(t, ch) = acc;
    }
  }

  return ad::make_op(std::move(y), {x, delta, a_log, b, c}, [states, a](ad::Node& self) {
    const Matrix& gy = self.grad;
    const Matrix& xv = self.parent(0).value;
    const Matrix& dv = self.parent(1).value;
    const Matrix& bv = self.parent(3).value;
    const Matrix& cv = self.parent(4).value;
    const auto t_len = static_cast<int>(xv.rows());
    const auto channels = static_cast<int>(xv.cols());
    const auto state = static_cast<int>(a.cols());
    auto at = [&](int t, int ch, int n) {
      return (*states)[(static_cast<std::size_t>(t) * channels + ch) * state + n];
    };

    Matrix gx = Matrix::Zero(t_len, channels);
    Matrix gdelta = Matrix::Zero(t_len, channels);
    Matrix ga = Matrix::Zero(channels, state);
    Matrix gb = Matrix::Zero(t_len, state);
    Matrix gc = Matrix::Zero(t_len, state);

    // Carried dL/dh_t per (channel, state), walking backwards in time.
    std::vector<double> gh(static_cast<std::size_t>(channels) * state, 0.0);
    for (int t = t_len - 1; t >= 0; --t) {
      for (int ch = 0; ch < channels; ++ch) {
        const double dt = dv(t, ch);
        const double xt = xv(t, ch);
        const double gyt = gy(t, ch);
        for (int n = 0; n < state; ++n) {
          double& g = gh[static_cast<std::size_t>(ch) * state + n];
          const double hs = at(t, ch, n);
          g += gyt * cv(t, n);
          gc(t, n) += gyt * hs;

          const double an = a(ch, n);
          const double abar = std::exp(dt * an);
          const double gain = zoh_input_gain(an, dt);
          const double prev = t > 0 ? at(t - 1, ch, n) : 0.0;

          const double g_abar = g * prev;
          const double g_bbar = g * xt;
          gx(t, ch) += g * gain * bv(t, n);
          gb(t, n) += g_bbar * gain;
          // dAbar/ddelta = a Abar, dBbar/ddelta = Abar b.
          gdelta(t, ch) += g_abar * an * abar + g_bbar * abar * bv(t, n);
          // dAbar/da = delta Abar, dBbar/da = d(gain)/da b.
          ga(ch, n) += g_abar * dt * abar + g_bbar * zoh_gain_da(an, dt) * bv(t, n);

          g *= abar;
        }
      }
    }
    self.parent(0).add_grad(gx);
    self.parent(1).add_grad(gdelta);
    // a = -exp(a_log) so da/da_log = a.
    self.parent(2).add_grad(ga.cwiseProduct(a));
    self.parent(3).add_grad(gb);
    self.parent(4).add_grad(gc);
  });
}

}  // namespace gladmamba
