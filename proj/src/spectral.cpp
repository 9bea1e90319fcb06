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

#include "gladmamba/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gladmamba {

LaplacianKind parse_laplacian_kind(const std::string& s) {
  if (s == "unnormalized") return LaplacianKind::unnormalized;
  if (s == "symmetric_normalized" || s == "normalized") return LaplacianKind::symmetric_normalized;
  throw ConfigError("unknown Laplacian kind '" + s + "'");
}

std::string to_string(LaplacianKind kind) {
  return kind == LaplacianKind::unnormalized ? "unnormalized" : "symmetric_normalized";
}

Matrix laplacian(const Graph& g, LaplacianKind kind) {
  const int n = g.node_count;
  const auto deg = g.degrees();
  Matrix l = Matrix::Zero(n, n);
  if (kind == LaplacianKind::unnormalized) {
    for (int v = 0; v < n; ++v) l(v, v) = deg[v];
    for (auto [u, v] : g.edges) {
      l(u, v) = -1.0;
      l(v, u) = -1.0;
    }
    return l;
  }
  for (int v = 0; v < n; ++v) l(v, v) = 1.0;
  for (auto [u, v] : g.edges) {
    const double w = -1.0 / std::sqrt(static_cast<double>(deg[u]) * static_cast<double>(deg[v]));
    l(u, v) = w;
    l(v, u) = w;
  }
  return l;
}

Vector rayleigh_quotient_diag(const Graph& g, const Matrix& x, LaplacianKind kind) {
  if (x.rows() != g.node_count) throw ShapeError("rayleigh_quotient_diag: signal rows != node count");
  const Eigen::Index d = x.cols();
  Vector num = Vector::Zero(d);
  const Vector den = x.colwise().squaredNorm().transpose();

  if (kind == LaplacianKind::unnormalized) {
    for (auto [u, v] : g.edges) {
      // Each undirected edge stands for both ordered pairs.
      num += 2.0 * (x.row(u) - x.row(v)).array().square().matrix().transpose();
    }
  } else {
    const auto deg = g.degrees();
    Vector inv_sqrt(g.node_count);
    for (int v = 0; v < g.node_count; ++v) inv_sqrt[v] = deg[v] > 0 ? 1.0 / std::sqrt(double(deg[v])) : 0.0;
    for (auto [u, v] : g.edges) {
      num += (x.row(u) * inv_sqrt[u] - x.row(v) * inv_sqrt[v]).array().square().matrix().transpose();
    }
    // Isolated nodes keep the unit diagonal of L.
    for (int v = 0; v < g.node_count; ++v) {
      if (deg[v] == 0) num += x.row(v).array().square().matrix().transpose();
    }
    num *= 2.0;
  }

  Vector out(d);
  for (Eigen::Index k = 0; k < d; ++k) out[k] = den[k] > 0.0 ? num[k] / (2.0 * den[k]) : 0.0;
  return out;
}

SpectralReport spectral_energy_distribution(const Graph& g, const Matrix& x, LaplacianKind kind, int max_nodes) {
  if (g.node_count > max_nodes) {
    throw SizeError("spectral_energy_distribution: " + std::to_string(g.node_count) + " nodes exceeds cap " +
                    std::to_string(max_nodes));
  }
  if (x.rows() != g.node_count) throw ShapeError("spectral_energy_distribution: signal rows != node count");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(laplacian(g, kind)));
  SpectralReport rep;
  rep.eigenvalues = eig.eigenvalues();  // ascending
  const Eigen::MatrixXd xhat = eig.eigenvectors().transpose() * Eigen::MatrixXd(x);

  Vector col_energy = xhat.rowwise().squaredNorm();
  const double total = col_energy.sum();
  rep.energies = total > 0.0 ? Vector(col_energy / total) : Vector(Vector::Zero(g.node_count));
  rep.rayleigh = rayleigh_quotient_diag(g, x, kind);

  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const double den = xhat.col(k).squaredNorm();
    if (den == 0.0) continue;
    const double spectral = rep.eigenvalues.dot(xhat.col(k).array().square().matrix()) / den;
    const double scale = std::max(1.0, std::abs(spectral));
    if (std::abs(spectral - rep.rayleigh[k]) > 1e-8 * scale) {
      throw std::logic_error("Rayleigh identity violated on column " + std::to_string(k));
    }
  }
  return rep;
}

double top_quartile_energy(const SpectralReport& report) {
  const auto n = report.energies.size();
  if (n == 0) return 0.0;
  const auto start = static_cast<Eigen::Index>(std::floor(0.75 * static_cast<double>(n)));
  return report.energies.tail(n - start).sum();
}

Vector cumulative_energy_curve(const SpectralReport& report, int points) {
  Vector curve = Vector::Zero(points);
  const auto n = report.energies.size();
  if (n == 0) return curve;
  double acc = 0.0;
  Eigen::Index k = 0;
  for (int i = 0; i < points; ++i) {
    const double frac = static_cast<double>(i + 1) / points;
    const auto upto = static_cast<Eigen::Index>(std::ceil(frac * static_cast<double>(n) - 1e-12));
    while (k < upto) acc += report.energies[k++];
    curve[i] = acc;
  }
  return curve;
}

}  // namespace gladmamba
