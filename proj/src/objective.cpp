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

#include "gladmamba/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gladmamba {

namespace {

constexpr double kNormEps = 1e-12;

/// Row-normalizes z; returns the norms used (clamped at kNormEps).
Matrix normalize_rows(const Matrix& z, Vector& norms) {
  norms = z.rowwise().norm().cwiseMax(kNormEps);
  return norms.cwiseInverse().asDiagonal() * z;
}

/// Backward of u = z / max(|z|, eps) given du.
Matrix normalize_rows_backward(const Matrix& u, const Matrix& du, const Vector& norms, const Matrix& z) {
  Matrix dz(du.rows(), du.cols());
  for (Eigen::Index r = 0; r < du.rows(); ++r) {
    if (z.row(r).norm() > kNormEps) {
      dz.row(r) = (du.row(r) - u.row(r) * u.row(r).dot(du.row(r))) / norms[r];
    } else {
      dz.row(r) = du.row(r) / norms[r];
    }
  }
  return dz;
}

double logsumexp_excluding(const Eigen::Ref<const Eigen::RowVectorXd>& s, Eigen::Index skip) {
  double mx = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (k != skip) mx = std::max(mx, s[k]);
  }
  double acc = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (k != skip) acc += std::exp(s[k] - mx);
  }
  return mx + std::log(acc);
}

}  // namespace

void LossConfig::validate() const {
  if (!(tau > 0.0)) throw ConfigError("loss.tau must be positive");
  if (!(alpha >= 0.0)) throw ConfigError("loss.alpha must be non-negative");
}

ad::Var contrastive_rows(const ad::Var& z_o, const ad::Var& z_a, std::span<const int> offsets, double tau) {
  if (z_o.rows() != z_a.rows() || z_o.cols() != z_a.cols()) throw ShapeError("contrastive_rows: views differ in shape");
  if (offsets.empty() || offsets.back() != z_o.rows()) throw ShapeError("contrastive_rows: offsets do not cover rows");

  Vector norm_o, norm_a;
  const Matrix u = normalize_rows(z_o.value(), norm_o);
  const Matrix w = normalize_rows(z_a.value(), norm_a);

  Matrix out = Matrix::Zero(z_o.rows(), 1);
  for (std::size_t s = 0; s + 1 < offsets.size(); ++s) {
    const int lo = offsets[s];
    const int m = offsets[s + 1] - lo;
    if (m < 2) continue;
    const Matrix sim = u.middleRows(lo, m) * w.middleRows(lo, m).transpose() / tau;
    for (int i = 0; i < m; ++i) {
      const double l_o = -sim(i, i) + logsumexp_excluding(sim.row(i), i);
      const double l_a = -sim(i, i) + logsumexp_excluding(sim.col(i).transpose(), i);
      out(lo + i, 0) = 0.5 * (l_o + l_a);
    }
  }

  std::vector<int> segs(offsets.begin(), offsets.end());
  return ad::make_op(std::move(out), {z_o, z_a}, [u, w, norm_o, norm_a, segs, tau](ad::Node& self) {
    const Matrix& g = self.grad;
    Matrix du = Matrix::Zero(u.rows(), u.cols());
    Matrix dw = Matrix::Zero(w.rows(), w.cols());
    for (std::size_t s = 0; s + 1 < segs.size(); ++s) {
      const int lo = segs[s];
      const int m = segs[s + 1] - lo;
      if (m < 2) continue;
      const Matrix sim = u.middleRows(lo, m) * w.middleRows(lo, m).transpose() / tau;
      Matrix ds = Matrix::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        const double gi = g(lo + i, 0);
        if (gi == 0.0) continue;
        ds(i, i) -= gi;
        const double lse_row = logsumexp_excluding(sim.row(i), i);
        const double lse_col = logsumexp_excluding(sim.col(i).transpose(), i);
        for (int k = 0; k < m; ++k) {
          if (k == i) continue;
          ds(i, k) += 0.5 * gi * std::exp(sim(i, k) - lse_row);
          ds(k, i) += 0.5 * gi * std::exp(sim(k, i) - lse_col);
        }
      }
      du.middleRows(lo, m) += ds * w.middleRows(lo, m) / tau;
      dw.middleRows(lo, m) += ds.transpose() * u.middleRows(lo, m) / tau;
    }
    ad::Node& zo = self.parent(0);
    ad::Node& za = self.parent(1);
    zo.add_grad(normalize_rows_backward(u, du, norm_o, zo.value));
    za.add_grad(normalize_rows_backward(w, dw, norm_a, za.value));
  });
}

ad::Var node_infonce(const ad::Var& z_o, const ad::Var& z_a, std::span<const int> node_offsets,
                     const LossConfig& cfg) {
  cfg.validate();
  const ad::Var rows = contrastive_rows(z_o, z_a, node_offsets, cfg.tau);
  const auto graphs = static_cast<Eigen::Index>(node_offsets.size()) - 1;
  std::vector<Eigen::Triplet<double>> trip;
  for (Eigen::Index s = 0; s < graphs; ++s) {
    const int lo = node_offsets[s];
    const int m = node_offsets[s + 1] - lo;
    for (int i = 0; i < m; ++i) trip.emplace_back(s, lo + i, 1.0 / m);
  }
  auto pool = std::make_shared<SparseMatrix>(graphs, z_o.rows());
  pool->setFromTriplets(trip.begin(), trip.end());
  return ad::spmm(std::move(pool), rows);
}

ad::Var graph_infonce(const ad::Var& zg_o, const ad::Var& zg_a, const LossConfig& cfg) {
  cfg.validate();
  if (zg_o.rows() < 2) throw std::invalid_argument("graph_infonce: need at least 2 graphs per batch for negatives");
  const int offsets[2] = {0, static_cast<int>(zg_o.rows())};
  return contrastive_rows(zg_o, zg_a, offsets, cfg.tau);
}

double mean_of(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double population_std(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  const double mu = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - mu) * (x - mu);
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

AdaptiveLoss adaptive_total_loss(const ad::Var& node_losses, const ad::Var& graph_losses, const LossConfig& cfg,
                                 std::optional<std::pair<double, double>> fixed_sigmas) {
  cfg.validate();
  if (node_losses.value().size() == 0 || graph_losses.value().size() == 0) {
    throw std::invalid_argument("adaptive_total_loss: empty loss set");
  }
  AdaptiveLoss out;
  if (fixed_sigmas) {
    out.sigma_node = fixed_sigmas->first;
    out.sigma_graph = fixed_sigmas->second;
  } else {
    out.sigma_node = population_std({node_losses.value().data(), static_cast<std::size_t>(node_losses.value().size())});
    out.sigma_graph =
        population_std({graph_losses.value().data(), static_cast<std::size_t>(graph_losses.value().size())});
  }
  // pow(0, 0) = 1 keeps alpha = 0 a plain sum.
  const double w_node = std::pow(out.sigma_node, cfg.alpha);
  const double w_graph = std::pow(out.sigma_graph, cfg.alpha);
  out.total = ad::add(ad::scale(ad::mean(node_losses), w_node), ad::scale(ad::mean(graph_losses), w_graph));
  return out;
}

ScoreNormalizer fit_normalizer(std::span<const double> train_node_losses, std::span<const double> train_graph_losses) {
  if (train_node_losses.empty() || train_graph_losses.empty()) {
    throw std::invalid_argument("fit_normalizer: empty training set");
  }
  ScoreNormalizer n;
  n.mu_node = mean_of(train_node_losses);
  n.sigma_node = std::max(population_std(train_node_losses), kSigmaFloor);
  n.mu_graph = mean_of(train_graph_losses);
  n.sigma_graph = std::max(population_std(train_graph_losses), kSigmaFloor);
  return n;
}

double anomaly_score(double loss_node, double loss_graph, const ScoreNormalizer& norm) {
  return (loss_node - norm.mu_node) / norm.sigma_node + (loss_graph - norm.mu_graph) / norm.sigma_graph;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("auc: scores and labels differ in length");
  std::size_t pos = 0;
  for (int l : labels) pos += l != 0;
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) throw std::invalid_argument("auc: both classes must be present");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double rank_sum_pos = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] != 0) rank_sum_pos += midrank;
    }
    i = j;
  }
  const double p = static_cast<double>(pos);
  const double n = static_cast<double>(neg);
  return (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * n);
}

}  // namespace gladmamba
