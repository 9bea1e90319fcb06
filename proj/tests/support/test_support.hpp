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

#ifndef GLADMAMBA_TESTS_SUPPORT_HPP
#define GLADMAMBA_TESTS_SUPPORT_HPP

// Independent reference implementations and fixtures for the tests. Nothing
// here calls into the code under test except to read plain data.

#include "gladmamba/graph.hpp"
#include "gladmamba/layers.hpp"
#include "gladmamba/random.hpp"
#include "gladmamba/ssm_core.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace gladmamba::testing {

// Graph fixtures ----------------------------------------------------------

/// Erdos-Renyi G(n, p) with canonical edges and no features.
Graph random_graph(Rng& rng, int n, double p, int id = 0);
Graph path_graph(int n, int id = 0);
Graph cycle_graph(int n, int id = 0);
Graph complete_graph(int n, int id = 0);
Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo = -1.0, double hi = 1.0);

struct SyntheticSpec {
  int normals = 60;
  int anomalies = 12;
  int min_nodes = 6;
  int max_nodes = 14;
  bool node_labels = true;
  bool attributes = false;
  std::uint64_t seed = 7;
  std::string name = "SYNTH";
};

/// Two-class dataset: label 0 graphs are sparse rings with chords and mostly
/// label-0 nodes; label 1 graphs (the minority) are dense and carry mostly
/// label-2 nodes. Node labels or attributes follow the SyntheticSpec flags.
GraphDataset synthetic_dataset(const SyntheticSpec& spec);

/// A unique empty directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Oracles -----------------------------------------------------------------

/// L = D - A from the dense adjacency.
Matrix dense_laplacian(const Graph& g);
/// I - D^-1/2 A D^-1/2, isolated nodes keep a unit diagonal.
Matrix dense_normalized_laplacian(const Graph& g);
/// x^T L x / x^T x per column by matrix products.
Vector quadratic_form_rayleigh(const Matrix& laplacian, const Matrix& x);
/// sum lambda_k xhat_k^2 / sum xhat_k^2 per column from an eigendecomposition.
Vector eigen_rayleigh(const Matrix& laplacian, const Matrix& x);

/// (exp(delta a), integral_0^delta exp(s a) ds * b) from the exponential of
/// the augmented 2x2 matrix [[a, b], [0, 0]] * delta.
std::pair<double, double> zoh_matrix_exponential(double a, double b, double delta);

/// Per-step recurrence with explicit diagonal state matrices:
/// h_t = diag(abar_t) h_{t-1} + bbar_t x_t, y_t = C_t . h_t.
Matrix naive_scan(const SsmDiscrete& disc, const Matrix& c, const Matrix& x);

/// Symmetrized contrastive loss per row, by direct summation.
Vector brute_force_contrastive(const Matrix& z_o, const Matrix& z_a, const std::vector<int>& offsets, double tau);

/// relu(Dt^-1/2 (A + I) Dt^-1/2 H W + b) on the dense adjacency.
Matrix dense_gcn_layer(const Matrix& adjacency, const Matrix& h, const Matrix& w, const Matrix& b);
/// relu-free GIN aggregation (1 + eps) h_v + sum_u h_u.
Matrix dense_gin_aggregate(const Matrix& adjacency, const Matrix& h, double eps);

// Gradients ---------------------------------------------------------------

struct GradCheckResult {
  std::string name;
  double max_rel_error = 0.0;
  double max_abs_analytic = 0.0;
  int checked = 0;
};

/// Compares the accumulated gradients of every parameter in `store` with
/// central differences of `loss` (which must not touch the gradients). Up to
/// `per_param` entries per tensor are sampled with `rng`. The relative error
/// is |g - g_fd| / max(|g|, |g_fd|, floor).
std::vector<GradCheckResult> finite_difference_check(ParamStore& store, const std::function<double()>& loss,
                                                     Rng& rng, int per_param, double step = 1e-5,
                                                     double floor = 1e-6);

}  // namespace gladmamba::testing

#endif  // GLADMAMBA_TESTS_SUPPORT_HPP
