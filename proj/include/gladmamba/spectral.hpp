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

#ifndef GLADMAMBA_SPECTRAL_HPP
#define GLADMAMBA_SPECTRAL_HPP

#include "gladmamba/graph.hpp"

#include <string>

namespace gladmamba {

enum class LaplacianKind { unnormalized, symmetric_normalized };

LaplacianKind parse_laplacian_kind(const std::string& s);
std::string to_string(LaplacianKind kind);

/// L = D - A, or L = I - D^-1/2 A D^-1/2 with isolated nodes contributing a
/// unit diagonal and no off-diagonal entries.
Matrix laplacian(const Graph& g, LaplacianKind kind = LaplacianKind::unnormalized);

/// Per-column Rayleigh quotient x_k^T L x_k / x_k^T x_k evaluated from the
/// edge list without forming L:
///
///   R_k = sum_{(i,j) ordered, A_ij = 1} (x_ik - x_jk)^2 / (2 sum_i x_ik^2)
///
/// The normalized kind uses the degree-scaled signal x_i / sqrt(d_i) inside
/// the difference (isolated nodes add x_i^2). All-zero columns give 0.
Vector rayleigh_quotient_diag(const Graph& g, const Matrix& x,
                              LaplacianKind kind = LaplacianKind::unnormalized);

struct SpectralReport {
  Vector eigenvalues;  ///< ascending
  Vector energies;     ///< x_hat_k^2 summed over columns, normalized to sum 1
  Vector rayleigh;     ///< one entry per signal column
};

inline constexpr int kDefaultSpectralNodeCap = 2000;

/// Dense eigendecomposition of L; energies of x_hat = U^T x. Throws SizeError
/// above `max_nodes` and std::logic_error if the Rayleigh identity
/// R = sum lambda_k x_hat_k^2 / sum x_hat_k^2 fails by more than 1e-8.
SpectralReport spectral_energy_distribution(const Graph& g, const Matrix& x,
                                            LaplacianKind kind = LaplacianKind::unnormalized,
                                            int max_nodes = kDefaultSpectralNodeCap);

/// Fraction of the normalized energy carried by the top quarter of the
/// eigenvalue indices (0-based k >= floor(0.75 n)).
double top_quartile_energy(const SpectralReport& report);

/// Cumulative energy sampled at `points` evenly spaced fractional eigen-index
/// positions in (0, 1]; lets graphs of different sizes be averaged.
Vector cumulative_energy_curve(const SpectralReport& report, int points);

}  // namespace gladmamba

#endif  // GLADMAMBA_SPECTRAL_HPP
