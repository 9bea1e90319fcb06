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
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

namespace gladmamba {
namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

TEST(Laplacian, K2BothKinds) {
  Matrix expect(2, 2);
  expect << 1, -1, -1, 1;
  const Graph k2 = testing::complete_graph(2);
  EXPECT_EQ(laplacian(k2, LaplacianKind::unnormalized), expect);
  EXPECT_LT((laplacian(k2, LaplacianKind::symmetric_normalized) - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Laplacian, TriangleEigenvalues) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{Eigen::MatrixXd(laplacian(testing::complete_graph(3)))};
  EXPECT_NEAR(eig.eigenvalues()[0], 0.0, 1e-12);
  EXPECT_NEAR(eig.eigenvalues()[1], 3.0, 1e-12);
  EXPECT_NEAR(eig.eigenvalues()[2], 3.0, 1e-12);
}

TEST(Laplacian, MatchesDenseOraclesAndIsolatedNodesKeepUnitDiagonal) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    Graph g = testing::random_graph(rng, 1 + static_cast<int>(rng.below(10)), 0.3);
    EXPECT_EQ(laplacian(g), testing::dense_laplacian(g));
    EXPECT_LT((laplacian(g, LaplacianKind::symmetric_normalized) - testing::dense_normalized_laplacian(g))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-14);
  }
  Graph iso;
  iso.node_count = 2;
  iso.features = Matrix::Zero(2, 0);
  EXPECT_EQ(laplacian(iso, LaplacianKind::symmetric_normalized), Matrix::Identity(2, 2));
}

TEST(LaplacianKind, ParsesNames) {
  EXPECT_EQ(parse_laplacian_kind("unnormalized"), LaplacianKind::unnormalized);
  EXPECT_EQ(parse_laplacian_kind("normalized"), LaplacianKind::symmetric_normalized);
  EXPECT_EQ(parse_laplacian_kind(to_string(LaplacianKind::symmetric_normalized)), LaplacianKind::symmetric_normalized);
  EXPECT_THROW(parse_laplacian_kind("random-walk"), ConfigError);
}

TEST(Rayleigh, K2AlternatingSignalIsTwo) {
  Matrix x(2, 1);
  x << 1, -1;
  EXPECT_DOUBLE_EQ(rayleigh_quotient_diag(testing::complete_graph(2), x)[0], 2.0);
}

TEST(Rayleigh, ConstantSignalIsZeroAndZeroColumnIsZero) {
  Rng rng(2);
  const Graph g = testing::random_graph(rng, 9, 0.5);
  Matrix x(9, 2);
  x.col(0).setOnes();
  x.col(1).setZero();
  const Vector r = rayleigh_quotient_diag(g, x);
  EXPECT_NEAR(r[0], 0.0, 1e-15);
  EXPECT_EQ(r[1], 0.0);
}

TEST(Rayleigh, EdgeSumEqualsQuadraticFormOnRandomGraphs) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + static_cast<int>(rng.below(12));
    const Graph g = testing::random_graph(rng, n, rng.uniform(0.1, 0.9));
    const Matrix x = testing::random_matrix(rng, n, 4);
    const Vector r = rayleigh_quotient_diag(g, x);
    const Vector ref = testing::quadratic_form_rayleigh(testing::dense_laplacian(g), x);
    for (int k = 0; k < 4; ++k) {
      if (ref[k] == 0.0) {
        EXPECT_NEAR(r[k], 0.0, 1e-14);
      } else {
        EXPECT_LT(rel_err(r[k], ref[k]), 1e-10);
      }
    }
    const Vector rn = rayleigh_quotient_diag(g, x, LaplacianKind::symmetric_normalized);
    const Vector refn = testing::quadratic_form_rayleigh(testing::dense_normalized_laplacian(g), x);
    EXPECT_LT((rn - refn).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Rayleigh, ScaleInvariant) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const Graph g = testing::random_graph(rng, 8, 0.4);
    const Matrix x = testing::random_matrix(rng, 8, 3);
    const double c = rng.uniform(-5, 5);
    const Vector r = rayleigh_quotient_diag(g, x);
    const Vector rc = rayleigh_quotient_diag(g, c * x);
    EXPECT_LT((r - rc).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Rayleigh, MonotoneInHighFrequencyMixing) {
  for (const Graph& g : {testing::complete_graph(2), testing::path_graph(5), testing::path_graph(8)}) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{Eigen::MatrixXd(testing::dense_laplacian(g))};
    const Eigen::VectorXd low = eig.eigenvectors().col(0);
    const Eigen::VectorXd high = eig.eigenvectors().col(g.node_count - 1);
    double prev = -1.0;
    for (int i = 0; i <= 20; ++i) {
      const double t = i / 20.0;
      Matrix x = ((1 - t) * low + t * high);
      const double r = rayleigh_quotient_diag(g, x)[0];
      EXPECT_GE(r, prev - 1e-12);
      prev = r;
    }
  }
}

TEST(SpectralEnergy, PureEigenvectorsOfK2) {
  Matrix alt(2, 1);
  alt << 1, -1;
  SpectralReport rep = spectral_energy_distribution(testing::complete_graph(2), alt);
  EXPECT_NEAR(rep.eigenvalues[1], 2.0, 1e-12);
  EXPECT_NEAR(rep.energies[1], 1.0, 1e-12);
  EXPECT_NEAR(rep.energies[0], 0.0, 1e-12);

  Matrix ones = Matrix::Ones(2, 1);
  rep = spectral_energy_distribution(testing::complete_graph(2), ones);
  EXPECT_NEAR(rep.energies[0], 1.0, 1e-12);
  EXPECT_NEAR(top_quartile_energy(rep), 0.0, 1e-12);
}

TEST(SpectralEnergy, EnergiesSumToOneAndIdentityHolds) {
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + static_cast<int>(rng.below(20));
    const Graph g = testing::random_graph(rng, n, 0.3);
    const Matrix x = testing::random_matrix(rng, n, 3);
    for (LaplacianKind kind : {LaplacianKind::unnormalized, LaplacianKind::symmetric_normalized}) {
      const SpectralReport rep = spectral_energy_distribution(g, x, kind);
      EXPECT_NEAR(rep.energies.sum(), 1.0, 1e-12);
      EXPECT_TRUE(std::is_sorted(rep.eigenvalues.data(), rep.eigenvalues.data() + rep.eigenvalues.size()));
      const Vector ref = testing::eigen_rayleigh(kind == LaplacianKind::unnormalized ? testing::dense_laplacian(g)
                                                                                     : testing::dense_normalized_laplacian(g),
                                                 x);
      EXPECT_LT((rep.rayleigh - ref).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(SpectralEnergy, RejectsGraphsAboveCapAndMisshapedSignals) {
  const Graph g = testing::path_graph(10);
  EXPECT_THROW(spectral_energy_distribution(g, Matrix::Ones(10, 1), LaplacianKind::unnormalized, 9), SizeError);
  EXPECT_THROW(spectral_energy_distribution(g, Matrix::Ones(9, 1)), ShapeError);
}

TEST(SpectralEnergy, CumulativeCurveEndsAtOneAndTopQuartileComplementsIt) {
  Rng rng(6);
  const Graph g = testing::random_graph(rng, 12, 0.4);
  const SpectralReport rep = spectral_energy_distribution(g, testing::random_matrix(rng, 12, 2));
  const Vector curve = cumulative_energy_curve(rep, 4);
  EXPECT_NEAR(curve[3], 1.0, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_GE(curve[i], curve[i - 1]);
  // 12 eigenvalues: the quarter mark covers indices 0..8, the top quartile 9..11.
  EXPECT_NEAR(curve[2] + top_quartile_energy(rep), 1.0, 1e-12);
  EXPECT_NEAR(top_quartile_energy(rep), rep.energies.tail(3).sum(), 1e-15);
}

}  // namespace
}  // namespace gladmamba
