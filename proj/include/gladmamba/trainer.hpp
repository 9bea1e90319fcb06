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

#ifndef GLADMAMBA_TRAINER_HPP
#define GLADMAMBA_TRAINER_HPP

#include "gladmamba/checkpoint.hpp"
#include "gladmamba/config.hpp"
#include "gladmamba/model.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace gladmamba {

/// A parsed, labelled dataset with its views prepared. Move-only: the
/// prepared graphs point into `dataset`.
struct LoadedData {
  std::unique_ptr<GraphDataset> dataset;
  std::vector<PreparedGraph> prepared;
  std::unordered_map<int, std::size_t> index_of_id;
  AugmentConfig aug;  ///< how the views were built
  LaplacianKind rayleigh = LaplacianKind::unnormalized;

  const PreparedGraph& by_id(int id) const;
  int feature_dim_o() const { return prepared.empty() ? 0 : static_cast<int>(prepared.front().x_o.cols()); }
  int feature_dim_a() const { return prepared.empty() ? 0 : static_cast<int>(prepared.front().x_a.cols()); }
};

/// Takes ownership of an in-memory dataset, labels anomalies and prepares
/// both views.
LoadedData prepare_data(GraphDataset ds, const RunConfig& cfg);
/// Parses cfg.dataset under cfg.data_root (or the environment default).
LoadedData load_data(const RunConfig& cfg);

struct NonFiniteLossError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrainedRun {
  RunConfig cfg;
  std::uint64_t seed = 0;
  SplitSpec split;
  std::unique_ptr<GladModel> model;
  ScoreNormalizer normalizer;
  std::vector<double> epoch_loss;  ///< mean total loss per epoch
  double final_loss = 0.0;         ///< last epoch's mean, NaN when epochs = 0
  double wall_seconds = 0.0;
};

using EpochCallback = std::function<void(int epoch, double mean_loss)>;

/// Shuffles the training graphs per epoch from the "shuffle" substream,
/// batches them (a lone trailing graph joins the previous batch), updates
/// with Adam and fits the normalizer on the training set. Throws
/// NonFiniteLossError as soon as a batch loss is not finite.
TrainedRun train(const RunConfig& cfg, const LoadedData& data, std::uint64_t seed, const EpochCallback& on_epoch = {});

struct GraphLosses {
  std::vector<double> node;
  std::vector<double> graph;
  Matrix embedding_o;  ///< rows follow the requested ids
  Matrix embedding_a;
};

/// Scores `ids` in that order, in consecutive batches of `batch_size` (a lone
/// trailing graph joins the previous batch). Needs >= 2 ids.
GraphLosses compute_losses(const GladModel& model, const LoadedData& data, std::span<const int> ids, int batch_size);

/// Per-graph anomaly scores and AUC over `ids`. Throws std::invalid_argument
/// when the ids hold a single class.
ScoreReport evaluate(const GladModel& model, const ScoreNormalizer& norm, const LoadedData& data,
                     std::span<const int> ids, int batch_size);

/// Normalizer statistics over the training ids, scored as in evaluate().
ScoreNormalizer fit_on_training(const GladModel& model, const LoadedData& data, std::span<const int> train_ids,
                                int batch_size);

/// AUC for `rounds` random orderings of the test ids: graph-scale negatives
/// depend on who shares an evaluation batch.
std::vector<double> eval_batch_shuffle_aucs(const GladModel& model, const ScoreNormalizer& norm,
                                            const LoadedData& data, std::span<const int> ids, int batch_size,
                                            int rounds, std::uint64_t seed);

/// Returns `g` with its nodes relabelled by `perm` (new index of node v is
/// perm[v]); features and node labels move with their nodes.
Graph permute_nodes(const Graph& g, std::span<const int> perm);

/// AUC after randomly permuting the node order inside every scored graph.
double node_permutation_auc(const GladModel& model, const ScoreNormalizer& norm, const LoadedData& data,
                            std::span<const int> ids, int batch_size, std::uint64_t seed);

// Checkpoints ------------------------------------------------------------

Checkpoint make_checkpoint(const TrainedRun& run, const LoadedData& data);
/// Rebuilds model, normalizer, config and seed; the split is re-derived
/// from `data` with the stored seed.
TrainedRun restore_run(const Checkpoint& ckpt, const LoadedData& data);
/// The run config stored in a checkpoint (no dataset needed).
RunConfig checkpoint_config(const Checkpoint& ckpt);

// Metrics -----------------------------------------------------------------

struct SeedMetrics {
  std::uint64_t seed = 0;
  double auc = 0.0;
  double final_loss = 0.0;
  double wall_seconds = 0.0;
  std::size_t train_graphs = 0;
  std::size_t test_graphs = 0;
};

struct MetricsRecord {
  std::string dataset;
  Variant variant = Variant::full;
  std::map<std::string, std::string> config;
  std::vector<SeedMetrics> runs;

  double auc_mean() const;
  double auc_std() const;  ///< population std across seeds
};

inline constexpr const char* kMetricsSchema = "gladmamba.metrics.v1";

std::string metrics_to_json(const MetricsRecord& m);
std::string metrics_to_csv(const MetricsRecord& m);
/// Empty when `json_text` follows the metrics schema, else the problems found.
std::vector<std::string> validate_metrics_json(const std::string& json_text);

/// CSV: graph_id, label, is_anomaly, score, loss_node, loss_graph, then the
/// graph embeddings of both views.
std::string embeddings_to_csv(const ScoreReport& report, const GraphLosses& losses, const LoadedData& data);

// Spectral report ---------------------------------------------------------

struct ClassSpectrum {
  std::size_t graphs = 0;          ///< graphs contributing to the curve
  Vector mean_curve;               ///< mean cumulative energy per fraction
  double mean_top_quartile = 0.0;  ///< mean energy share of the top quarter of eigenvalues
  double mean_cumulative_at_q3 = 0.0;
};

struct SpectralSummary {
  std::string dataset;
  LaplacianKind kind = LaplacianKind::unnormalized;
  Vector fractions;
  ClassSpectrum normal;
  ClassSpectrum anomaly;
  std::size_t skipped_too_large = 0;
  std::size_t skipped_zero_signal = 0;
  double max_energy_sum_error = 0.0;  ///< max over graphs of |sum energies - 1|
  std::vector<int> graph_ids;
  std::vector<double> top_quartile;   ///< per graph in graph_ids order
};

SpectralSummary spectral_summary(const LoadedData& data, LaplacianKind kind, int max_nodes, int curve_points = 100);

/// Writes spectral_curves.csv, spectral_graphs.csv, spectral_summary.json
/// and spectral_curves.svg into `dir`.
void write_spectral_report(const SpectralSummary& s, const std::filesystem::path& dir);

/// Markdown table, one row per (dataset, variant), AUC as mean±std in percent.
std::string bench_table(std::span<const MetricsRecord> records);

}  // namespace gladmamba

#endif  // GLADMAMBA_TRAINER_HPP
