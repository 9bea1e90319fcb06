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

// Command-line front end: train, eval, spectral and bench.

#include "gladmamba/dataset_io.hpp"
#include "gladmamba/trainer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace gladmamba;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitDiverged = 4;

struct CommonOptions {
  std::optional<std::string> data_root;
  std::string config_file;
  std::vector<std::string> overrides;  // key=value
  std::optional<int> epochs;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_file, "Config file of 'key = value' lines")->check(CLI::ExistingFile);
  cmd->add_option("--set", o.overrides, "Override a config key, e.g. --set train.epochs=20");
  cmd->add_option("--epochs", o.epochs, "Shortcut for --set train.epochs=N");
}

RunConfig build_config(const CommonOptions& o, const std::optional<std::string>& dataset) {
  RunConfig cfg;
  if (!o.config_file.empty()) cfg = RunConfig::from_file(o.config_file, cfg);
  for (const std::string& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.epochs) cfg.epochs = *o.epochs;
  if (dataset) cfg.dataset = *dataset;
  if (o.data_root) cfg.data_root = *o.data_root;
  if (cfg.dataset.empty()) throw ConfigError("no dataset given (--dataset or 'dataset = ...' in the config)");
  cfg.validate();
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  write_file_atomically(path, text);
}

SeedMetrics run_seed(const RunConfig& cfg, const LoadedData& data, std::uint64_t seed, const fs::path& dir,
                     bool diagnostics, bool verbose) {
  TrainedRun run = train(cfg, data, seed, [&](int epoch, double loss) {
    if (verbose) std::fprintf(stderr, "[%s seed %llu] epoch %d loss %.6f\n", cfg.dataset.c_str(),
                              static_cast<unsigned long long>(seed), epoch + 1, loss);
  });
  const GraphLosses losses = compute_losses(*run.model, data, run.split.test_ids, cfg.eval_batch_size);
  const ScoreReport report = evaluate(*run.model, run.normalizer, data, run.split.test_ids, cfg.eval_batch_size);

  SeedMetrics m;
  m.seed = seed;
  m.auc = report.auc;
  m.final_loss = run.final_loss;
  m.wall_seconds = run.wall_seconds;
  m.train_graphs = run.split.train_ids.size();
  m.test_graphs = run.split.test_ids.size();

  if (!dir.empty()) {
    fs::create_directories(dir);
    save_checkpoint(make_checkpoint(run, data), dir / "checkpoint.gmck");
    write_text(dir / "embeddings.csv", embeddings_to_csv(report, losses, data));
    if (diagnostics) {
      const std::vector<double> aucs =
          eval_batch_shuffle_aucs(*run.model, run.normalizer, data, run.split.test_ids, cfg.eval_batch_size, 10, seed);
      const double perm = node_permutation_auc(*run.model, run.normalizer, data, run.split.test_ids,
                                               cfg.eval_batch_size, seed);
      nlohmann::json j{{"test_auc", report.auc},
                       {"eval_shuffle_aucs", aucs},
                       {"eval_shuffle_auc_mean", mean_of(aucs)},
                       {"eval_shuffle_auc_std", population_std(aucs)},
                       {"node_permutation_auc", perm}};
      write_text(dir / "diagnostics.json", j.dump(2) + "\n");
    }
  }
  return m;
}

MetricsRecord run_seeds(const RunConfig& cfg, const std::vector<std::uint64_t>& seeds, const fs::path& out,
                        bool diagnostics, bool verbose) {
  const LoadedData data = load_data(cfg);
  MetricsRecord rec;
  rec.dataset = cfg.dataset;
  rec.variant = cfg.variant;
  rec.config = cfg.to_key_values();
  for (std::uint64_t seed : seeds) {
    const fs::path dir = out.empty() ? fs::path() : out / ("seed" + std::to_string(seed));
    rec.runs.push_back(run_seed(cfg, data, seed, dir, diagnostics, verbose));
    const SeedMetrics& m = rec.runs.back();
    std::printf("%s %s seed=%llu auc=%.4f final_loss=%.6f wall=%.1fs\n", cfg.dataset.c_str(),
                to_string(cfg.variant).c_str(), static_cast<unsigned long long>(seed), m.auc, m.final_loss,
                m.wall_seconds);
    std::fflush(stdout);
  }
  if (!out.empty()) {
    write_text(out / "metrics.json", metrics_to_json(rec));
    write_text(out / "metrics.csv", metrics_to_csv(rec));
  }
  return rec;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    std::string tok = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!tok.empty()) out.push_back(tok);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gladmamba: unsupervised graph-level anomaly detection with selective state space models"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::string> data_root;
  app.add_option("--data-root", data_root, std::string("Dataset root (default: $") + kDataRootEnv + " or ./data)");
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Print per-epoch losses");

  // train
  CommonOptions train_opts;
  std::optional<std::string> train_dataset;
  std::optional<std::uint64_t> train_seed;
  std::string train_ablate;
  std::string train_out = "runs";
  bool train_diag = false;
  auto* train_cmd = app.add_subcommand("train", "Train on one dataset and score its test split");
  train_cmd->add_option("--dataset", train_dataset, "Dataset name, e.g. AIDS");
  add_common(train_cmd, train_opts);
  train_cmd->add_option("--seed", train_seed, "Seed (default: every seed of train.seeds)");
  train_cmd->add_option("--ablate", train_ablate,
                        "Variant: none, no-vfm, no-sgm, no-mamba, no-vf-ssm, no-sg-ssm (the no- prefix is optional)");
  train_cmd->add_option("--out", train_out, "Output directory root");
  train_cmd->add_flag("--diagnostics", train_diag, "Also report eval-batch and node-order sensitivity");

  // eval
  std::string eval_ckpt;
  std::optional<std::string> eval_dataset;
  std::string eval_scores;
  auto* eval_cmd = app.add_subcommand("eval", "Score a dataset's test split with a saved checkpoint");
  eval_cmd->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--dataset", eval_dataset, "Dataset name (default: the checkpoint's)");
  eval_cmd->add_option("--scores", eval_scores, "Write per-graph scores and embeddings to this CSV");

  // spectral
  CommonOptions spec_opts;
  std::string spec_dataset;
  std::string spec_out;
  std::string spec_laplacian = "unnormalized";
  int spec_points = 100;
  auto* spec_cmd = app.add_subcommand("spectral", "Per-class spectral energy report");
  spec_cmd->add_option("--dataset", spec_dataset, "Dataset name")->required();
  spec_cmd->add_option("--out", spec_out, "Output directory")->required();
  spec_cmd->add_option("--laplacian", spec_laplacian, "unnormalized or normalized");
  spec_cmd->add_option("--points", spec_points, "Samples per energy curve")->check(CLI::PositiveNumber);
  add_common(spec_cmd, spec_opts);

  // bench
  CommonOptions bench_opts;
  std::string bench_datasets;
  std::string bench_seeds = "0..4";
  std::string bench_variants = "none";
  std::string bench_out = "bench";
  auto* bench_cmd = app.add_subcommand("bench", "AUC table over datasets, seeds and variants");
  bench_cmd->add_option("--datasets", bench_datasets, "Comma-separated dataset names")->required();
  bench_cmd->add_option("--seeds", bench_seeds, "Seed range or list, e.g. 0..4 or 0,2,7");
  bench_cmd->add_option("--variants", bench_variants, "Comma-separated variants (default: none)");
  bench_cmd->add_option("--out", bench_out, "Output directory");
  add_common(bench_cmd, bench_opts);

  CLI11_PARSE(app, argc, argv);
  for (CommonOptions* o : {&train_opts, &spec_opts, &bench_opts}) o->data_root = data_root;

  try {
    if (*train_cmd) {
      RunConfig cfg = build_config(train_opts, train_dataset);
      if (!train_ablate.empty()) cfg.variant = parse_variant(train_ablate);
      const std::vector<std::uint64_t> seeds = train_seed ? std::vector{*train_seed} : cfg.seeds;
      const fs::path out = fs::path(train_out) / cfg.dataset / to_string(cfg.variant);
      const MetricsRecord rec = run_seeds(cfg, seeds, out, train_diag, verbose);
      std::printf("%s %s mean_auc=%.4f std=%.4f -> %s\n", cfg.dataset.c_str(), to_string(cfg.variant).c_str(),
                  rec.auc_mean(), rec.auc_std(), out.string().c_str());
    } else if (*eval_cmd) {
      const Checkpoint ckpt = load_checkpoint(eval_ckpt);
      RunConfig cfg = checkpoint_config(ckpt);
      if (eval_dataset) cfg.dataset = *eval_dataset;
      if (data_root) cfg.data_root = *data_root;
      const LoadedData data = load_data(cfg);
      const TrainedRun run = restore_run(ckpt, data);
      const ScoreReport report = evaluate(*run.model, run.normalizer, data, run.split.test_ids, cfg.eval_batch_size);
      if (!eval_scores.empty()) {
        const GraphLosses losses = compute_losses(*run.model, data, run.split.test_ids, cfg.eval_batch_size);
        write_text(fs::absolute(eval_scores), embeddings_to_csv(report, losses, data));
      }
      std::printf("%s %s seed=%llu test_graphs=%zu auc=%.6f\n", cfg.dataset.c_str(), to_string(cfg.variant).c_str(),
                  static_cast<unsigned long long>(run.seed), report.graph_ids.size(), report.auc);
    } else if (*spec_cmd) {
      RunConfig cfg = build_config(spec_opts, spec_dataset);
      const LoadedData data = load_data(cfg);
      const SpectralSummary s =
          spectral_summary(data, parse_laplacian_kind(spec_laplacian), cfg.spectral_max_nodes, spec_points);
      write_spectral_report(s, spec_out);
      std::printf(
          "%s normal: graphs=%zu top_quartile_energy=%.6f | anomaly: graphs=%zu top_quartile_energy=%.6f | "
          "max |sum energy - 1|=%.3g | skipped: %zu too large, %zu zero signal\n",
          s.dataset.c_str(), s.normal.graphs, s.normal.mean_top_quartile, s.anomaly.graphs,
          s.anomaly.mean_top_quartile, s.max_energy_sum_error, s.skipped_too_large, s.skipped_zero_signal);
    } else if (*bench_cmd) {
      const std::vector<std::uint64_t> seeds = parse_seed_list(bench_seeds);
      std::vector<MetricsRecord> records;
      for (const std::string& name : split_list(bench_datasets)) {
        for (const std::string& v : split_list(bench_variants)) {
          RunConfig cfg = build_config(bench_opts, name);
          cfg.variant = parse_variant(v);
          const fs::path out = fs::path(bench_out) / name / to_string(cfg.variant);
          records.push_back(run_seeds(cfg, seeds, out, false, verbose));
        }
      }
      const std::string table = bench_table(records);
      write_text(fs::path(bench_out) / "bench.md", table);
      std::cout << table;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const FileFormatError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const NonFiniteLossError& e) {
    std::fprintf(stderr, "training diverged: %s\n", e.what());
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
