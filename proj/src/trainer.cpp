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

#include "gladmamba/trainer.hpp"

#include "gladmamba/dataset_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

namespace gladmamba {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

/// Consecutive chunks of `batch` ids; a trailing chunk of one joins the
/// previous chunk so every batch has graph-scale negatives.
std::vector<std::span<const int>> chunk_ids(std::span<const int> ids, int batch) {
  std::vector<std::span<const int>> out;
  const auto b = static_cast<std::size_t>(batch);
  for (std::size_t lo = 0; lo < ids.size(); lo += b) {
    out.push_back(ids.subspan(lo, std::min(b, ids.size() - lo)));
  }
  if (out.size() >= 2 && out.back().size() == 1) {
    const std::size_t start = ids.size() - out[out.size() - 2].size() - 1;
    out.pop_back();
    out.back() = ids.subspan(start);
  }
  return out;
}

GraphLosses losses_for(const GladModel& model, std::span<const PreparedGraph* const> graphs, int batch_size) {
  if (graphs.size() < 2) throw std::invalid_argument("scoring needs at least 2 graphs");
  std::vector<int> positions(graphs.size());
  std::iota(positions.begin(), positions.end(), 0);

  GraphLosses out;
  out.node.reserve(graphs.size());
  out.graph.reserve(graphs.size());
  const int d = model.config().model_dim();
  out.embedding_o.resize(static_cast<Eigen::Index>(graphs.size()), d);
  out.embedding_a.resize(static_cast<Eigen::Index>(graphs.size()), d);

  for (std::span<const int> chunk : chunk_ids(positions, batch_size)) {
    std::vector<const PreparedGraph*> batch;
    batch.reserve(chunk.size());
    for (int p : chunk) batch.push_back(graphs[static_cast<std::size_t>(p)]);
    const ForwardResult r = model.forward(batch);
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      out.node.push_back(r.node_loss.value()(row, 0));
      out.graph.push_back(r.graph_loss.value()(row, 0));
      out.embedding_o.row(chunk[i]) = r.zg_o.value().row(row);
      out.embedding_a.row(chunk[i]) = r.zg_a.value().row(row);
    }
  }
  return out;
}

std::vector<const PreparedGraph*> gather(const LoadedData& data, std::span<const int> ids) {
  std::vector<const PreparedGraph*> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(&data.by_id(id));
  return out;
}

ScoreReport score_report(const GraphLosses& l, const ScoreNormalizer& norm, const GraphDataset& ds,
                         std::span<const int> ids) {
  ScoreReport rep;
  rep.graph_ids.assign(ids.begin(), ids.end());
  rep.loss_node = l.node;
  rep.loss_graph = l.graph;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    rep.score.push_back(anomaly_score(l.node[i], l.graph[i], norm));
    rep.is_anomaly.push_back(ds.is_anomaly(ds.by_id(ids[i])) ? 1 : 0);
  }
  rep.auc = auc(rep.score, rep.is_anomaly);
  return rep;
}

double parse_exact(const std::map<std::string, std::string>& meta, const std::string& key) {
  auto it = meta.find(key);
  if (it == meta.end()) throw FileFormatError("checkpoint metadata lacks '" + key + "'");
  char* end = nullptr;
  const double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str() || *end != '\0') throw FileFormatError("checkpoint metadata '" + key + "' is not a number");
  return v;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

const PreparedGraph& LoadedData::by_id(int id) const {
  auto it = index_of_id.find(id);
  if (it == index_of_id.end()) throw std::out_of_range("no graph with id " + std::to_string(id));
  return prepared[it->second];
}

LoadedData prepare_data(GraphDataset ds, const RunConfig& cfg) {
  LoadedData d;
  d.aug = cfg.aug;
  d.rayleigh = cfg.rayleigh_laplacian;
  d.dataset = std::make_unique<GraphDataset>(assign_anomaly_labels(std::move(ds), cfg.anomaly_class));
  d.prepared = prepare_graphs(*d.dataset, cfg.aug, cfg.rayleigh_laplacian);
  for (std::size_t i = 0; i < d.prepared.size(); ++i) d.index_of_id[d.prepared[i].graph->id] = i;
  return d;
}

LoadedData load_data(const RunConfig& cfg) {
  const fs::path root = resolve_data_root(cfg.data_root.empty() ? std::nullopt : std::optional(cfg.data_root));
  return prepare_data(parse_tu_dataset(root, cfg.dataset), cfg);
}

TrainedRun train(const RunConfig& cfg, const LoadedData& data, std::uint64_t seed, const EpochCallback& on_epoch) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  TrainedRun run;
  run.cfg = cfg;
  run.seed = seed;
  run.split = make_split(*data.dataset, seed, cfg.train_frac);
  if (run.split.train_ids.size() < 2) throw std::invalid_argument("train: need at least 2 training graphs");

  run.model = std::make_unique<GladModel>(ModelConfig::from_run(cfg, data.feature_dim_o(), data.feature_dim_a()), seed);
  Adam opt(cfg.learning_rate);
  Rng shuffle = Rng::substream(seed, "shuffle");
  std::vector<int> order = run.split.train_ids;

  run.final_loss = std::numeric_limits<double>::quiet_NaN();
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle.shuffle(std::span<int>(order));
    double acc = 0.0;
    int batches = 0;
    for (std::span<const int> chunk : chunk_ids(order, cfg.batch_size)) {
      const std::vector<const PreparedGraph*> batch = gather(data, chunk);
      const ForwardResult r = run.model->forward(batch);
      const AdaptiveLoss loss = adaptive_total_loss(r.node_loss, r.graph_loss, cfg.loss);
      const double value = loss.total.scalar();
      if (!std::isfinite(value)) {
        throw NonFiniteLossError("non-finite loss " + format_double(value) + " at epoch " + std::to_string(epoch) +
                                 ", batch " + std::to_string(batches) + " (sigma_node " +
                                 format_double(loss.sigma_node) + ", sigma_graph " + format_double(loss.sigma_graph) +
                                 ")");
      }
      run.model->params().zero_grad();
      ad::backward(loss.total);
      opt.step(run.model->params());
      acc += value;
      ++batches;
    }
    run.final_loss = acc / batches;
    run.epoch_loss.push_back(run.final_loss);
    if (on_epoch) on_epoch(epoch, run.final_loss);
  }
  run.model->params().zero_grad();

  run.normalizer = fit_on_training(*run.model, data, run.split.train_ids, cfg.eval_batch_size);
  run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

GraphLosses compute_losses(const GladModel& model, const LoadedData& data, std::span<const int> ids, int batch_size) {
  return losses_for(model, gather(data, ids), batch_size);
}

ScoreNormalizer fit_on_training(const GladModel& model, const LoadedData& data, std::span<const int> train_ids,
                                int batch_size) {
  const GraphLosses l = compute_losses(model, data, train_ids, batch_size);
  return fit_normalizer(l.node, l.graph);
}

ScoreReport evaluate(const GladModel& model, const ScoreNormalizer& norm, const LoadedData& data,
                     std::span<const int> ids, int batch_size) {
  return score_report(compute_losses(model, data, ids, batch_size), norm, *data.dataset, ids);
}

std::vector<double> eval_batch_shuffle_aucs(const GladModel& model, const ScoreNormalizer& norm,
                                            const LoadedData& data, std::span<const int> ids, int batch_size,
                                            int rounds, std::uint64_t seed) {
  Rng rng = Rng::substream(seed, "eval_shuffle");
  std::vector<int> order(ids.begin(), ids.end());
  std::vector<double> out;
  for (int r = 0; r < rounds; ++r) {
    rng.shuffle(std::span<int>(order));
    out.push_back(evaluate(model, norm, data, order, batch_size).auc);
  }
  return out;
}

Graph permute_nodes(const Graph& g, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != g.node_count) throw ShapeError("permute_nodes: permutation size != node count");
  Graph out = g;
  out.edges.clear();
  for (auto [u, v] : g.edges) out.edges.emplace_back(perm[u], perm[v]);
  out.canonicalize_edges();
  for (int v = 0; v < g.node_count; ++v) {
    if (g.features.cols() > 0) out.features.row(perm[v]) = g.features.row(v);
    if (!g.node_labels.empty()) out.node_labels[perm[v]] = g.node_labels[v];
  }
  return out;
}

double node_permutation_auc(const GladModel& model, const ScoreNormalizer& norm, const LoadedData& data,
                            std::span<const int> ids, int batch_size, std::uint64_t seed) {
  Rng rng = Rng::substream(seed, "node_permutation");
  std::vector<Graph> permuted;
  permuted.reserve(ids.size());
  for (int id : ids) {
    const Graph& g = *data.by_id(id).graph;
    std::vector<int> perm(g.node_count);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span<int>(perm));
    permuted.push_back(permute_nodes(g, perm));
  }
  std::vector<PreparedGraph> prepared;
  prepared.reserve(permuted.size());
  for (const Graph& g : permuted) prepared.push_back(prepare_graph(g, data.aug, data.rayleigh));
  std::vector<const PreparedGraph*> ptrs;
  for (const PreparedGraph& p : prepared) ptrs.push_back(&p);
  return score_report(losses_for(model, ptrs, batch_size), norm, *data.dataset, ids).auc;
}

// Checkpoints ------------------------------------------------------------

Checkpoint make_checkpoint(const TrainedRun& run, const LoadedData& data) {
  std::map<std::string, std::string> meta;
  for (const auto& [k, v] : run.cfg.to_key_values()) meta["config." + k] = v;
  meta["format"] = "gladmamba";
  meta["seed"] = std::to_string(run.seed);
  meta["feature_dim_o"] = std::to_string(data.feature_dim_o());
  meta["feature_dim_a"] = std::to_string(data.feature_dim_a());
  meta["normalizer.mu_node"] = format_double(run.normalizer.mu_node);
  meta["normalizer.sigma_node"] = format_double(run.normalizer.sigma_node);
  meta["normalizer.mu_graph"] = format_double(run.normalizer.mu_graph);
  meta["normalizer.sigma_graph"] = format_double(run.normalizer.sigma_graph);
  meta["final_loss"] = format_double(run.final_loss);
  meta["wall_seconds"] = format_double(run.wall_seconds);
  return capture_params(run.model->params(), std::move(meta));
}

RunConfig checkpoint_config(const Checkpoint& ckpt) {
  auto it = ckpt.metadata.find("format");
  if (it == ckpt.metadata.end() || it->second != "gladmamba") throw FileFormatError("checkpoint lacks gladmamba metadata");
  std::map<std::string, std::string> kv;
  for (const auto& [k, v] : ckpt.metadata) {
    if (k.starts_with("config.")) kv[k.substr(7)] = v;
  }
  return RunConfig::from_key_values(kv);
}

TrainedRun restore_run(const Checkpoint& ckpt, const LoadedData& data) {
  TrainedRun run;
  run.cfg = checkpoint_config(ckpt);
  run.seed = parse_seed_list(ckpt.metadata.at("seed")).front();
  const int dim_o = static_cast<int>(parse_exact(ckpt.metadata, "feature_dim_o"));
  const int dim_a = static_cast<int>(parse_exact(ckpt.metadata, "feature_dim_a"));
  if (dim_o != data.feature_dim_o() || dim_a != data.feature_dim_a()) {
    throw FileFormatError("checkpoint feature widths (" + std::to_string(dim_o) + ", " + std::to_string(dim_a) +
                          ") do not match the dataset (" + std::to_string(data.feature_dim_o()) + ", " +
                          std::to_string(data.feature_dim_a()) + ")");
  }
  run.model = std::make_unique<GladModel>(ModelConfig::from_run(run.cfg, dim_o, dim_a), run.seed);
  restore_params(run.model->params(), ckpt);
  run.normalizer.mu_node = parse_exact(ckpt.metadata, "normalizer.mu_node");
  run.normalizer.sigma_node = parse_exact(ckpt.metadata, "normalizer.sigma_node");
  run.normalizer.mu_graph = parse_exact(ckpt.metadata, "normalizer.mu_graph");
  run.normalizer.sigma_graph = parse_exact(ckpt.metadata, "normalizer.sigma_graph");
  run.final_loss = parse_exact(ckpt.metadata, "final_loss");
  run.wall_seconds = parse_exact(ckpt.metadata, "wall_seconds");
  run.split = make_split(*data.dataset, run.seed, run.cfg.train_frac);
  return run;
}

// Metrics -----------------------------------------------------------------

double MetricsRecord::auc_mean() const {
  std::vector<double> a;
  for (const auto& r : runs) a.push_back(r.auc);
  return mean_of(a);
}

double MetricsRecord::auc_std() const {
  std::vector<double> a;
  for (const auto& r : runs) a.push_back(r.auc);
  return population_std(a);
}

std::string metrics_to_json(const MetricsRecord& m) {
  json j;
  j["schema"] = kMetricsSchema;
  j["dataset"] = m.dataset;
  j["variant"] = to_string(m.variant);
  j["config"] = m.config;
  j["runs"] = json::array();
  for (const SeedMetrics& r : m.runs) {
    j["runs"].push_back({{"seed", r.seed},
                         {"auc", r.auc},
                         {"final_train_loss", number_or_null(r.final_loss)},
                         {"wall_clock_seconds", r.wall_seconds},
                         {"train_graphs", r.train_graphs},
                         {"test_graphs", r.test_graphs}});
  }
  j["summary"] = {{"seeds", m.runs.size()}, {"auc_mean", m.auc_mean()}, {"auc_std", m.auc_std()}};
  return j.dump(2) + "\n";
}

std::string metrics_to_csv(const MetricsRecord& m) {
  std::ostringstream out;
  out << "dataset,variant,seed,auc,final_train_loss,wall_clock_seconds,train_graphs,test_graphs\n";
  for (const SeedMetrics& r : m.runs) {
    out << m.dataset << ',' << to_string(m.variant) << ',' << r.seed << ',' << format_double(r.auc) << ','
        << format_double(r.final_loss) << ',' << format_double(r.wall_seconds) << ',' << r.train_graphs << ','
        << r.test_graphs << '\n';
  }
  out << m.dataset << ',' << to_string(m.variant) << ",mean," << format_double(m.auc_mean()) << ",,,,\n";
  out << m.dataset << ',' << to_string(m.variant) << ",std," << format_double(m.auc_std()) << ",,,,\n";
  return out.str();
}

std::vector<std::string> validate_metrics_json(const std::string& json_text) {
  std::vector<std::string> errs;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    return {std::string("not JSON: ") + e.what()};
  }
  auto require = [&](const json& obj, const char* key, auto pred, const char* what) {
    if (!obj.contains(key)) {
      errs.push_back(std::string("missing '") + key + "'");
    } else if (!pred(obj[key])) {
      errs.push_back(std::string("'") + key + "' is not " + what);
    }
  };
  auto is_string = [](const json& v) { return v.is_string(); };
  auto is_number = [](const json& v) { return v.is_number(); };
  auto is_number_or_null = [](const json& v) { return v.is_number() || v.is_null(); };
  auto is_uint = [](const json& v) { return v.is_number_unsigned(); };

  if (!j.is_object()) return {"top level is not an object"};
  require(j, "schema", [](const json& v) { return v.is_string() && v.get<std::string>() == kMetricsSchema; },
          kMetricsSchema);
  require(j, "dataset", is_string, "a string");
  require(j, "variant", is_string, "a string");
  require(j, "config", [](const json& v) { return v.is_object(); }, "an object");
  require(j, "runs", [](const json& v) { return v.is_array(); }, "an array");
  require(j, "summary", [](const json& v) { return v.is_object(); }, "an object");
  if (!errs.empty()) return errs;
  for (const json& r : j["runs"]) {
    if (!r.is_object()) {
      errs.emplace_back("run entry is not an object");
      continue;
    }
    require(r, "seed", is_uint, "an unsigned integer");
    require(r, "auc", is_number, "a number");
    require(r, "final_train_loss", is_number_or_null, "a number or null");
    require(r, "wall_clock_seconds", is_number, "a number");
    require(r, "train_graphs", is_uint, "an unsigned integer");
    require(r, "test_graphs", is_uint, "an unsigned integer");
  }
  const json& s = j["summary"];
  require(s, "seeds", is_uint, "an unsigned integer");
  require(s, "auc_mean", is_number, "a number");
  require(s, "auc_std", is_number, "a number");
  if (s.contains("seeds") && s["seeds"].is_number_unsigned() && s["seeds"].get<std::size_t>() != j["runs"].size()) {
    errs.emplace_back("summary.seeds does not match the number of runs");
  }
  return errs;
}

std::string embeddings_to_csv(const ScoreReport& report, const GraphLosses& losses, const LoadedData& data) {
  std::ostringstream out;
  const auto d = losses.embedding_o.cols();
  out << "graph_id,label,is_anomaly,score,loss_node,loss_graph";
  for (Eigen::Index k = 0; k < d; ++k) out << ",zo_" << k;
  for (Eigen::Index k = 0; k < d; ++k) out << ",za_" << k;
  out << '\n';
  for (std::size_t i = 0; i < report.graph_ids.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    out << report.graph_ids[i] << ',' << data.by_id(report.graph_ids[i]).graph->label << ',' << report.is_anomaly[i]
        << ',' << format_double(report.score[i]) << ',' << format_double(report.loss_node[i]) << ','
        << format_double(report.loss_graph[i]);
    for (Eigen::Index k = 0; k < d; ++k) out << ',' << format_double(losses.embedding_o(row, k));
    for (Eigen::Index k = 0; k < d; ++k) out << ',' << format_double(losses.embedding_a(row, k));
    out << '\n';
  }
  return out.str();
}

// Spectral report ---------------------------------------------------------

SpectralSummary spectral_summary(const LoadedData& data, LaplacianKind kind, int max_nodes, int curve_points) {
  if (curve_points < 1) throw std::invalid_argument("spectral_summary: curve_points must be positive");
  SpectralSummary s;
  s.dataset = data.dataset->name;
  s.kind = kind;
  s.fractions.resize(curve_points);
  for (int i = 0; i < curve_points; ++i) s.fractions[i] = static_cast<double>(i + 1) / curve_points;
  for (ClassSpectrum* c : {&s.normal, &s.anomaly}) c->mean_curve = Vector::Zero(curve_points);

  for (const PreparedGraph& p : data.prepared) {
    const Graph& g = *p.graph;
    if (g.node_count > max_nodes) {
      ++s.skipped_too_large;
      continue;
    }
    const SpectralReport rep = spectral_energy_distribution(g, p.x_o, kind, max_nodes);
    const double total = rep.energies.sum();
    if (total == 0.0) {
      ++s.skipped_zero_signal;
      continue;
    }
    s.max_energy_sum_error = std::max(s.max_energy_sum_error, std::abs(total - 1.0));
    const double top = top_quartile_energy(rep);
    const auto q3 = static_cast<Eigen::Index>(std::floor(0.75 * static_cast<double>(rep.energies.size())));
    ClassSpectrum& c = data.dataset->is_anomaly(g) ? s.anomaly : s.normal;
    c.mean_curve += cumulative_energy_curve(rep, curve_points);
    c.mean_top_quartile += top;
    c.mean_cumulative_at_q3 += rep.energies.head(q3).sum();
    ++c.graphs;
    s.graph_ids.push_back(g.id);
    s.top_quartile.push_back(top);
  }
  for (ClassSpectrum* c : {&s.normal, &s.anomaly}) {
    if (c->graphs == 0) continue;
    const double n = static_cast<double>(c->graphs);
    c->mean_curve /= n;
    c->mean_top_quartile /= n;
    c->mean_cumulative_at_q3 /= n;
  }
  return s;
}

namespace {

std::string svg_polyline(const Vector& xs, const Vector& ys, double x0, double y0, double w, double h,
                         const char* colour) {
  std::ostringstream out;
  out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"" << x0 << ',' << y0 + h;
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    out << ' ' << std::fixed << std::setprecision(2) << x0 + xs[i] * w << ',' << y0 + h - ys[i] * h;
  }
  out << "\"/>\n";
  return out.str();
}

}  // namespace

void write_spectral_report(const SpectralSummary& s, const fs::path& dir) {
  fs::create_directories(dir);

  std::ostringstream curves;
  curves << "eigen_fraction,normal_cumulative_energy,anomaly_cumulative_energy\n";
  for (Eigen::Index i = 0; i < s.fractions.size(); ++i) {
    curves << format_double(s.fractions[i]) << ',' << format_double(s.normal.mean_curve[i]) << ','
           << format_double(s.anomaly.mean_curve[i]) << '\n';
  }
  write_file_atomically(dir / "spectral_curves.csv", curves.str());

  std::ostringstream graphs;
  graphs << "graph_id,top_quartile_energy\n";
  for (std::size_t i = 0; i < s.graph_ids.size(); ++i) {
    graphs << s.graph_ids[i] << ',' << format_double(s.top_quartile[i]) << '\n';
  }
  write_file_atomically(dir / "spectral_graphs.csv", graphs.str());

  auto class_json = [](const ClassSpectrum& c) {
    return json{{"graphs", c.graphs},
                {"mean_top_quartile_energy", c.mean_top_quartile},
                {"mean_cumulative_energy_at_q3", c.mean_cumulative_at_q3}};
  };
  json j{{"dataset", s.dataset},
         {"laplacian", to_string(s.kind)},
         {"normal", class_json(s.normal)},
         {"anomaly", class_json(s.anomaly)},
         {"skipped_too_large", s.skipped_too_large},
         {"skipped_zero_signal", s.skipped_zero_signal},
         {"max_energy_sum_error", s.max_energy_sum_error},
         {"anomaly_more_high_frequency", s.anomaly.mean_top_quartile > s.normal.mean_top_quartile}};
  write_file_atomically(dir / "spectral_summary.json", j.dump(2) + "\n");

  constexpr double x0 = 60, y0 = 30, w = 520, h = 300;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" font-family=\"sans-serif\" "
         "font-size=\"12\">\n"
      << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n"
      << "<text x=\"320\" y=\"18\" text-anchor=\"middle\">" << s.dataset
      << ": mean cumulative spectral energy</text>\n"
      << "<line x1=\"" << x0 << "\" y1=\"" << y0 + h << "\" x2=\"" << x0 + w << "\" y2=\"" << y0 + h
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y0 + h << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double f = t / 4.0;
    svg << "<text x=\"" << x0 + f * w << "\" y=\"" << y0 + h + 16 << "\" text-anchor=\"middle\">" << f << "</text>\n"
        << "<text x=\"" << x0 - 8 << "\" y=\"" << y0 + h - f * h + 4 << "\" text-anchor=\"end\">" << f << "</text>\n";
  }
  svg << "<text x=\"" << x0 + w / 2 << "\" y=\"" << y0 + h + 34 << "\" text-anchor=\"middle\">eigenvalue index (fraction)</text>\n";
  if (s.normal.graphs > 0) svg << svg_polyline(s.fractions, s.normal.mean_curve, x0, y0, w, h, "#1f77b4");
  if (s.anomaly.graphs > 0) svg << svg_polyline(s.fractions, s.anomaly.mean_curve, x0, y0, w, h, "#d62728");
  svg << "<text x=\"" << x0 + w - 120 << "\" y=\"" << y0 + h - 40 << "\" fill=\"#1f77b4\">normal (" << s.normal.graphs
      << ")</text>\n"
      << "<text x=\"" << x0 + w - 120 << "\" y=\"" << y0 + h - 22 << "\" fill=\"#d62728\">anomaly (" << s.anomaly.graphs
      << ")</text>\n"
      << "</svg>\n";
  write_file_atomically(dir / "spectral_curves.svg", svg.str());
}

std::string bench_table(std::span<const MetricsRecord> records) {
  std::ostringstream out;
  out << "| Dataset | Variant | Seeds | AUC (%) |\n|---|---|---|---|\n";
  for (const MetricsRecord& m : records) {
    out << "| " << m.dataset << " | " << to_string(m.variant) << " | " << m.runs.size() << " | " << std::fixed
        << std::setprecision(2) << 100.0 * m.auc_mean() << " ± " << 100.0 * m.auc_std() << " |\n";
  }
  return out.str();
}

}  // namespace gladmamba
