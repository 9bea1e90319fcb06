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

#include "gladmamba/dataset_io.hpp"

#include "gladmamba/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

namespace gladmamba {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view tok, const std::string& file, std::size_t line) {
  tok = trim(tok);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(file, line, "cannot parse number '" + std::string(tok) + "'");
  }
  return value;
}

template <typename T>
std::vector<T> split_numbers(std::string_view s, const std::string& file, std::size_t line) {
  std::vector<T> out;
  while (true) {
    auto comma = s.find(',');
    out.push_back(parse_number<T>(s.substr(0, comma), file, line));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

/// Calls fn(line_view, line_number) for every non-blank line.
template <typename Fn>
void for_each_line(const fs::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw FileFormatError("cannot open " + path.string());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto view = trim(line);
    if (view.empty()) continue;
    fn(view, n);
  }
}

std::vector<int> read_int_column(const fs::path& path) {
  std::vector<int> out;
  const std::string file = path.filename().string();
  for_each_line(path, [&](std::string_view v, std::size_t n) { out.push_back(parse_number<int>(v, file, n)); });
  return out;
}

fs::path require_file(const fs::path& dir, const std::string& name, const char* suffix) {
  fs::path p = dir / (name + suffix);
  if (!fs::exists(p)) throw FileFormatError("missing mandatory file " + p.string());
  return p;
}


std::string exact_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

fs::path resolve_data_root(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv(kDataRootEnv); env != nullptr && *env != '\0') return env;
  return "data";
}

void write_file_atomically(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FileFormatError("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw FileFormatError("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::optional<fs::path> find_tu_directory(const fs::path& root, const std::string& name) {
  for (const fs::path& dir : {root / name, root / name / "raw", root}) {
    if (fs::exists(dir / (name + "_A.txt"))) return dir;
  }
  return std::nullopt;
}

GraphDataset parse_tu_dataset(const fs::path& root, const std::string& name) {
  auto found = find_tu_directory(root, name);
  if (!found) throw FileFormatError("missing mandatory file " + (root / name / (name + "_A.txt")).string());
  const fs::path& dir = *found;

  const fs::path a_path = require_file(dir, name, "_A.txt");
  const fs::path ind_path = require_file(dir, name, "_graph_indicator.txt");
  const fs::path lab_path = require_file(dir, name, "_graph_labels.txt");

  const std::vector<int> indicator = read_int_column(ind_path);
  const std::vector<int> graph_labels = read_int_column(lab_path);
  const std::size_t total_nodes = indicator.size();
  const int graph_total = static_cast<int>(graph_labels.size());

  GraphDataset ds;
  ds.name = name;
  ds.graphs.resize(graph_total);
  for (int i = 0; i < graph_total; ++i) {
    ds.graphs[i].id = i;
    ds.graphs[i].label = graph_labels[i];
  }

  // Global node index -> (graph, local index).
  std::vector<int> local_index(total_nodes);
  {
    const std::string file = ind_path.filename().string();
    int prev = 0;
    for (std::size_t v = 0; v < total_nodes; ++v) {
      const int g = indicator[v];
      if (g < 1 || g > graph_total) throw ParseError(file, v + 1, "graph id out of range");
      if (g < prev) throw ParseError(file, v + 1, "graph indicator is not non-decreasing");
      prev = g;
      local_index[v] = ds.graphs[g - 1].node_count++;
    }
    for (int i = 0; i < graph_total; ++i) {
      if (ds.graphs[i].node_count == 0) {
        throw ParseError(lab_path.filename().string(), static_cast<std::size_t>(i) + 1,
                         "graph has no nodes in the graph indicator");
      }
    }
  }

  {
    const std::string file = a_path.filename().string();
    for_each_line(a_path, [&](std::string_view line, std::size_t n) {
      auto pair = split_numbers<long long>(line, file, n);
      if (pair.size() != 2) throw ParseError(file, n, "expected 'u, v'");
      const long long u = pair[0] - 1;
      const long long v = pair[1] - 1;
      if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= total_nodes ||
          static_cast<std::size_t>(v) >= total_nodes) {
        throw ParseError(file, n, "node index out of range");
      }
      const int gu = indicator[u];
      if (gu != indicator[v]) throw ParseError(file, n, "edge crosses graphs");
      ds.graphs[gu - 1].edges.emplace_back(local_index[u], local_index[v]);
    });
  }
  for (auto& g : ds.graphs) g.canonicalize_edges();

  const fs::path node_lab_path = dir / (name + "_node_labels.txt");
  if (fs::exists(node_lab_path)) {
    std::vector<int> node_labels;
    const std::string file = node_lab_path.filename().string();
    for_each_line(node_lab_path, [&](std::string_view line, std::size_t n) {
      // Some TU sets store several label columns; the first is the node label.
      node_labels.push_back(split_numbers<int>(line, file, n).front());
    });
    if (node_labels.size() != total_nodes) {
      throw ParseError(file, node_labels.size(), "node label count does not match graph indicator");
    }
    for (std::size_t v = 0; v < total_nodes; ++v) ds.graphs[indicator[v] - 1].node_labels.push_back(node_labels[v]);
  }

  const fs::path attr_path = dir / (name + "_node_attributes.txt");
  if (fs::exists(attr_path)) {
    const std::string file = attr_path.filename().string();
    std::vector<std::vector<double>> rows;
    rows.reserve(total_nodes);
    std::size_t width = 0;
    for_each_line(attr_path, [&](std::string_view line, std::size_t n) {
      auto row = split_numbers<double>(line, file, n);
      if (rows.empty()) width = row.size();
      if (row.size() != width) {
        throw ParseError(file, n, "ragged attribute row: expected " + std::to_string(width) + " values, got " +
                                      std::to_string(row.size()));
      }
      for (double x : row) {
        if (!std::isfinite(x)) throw ParseError(file, n, "non-finite attribute");
      }
      rows.push_back(std::move(row));
    });
    if (rows.size() != total_nodes) throw ParseError(file, rows.size(), "attribute row count does not match graph indicator");
    for (auto& g : ds.graphs) {
      g.features = Matrix::Zero(g.node_count, static_cast<Eigen::Index>(width));
      g.has_attributes = true;
    }
    for (std::size_t v = 0; v < total_nodes; ++v) {
      Graph& g = ds.graphs[indicator[v] - 1];
      for (std::size_t c = 0; c < width; ++c) g.features(local_index[v], static_cast<Eigen::Index>(c)) = rows[v][c];
    }
  } else if (fs::exists(node_lab_path)) {
    int lo = 0;
    int hi = -1;
    bool first = true;
    for (const auto& g : ds.graphs) {
      for (int l : g.node_labels) {
        lo = first ? l : std::min(lo, l);
        hi = first ? l : std::max(hi, l);
        first = false;
      }
    }
    const int width = first ? 0 : hi - lo + 1;
    for (auto& g : ds.graphs) {
      g.features = Matrix::Zero(g.node_count, width);
      for (int v = 0; v < g.node_count; ++v) g.features(v, g.node_labels[v] - lo) = 1.0;
    }
  } else {
    for (auto& g : ds.graphs) g.features = Matrix::Zero(g.node_count, 0);
  }
  return ds;
}

void write_tu_dataset(const GraphDataset& ds, const fs::path& dir) {
  fs::create_directories(dir);
  std::ostringstream a, ind, glab, nlab, attr;
  bool any_node_labels = false;
  bool any_attributes = false;
  long long offset = 0;
  for (const auto& g : ds.graphs) {
    for (auto [u, v] : g.edges) {
      a << (u + offset + 1) << ", " << (v + offset + 1) << '\n';
      a << (v + offset + 1) << ", " << (u + offset + 1) << '\n';
    }
    for (int v = 0; v < g.node_count; ++v) ind << (g.id + 1) << '\n';
    glab << g.label << '\n';
    if (!g.node_labels.empty()) {
      any_node_labels = true;
      for (int l : g.node_labels) nlab << l << '\n';
    }
    if (g.has_attributes) {
      any_attributes = true;
      for (Eigen::Index r = 0; r < g.features.rows(); ++r) {
        for (Eigen::Index c = 0; c < g.features.cols(); ++c) {
          if (c) attr << ", ";
          attr << exact_double(g.features(r, c));
        }
        attr << '\n';
      }
    }
    offset += g.node_count;
  }
  write_file_atomically(dir / (ds.name + "_A.txt"), a.str());
  write_file_atomically(dir / (ds.name + "_graph_indicator.txt"), ind.str());
  write_file_atomically(dir / (ds.name + "_graph_labels.txt"), glab.str());
  if (any_node_labels) write_file_atomically(dir / (ds.name + "_node_labels.txt"), nlab.str());
  if (any_attributes) write_file_atomically(dir / (ds.name + "_node_attributes.txt"), attr.str());
}

GraphDataset assign_anomaly_labels(GraphDataset ds, std::optional<int> override_class) {
  std::map<int, std::size_t> counts;
  for (const auto& g : ds.graphs) ++counts[g.label];
  if (override_class) {
    if (!counts.contains(*override_class)) {
      throw ConfigError("anomaly class override " + std::to_string(*override_class) + " matches no graph label");
    }
    if (counts.size() < 2) throw ConfigError("dataset has a single graph class; no normal graphs remain");
    ds.anomaly_class = *override_class;
    return ds;
  }
  if (counts.size() < 2) throw ConfigError("dataset has a single graph class; cannot pick an anomaly class");
  auto minority = counts.begin();
  bool tie = false;
  for (auto it = std::next(counts.begin()); it != counts.end(); ++it) {
    if (it->second < minority->second) {
      minority = it;
      tie = false;
    } else if (it->second == minority->second) {
      tie = true;
    }
  }
  if (tie) {
    throw ConfigError("graph classes tie for minority (" + std::to_string(minority->second) +
                      " graphs each); set data.anomaly_class explicitly");
  }
  ds.anomaly_class = minority->first;
  return ds;
}

SplitSpec make_split(const GraphDataset& ds, std::uint64_t seed, double train_frac) {
  if (!ds.anomaly_class) throw ConfigError("make_split: anomaly labels not assigned");
  if (!(train_frac > 0.0 && train_frac < 1.0)) throw ConfigError("make_split: train_frac must lie in (0, 1)");
  std::vector<int> normals;
  std::vector<int> anomalies;
  for (const auto& g : ds.graphs) (ds.is_anomaly(g) ? anomalies : normals).push_back(g.id);
  if (normals.size() < 2) throw ConfigError("make_split: fewer than 2 normal graphs");

  Rng rng = Rng::substream(seed, "split");
  rng.shuffle(std::span<int>(normals));
  auto n_train = static_cast<std::size_t>(std::floor(train_frac * static_cast<double>(normals.size()) + 1e-9));
  n_train = std::clamp<std::size_t>(n_train, 1, normals.size() - 1);

  SplitSpec split;
  split.seed = seed;
  split.train_ids.assign(normals.begin(), normals.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test_ids.assign(normals.begin() + static_cast<std::ptrdiff_t>(n_train), normals.end());
  split.test_ids.insert(split.test_ids.end(), anomalies.begin(), anomalies.end());
  std::sort(split.train_ids.begin(), split.train_ids.end());
  std::sort(split.test_ids.begin(), split.test_ids.end());
  return split;
}

DatasetStats dataset_stats(const GraphDataset& ds) {
  DatasetStats s;
  s.graphs = ds.graphs.size();
  if (ds.graphs.empty()) return s;
  double nodes = 0.0;
  double edges = 0.0;
  for (const auto& g : ds.graphs) {
    nodes += g.node_count;
    edges += static_cast<double>(g.edges.size());
  }
  s.avg_nodes = nodes / static_cast<double>(s.graphs);
  s.avg_edges = edges / static_cast<double>(s.graphs);
  s.feature_dim = static_cast<int>(ds.graphs.front().features.cols());
  return s;
}

}  // namespace gladmamba
