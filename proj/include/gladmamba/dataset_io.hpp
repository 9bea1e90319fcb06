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

#ifndef GLADMAMBA_DATASET_IO_HPP
#define GLADMAMBA_DATASET_IO_HPP

#include "gladmamba/graph.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace gladmamba {

/// Environment variable consulted when no explicit data root is given.
inline constexpr const char* kDataRootEnv = "GLADMAMBA_DATA_ROOT";

/// Returns `flag` if set, else $GLADMAMBA_DATA_ROOT, else "data".
std::filesystem::path resolve_data_root(const std::optional<std::string>& flag);

/// Writes `contents` to a sibling temp file, then renames it over `path`.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

/// Locates the directory holding `<name>_A.txt`. Looks in root/name,
/// root/name/raw and root itself. Returns nullopt when absent.
std::optional<std::filesystem::path> find_tu_directory(const std::filesystem::path& root,
                                                       const std::string& name);

/// Parses a TU-format dataset.
///
/// Node indices become 0-based, duplicate directed pairs collapse to one
/// undirected edge, self-loops are dropped. Node features come from
/// `<name>_node_attributes.txt` when present, otherwise a one-hot of the node
/// labels, otherwise an empty (d_f = 0) matrix.
///
/// Throws FileFormatError for missing mandatory files and ParseError (with the
/// offending line) for malformed content.
GraphDataset parse_tu_dataset(const std::filesystem::path& root, const std::string& name);

/// Writes `ds` back out in TU format under `dir` (created if needed).
void write_tu_dataset(const GraphDataset& ds, const std::filesystem::path& dir);

/// Marks the minority graph class as anomalous, or `override_class` when
/// given. A tie between the two smallest classes requires an override.
GraphDataset assign_anomaly_labels(GraphDataset ds, std::optional<int> override_class = std::nullopt);

/// Splits normals into train/test; every anomaly goes to test. Both id lists
/// are returned in ascending order.
SplitSpec make_split(const GraphDataset& ds, std::uint64_t seed, double train_frac = 0.8);

struct DatasetStats {
  std::size_t graphs = 0;
  double avg_nodes = 0.0;
  double avg_edges = 0.0;
  int feature_dim = 0;
};

DatasetStats dataset_stats(const GraphDataset& ds);

}  // namespace gladmamba

#endif  // GLADMAMBA_DATASET_IO_HPP
