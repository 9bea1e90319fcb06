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

#ifndef GLADMAMBA_CONFIG_HPP
#define GLADMAMBA_CONFIG_HPP

#include "gladmamba/augmentation.hpp"
#include "gladmamba/gnn_encoder.hpp"
#include "gladmamba/objective.hpp"
#include "gladmamba/spectral.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gladmamba {

/// Model variants: the full model and the five component ablations.
enum class Variant { full, no_vfm, no_sgm, no_mamba, no_vf_ssm, no_sg_ssm };

/// Accepts "none"/"full", "no-vfm" or the short "vfm" form used by --ablate,
/// and likewise for sgm, mamba, vf-ssm, sg-ssm.
Variant parse_variant(const std::string& s);
std::string to_string(Variant v);

bool uses_vfm(Variant v);
bool uses_sgm(Variant v);

/// GIN for AIDS, DHFR, HSE and MMP (Tox21 prefixes accepted), GCN otherwise.
EncoderKind default_encoder_for(const std::string& dataset);

struct RunConfig {
  std::string dataset;
  std::string data_root;  ///< empty: resolve from the environment
  std::optional<int> anomaly_class;
  double train_frac = 0.8;

  AugmentConfig aug;

  std::optional<EncoderKind> encoder_kind;  ///< unset: per-dataset default
  int encoder_layers = 2;
  int hidden_dim = 16;

  int vfm_state_size = 8;
  int vfm_conv_width = 4;
  int vfm_delta_rank = 4;
  int sgm_state_size = 8;
  int sgm_conv_width = 4;
  int sgm_delta_rank = 4;

  LossConfig loss;
  int eval_batch_size = 128;

  int epochs = 100;
  int batch_size = 64;
  double learning_rate = 1e-3;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  Variant variant = Variant::full;

  LaplacianKind rayleigh_laplacian = LaplacianKind::unnormalized;
  int spectral_max_nodes = kDefaultSpectralNodeCap;

  EncoderKind resolved_encoder_kind() const;

  /// Sets one key; throws ConfigError for unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  void validate() const;

  /// Every key with its current value, enough to rebuild an equal config.
  std::map<std::string, std::string> to_key_values() const;
  static RunConfig from_key_values(const std::map<std::string, std::string>& kv);

  /// Reads `key = value` lines; '#' starts a comment.
  static RunConfig from_file(const std::filesystem::path& path);
  /// Same, applied on top of `base`.
  static RunConfig from_file(const std::filesystem::path& path, RunConfig base);
};

/// "0..4" -> {0,1,2,3,4}; "1,3,5" -> {1,3,5}.
std::vector<std::uint64_t> parse_seed_list(const std::string& s);

std::string format_double(double x);

}  // namespace gladmamba

#endif  // GLADMAMBA_CONFIG_HPP
