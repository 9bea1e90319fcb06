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

#include "gladmamba/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>

namespace gladmamba {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("seed: expected a non-negative integer, got '" + v + "'");
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Variant parse_variant(const std::string& raw) {
  std::string s = lower(raw);
  if (s == "none" || s == "full" || s.empty()) return Variant::full;
  if (s.starts_with("no-")) s = s.substr(3);
  if (s == "vfm") return Variant::no_vfm;
  if (s == "sgm") return Variant::no_sgm;
  if (s == "mamba") return Variant::no_mamba;
  if (s == "vf-ssm") return Variant::no_vf_ssm;
  if (s == "sg-ssm") return Variant::no_sg_ssm;
  throw ConfigError("unknown ablation variant '" + raw + "'");
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::full: return "none";
    case Variant::no_vfm: return "no-vfm";
    case Variant::no_sgm: return "no-sgm";
    case Variant::no_mamba: return "no-mamba";
    case Variant::no_vf_ssm: return "no-vf-ssm";
    case Variant::no_sg_ssm: return "no-sg-ssm";
  }
  return "none";
}

bool uses_vfm(Variant v) { return v != Variant::no_vfm && v != Variant::no_mamba; }
bool uses_sgm(Variant v) { return v != Variant::no_sgm && v != Variant::no_mamba; }

EncoderKind default_encoder_for(const std::string& dataset) {
  std::string s = lower(dataset);
  if (s.starts_with("tox21_")) s = s.substr(6);
  for (const char* gin : {"aids", "dhfr", "hse", "mmp"}) {
    if (s == gin) return EncoderKind::gin;
  }
  return EncoderKind::gcn;
}

EncoderKind RunConfig::resolved_encoder_kind() const {
  return encoder_kind ? *encoder_kind : default_encoder_for(dataset);
}

std::vector<std::uint64_t> parse_seed_list(const std::string& raw) {
  const std::string s = trim(raw);
  std::vector<std::uint64_t> out;
  if (auto dots = s.find(".."); dots != std::string::npos) {
    const auto lo = to_u64(trim(s.substr(0, dots)));
    const auto hi = to_u64(trim(s.substr(dots + 2)));
    if (hi < lo) throw ConfigError("seed range '" + s + "' is empty");
    for (auto x = lo; x <= hi; ++x) out.push_back(x);
    return out;
  }
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    const std::string tok = trim(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!tok.empty()) out.push_back(to_u64(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError("empty seed list");
  return out;
}

void RunConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string v = trim(raw_value);
  static const std::map<std::string, std::function<void(RunConfig&, const std::string&, const std::string&)>> setters = {
      {"dataset", [](RunConfig& c, const std::string&, const std::string& v) { c.dataset = v; }},
      {"data.root", [](RunConfig& c, const std::string&, const std::string& v) { c.data_root = v; }},
      {"data.anomaly_class",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v.empty() || v == "auto") {
           c.anomaly_class.reset();
         } else {
           c.anomaly_class = to_int(k, v);
         }
       }},
      {"data.train_frac", [](RunConfig& c, const std::string& k, const std::string& v) { c.train_frac = to_double(k, v); }},
      {"aug.walk_steps", [](RunConfig& c, const std::string& k, const std::string& v) { c.aug.walk_steps = to_int(k, v); }},
      {"aug.degree_cap", [](RunConfig& c, const std::string& k, const std::string& v) { c.aug.degree_cap = to_int(k, v); }},
      {"encoder.kind",
       [](RunConfig& c, const std::string&, const std::string& v) {
         if (v.empty() || v == "auto") {
           c.encoder_kind.reset();
         } else {
           c.encoder_kind = parse_encoder_kind(lower(v));
         }
       }},
      {"encoder.layers", [](RunConfig& c, const std::string& k, const std::string& v) { c.encoder_layers = to_int(k, v); }},
      {"encoder.hidden_dim", [](RunConfig& c, const std::string& k, const std::string& v) { c.hidden_dim = to_int(k, v); }},
      {"ssm.state_size",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.vfm_state_size = to_int(k, v);
         c.sgm_state_size = c.vfm_state_size;
       }},
      {"vfm.state_size", [](RunConfig& c, const std::string& k, const std::string& v) { c.vfm_state_size = to_int(k, v); }},
      {"vfm.conv_width", [](RunConfig& c, const std::string& k, const std::string& v) { c.vfm_conv_width = to_int(k, v); }},
      {"vfm.delta_rank", [](RunConfig& c, const std::string& k, const std::string& v) { c.vfm_delta_rank = to_int(k, v); }},
      {"sgm.state_size", [](RunConfig& c, const std::string& k, const std::string& v) { c.sgm_state_size = to_int(k, v); }},
      {"sgm.conv_width", [](RunConfig& c, const std::string& k, const std::string& v) { c.sgm_conv_width = to_int(k, v); }},
      {"sgm.delta_rank", [](RunConfig& c, const std::string& k, const std::string& v) { c.sgm_delta_rank = to_int(k, v); }},
      {"loss.tau", [](RunConfig& c, const std::string& k, const std::string& v) { c.loss.tau = to_double(k, v); }},
      {"loss.alpha", [](RunConfig& c, const std::string& k, const std::string& v) { c.loss.alpha = to_double(k, v); }},
      {"eval.batch_size", [](RunConfig& c, const std::string& k, const std::string& v) { c.eval_batch_size = to_int(k, v); }},
      {"train.epochs", [](RunConfig& c, const std::string& k, const std::string& v) { c.epochs = to_int(k, v); }},
      {"train.batch_size", [](RunConfig& c, const std::string& k, const std::string& v) { c.batch_size = to_int(k, v); }},
      {"train.learning_rate",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.learning_rate = to_double(k, v); }},
      {"train.seeds", [](RunConfig& c, const std::string&, const std::string& v) { c.seeds = parse_seed_list(v); }},
      {"ablation", [](RunConfig& c, const std::string&, const std::string& v) { c.variant = parse_variant(v); }},
      {"rayleigh.laplacian",
       [](RunConfig& c, const std::string&, const std::string& v) { c.rayleigh_laplacian = parse_laplacian_kind(v); }},
      {"spectral.max_nodes",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.spectral_max_nodes = to_int(k, v); }},
  };
  auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(*this, key, v);
}

void RunConfig::validate() const {
  if (epochs < 0) throw ConfigError("train.epochs must be non-negative");
  if (batch_size < 2) throw ConfigError("train.batch_size must be at least 2 (graph-scale negatives)");
  if (eval_batch_size < 2) throw ConfigError("eval.batch_size must be at least 2");
  if (!(learning_rate > 0.0)) throw ConfigError("train.learning_rate must be positive");
  if (!(train_frac > 0.0 && train_frac < 1.0)) throw ConfigError("data.train_frac must lie in (0, 1)");
  if (aug.walk_steps < 1) throw ConfigError("aug.walk_steps must be >= 1");
  if (aug.degree_cap < 1) throw ConfigError("aug.degree_cap must be >= 1");
  if (encoder_layers < 1 || hidden_dim < 1) throw ConfigError("encoder.layers and encoder.hidden_dim must be positive");
  for (int x : {vfm_state_size, vfm_conv_width, vfm_delta_rank, sgm_state_size, sgm_conv_width, sgm_delta_rank}) {
    if (x < 1) throw ConfigError("vfm/sgm sizes must be positive");
  }
  if (seeds.empty()) throw ConfigError("train.seeds must not be empty");
  loss.validate();
}

std::map<std::string, std::string> RunConfig::to_key_values() const {
  std::string seed_list;
  for (std::size_t i = 0; i < seeds.size(); ++i) seed_list += (i ? "," : "") + std::to_string(seeds[i]);
  return {
      {"dataset", dataset},
      {"data.root", data_root},
      {"data.anomaly_class", anomaly_class ? std::to_string(*anomaly_class) : "auto"},
      {"data.train_frac", format_double(train_frac)},
      {"aug.walk_steps", std::to_string(aug.walk_steps)},
      {"aug.degree_cap", std::to_string(aug.degree_cap)},
      {"encoder.kind", encoder_kind ? to_string(*encoder_kind) : "auto"},
      {"encoder.layers", std::to_string(encoder_layers)},
      {"encoder.hidden_dim", std::to_string(hidden_dim)},
      {"vfm.state_size", std::to_string(vfm_state_size)},
      {"vfm.conv_width", std::to_string(vfm_conv_width)},
      {"vfm.delta_rank", std::to_string(vfm_delta_rank)},
      {"sgm.state_size", std::to_string(sgm_state_size)},
      {"sgm.conv_width", std::to_string(sgm_conv_width)},
      {"sgm.delta_rank", std::to_string(sgm_delta_rank)},
      {"loss.tau", format_double(loss.tau)},
      {"loss.alpha", format_double(loss.alpha)},
      {"eval.batch_size", std::to_string(eval_batch_size)},
      {"train.epochs", std::to_string(epochs)},
      {"train.batch_size", std::to_string(batch_size)},
      {"train.learning_rate", format_double(learning_rate)},
      {"train.seeds", seed_list},
      {"ablation", to_string(variant)},
      {"rayleigh.laplacian", to_string(rayleigh_laplacian)},
      {"spectral.max_nodes", std::to_string(spectral_max_nodes)},
  };
}

RunConfig RunConfig::from_key_values(const std::map<std::string, std::string>& kv) {
  RunConfig c;
  for (const auto& [k, v] : kv) c.set(k, v);
  return c;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) { return from_file(path, RunConfig{}); }

RunConfig RunConfig::from_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(n) + ": expected 'key = value'");
    }
    base.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

}  // namespace gladmamba
