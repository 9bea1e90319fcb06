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

#ifndef GLADMAMBA_LAYERS_HPP
#define GLADMAMBA_LAYERS_HPP

#include "gladmamba/autodiff.hpp"
#include "gladmamba/random.hpp"

#include <string>
#include <utility>
#include <vector>

namespace gladmamba {

struct NamedParam {
  std::string name;
  ad::Var var;
};

/// Owns every learnable tensor of a model under a dotted name, in creation
/// order. Names are unique.
class ParamStore {
 public:
  ad::Var add(const std::string& name, Matrix init);
  ad::Var get(const std::string& name) const;
  bool contains(const std::string& name) const;

  const std::vector<NamedParam>& entries() const { return entries_; }
  std::size_t scalar_count() const;
  /// Scalars whose names start with `prefix`.
  std::size_t scalar_count(const std::string& prefix) const;
  void zero_grad();

 private:
  std::vector<NamedParam> entries_;
};

/// y = x W + b with W stored in x out.
struct Linear {
  ad::Var weight;
  ad::Var bias;  ///< may be empty

  static Linear create(ParamStore& store, const std::string& name, int in, int out, Rng& rng, bool with_bias = true);
  ad::Var operator()(const ad::Var& x) const;
  int in_features() const { return static_cast<int>(weight.rows()); }
  int out_features() const { return static_cast<int>(weight.cols()); }
};

struct LayerNorm {
  ad::Var gamma;
  ad::Var beta;
  double eps = 1e-5;

  static LayerNorm create(ParamStore& store, const std::string& name, int width);
  ad::Var operator()(const ad::Var& x) const { return ad::layer_norm(x, gamma, beta, eps); }
};

/// Depthwise causal Conv1D along the sequence axis.
struct CausalConv1d {
  ad::Var kernel;  ///< channels x width
  ad::Var bias;    ///< 1 x channels

  static CausalConv1d create(ParamStore& store, const std::string& name, int channels, int width, Rng& rng);
  ad::Var operator()(const ad::Var& x) const { return ad::causal_conv1d(x, kernel, bias); }
};

/// Linear -> ReLU -> Linear.
struct Mlp2 {
  Linear first;
  Linear second;

  static Mlp2 create(ParamStore& store, const std::string& name, int in, int hidden, int out, Rng& rng);
  ad::Var operator()(const ad::Var& x) const { return second(ad::relu(first(x))); }
};

/// Uniform(-bound, bound) fill.
Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double bound, Rng& rng);

}  // namespace gladmamba

#endif  // GLADMAMBA_LAYERS_HPP
