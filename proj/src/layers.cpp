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

#include "gladmamba/layers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gladmamba {

ad::Var ParamStore::add(const std::string& name, Matrix init) {
  if (contains(name)) throw std::invalid_argument("duplicate parameter name " + name);
  entries_.push_back({name, ad::parameter(std::move(init))});
  return entries_.back().var;
}

ad::Var ParamStore::get(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e.var;
  }
  throw std::out_of_range("no parameter named " + name);
}

bool ParamStore::contains(const std::string& name) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const NamedParam& e) { return e.name == name; });
}

std::size_t ParamStore::scalar_count() const { return scalar_count(""); }

std::size_t ParamStore::scalar_count(const std::string& prefix) const {
  std::size_t n = 0;
  for (const auto& e : entries_) {
    if (e.name.starts_with(prefix)) n += static_cast<std::size_t>(e.var.value().size());
  }
  return n;
}

void ParamStore::zero_grad() {
  for (auto& e : entries_) e.var.zero_grad();
}

Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double bound, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.uniform(-bound, bound);
  }
  return m;
}

Linear Linear::create(ParamStore& store, const std::string& name, int in, int out, Rng& rng, bool with_bias) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max(in, 1)));
  Linear l;
  l.weight = store.add(name + ".weight", uniform_matrix(in, out, bound, rng));
  if (with_bias) l.bias = store.add(name + ".bias", uniform_matrix(1, out, bound, rng));
  return l;
}

ad::Var Linear::operator()(const ad::Var& x) const {
  ad::Var y = ad::matmul(x, weight);
  return bias ? ad::add_row(y, bias) : y;
}

LayerNorm LayerNorm::create(ParamStore& store, const std::string& name, int width) {
  LayerNorm ln;
  ln.gamma = store.add(name + ".gamma", Matrix::Ones(1, width));
  ln.beta = store.add(name + ".beta", Matrix::Zero(1, width));
  return ln;
}

CausalConv1d CausalConv1d::create(ParamStore& store, const std::string& name, int channels, int width, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(width));
  CausalConv1d conv;
  conv.kernel = store.add(name + ".kernel", uniform_matrix(channels, width, bound, rng));
  conv.bias = store.add(name + ".bias", uniform_matrix(1, channels, bound, rng));
  return conv;
}

Mlp2 Mlp2::create(ParamStore& store, const std::string& name, int in, int hidden, int out, Rng& rng) {
  Mlp2 m;
  m.first = Linear::create(store, name + ".0", in, hidden, rng);
  m.second = Linear::create(store, name + ".1", hidden, out, rng);
  return m;
}

}  // namespace gladmamba
