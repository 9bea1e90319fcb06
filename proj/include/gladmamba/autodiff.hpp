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

#ifndef GLADMAMBA_AUTODIFF_HPP
#define GLADMAMBA_AUTODIFF_HPP

#include "gladmamba/tensor.hpp"

#include <functional>
#include <memory>
#include <vector>

/// Minimal reverse-mode differentiation over dense matrices.
///
/// Every op returns a Var whose node remembers its parents and a closure that
/// pushes the node's gradient into them. backward() walks the graph once in
/// reverse topological order. Leaves created with parameter() keep their
/// accumulated gradient until zero_grad().
namespace gladmamba::ad {

struct Node {
  Matrix value;
  Matrix grad;  ///< empty until something flows in
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;

  void add_grad(const Matrix& g);
  Node& parent(std::size_t i) { return *parents[i]; }
};

class Var {
 public:
  Var() = default;
  explicit Var(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  const Matrix& value() const { return node_->value; }
  Matrix& mutable_value() { return node_->value; }
  /// Accumulated gradient; a zero matrix of value's shape when none arrived.
  Matrix grad() const;
  bool has_grad() const { return node_->grad.size() > 0; }
  void zero_grad() { node_->grad.resize(0, 0); }

  Eigen::Index rows() const { return node_->value.rows(); }
  Eigen::Index cols() const { return node_->value.cols(); }
  double scalar() const { return node_->value(0, 0); }

  const std::shared_ptr<Node>& node() const { return node_; }
  explicit operator bool() const { return static_cast<bool>(node_); }

 private:
  std::shared_ptr<Node> node_;
};

Var constant(Matrix value);
Var parameter(Matrix value);

/// Builds an op node. `backward` reads self.grad and calls add_grad on parents.
Var make_op(Matrix value, std::vector<Var> parents, std::function<void(Node&)> backward);

/// Seeds d(root)/d(root) = 1 for a 1x1 root and propagates.
void backward(const Var& root);

Var matmul(const Var& a, const Var& b);
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, double s);
/// x (n x c) plus a 1 x c row broadcast to every row.
Var add_row(const Var& x, const Var& row);

Var relu(const Var& x);
Var silu(const Var& x);
Var softplus(const Var& x);

/// s * x for a constant sparse matrix s.
Var spmm(std::shared_ptr<const SparseMatrix> s, const Var& x);

Var concat_cols(const std::vector<Var>& parts);

/// Row-wise (x - mean) / sqrt(var + eps) * gamma + beta; gamma, beta are 1 x c.
Var layer_norm(const Var& x, const Var& gamma, const Var& beta, double eps);

/// Depthwise causal convolution along rows (the sequence axis):
///   out[t, c] = bias[c] + sum_k kernel[c, k] * x[t - (w - 1) + k, c]
/// with zero padding before the first row. kernel is c x w.
Var causal_conv1d(const Var& x, const Var& kernel, const Var& bias);

Var sum(const Var& x);
Var mean(const Var& x);

/// Same value, no gradient path.
inline Var detach(const Var& x) { return constant(x.value()); }

double softplus_value(double x);
double sigmoid_value(double x);

}  // namespace gladmamba::ad

#endif  // GLADMAMBA_AUTODIFF_HPP
