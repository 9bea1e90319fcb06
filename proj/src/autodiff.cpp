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

#include "gladmamba/autodiff.hpp"

#include <cmath>
#include <unordered_set>

namespace gladmamba::ad {

namespace {

void require_same_shape(const Var& a, const Var& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                     ")");
  }
}

}  // namespace

void Node::add_grad(const Matrix& g) {
  if (grad.size() == 0) {
    grad = g;
  } else {
    grad += g;
  }
}

Matrix Var::grad() const {
  if (node_->grad.size() == 0) return Matrix::Zero(node_->value.rows(), node_->value.cols());
  return node_->grad;
}

Var constant(Matrix value) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  return Var(std::move(n));
}

Var parameter(Matrix value) { return constant(std::move(value)); }

Var make_op(Matrix value, std::vector<Var> parents, std::function<void(Node&)> backward) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  n->parents.reserve(parents.size());
  for (auto& p : parents) n->parents.push_back(p.node());
  n->backward = std::move(backward);
  return Var(std::move(n));
}

void backward(const Var& root) {
  if (root.rows() != 1 || root.cols() != 1) throw ShapeError("backward: root must be 1x1");

  // Iterative DFS post-order gives a topological order (parents first).
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, std::size_t>> stack{{root.node().get(), 0}};
  seen.insert(root.node().get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* p = node->parents[next++].get();
      if (seen.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  root.node()->add_grad(Matrix::Ones(1, 1));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backward && n->grad.size() > 0) n->backward(*n);
  }
}

Var matmul(const Var& a, const Var& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                     std::to_string(b.rows()) + ")");
  }
  return make_op(a.value() * b.value(), {a, b}, [](Node& self) {
    Node& a = self.parent(0);
    Node& b = self.parent(1);
    a.add_grad(self.grad * b.value.transpose());
    b.add_grad(a.value.transpose() * self.grad);
  });
}

Var add(const Var& a, const Var& b) {
  require_same_shape(a, b, "add");
  return make_op(a.value() + b.value(), {a, b}, [](Node& self) {
    self.parent(0).add_grad(self.grad);
    self.parent(1).add_grad(self.grad);
  });
}

Var sub(const Var& a, const Var& b) {
  require_same_shape(a, b, "sub");
  return make_op(a.value() - b.value(), {a, b}, [](Node& self) {
    self.parent(0).add_grad(self.grad);
    self.parent(1).add_grad(-self.grad);
  });
}

Var mul(const Var& a, const Var& b) {
  require_same_shape(a, b, "mul");
  return make_op(a.value().cwiseProduct(b.value()), {a, b}, [](Node& self) {
    Node& a = self.parent(0);
    Node& b = self.parent(1);
    a.add_grad(self.grad.cwiseProduct(b.value));
    b.add_grad(self.grad.cwiseProduct(a.value));
  });
}

Var scale(const Var& a, double s) {
  return make_op(a.value() * s, {a}, [s](Node& self) { self.parent(0).add_grad(self.grad * s); });
}

Var add_row(const Var& x, const Var& row) {
  if (row.rows() != 1 || row.cols() != x.cols()) throw ShapeError("add_row: row must be 1 x cols(x)");
  Matrix out = x.value().rowwise() + row.value().row(0);
  return make_op(std::move(out), {x, row}, [](Node& self) {
    self.parent(0).add_grad(self.grad);
    self.parent(1).add_grad(self.grad.colwise().sum());
  });
}

double softplus_value(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }

double sigmoid_value(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Var relu(const Var& x) {
  return make_op(x.value().cwiseMax(0.0), {x}, [](Node& self) {
    Node& x = self.parent(0);
    x.add_grad((x.value.array() > 0.0).select(self.grad.array(), 0.0).matrix());
  });
}

Var silu(const Var& x) {
  Matrix out = x.value().unaryExpr([](double v) { return v * sigmoid_value(v); });
  return make_op(std::move(out), {x}, [](Node& self) {
    Node& x = self.parent(0);
    Matrix d = x.value.unaryExpr([](double v) {
      const double s = sigmoid_value(v);
      return s * (1.0 + v * (1.0 - s));
    });
    x.add_grad(self.grad.cwiseProduct(d));
  });
}

Var softplus(const Var& x) {
  Matrix out = x.value().unaryExpr([](double v) { return softplus_value(v); });
  return make_op(std::move(out), {x}, [](Node& self) {
    Node& x = self.parent(0);
    x.add_grad(self.grad.cwiseProduct(x.value.unaryExpr([](double v) { return sigmoid_value(v); })));
  });
}

Var spmm(std::shared_ptr<const SparseMatrix> s, const Var& x) {
  if (s->cols() != x.rows()) throw ShapeError("spmm: sparse cols != rows(x)");
  Matrix out = (*s) * x.value();
  return make_op(std::move(out), {x}, [s](Node& self) {
    self.parent(0).add_grad(s->transpose() * self.grad);
  });
}

Var concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no inputs");
  const Eigen::Index rows = parts.front().rows();
  Eigen::Index cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw ShapeError("concat_cols: row mismatch");
    cols += p.cols();
  }
  Matrix out(rows, cols);
  std::vector<Eigen::Index> widths;
  Eigen::Index c = 0;
  for (const auto& p : parts) {
    out.middleCols(c, p.cols()) = p.value();
    widths.push_back(p.cols());
    c += p.cols();
  }
  return make_op(std::move(out), parts, [widths](Node& self) {
    Eigen::Index c = 0;
    for (std::size_t i = 0; i < widths.size(); ++i) {
      self.parent(i).add_grad(self.grad.middleCols(c, widths[i]));
      c += widths[i];
    }
  });
}

Var layer_norm(const Var& x, const Var& gamma, const Var& beta, double eps) {
  const Eigen::Index n = x.rows();
  const Eigen::Index c = x.cols();
  if (gamma.rows() != 1 || gamma.cols() != c || beta.rows() != 1 || beta.cols() != c) {
    throw ShapeError("layer_norm: gamma/beta must be 1 x cols(x)");
  }
  Matrix xhat(n, c);
  Vector inv_std(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const double mu = x.value().row(r).mean();
    const double var = (x.value().row(r).array() - mu).square().mean();
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    xhat.row(r) = (x.value().row(r).array() - mu) * inv_std[r];
  }
  Matrix out = (xhat.array().rowwise() * gamma.value().row(0).array()).rowwise() + beta.value().row(0).array();
  return make_op(std::move(out), {x, gamma, beta}, [xhat, inv_std](Node& self) {
    const Matrix& g = self.grad;
    Node& gamma = self.parent(1);
    self.parent(2).add_grad(g.colwise().sum());
    gamma.add_grad(g.cwiseProduct(xhat).colwise().sum());

    const Matrix gx = g.array().rowwise() * gamma.value.row(0).array();
    const double inv_c = 1.0 / static_cast<double>(g.cols());
    Matrix dx(g.rows(), g.cols());
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      const double m1 = gx.row(r).sum() * inv_c;
      const double m2 = gx.row(r).dot(xhat.row(r)) * inv_c;
      dx.row(r) = inv_std[r] * (gx.row(r).array() - m1 - xhat.row(r).array() * m2);
    }
    self.parent(0).add_grad(dx);
  });
}

Var causal_conv1d(const Var& x, const Var& kernel, const Var& bias) {
  const Eigen::Index t_len = x.rows();
  const Eigen::Index ch = x.cols();
  const Eigen::Index w = kernel.cols();
  if (kernel.rows() != ch) throw ShapeError("causal_conv1d: kernel rows != channels");
  if (bias.rows() != 1 || bias.cols() != ch) throw ShapeError("causal_conv1d: bias must be 1 x channels");

  Matrix out(t_len, ch);
  for (Eigen::Index t = 0; t < t_len; ++t) {
    for (Eigen::Index c = 0; c < ch; ++c) {
      double acc = bias.value()(0, c);
      for (Eigen::Index k = 0; k < w; ++k) {
        const Eigen::Index src = t - (w - 1) + k;
        if (src >= 0) acc += kernel.value()(c, k) * x.value()(src, c);
      }
      out(t, c) = acc;
    }
  }
  return make_op(std::move(out), {x, kernel, bias}, [](Node& self) {
    Node& x = self.parent(0);
    Node& kernel = self.parent(1);
    const Matrix& g = self.grad;
    const Eigen::Index t_len = g.rows();
    const Eigen::Index ch = g.cols();
    const Eigen::Index w = kernel.value.cols();
    Matrix dx = Matrix::Zero(t_len, ch);
    Matrix dk = Matrix::Zero(ch, w);
    for (Eigen::Index t = 0; t < t_len; ++t) {
      for (Eigen::Index c = 0; c < ch; ++c) {
        const double gv = g(t, c);
        for (Eigen::Index k = 0; k < w; ++k) {
          const Eigen::Index src = t - (w - 1) + k;
          if (src < 0) continue;
          dk(c, k) += gv * x.value(src, c);
          dx(src, c) += gv * kernel.value(c, k);
        }
      }
    }
    x.add_grad(dx);
    kernel.add_grad(dk);
    self.parent(2).add_grad(g.colwise().sum());
  });
}

Var sum(const Var& x) {
  Matrix out(1, 1);
  out(0, 0) = x.value().sum();
  return make_op(std::move(out), {x}, [](Node& self) {
    Node& x = self.parent(0);
    x.add_grad(Matrix::Constant(x.value.rows(), x.value.cols(), self.grad(0, 0)));
  });
}

Var mean(const Var& x) {
  const double n = static_cast<double>(x.value().size());
  if (n == 0) throw ShapeError("mean: empty input");
  return scale(sum(x), 1.0 / n);
}

}  // namespace gladmamba::ad
