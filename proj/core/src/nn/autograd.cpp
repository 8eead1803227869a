#include "nightforge/nn/autograd.hpp"

#include <cmath>
#include <unordered_set>

#include <Eigen/Core>

#include "nightforge/core/errors.hpp"

namespace nightforge::nn {

using detail::Node;
using detail::NodePtr;

namespace detail {

Tensor& Node::ensure_grad() {
  if (!grad.defined()) grad = Tensor::zeros(value.shape());
  return grad;
}

void Node::accumulate(const Tensor& g) {
  ensure_grad().add_(g);
}

void Node::accumulate_scaled(const Tensor& g, double scale) {
  ensure_grad().add_scaled_(g, scale);
}

NodePtr make_op_node(Tensor value, std::vector<NodePtr> parents,
                     std::function<void(Node&)> backprop) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  node->parents = std::move(parents);
  for (const auto& p : node->parents) {
    if (p && p->requires_grad) node->requires_grad = true;
  }
  if (node->requires_grad) node->backprop = std::move(backprop);
  return node;
}

}  // namespace detail

Var::Var(Tensor value, bool requires_grad) {
  node_ = std::make_shared<Node>();
  node_->value = std::move(value);
  node_->requires_grad = requires_grad;
}

Var Var::from_node(NodePtr node) {
  Var v;
  v.node_ = std::move(node);
  return v;
}

void Var::zero_grad() {
  if (node_ && node_->grad.defined()) node_->grad.fill(0.0);
}

Var Var::detach() const {
  return Var(node_->value, /*requires_grad=*/false);
}

namespace {

void topo_sort(const NodePtr& root, std::vector<Node*>& order) {
  // Iterative post-order DFS; nodes appear after all their parents' uses.
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, size_t>> stack;
  stack.emplace_back(root.get(), 0);
  visited.insert(root.get());
  while (!stack.empty()) {
    auto& [node, next_parent] = stack.back();
    if (next_parent < node->parents.size()) {
      Node* parent = node->parents[next_parent].get();
      ++next_parent;
      if (parent && parent->requires_grad && !visited.count(parent)) {
        visited.insert(parent);
        stack.emplace_back(parent, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
}

}  // namespace

void Var::backward() const {
  if (!node_) throw Error("backward on undefined Var");
  if (node_->value.numel() != 1) {
    throw ShapeError("backward requires a scalar root");
  }
  if (!node_->requires_grad) return;
  std::vector<Node*> order;
  topo_sort(node_, order);
  node_->accumulate(scalar_tensor(1.0));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* node = *it;
    if (node->backprop && node->grad.defined()) node->backprop(*node);
  }
}

namespace {

void check_same_shape(const Var& a, const Var& b, const char* op) {
  if (!a.value().same_shape(b.value())) {
    throw ShapeError(std::string(op) + ": shape mismatch");
  }
}

using EigenRowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<EigenRowMat>;
using ConstMapMat = Eigen::Map<const EigenRowMat>;

}  // namespace

Var add(const Var& a, const Var& b) {
  check_same_shape(a, b, "add");
  Tensor out = a.value().clone();
  out.add_(b.value());
  return Var::from_node(detail::make_op_node(
      std::move(out), {a.node(), b.node()}, [](Node& n) {
        if (n.parents[0]->requires_grad) n.parents[0]->accumulate(n.grad);
        if (n.parents[1]->requires_grad) n.parents[1]->accumulate(n.grad);
      }));
}

Var sub(const Var& a, const Var& b) {
  check_same_shape(a, b, "sub");
  Tensor out = a.value().clone();
  out.add_scaled_(b.value(), -1.0);
  return Var::from_node(detail::make_op_node(
      std::move(out), {a.node(), b.node()}, [](Node& n) {
        if (n.parents[0]->requires_grad) n.parents[0]->accumulate(n.grad);
        if (n.parents[1]->requires_grad)
          n.parents[1]->accumulate_scaled(n.grad, -1.0);
      }));
}

Var mul(const Var& a, const Var& b) {
  check_same_shape(a, b, "mul");
  Tensor out(a.value().shape());
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  for (std::int64_t i = 0; i < out.numel(); ++i) out[i] = av[i] * bv[i];
  return Var::from_node(detail::make_op_node(
      std::move(out), {a.node(), b.node()}, [av, bv](Node& n) {
        if (n.parents[0]->requires_grad) {
          Tensor g(av.shape());
          for (std::int64_t i = 0; i < g.numel(); ++i) g[i] = n.grad[i] * bv[i];
          n.parents[0]->accumulate(g);
        }
        if (n.parents[1]->requires_grad) {
          Tensor g(bv.shape());
          for (std::int64_t i = 0; i < g.numel(); ++i) g[i] = n.grad[i] * av[i];
          n.parents[1]->accumulate(g);
        }
      }));
}

Var add_scalar(const Var& a, double s) {
  Tensor out = a.value().clone();
  for (std::int64_t i = 0; i < out.numel(); ++i) out[i] += s;
  return Var::from_node(
      detail::make_op_node(std::move(out), {a.node()}, [](Node& n) {
        n.parents[0]->accumulate(n.grad);
      }));
}

Var mul_scalar(const Var& a, double s) {
  Tensor out = a.value().clone();
  out.scale_(s);
  return Var::from_node(
      detail::make_op_node(std::move(out), {a.node()}, [s](Node& n) {
        n.parents[0]->accumulate_scaled(n.grad, s);
      }));
}

Var square(const Var& a) {
  const Tensor av = a.value();
  Tensor out(av.shape());
  for (std::int64_t i = 0; i < out.numel(); ++i) out[i] = av[i] * av[i];
  return Var::from_node(
      detail::make_op_node(std::move(out), {a.node()}, [av](Node& n) {
        Tensor g(av.shape());
        for (std::int64_t i = 0; i < g.numel(); ++i)
          g[i] = 2.0 * av[i] * n.grad[i];
        n.parents[0]->accumulate(g);
      }));
}

Var abs_elem(const Var& a) {
  const Tensor av = a.value();
  Tensor out(av.shape());
  for (std::int64_t i = 0; i < out.numel(); ++i) out[i] = std::abs(av[i]);
  return Var::from_node(
      detail::make_op_node(std::move(out), {a.node()}, [av](Node& n) {
        Tensor g(av.shape());
        for (std::int64_t i = 0; i < g.numel(); ++i) {
          const double sign = av[i] > 0.0 ? 1.0 : (av[i] < 0.0 ? -1.0 : 0.0);
          g[i] = sign * n.grad[i];
        }
        n.parents[0]->accumulate(g);
      }));
}

Var tanh_elem(const Var& a) {
  Tensor out(a.value().shape());
  const Tensor& av = a.value();
  for (std::int64_t i = 0; i < out.numel(); ++i) out[i] = std::tanh(av[i]);
  const Tensor saved = out;
  return Var::from_node(
      detail::make_op_node(std::move(out), {a.node()}, [saved](Node& n) {
        Tensor g(saved.shape());
        for (std::int64_t i = 0; i < g.numel(); ++i)
          g[i] = (1.0 - saved[i] * saved[i]) * n.grad[i];
        n.parents[0]->accumulate(g);
      }));
}

Var relu(const Var& a) {
  return leaky_relu(a, 0.0);
}

Var leaky_relu(const Var& a, double negative_slope) {
  const Tensor av = a.value();
  Tensor out(av.shape());
  for (std::int64_t i = 0; i < out.numel(); ++i) {
    out[i] = av[i] > 0.0 ? av[i] : negative_slope * av[i];
  }
  return Var::from_node(detail::make_op_node(
      std::move(out), {a.node()}, [av, negative_slope](Node& n) {
        Tensor g(av.shape());
        for (std::int64_t i = 0; i < g.numel(); ++i) {
          g[i] = (av[i] > 0.0 ? 1.0 : negative_slope) * n.grad[i];
        }
        n.parents[0]->accumulate(g);
      }));
}

Var scale_by(const Var& x, const Var& gamma) {
  if (gamma.value().numel() != 1) {
    throw ShapeError("scale_by expects a one-element scale");
  }
  const Tensor xv = x.value();
  const double s = gamma.value()[0];
  Tensor out = xv.clone();
  out.scale_(s);
  return Var::from_node(detail::make_op_node(
      std::move(out), {x.node(), gamma.node()}, [xv, s](Node& n) {
        if (n.parents[0]->requires_grad)
          n.parents[0]->accumulate_scaled(n.grad, s);
        if (n.parents[1]->requires_grad) {
          double dot = 0.0;
          for (std::int64_t i = 0; i < xv.numel(); ++i)
            dot += xv[i] * n.grad[i];
          n.parents[1]->accumulate(scalar_tensor(dot));
        }
      }));
}

Var mean_all(const Var& a) {
  const std::int64_t n = a.value().numel();
  double sum = 0.0;
  for (std::int64_t i = 0; i < n; ++i) sum += a.value()[i];
  const std::vector<int> in_shape = a.value().shape();
  return Var::from_node(detail::make_op_node(
      scalar_tensor(sum / static_cast<double>(n)), {a.node()},
      [in_shape, n](Node& node) {
        Tensor g = Tensor::full(in_shape, node.grad[0] / static_cast<double>(n));
        node.parents[0]->accumulate(g);
      }));
}

Var reshape(const Var& a, std::vector<int> shape) {
  Tensor out = a.value().reshaped(shape);
  const std::vector<int> in_shape = a.value().shape();
  return Var::from_node(
      detail::make_op_node(std::move(out), {a.node()}, [in_shape](Node& n) {
        n.parents[0]->accumulate(n.grad.reshaped(in_shape));
      }));
}

namespace {

void require_rank3(const Var& a, const char* op) {
  if (a.value().ndim() != 3) {
    throw ShapeError(std::string(op) + ": expected rank-3 tensor");
  }
}

Tensor transpose_last2_values(const Tensor& t) {
  const int b = t.dim(0), n = t.dim(1), m = t.dim(2);
  Tensor out({b, m, n});
  for (int i = 0; i < b; ++i) {
    const double* src = t.data() + static_cast<std::int64_t>(i) * n * m;
    double* dst = out.data() + static_cast<std::int64_t>(i) * n * m;
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < m; ++c) dst[c * n + r] = src[r * m + c];
    }
  }
  return out;
}

}  // namespace

Var transpose_last2(const Var& a) {
  require_rank3(a, "transpose_last2");
  return Var::from_node(detail::make_op_node(
      transpose_last2_values(a.value()), {a.node()}, [](Node& n) {
        n.parents[0]->accumulate(transpose_last2_values(n.grad));
      }));
}

Var softmax_lastdim(const Var& a) {
  if (a.value().ndim() < 1) throw ShapeError("softmax_lastdim: rank >= 1");
  const Tensor& av = a.value();
  const int m = av.dim(av.ndim() - 1);
  const std::int64_t rows = av.numel() / m;
  Tensor out(av.shape());
  for (std::int64_t r = 0; r < rows; ++r) {
    const double* in = av.data() + r * m;
    double* o = out.data() + r * m;
    double mx = in[0];
    for (int i = 1; i < m; ++i) mx = std::max(mx, in[i]);
    double denom = 0.0;
    for (int i = 0; i < m; ++i) {
      o[i] = std::exp(in[i] - mx);
      denom += o[i];
    }
    for (int i = 0; i < m; ++i) o[i] /= denom;
  }
  const Tensor saved = out;
  return Var::from_node(detail::make_op_node(
      std::move(out), {a.node()}, [saved, m, rows](Node& n) {
        Tensor g(saved.shape());
        for (std::int64_t r = 0; r < rows; ++r) {
          const double* y = saved.data() + r * m;
          const double* go = n.grad.data() + r * m;
          double dot = 0.0;
          for (int i = 0; i < m; ++i) dot += go[i] * y[i];
          double* gi = g.data() + r * m;
          for (int i = 0; i < m; ++i) gi[i] = y[i] * (go[i] - dot);
        }
        n.parents[0]->accumulate(g);
      }));
}

Var bmm(const Var& a, const Var& b) {
  require_rank3(a, "bmm");
  require_rank3(b, "bmm");
  const Tensor av = a.value();
  const Tensor bv = b.value();
  const int batch = av.dim(0), n = av.dim(1), k = av.dim(2);
  if (bv.dim(0) != batch || bv.dim(1) != k) {
    throw ShapeError("bmm: inner dimensions disagree");
  }
  const int m = bv.dim(2);
  Tensor out({batch, n, m});
  for (int i = 0; i < batch; ++i) {
    ConstMapMat A(av.data() + static_cast<std::int64_t>(i) * n * k, n, k);
    ConstMapMat B(bv.data() + static_cast<std::int64_t>(i) * k * m, k, m);
    MapMat C(out.data() + static_cast<std::int64_t>(i) * n * m, n, m);
    C.noalias() = A * B;
  }
  return Var::from_node(detail::make_op_node(
      std::move(out), {a.node(), b.node()},
      [av, bv, batch, n, k, m](Node& node) {
        if (node.parents[0]->requires_grad) {
          Tensor da({batch, n, k});
          for (int i = 0; i < batch; ++i) {
            ConstMapMat G(node.grad.data() + static_cast<std::int64_t>(i) * n * m, n, m);
            ConstMapMat B(bv.data() + static_cast<std::int64_t>(i) * k * m, k, m);
            MapMat D(da.data() + static_cast<std::int64_t>(i) * n * k, n, k);
            D.noalias() = G * B.transpose();
          }
          node.parents[0]->accumulate(da);
        }
        if (node.parents[1]->requires_grad) {
          Tensor db({batch, k, m});
          for (int i = 0; i < batch; ++i) {
            ConstMapMat A(av.data() + static_cast<std::int64_t>(i) * n * k, n, k);
            ConstMapMat G(node.grad.data() + static_cast<std::int64_t>(i) * n * m, n, m);
            MapMat D(db.data() + static_cast<std::int64_t>(i) * k * m, k, m);
            D.noalias() = A.transpose() * G;
          }
          node.parents[1]->accumulate(db);
        }
      }));
}

}  // namespace nightforge::nn
