#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "nightforge/nn/tensor.hpp"

namespace nightforge::nn {

namespace detail {
struct Node;
using NodePtr = std::shared_ptr<Node>;

/// One vertex of the dynamically built computation graph.
struct Node {
  Tensor value;
  Tensor grad;  // allocated lazily on first accumulation
  bool requires_grad = false;
  std::vector<NodePtr> parents;
  /// Pushes this node's grad into its parents. Empty for leaves.
  std::function<void(Node&)> backprop;

  Tensor& ensure_grad();
  void accumulate(const Tensor& g);
  void accumulate_scaled(const Tensor& g, double scale);
};

/// Builds an interior graph node. requires_grad is inherited from parents.
NodePtr make_op_node(Tensor value, std::vector<NodePtr> parents,
                     std::function<void(Node&)> backprop);
}  // namespace detail

/// Handle to a node in the autograd graph. Copies alias the same node.
class Var {
 public:
  Var() = default;
  explicit Var(Tensor value, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Tensor& value() const { return node_->value; }
  Tensor& value() { return node_->value; }
  const std::vector<int>& shape() const { return node_->value.shape(); }
  bool requires_grad() const { return node_ && node_->requires_grad; }

  /// Gradient of the last backward() pass. Undefined tensor when the node
  /// never received gradient.
  const Tensor& grad() const { return node_->grad; }
  void zero_grad();

  /// Runs reverse-mode accumulation from this node, which must hold a
  /// single element. Gradients add into every reachable requires_grad node.
  void backward() const;

  /// A new leaf sharing this node's value, cut off from the graph.
  Var detach() const;

  double item() const { return value()[0]; }

  detail::NodePtr node() const { return node_; }
  static Var from_node(detail::NodePtr node);

 private:
  detail::NodePtr node_;
};

// ---- elementwise ----
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var add_scalar(const Var& a, double s);
Var mul_scalar(const Var& a, double s);
Var square(const Var& a);
Var abs_elem(const Var& a);
Var tanh_elem(const Var& a);
Var relu(const Var& a);
Var leaky_relu(const Var& a, double negative_slope);
/// Multiplies a tensor by a one-element Var (learnable scalar gate).
Var scale_by(const Var& x, const Var& gamma);

// ---- reductions / reshaping ----
Var mean_all(const Var& a);
Var reshape(const Var& a, std::vector<int> shape);

// ---- batched linear algebra (rank-3 tensors [B, n, m]) ----
Var transpose_last2(const Var& a);
Var softmax_lastdim(const Var& a);
Var bmm(const Var& a, const Var& b);

// ---- conv / norm / padding (rank-4 tensors [B, C, H, W]) ----
Var conv2d(const Var& x, const Var& weight, const Var& bias, int stride,
           int padding);
Var conv_transpose2d(const Var& x, const Var& weight, const Var& bias,
                     int stride, int padding, int output_padding);
Var instance_norm2d(const Var& x, double eps = 1e-5);
Var reflection_pad2d(const Var& x, int pad);

}  // namespace nightforge::nn
