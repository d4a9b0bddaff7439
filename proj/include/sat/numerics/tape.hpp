#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sat/numerics/tensor.hpp"

namespace sat::num {

/// A trainable tensor together with its accumulated gradient.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;  // empty until a backward pass touches the parameter

  void zero_grad() { grad = Tensor(); }
};

/// Owns parameters at stable addresses, in registration order.
class ParameterSet {
 public:
  Parameter& add(std::string name, Tensor value);
  Parameter* find(const std::string& name);
  const Parameter* find(const std::string& name) const;
  Parameter& at(const std::string& name);

  std::size_t size() const noexcept { return params_.size(); }
  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  void zero_grad();
  std::vector<Tensor> snapshot() const;
  void restore(const std::vector<Tensor>& values);
  std::size_t scalar_count() const;

 private:
  std::deque<Parameter> params_;
};

class Tape;

/// Handle to a value recorded on a tape. Cheap to copy; valid while its tape lives.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  double item() const { return value()[0]; }
  bool requires_grad() const;

  Tape& tape() const { return *tape_; }
  std::size_t id() const noexcept { return id_; }
  bool valid() const noexcept { return tape_ != nullptr; }

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Reverse-mode recorder. Operations append nodes in execution order; backward()
/// walks them in exact reverse order, accumulating gradients additively.
/// A tape is confined to one thread.
class Tape {
 public:
  /// Receives the gradient of the node being processed.
  using BackwardFn = std::function<void(Tape&, const Tensor& out_grad)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  /// Leaf bound to `p`; backward() adds the leaf gradient into p.grad.
  Var parameter(Parameter& p);
  /// Leaf that reads `p` but never receives gradient.
  Var frozen(const Parameter& p);
  /// Records a differentiable result. `fn` is dropped when no input requires grad.
  Var record(Tensor value, std::initializer_list<Var> inputs, BackwardFn fn);

  /// Seeds d(root)/d(root) = 1 for a scalar root and propagates to every leaf.
  void backward(Var root);

  const Tensor& value(std::size_t id) const { return nodes_[id].value; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  /// Gradient buffer of node `id`, allocated as zeros on first use.
  Tensor& grad_buffer(std::size_t id);
  /// Gradient of a recorded value after backward(); zeros if it received none.
  Tensor grad(Var v) const;
  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    BackwardFn backward;
    Parameter* param = nullptr;
  };
  std::deque<Node> nodes_;
};

}  // namespace sat::num
