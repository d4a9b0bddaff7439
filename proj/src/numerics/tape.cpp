#include "sat/numerics/tape.hpp"

#include "sat/errors.hpp"

namespace sat::num {

Parameter& ParameterSet::add(std::string name, Tensor value) {
  if (find(name)) throw std::invalid_argument("duplicate parameter name: " + name);
  params_.push_back(Parameter{std::move(name), std::move(value), Tensor()});
  return params_.back();
}

Parameter* ParameterSet::find(const std::string& name) {
  for (auto& p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const Parameter* ParameterSet::find(const std::string& name) const {
  for (const auto& p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

Parameter& ParameterSet::at(const std::string& name) {
  Parameter* p = find(name);
  if (!p) throw std::out_of_range("no parameter named " + name);
  return *p;
}

void ParameterSet::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

std::vector<Tensor> ParameterSet::snapshot() const {
  std::vector<Tensor> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(p.value);
  return out;
}

void ParameterSet::restore(const std::vector<Tensor>& values) {
  if (values.size() != params_.size()) throw ShapeError("restore: parameter count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].shape() != params_[i].value.shape()) {
      throw ShapeError("restore: shape mismatch for " + params_[i].name);
    }
    params_[i].value = values[i];
  }
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

const Tensor& Var::value() const { return tape_->value(id_); }
bool Var::requires_grad() const { return tape_->requires_grad(id_); }

Var Tape::constant(Tensor value) {
  nodes_.push_back(Node{std::move(value), Tensor(), false, nullptr, nullptr});
  return Var(this, nodes_.size() - 1);
}

Var Tape::parameter(Parameter& p) {
  nodes_.push_back(Node{p.value, Tensor(), true, nullptr, &p});
  return Var(this, nodes_.size() - 1);
}

Var Tape::frozen(const Parameter& p) { return constant(p.value); }

Var Tape::record(Tensor value, std::initializer_list<Var> inputs, BackwardFn fn) {
  bool needs = false;
  for (const Var& v : inputs) {
    if (&v.tape() != this) throw std::logic_error("operands recorded on different tapes");
    needs = needs || nodes_[v.id()].requires_grad;
  }
  nodes_.push_back(Node{std::move(value), Tensor(), needs, needs ? std::move(fn) : nullptr, nullptr});
  return Var(this, nodes_.size() - 1);
}

Tensor& Tape::grad_buffer(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.shape() != n.value.shape()) n.grad = Tensor(n.value.shape(), 0.0);
  return n.grad;
}

Tensor Tape::grad(Var v) const {
  const Node& n = nodes_[v.id()];
  if (n.grad.shape() != n.value.shape()) return Tensor(n.value.shape(), 0.0);
  return n.grad;
}

void Tape::backward(Var root) {
  if (&root.tape() != this) throw std::logic_error("backward root from another tape");
  if (root.value().size() != 1) throw ShapeError("backward requires a scalar root");
  if (!nodes_[root.id()].requires_grad) return;
  grad_buffer(root.id())[0] += 1.0;
  for (std::size_t i = root.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.backward) {
      n.backward(*this, n.grad);
    } else if (n.param) {
      if (n.param->grad.shape() != n.value.shape()) {
        n.param->grad = n.grad;
      } else {
        for (std::size_t k = 0; k < n.grad.size(); ++k) n.param->grad[k] += n.grad[k];
      }
    }
  }
}

}  // namespace sat::num
