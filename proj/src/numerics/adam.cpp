#include "sat/numerics/adam.hpp"

#include <cmath>

#include "sat/errors.hpp"

namespace sat::num {

void adam_step(std::span<Tensor* const> params, std::span<const Tensor* const> grads,
               AdamState& state, double lr) {
  if (params.size() != grads.size()) throw ShapeError("adam_step: parameter and gradient counts differ");
  if (state.m.empty()) {
    state.m.reserve(params.size());
    state.v.reserve(params.size());
    for (const Tensor* p : params) {
      state.m.emplace_back(p->shape());
      state.v.emplace_back(p->shape());
    }
  }
  if (state.m.size() != params.size()) throw ShapeError("adam_step: state tracks a different parameter group");
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& p = *params[i];
    const Tensor& g = *grads[i];
    Tensor& m = state.m[i];
    Tensor& v = state.v[i];
    if (m.shape() != p.shape()) throw ShapeError("adam_step: moment shape differs from parameter");
    if (g.empty()) continue;
    if (g.shape() != p.shape()) {
      throw ShapeError("adam_step: gradient " + shape_string(g.shape()) + " for parameter " +
                       shape_string(p.shape()));
    }
    for (std::size_t k = 0; k < p.size(); ++k) {
      m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
      v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
      const double mh = m[k] / c1;
      const double vh = v[k] / c2;
      p[k] -= lr * mh / (std::sqrt(vh) + state.eps);
    }
  }
}

Adam::Adam(std::vector<Parameter*> params, double lr) : params_(std::move(params)), lr_(lr) {}

void Adam::step() {
  std::vector<Tensor*> values;
  std::vector<const Tensor*> grads;
  values.reserve(params_.size());
  grads.reserve(params_.size());
  for (Parameter* p : params_) {
    values.push_back(&p->value);
    grads.push_back(&p->grad);
  }
  adam_step(values, grads, state_, lr_);
}

void Adam::zero_grad() {
  for (Parameter* p : params_) p->zero_grad();
}

}  // namespace sat::num
