#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sat/numerics/tape.hpp"

namespace sat::num {

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  std::vector<Tensor> m;
  std::vector<Tensor> v;
};

/// One bias-corrected Adam update. Moments are allocated as zeros on the first call.
/// An empty gradient leaves the matching parameter untouched.
void adam_step(std::span<Tensor* const> params, std::span<const Tensor* const> grads,
               AdamState& state, double lr);

/// Adam over a fixed group of parameters, reading each Parameter::grad.
class Adam {
 public:
  Adam(std::vector<Parameter*> params, double lr);

  void step();
  void zero_grad();
  double lr() const noexcept { return lr_; }
  const AdamState& state() const noexcept { return state_; }
  const std::vector<Parameter*>& params() const noexcept { return params_; }

 private:
  std::vector<Parameter*> params_;
  double lr_;
  AdamState state_;
};

}  // namespace sat::num
