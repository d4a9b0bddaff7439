#pragma once

#include <cstddef>

#include "sat/numerics/ops.hpp"

namespace sat::num {

/// Uniform in ±sqrt(6 / (fan_in + fan_out)) for a rows×cols weight.
Tensor glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng);

/// Standard normal draws of the given shape.
Tensor normal(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace sat::num
