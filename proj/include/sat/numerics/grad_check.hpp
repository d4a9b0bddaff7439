#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "sat/numerics/ops.hpp"

namespace sat::num {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t coords_checked = 0;
};

/// Compares the tape gradient of f at `point` against central differences (h = 1e-5).
/// Relative error is |ad - fd| / max(1, |fd|). Throws DivergenceError on non-finite f.
double grad_check(const std::function<Var(Tape&, Var)>& f, const Tensor& point, double h = 1e-5);

/// Same check over every parameter of `params`. `f` must register the parameters on the
/// tape it receives and be a pure function of their values (re-seed any RNG inside f).
/// When max_coords_per_param > 0 only that many coordinates per parameter are probed,
/// chosen with `seed`.
GradCheckResult grad_check_params(ParameterSet& params, const std::function<Var(Tape&)>& f,
                                  std::size_t max_coords_per_param = 0, std::uint64_t seed = 0,
                                  double h = 1e-5);

}  // namespace sat::num
