#include "sat/numerics/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sat/errors.hpp"

namespace sat::num {

namespace {

double rel_error(double ad, double fd) { return std::abs(ad - fd) / std::max(1.0, std::abs(fd)); }

double finite(double v) {
  if (!std::isfinite(v)) throw DivergenceError("grad_check: non-finite function value");
  return v;
}

}  // namespace

double grad_check(const std::function<Var(Tape&, Var)>& f, const Tensor& point, double h) {
  Parameter p{"x", point, {}};
  Tensor analytic;
  {
    Tape tape;
    Var out = f(tape, tape.parameter(p));
    finite(out.item());
    tape.backward(out);
    analytic = p.grad.empty() ? Tensor(point.shape()) : p.grad;
  }
  auto eval = [&](const Tensor& x) {
    Tape tape;
    return finite(f(tape, tape.constant(x)).item());
  };
  double worst = 0.0;
  Tensor x = point;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double fp = eval(x);
    x[i] = orig - h;
    const double fm = eval(x);
    x[i] = orig;
    worst = std::max(worst, rel_error(analytic[i], (fp - fm) / (2.0 * h)));
  }
  return worst;
}

GradCheckResult grad_check_params(ParameterSet& params, const std::function<Var(Tape&)>& f,
                                  std::size_t max_coords_per_param, std::uint64_t seed, double h) {
  params.zero_grad();
  {
    Tape tape;
    Var out = f(tape);
    finite(out.item());
    tape.backward(out);
  }
  std::vector<Tensor> analytic;
  for (const Parameter& p : params) analytic.push_back(p.grad.empty() ? Tensor(p.value.shape()) : p.grad);
  params.zero_grad();

  auto eval = [&] {
    Tape tape;
    return finite(f(tape).item());
  };
  Rng rng(seed);
  GradCheckResult result;
  std::size_t pi = 0;
  for (Parameter& p : params) {
    std::vector<std::size_t> coords(p.value.size());
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    if (max_coords_per_param > 0 && coords.size() > max_coords_per_param) {
      std::shuffle(coords.begin(), coords.end(), rng);
      coords.resize(max_coords_per_param);
    }
    for (std::size_t i : coords) {
      const double orig = p.value[i];
      p.value[i] = orig + h;
      const double fp = eval();
      p.value[i] = orig - h;
      const double fm = eval();
      p.value[i] = orig;
      result.max_rel_error = std::max(result.max_rel_error, rel_error(analytic[pi][i], (fp - fm) / (2.0 * h)));
      ++result.coords_checked;
    }
    ++pi;
  }
  params.zero_grad();
  return result;
}

}  // namespace sat::num
