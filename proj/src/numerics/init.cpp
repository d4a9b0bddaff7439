#include "sat/numerics/init.hpp"

#include <cmath>

namespace sat::num {

Tensor glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Tensor t = Tensor::matrix(rows, cols);
  for (double& v : t.values()) v = dist(rng);
  return t;
}

Tensor normal(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Tensor t = Tensor::matrix(rows, cols);
  for (double& v : t.values()) v = dist(rng);
  return t;
}

}  // namespace sat::num
