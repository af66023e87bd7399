#pragma once

#include <functional>
#include <utility>

#include "rdsa/perturb.hpp"

namespace rdsa {

// Benchmark objective with analytic derivatives and known optimum, used both
// by the optimizers (through noisy measurements) and by test oracles.
struct Objective {
  int dim = 0;
  std::function<double(const Vector&)> eval_clean;
  std::function<Vector(const Vector&)> grad_clean;
  std::function<Matrix(const Vector&)> hess_clean;
  Vector x_star;
  double f_star = 0.0;
  Vector x0;
};

/// The shared benchmark matrix A: N*A is upper triangular with ones.
Matrix benchmark_matrix(int n);

/// f(x) = x^T A x + b^T x with b = ones.
Objective make_quadratic(int n);

/// f(x) = x^T A^T A x + 0.1 sum_j (Ax)_j^3 + 0.01 sum_j (Ax)_j^4.
Objective make_fourth_order(int n);

/// f(x) = sum_i (x_i^2 - 10 cos(2 pi x_i)) + 10N + 1.
Objective make_rastrigin(int n);

/// Minimizer and minimum of the quadratic benchmark, by direct linear solve.
std::pair<Vector, double> quadratic_optimum(int n);

// State-dependent Gaussian measurement noise [x^T, 1] * xi with
// xi ~ N(0, sigma^2 I_{N+1}); variance at x is sigma^2 (||x||^2 + 1).
class NoiseModel {
 public:
  NoiseModel(double sigma, std::uint64_t seed);

  double sample(const Vector& x);
  double sigma() const { return sigma_; }

 private:
  double sigma_;
  Rng rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rdsa
