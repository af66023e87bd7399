#include "rdsa/objectives.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace rdsa {

Matrix benchmark_matrix(int n) {
  if (n < 1) throw std::domain_error("benchmark_matrix: dim must be >= 1");
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a(i, j) = 1.0 / n;
  return a;
}

Objective make_quadratic(int n) {
  auto a = std::make_shared<Matrix>(benchmark_matrix(n));
  auto sym = std::make_shared<Matrix>(*a + a->transpose());
  Objective obj;
  obj.dim = n;
  obj.eval_clean = [a](const Vector& x) {
    return x.dot(*a * x) + x.sum();  // b = ones
  };
  obj.grad_clean = [sym](const Vector& x) -> Vector {
    return *sym * x + Vector::Ones(sym->rows());
  };
  obj.hess_clean = [sym](const Vector&) -> Matrix { return *sym; };
  auto [xs, fs] = quadratic_optimum(n);
  obj.x_star = xs;
  obj.f_star = fs;
  obj.x0 = Vector::Ones(n);
  return obj;
}

Objective make_fourth_order(int n) {
  auto a = std::make_shared<Matrix>(benchmark_matrix(n));
  Objective obj;
  obj.dim = n;
  obj.eval_clean = [a](const Vector& x) {
    const Vector u = *a * x;
    return u.squaredNorm() + 0.1 * u.array().cube().sum() + 0.01 * u.array().pow(4).sum();
  };
  obj.grad_clean = [a](const Vector& x) -> Vector {
    const Vector u = *a * x;
    const Vector inner = 2.0 * u.array() + 0.3 * u.array().square() + 0.04 * u.array().cube();
    return a->transpose() * inner;
  };
  obj.hess_clean = [a](const Vector& x) -> Matrix {
    const Vector u = *a * x;
    const Vector w = 2.0 + 0.6 * u.array() + 0.12 * u.array().square();
    return a->transpose() * w.asDiagonal() * (*a);
  };
  obj.x_star = Vector::Zero(n);
  obj.f_star = 0.0;
  obj.x0 = Vector::Ones(n);
  return obj;
}

Objective make_rastrigin(int n) {
  if (n < 1) throw std::domain_error("make_rastrigin: dim must be >= 1");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Objective obj;
  obj.dim = n;
  obj.eval_clean = [n](const Vector& x) {
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) s += x[i] * x[i] - 10.0 * std::cos(two_pi * x[i]);
    return s + 10.0 * n + 1.0;
  };
  obj.grad_clean = [](const Vector& x) -> Vector {
    Vector g(x.size());
    for (int i = 0; i < x.size(); ++i)
      g[i] = 2.0 * x[i] + 10.0 * two_pi * std::sin(two_pi * x[i]);
    return g;
  };
  obj.hess_clean = [](const Vector& x) -> Matrix {
    Matrix h = Matrix::Zero(x.size(), x.size());
    for (int i = 0; i < x.size(); ++i)
      h(i, i) = 2.0 + 10.0 * two_pi * two_pi * std::cos(two_pi * x[i]);
    return h;
  };
  obj.x_star = Vector::Zero(n);
  obj.f_star = 1.0;
  obj.x0 = 2.0 * Vector::Ones(n);
  return obj;
}

std::pair<Vector, double> quadratic_optimum(int n) {
  const Matrix a = benchmark_matrix(n);
  const Matrix sym = a + a.transpose();
  Eigen::FullPivLU<Matrix> lu(sym);
  if (!lu.isInvertible()) throw std::runtime_error("quadratic_optimum: singular system");
  const Vector xs = lu.solve(-Vector::Ones(n));
  const double fs = xs.dot(a * xs) + xs.sum();
  return {xs, fs};
}

NoiseModel::NoiseModel(double sigma, std::uint64_t seed) : sigma_(sigma), rng_(seed) {
  if (sigma < 0.0) throw std::domain_error("NoiseModel: sigma must be >= 0");
}

double NoiseModel::sample(const Vector& x) {
  if (sigma_ == 0.0) return 0.0;
  double acc = 0.0;
  for (int i = 0; i < x.size(); ++i) acc += x[i] * normal_(rng_);
  acc += normal_(rng_);
  return sigma_ * acc;
}

}  // namespace rdsa
