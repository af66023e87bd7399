#include <doctest.h>

#include <cmath>

#include "rdsa/grad_est.hpp"

using namespace rdsa;

namespace {

Objective constant_objective(int n, double value) {
  Objective obj;
  obj.dim = n;
  obj.eval_clean = [value](const Vector&) { return value; };
  obj.x_star = Vector::Zero(n);
  obj.x0 = Vector::Ones(n);
  return obj;
}

Objective linear_objective(const Vector& b) {
  Objective obj;
  obj.dim = static_cast<int>(b.size());
  obj.eval_clean = [b](const Vector& x) { return b.dot(x); };
  obj.x_star = Vector::Zero(obj.dim);
  obj.x0 = Vector::Ones(obj.dim);
  return obj;
}

DeltaSchedule constant_delta(double d) {
  return [d](std::int64_t) { return d; };
}

// Mean of per-coordinate estimates with a 3-standard-error band check.
void check_mean_within_3se(const std::vector<Vector>& estimates, const Vector& expect) {
  const int dim = static_cast<int>(expect.size());
  const double n = static_cast<double>(estimates.size());
  Vector mean = Vector::Zero(dim);
  for (const auto& e : estimates) mean += e;
  mean /= n;
  Vector var = Vector::Zero(dim);
  for (const auto& e : estimates) var += (e - mean).cwiseAbs2();
  var /= (n - 1.0);
  for (int i = 0; i < dim; ++i) {
    const double se = std::sqrt(var[i] / n);
    CHECK(std::abs(mean[i] - expect[i]) <= 3.0 * se + 1e-12);
  }
}

}  // namespace

TEST_CASE("delta index bookkeeping") {
  CHECK(inner_delta_index(1, 9, 0, DeltaMode::per_step) == 1);
  CHECK(inner_delta_index(1, 9, 4, DeltaMode::per_step) == 5);
  CHECK(inner_delta_index(2, 9, 0, DeltaMode::per_step) == 10);
  CHECK(inner_delta_index(2, 9, 4, DeltaMode::frozen) == 10);
  CHECK(inner_delta_index(3, 2, 1, DeltaMode::per_step) == 6);
  CHECK_THROWS_AS(inner_delta_index(0, 2, 0, DeltaMode::per_step), std::domain_error);
}

TEST_CASE("deterministic gradient estimates are exact on the quadratic") {
  for (int n : {2, 5, 10}) {
    const Objective obj = make_quadratic(n);
    MeasurementOracle oracle(obj, 0.0, 1);
    Rng rng(1);
    const Vector x = 0.3 * Vector::Ones(n);
    const Vector expect = obj.grad_clean(x);
    const auto sched = constant_delta(0.05);

    const GradientEstimate lex = grad_lex_dp(oracle, x, sched, 1);
    CHECK((lex.vector - expect).norm() <= 1e-10 * expect.norm());
    CHECK(lex.measurements_used == 2 * pow3(n));

    const PermSequence seq = PermSequence::identity(n);
    const GradientEstimate perm = grad_perm_dp(oracle, x, sched, 1, seq);
    CHECK((perm.vector - expect).norm() <= 1e-10 * expect.norm());
    CHECK(perm.measurements_used == 2 * n);

    const GradientEstimate kw = grad_kw_dp(oracle, x, sched, 1);
    CHECK((kw.vector - expect).norm() <= 1e-10 * expect.norm());
    CHECK(kw.measurements_used == 2 * n);

    CHECK(oracle.calls() == 2 * pow3(n) + 4 * n);
  }
}

TEST_CASE("quadratic point value check at (1,1)") {
  const Objective obj = make_quadratic(2);
  MeasurementOracle oracle(obj, 0.0, 1);
  const Vector x = Vector::Ones(2);
  const auto sched = constant_delta(0.1);
  const Vector expect{{2.5, 2.5}};
  CHECK((grad_lex_dp(oracle, x, sched, 1).vector - expect).norm() < 1e-12);
  CHECK((grad_perm_dp(oracle, x, sched, 1, PermSequence::identity(2)).vector - expect).norm() <
        1e-12);
  CHECK((grad_kw_dp(oracle, x, sched, 1).vector - expect).norm() < 1e-12);
}

TEST_CASE("constant objective gives zero gradients") {
  const Objective obj = constant_objective(2, 7.0);
  MeasurementOracle oracle(obj, 0.0, 1);
  Rng rng(3);
  const Vector x{{0.4, -0.2}};
  const auto sched = constant_delta(0.1);
  CHECK(grad_lex_dp(oracle, x, sched, 1).vector.norm() == 0.0);
  CHECK(grad_perm_dp(oracle, x, sched, 1, PermSequence::identity(2)).vector.norm() == 0.0);
  CHECK(grad_kw_dp(oracle, x, sched, 1).vector.norm() == 0.0);
  CHECK(grad_spsa(oracle, x, 0.1, rng).vector.norm() == 0.0);
  CHECK(grad_rdsa_random(oracle, x, 0.1, RandomDirectionDist::uniform(1.0), rng).vector.norm() ==
        0.0);
}

TEST_CASE("kw estimate vanishes at a symmetric point") {
  Objective obj;
  obj.dim = 2;
  obj.eval_clean = [](const Vector& x) { return x.squaredNorm(); };
  MeasurementOracle oracle(obj, 0.0, 1);
  const GradientEstimate est = grad_kw_dp(oracle, Vector::Zero(2), constant_delta(0.3), 1);
  CHECK(est.vector.norm() == 0.0);
}

TEST_CASE("bias on the fourth-order objective decays quadratically in delta") {
  const Objective obj = make_fourth_order(2);
  MeasurementOracle oracle(obj, 0.0, 1);
  const Vector x = Vector::Ones(2);
  const Vector g_true = obj.grad_clean(x);
  for (auto run : {+[](MeasurementOracle& o, const Vector& xx, const DeltaSchedule& s) {
                     return grad_lex_dp(o, xx, s, 1);
                   },
                   +[](MeasurementOracle& o, const Vector& xx, const DeltaSchedule& s) {
                     return grad_perm_dp(o, xx, s, 1, PermSequence::identity(2));
                   }}) {
    const double delta = 0.2;
    const double bias1 = (run(oracle, x, constant_delta(delta)).vector - g_true).norm();
    const double bias2 = (run(oracle, x, constant_delta(delta / 2.0)).vector - g_true).norm();
    const double ratio = bias1 / bias2;
    CHECK(ratio > 3.2);
    CHECK(ratio < 4.8);
  }
}

TEST_CASE("perm estimate under noise is unbiased") {
  const Objective obj = make_quadratic(2);
  MeasurementOracle oracle(obj, 0.001, 21);
  const Vector x = Vector::Ones(2);
  std::vector<Vector> estimates;
  estimates.reserve(10000);
  for (int i = 0; i < 10000; ++i)
    estimates.push_back(
        grad_perm_dp(oracle, x, constant_delta(0.05), i + 1, PermSequence::identity(2)).vector);
  check_mean_within_3se(estimates, Vector{{2.5, 2.5}});
}

TEST_CASE("spsa estimate properties") {
  const Objective obj = make_quadratic(2);
  MeasurementOracle oracle(obj, 0.0, 1);
  Rng rng(17);
  const Vector x = Vector::Ones(2);
  std::vector<Vector> estimates;
  estimates.reserve(100000);
  for (int i = 0; i < 100000; ++i) estimates.push_back(grad_spsa(oracle, x, 0.01, rng).vector);
  check_mean_within_3se(estimates, Vector{{2.5, 2.5}});

  const Vector b{{1.0, -2.0, 0.5}};
  const Objective lin = linear_objective(b);
  MeasurementOracle lin_oracle(lin, 0.0, 1);
  const GradientEstimate est = grad_spsa(lin_oracle, Vector::Zero(3), 0.1, rng);
  CHECK(est.vector.allFinite());
  CHECK(est.measurements_used == 2);
  CHECK_THROWS_AS(grad_spsa(lin_oracle, Vector::Zero(3), 0.0, rng), std::domain_error);
}

TEST_CASE("random-direction estimates are unbiased") {
  const Objective obj = make_quadratic(2);
  MeasurementOracle oracle(obj, 0.0, 1);
  Rng rng(29);
  const Vector x = Vector::Ones(2);
  for (const auto& dist :
       {RandomDirectionDist::asym_bernoulli(0.0001), RandomDirectionDist::uniform(1.0)}) {
    std::vector<Vector> estimates;
    estimates.reserve(100000);
    for (int i = 0; i < 100000; ++i)
      estimates.push_back(grad_rdsa_random(oracle, x, 0.01, dist, rng).vector);
    check_mean_within_3se(estimates, Vector{{2.5, 2.5}});
  }
  CHECK_THROWS_AS(grad_rdsa_random(oracle, x, 0.1, RandomDirectionDist::rademacher(), rng),
                  std::domain_error);
}

TEST_CASE("positive delta is enforced") {
  const Objective obj = make_quadratic(2);
  MeasurementOracle oracle(obj, 0.0, 1);
  const auto bad = constant_delta(0.0);
  CHECK_THROWS_AS(grad_lex_dp(oracle, Vector::Ones(2), bad, 1), std::domain_error);
  CHECK_THROWS_AS(grad_perm_dp(oracle, Vector::Ones(2), bad, 1, PermSequence::identity(2)),
                  std::domain_error);
  CHECK_THROWS_AS(grad_kw_dp(oracle, Vector::Ones(2), bad, 1), std::domain_error);
}

TEST_CASE("oracle counts every measurement") {
  const Objective obj = make_quadratic(3);
  MeasurementOracle oracle(obj, 0.0, 1);
  Rng rng(4);
  grad_lex_dp(oracle, Vector::Ones(3), constant_delta(0.1), 1);
  CHECK(oracle.calls() == 54);
  grad_spsa(oracle, Vector::Ones(3), 0.1, rng);
  CHECK(oracle.calls() == 56);
}
