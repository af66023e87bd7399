#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rdsa/hess_est.hpp"

namespace rdsa {

// ---------------------------------------------------------------------------
// Schedules.  a_of and b_of take the outer iteration index, delta_of the
// global inner-step index; all are 1-indexed.

struct Schedules {
  std::function<double(std::int64_t)> a_of;
  std::function<double(std::int64_t)> delta_of;
  std::function<double(std::int64_t)> b_of;
};

struct FirstOrderScheduleParams {
  double c = 1.0;
  double A = 50.0;
  double delta0 = 1.9;
  double gamma = 0.101;
  double b0 = 1.0;
  double r = 0.6;
};

struct SecondOrderScheduleParams {
  double a_exp = 0.6;
  double delta0 = 3.8;
  double gamma = 0.101;
  double b0 = 1.0;
  double r = 0.6;
};

/// a_n = c/(n+A), delta_k = delta0/k^gamma, b_n = b0/n^r.
Schedules make_first_order_schedules(const FirstOrderScheduleParams& p = {});

/// a_n = 1/n^a_exp, delta_k = delta0/k^gamma, b_n = b0/n^r.
Schedules make_second_order_schedules(const SecondOrderScheduleParams& p = {});

struct ScheduleTriple {
  double a;
  double delta;
  double b;
};

/// (a_n, delta_n, b_n); schedules are 1-indexed, n = 0 is a domain error.
ScheduleTriple schedule_eval(const Schedules& s, std::int64_t n);

// ---------------------------------------------------------------------------

struct BoxProjection {
  double lo = -2.048;
  double hi = 2.047;
};

Vector project_box(Vector x, const BoxProjection& box);

struct UpsilonParams {
  double eig_floor = 1e-4;
};

/// Eigenvalue flooring: same eigenvectors, eigenvalues max(lambda, floor).
Matrix upsilon_project(const Matrix& h, const UpsilonParams& p);

/// Upsilon(h)^(-1) g through the same eigendecomposition (no explicit inverse).
Vector upsilon_solve(const Matrix& h, const Vector& g, const UpsilonParams& p);

// ---------------------------------------------------------------------------

enum class FirstOrderAlgo { spsa, rdsa_unif, rdsa_asymber, lex_dp, perm_dp, kw_dp };
enum class SecondOrderAlgo { spsa2, rdsa_unif2, rdsa_asymber2, lex_dp2, perm_dp2 };

/// Noisy measurements consumed per parameter update.
std::int64_t measurements_per_update(FirstOrderAlgo algo, int dim);
std::int64_t measurements_per_update(SecondOrderAlgo algo, int dim,
                                     CenterMode center = CenterMode::fresh_per_step);

struct OptimRun {
  Vector x_final;
  std::int64_t tau = 0;           // parameter updates performed
  std::int64_t init_tau = 0;      // first-order updates of a second-order init phase
  std::int64_t measurements = 0;  // total oracle calls
  bool no_update = false;         // budget below one inner loop
  std::vector<std::pair<std::int64_t, Vector>> trajectory;  // (measurements, x) per update
};

struct FirstOrderOptions {
  double asym_epsilon = 1e-4;  // 1RDSA-AsymBer distribution parameter
  double unif_eta = 1.0;
  DeltaMode delta_mode = DeltaMode::per_step;
  bool record_trajectory = false;
  std::optional<std::vector<int>> perm_order;  // default identity
  std::optional<Vector> x_init;                // default objective x0
};

OptimRun run_first_order(const Objective& obj, double sigma, FirstOrderAlgo algo,
                         const Schedules& schedules, const BoxProjection& box,
                         std::int64_t budget, std::uint64_t seed,
                         const FirstOrderOptions& opts = {});

using HessianObserver =
    std::function<void(std::int64_t n, const Matrix& h_hat, const Matrix& h_bar)>;

struct SecondOrderOptions {
  double init_fraction = 0.2;  // budget share for the first-order initializer
  Schedules init_schedules = make_first_order_schedules();
  FirstOrderOptions init_options{};
  UpsilonParams upsilon{};
  double asym_epsilon = 1.0;  // 2RDSA-AsymBer distribution parameter
  double unif_eta = 1.0;
  DeltaMode delta_mode = DeltaMode::per_step;
  CenterMode center = CenterMode::fresh_per_step;
  bool record_trajectory = false;
  std::optional<std::vector<int>> perm_order;
  std::optional<Vector> x_init;
  HessianObserver observer;  // called once per second-order update
};

OptimRun run_second_order(const Objective& obj, double sigma, SecondOrderAlgo algo,
                          const Schedules& schedules, const BoxProjection& box,
                          std::int64_t budget, std::uint64_t seed,
                          const SecondOrderOptions& opts = {});

}  // namespace rdsa
