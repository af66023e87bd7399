#include "rdsa/optimize.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace rdsa {

namespace {

Rng algo_rng(std::uint64_t seed) {
  std::seed_seq seq{seed, static_cast<std::uint64_t>(0x9e3779b97f4a7c15ULL)};
  return Rng(seq);
}

PermSequence make_perm(int dim, const std::optional<std::vector<int>>& order) {
  if (order) return PermSequence(dim, *order);
  return PermSequence::identity(dim);
}

FirstOrderAlgo matching_first_order(SecondOrderAlgo algo) {
  switch (algo) {
    case SecondOrderAlgo::spsa2:
      return FirstOrderAlgo::spsa;
    case SecondOrderAlgo::rdsa_unif2:
      return FirstOrderAlgo::rdsa_unif;
    case SecondOrderAlgo::rdsa_asymber2:
      return FirstOrderAlgo::rdsa_asymber;
    case SecondOrderAlgo::lex_dp2:
      return FirstOrderAlgo::lex_dp;
    case SecondOrderAlgo::perm_dp2:
      return FirstOrderAlgo::perm_dp;
  }
  throw std::logic_error("unreachable");
}

// Shared first-order loop; runs until the next inner loop would exceed
// budget_cap (absolute oracle-call count).
void first_order_loop(MeasurementOracle& oracle, Rng& rng, const Objective& obj,
                      FirstOrderAlgo algo, const Schedules& schedules, const BoxProjection& box,
                      std::int64_t budget_cap, const FirstOrderOptions& opts, Vector& x,
                      OptimRun& run) {
  const int dim = obj.dim;
  const std::int64_t cost = measurements_per_update(algo, dim);
  const PermSequence perm = make_perm(dim, opts.perm_order);

  std::int64_t n = 1;
  while (oracle.calls() + cost <= budget_cap) {
    const double a_n = schedules.a_of(n);
    GradientEstimate g;
    switch (algo) {
      case FirstOrderAlgo::spsa:
        g = grad_spsa(oracle, x, schedules.delta_of(n), rng);
        break;
      case FirstOrderAlgo::rdsa_unif:
        g = grad_rdsa_random(oracle, x, schedules.delta_of(n),
                             RandomDirectionDist::uniform(opts.unif_eta), rng);
        break;
      case FirstOrderAlgo::rdsa_asymber:
        g = grad_rdsa_random(oracle, x, schedules.delta_of(n),
                             RandomDirectionDist::asym_bernoulli(opts.asym_epsilon), rng);
        break;
      case FirstOrderAlgo::lex_dp:
        g = grad_lex_dp(oracle, x, schedules.delta_of, n, opts.delta_mode);
        break;
      case FirstOrderAlgo::perm_dp:
        g = grad_perm_dp(oracle, x, schedules.delta_of, n, perm, opts.delta_mode);
        break;
      case FirstOrderAlgo::kw_dp:
        g = grad_kw_dp(oracle, x, schedules.delta_of, n, opts.delta_mode);
        break;
    }
    x = project_box(x - a_n * g.vector, box);
    ++run.tau;
    if (opts.record_trajectory) run.trajectory.emplace_back(oracle.calls(), x);
    ++n;
  }
}

}  // namespace

Schedules make_first_order_schedules(const FirstOrderScheduleParams& p) {
  Schedules s;
  s.a_of = [p](std::int64_t n) { return p.c / (static_cast<double>(n) + p.A); };
  s.delta_of = [p](std::int64_t k) { return p.delta0 / std::pow(static_cast<double>(k), p.gamma); };
  s.b_of = [p](std::int64_t n) { return p.b0 / std::pow(static_cast<double>(n), p.r); };
  return s;
}

Schedules make_second_order_schedules(const SecondOrderScheduleParams& p) {
  Schedules s;
  s.a_of = [p](std::int64_t n) { return 1.0 / std::pow(static_cast<double>(n), p.a_exp); };
  s.delta_of = [p](std::int64_t k) { return p.delta0 / std::pow(static_cast<double>(k), p.gamma); };
  s.b_of = [p](std::int64_t n) { return p.b0 / std::pow(static_cast<double>(n), p.r); };
  return s;
}

ScheduleTriple schedule_eval(const Schedules& s, std::int64_t n) {
  if (n < 1) throw std::domain_error("schedule_eval: schedules are 1-indexed");
  return {s.a_of(n), s.delta_of(n), s.b_of(n)};
}

Vector project_box(Vector x, const BoxProjection& box) {
  if (!(box.lo < box.hi)) throw std::domain_error("project_box: lo must be < hi");
  for (int i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], box.lo, box.hi);
  return x;
}

Matrix upsilon_project(const Matrix& h, const UpsilonParams& p) {
  if (!(p.eig_floor > 0.0)) throw std::domain_error("upsilon_project: eig_floor must be > 0");
  const Matrix sym = 0.5 * (h + h.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("upsilon_project: eigendecomposition failed");
  Vector lam = es.eigenvalues();
  for (int i = 0; i < lam.size(); ++i) lam[i] = std::max(lam[i], p.eig_floor);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

Vector upsilon_solve(const Matrix& h, const Vector& g, const UpsilonParams& p) {
  if (!(p.eig_floor > 0.0)) throw std::domain_error("upsilon_solve: eig_floor must be > 0");
  const Matrix sym = 0.5 * (h + h.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("upsilon_solve: eigendecomposition failed");
  Vector lam = es.eigenvalues();
  for (int i = 0; i < lam.size(); ++i) lam[i] = std::max(lam[i], p.eig_floor);
  const Vector proj = es.eigenvectors().transpose() * g;
  return es.eigenvectors() * (proj.array() / lam.array()).matrix();
}

std::int64_t measurements_per_update(FirstOrderAlgo algo, int dim) {
  switch (algo) {
    case FirstOrderAlgo::spsa:
    case FirstOrderAlgo::rdsa_unif:
    case FirstOrderAlgo::rdsa_asymber:
      return 2;
    case FirstOrderAlgo::lex_dp:
      return 2 * pow3(dim);
    case FirstOrderAlgo::perm_dp:
    case FirstOrderAlgo::kw_dp:
      return 2 * dim;
  }
  throw std::logic_error("unreachable");
}

std::int64_t measurements_per_update(SecondOrderAlgo algo, int dim, CenterMode center) {
  const bool fresh = center == CenterMode::fresh_per_step;
  switch (algo) {
    case SecondOrderAlgo::spsa2:
      return 4;
    case SecondOrderAlgo::rdsa_unif2:
    case SecondOrderAlgo::rdsa_asymber2:
      return 3;
    case SecondOrderAlgo::lex_dp2:
      return fresh ? 3 * pow3(dim) : 2 * pow3(dim) + 1;
    case SecondOrderAlgo::perm_dp2:
      return fresh ? 3 * static_cast<std::int64_t>(dim) : 2 * dim + 1;
  }
  throw std::logic_error("unreachable");
}

OptimRun run_first_order(const Objective& obj, double sigma, FirstOrderAlgo algo,
                         const Schedules& schedules, const BoxProjection& box,
                         std::int64_t budget, std::uint64_t seed,
                         const FirstOrderOptions& opts) {
  MeasurementOracle oracle(obj, sigma, seed);
  Rng rng = algo_rng(seed);
  Vector x = opts.x_init ? *opts.x_init : obj.x0;

  OptimRun run;
  if (budget < measurements_per_update(algo, obj.dim)) {
    run.x_final = x;
    run.no_update = true;
    return run;
  }
  first_order_loop(oracle, rng, obj, algo, schedules, box, budget, opts, x, run);
  run.x_final = x;
  run.measurements = oracle.calls();
  return run;
}

OptimRun run_second_order(const Objective& obj, double sigma, SecondOrderAlgo algo,
                          const Schedules& schedules, const BoxProjection& box,
                          std::int64_t budget, std::uint64_t seed,
                          const SecondOrderOptions& opts) {
  const int dim = obj.dim;
  MeasurementOracle oracle(obj, sigma, seed);
  Rng rng = algo_rng(seed);
  Vector x = opts.x_init ? *opts.x_init : obj.x0;
  const PermSequence perm = make_perm(dim, opts.perm_order);

  OptimRun run;
  const std::int64_t cost = measurements_per_update(algo, dim, opts.center);
  if (budget < cost) {
    run.x_final = x;
    run.no_update = true;
    return run;
  }

  // Initialization: spend init_fraction of the budget on the matching
  // first-order scheme.
  const std::int64_t init_budget = static_cast<std::int64_t>(opts.init_fraction * budget);
  if (init_budget > 0) {
    OptimRun init_run;
    FirstOrderOptions init_opts = opts.init_options;
    init_opts.perm_order = opts.perm_order;
    init_opts.record_trajectory = opts.record_trajectory;
    first_order_loop(oracle, rng, obj, matching_first_order(algo), opts.init_schedules, box,
                     init_budget, init_opts, x, init_run);
    run.init_tau = init_run.tau;
    if (opts.record_trajectory)
      run.trajectory.insert(run.trajectory.end(), init_run.trajectory.begin(),
                            init_run.trajectory.end());
  }

  Matrix h_bar = Matrix::Identity(dim, dim);
  std::int64_t n = 1;
  while (oracle.calls() + cost <= budget) {
    const double a_n = schedules.a_of(n);
    const double b_n = schedules.b_of(n);
    SecondOrderEstimate est;
    switch (algo) {
      case SecondOrderAlgo::spsa2:
        est = second_order_spsa(oracle, x, schedules.delta_of(n), rng);
        break;
      case SecondOrderAlgo::rdsa_unif2:
        est = second_order_rdsa_random(oracle, x, schedules.delta_of(n),
                                       RandomDirectionDist::uniform(opts.unif_eta), rng);
        break;
      case SecondOrderAlgo::rdsa_asymber2:
        est = second_order_rdsa_random(oracle, x, schedules.delta_of(n),
                                       RandomDirectionDist::asym_bernoulli(opts.asym_epsilon),
                                       rng);
        break;
      case SecondOrderAlgo::lex_dp2:
        est = second_order_lex_dp(oracle, x, schedules.delta_of, n, opts.delta_mode, opts.center);
        break;
      case SecondOrderAlgo::perm_dp2:
        est = second_order_perm_dp(oracle, x, schedules.delta_of, n, perm, opts.delta_mode,
                                   opts.center);
        break;
    }
    h_bar = (1.0 - b_n) * h_bar + b_n * est.hess.matrix;
    h_bar = 0.5 * (h_bar + h_bar.transpose()).eval();
    if (opts.observer) opts.observer(n, est.hess.matrix, h_bar);
    x = project_box(x - a_n * upsilon_solve(h_bar, est.grad.vector, opts.upsilon), box);
    ++run.tau;
    if (opts.record_trajectory) run.trajectory.emplace_back(oracle.calls(), x);
    ++n;
  }

  run.x_final = x;
  run.measurements = oracle.calls();
  return run;
}

}  // namespace rdsa
