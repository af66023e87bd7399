#include "rdsa/hess_est.hpp"

#include <cmath>
#include <stdexcept>

namespace rdsa {

namespace {

double checked_delta(const DeltaSchedule& delta_at, std::int64_t idx) {
  const double d = delta_at(idx);
  if (!(d > 0.0)) throw std::domain_error("delta schedule must be positive");
  return d;
}

void symmetrize(Matrix& h) { h = 0.5 * (h + h.transpose()).eval(); }

// Unbiased correction weights for the semi-lexicographic second difference
// d^T H d.  Over one cycle the column moments are sum d^2 = 2*3^N,
// sum d^4 = 2*3^(N+1) and, for distinct columns, sum (d^l)^2 (d^i)^2 = 4*3^N
// (distinct columns are exactly independent with P(-1) = 2/3).  Solving for
// weights that recover H entry-wise gives diagonal (d_l^2 - 2)/(2*3^N) and
// off-diagonal d_k d_l / (8*3^N).
Matrix lex_hessian_weight(const Vector& d, int n, std::int64_t cycle) {
  Matrix w(n, n);
  const double denom_diag = 2.0 * static_cast<double>(cycle);
  const double denom_off = 8.0 * static_cast<double>(cycle);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j)
        w(i, i) = (d[i] * d[i] - 2.0) / denom_diag;
      else
        w(i, j) = d[i] * d[j] / denom_off;
    }
  }
  return w;
}

}  // namespace

double lex_kappa(int n) {
  if (n < 1) throw std::domain_error("lex_kappa: dim must be >= 1");
  return 1.0 / (1.0 / (2.0 * static_cast<double>(pow3(n - 1))) - 1.0);
}

CorrectionMatrix mm_matrix(const Vector& d, int n) {
  if (static_cast<int>(d.size()) != n) throw std::domain_error("mm_matrix: size mismatch");
  for (int i = 0; i < n; ++i)
    if (d[i] != -1.0 && d[i] != 2.0)
      throw std::domain_error("mm_matrix: entries must be in {-1, 2}");
  CorrectionMatrix m;
  m.kappa = lex_kappa(n);
  const double two3n = 2.0 * static_cast<double>(pow3(n));
  m.entries.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.entries(i, j) = (i == j) ? m.kappa * (d[i] * d[i] - two3n) : d[i] * d[j];
  return m;
}

SecondOrderEstimate second_order_lex_dp(MeasurementOracle& oracle, const Vector& x,
                                        const DeltaSchedule& delta_at, std::int64_t n,
                                        DeltaMode mode, CenterMode center) {
  const int dim = static_cast<int>(x.size());
  const std::int64_t cycle = pow3(dim);
  SecondOrderEstimate est;
  est.grad.vector = Vector::Zero(dim);
  est.hess.matrix = Matrix::Zero(dim, dim);
  est.hess.structure = HessStructure::full;

  const std::int64_t calls_before = oracle.calls();
  double shared_center = 0.0;
  if (center == CenterMode::shared) shared_center = oracle.measure(x);

  for (std::int64_t m = 0; m < cycle; ++m) {
    const double delta = checked_delta(delta_at, inner_delta_index(n, cycle, m, mode));
    if (m == 0) {
      est.grad.delta_used = delta;
    }
    const Vector d = lex_row(dim, m);
    const double yp = oracle.measure(x + delta * d);
    const double ym = oracle.measure(x - delta * d);
    const double yc = (center == CenterMode::fresh_per_step) ? oracle.measure(x) : shared_center;
    est.grad.vector += d * ((yp - ym) / (2.0 * delta));
    est.hess.matrix += lex_hessian_weight(d, dim, cycle) * ((yp + ym - 2.0 * yc) / (delta * delta));
  }
  est.grad.vector /= 2.0 * static_cast<double>(cycle);
  symmetrize(est.hess.matrix);

  est.measurements_used = oracle.calls() - calls_before;
  est.grad.measurements_used = 2 * cycle;
  est.hess.measurements_used = est.measurements_used;
  return est;
}

SecondOrderEstimate second_order_perm_dp(MeasurementOracle& oracle, const Vector& x,
                                         const DeltaSchedule& delta_at, std::int64_t n,
                                         const PermSequence& seq, DeltaMode mode,
                                         CenterMode center) {
  const int dim = static_cast<int>(x.size());
  if (seq.dim != dim) throw std::domain_error("second_order_perm_dp: dimension mismatch");
  SecondOrderEstimate est;
  est.grad.vector = Vector::Zero(dim);
  est.hess.matrix = Matrix::Zero(dim, dim);
  est.hess.structure = HessStructure::diagonal;

  const std::int64_t calls_before = oracle.calls();
  double shared_center = 0.0;
  if (center == CenterMode::shared) shared_center = oracle.measure(x);

  for (std::int64_t m = 0; m < dim; ++m) {
    const double delta = checked_delta(delta_at, inner_delta_index(n, dim, m, mode));
    if (m == 0) est.grad.delta_used = delta;
    const int slot = seq.order[static_cast<std::size_t>(m)];
    Vector xp = x, xm = x;
    xp[slot] += delta;
    xm[slot] -= delta;
    const double yp = oracle.measure(xp);
    const double ym = oracle.measure(xm);
    const double yc = (center == CenterMode::fresh_per_step) ? oracle.measure(x) : shared_center;
    est.grad.vector[slot] += (yp - ym) / (2.0 * delta);
    est.hess.matrix(slot, slot) = (yp + ym - 2.0 * yc) / (delta * delta);
  }

  est.measurements_used = oracle.calls() - calls_before;
  est.grad.measurements_used = 2 * dim;
  est.hess.measurements_used = est.measurements_used;
  return est;
}

SecondOrderEstimate second_order_spsa(MeasurementOracle& oracle, const Vector& x, double delta,
                                      Rng& rng) {
  if (!(delta > 0.0)) throw std::domain_error("second_order_spsa: delta must be > 0");
  const int dim = static_cast<int>(x.size());
  const auto rademacher = RandomDirectionDist::rademacher();
  const Vector d = sample_direction(rademacher, dim, rng);
  const Vector dt = sample_direction(rademacher, dim, rng);

  const double yp = oracle.measure(x + delta * d);
  const double ym = oracle.measure(x - delta * d);
  const double ypp = oracle.measure(x + delta * d + delta * dt);
  const double ymp = oracle.measure(x - delta * d + delta * dt);

  SecondOrderEstimate est;
  est.grad.vector = Vector(dim);
  const double diff = (yp - ym) / (2.0 * delta);
  for (int i = 0; i < dim; ++i) est.grad.vector[i] = diff / d[i];
  est.grad.delta_used = delta;
  est.grad.measurements_used = 2;

  // One-sided gradient difference along dt; symmetrized outer product.
  Vector dg(dim);
  for (int i = 0; i < dim; ++i) dg[i] = ((ypp - yp) - (ymp - ym)) / (delta * dt[i]);
  Matrix h = (d * dg.transpose()) / (2.0 * delta);
  est.hess.matrix = 0.5 * (h + h.transpose());
  est.hess.structure = HessStructure::full;
  est.hess.measurements_used = 4;
  est.measurements_used = 4;
  return est;
}

SecondOrderEstimate second_order_rdsa_random(MeasurementOracle& oracle, const Vector& x,
                                             double delta, const RandomDirectionDist& dist,
                                             Rng& rng) {
  if (!(delta > 0.0)) throw std::domain_error("second_order_rdsa_random: delta must be > 0");
  if (dist.kind == RandomDirectionDist::Kind::rademacher)
    throw std::domain_error("second_order_rdsa_random: Rademacher has no Hessian correction");
  const int dim = static_cast<int>(x.size());
  const Vector d = sample_direction(dist, dim, rng);

  const double yc = oracle.measure(x);
  const double yp = oracle.measure(x + delta * d);
  const double ym = oracle.measure(x - delta * d);

  SecondOrderEstimate est;
  est.grad.vector = d * ((yp - ym) / (2.0 * delta) / dist.second_moment());
  est.grad.delta_used = delta;
  est.grad.measurements_used = 2;

  const double mu2 = dist.second_moment();
  const double mu4 = dist.fourth_moment();
  const double s = (yp + ym - 2.0 * yc) / (delta * delta);
  Matrix h(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      h(i, j) = (i == j) ? (d[i] * d[i] - mu2) / (mu4 - mu2 * mu2) * s
                         : d[i] * d[j] / (2.0 * mu2 * mu2) * s;
  est.hess.matrix = std::move(h);
  est.hess.structure = HessStructure::full;
  est.hess.measurements_used = 3;
  est.measurements_used = 3;
  return est;
}

HessianEstimate hess_lex_dp(MeasurementOracle& oracle, const Vector& x,
                            const DeltaSchedule& delta_at, std::int64_t n, DeltaMode mode,
                            CenterMode center) {
  return second_order_lex_dp(oracle, x, delta_at, n, mode, center).hess;
}

HessianEstimate hess_perm_dp(MeasurementOracle& oracle, const Vector& x,
                             const DeltaSchedule& delta_at, std::int64_t n,
                             const PermSequence& seq, DeltaMode mode, CenterMode center) {
  return second_order_perm_dp(oracle, x, delta_at, n, seq, mode, center).hess;
}

HessianEstimate hess_baseline(MeasurementOracle& oracle, const Vector& x, double delta,
                              BaselineHessianKind kind, Rng& rng) {
  switch (kind) {
    case BaselineHessianKind::spsa2:
      return second_order_spsa(oracle, x, delta, rng).hess;
    case BaselineHessianKind::rdsa_unif:
      return second_order_rdsa_random(oracle, x, delta, RandomDirectionDist::uniform(1.0), rng)
          .hess;
    case BaselineHessianKind::rdsa_asymber:
      return second_order_rdsa_random(oracle, x, delta, RandomDirectionDist::asym_bernoulli(1.0),
                                      rng)
          .hess;
  }
  throw std::logic_error("unreachable");
}

TwoPermHessian hess_perm_two_dp(MeasurementOracle& oracle, const Vector& x,
                                const DeltaSchedule& delta_at, std::int64_t n,
                                const PermSequence& first, const PermSequence& second,
                                DeltaMode mode, CenterMode center) {
  const int dim = static_cast<int>(x.size());
  if (first.dim != dim || second.dim != dim)
    throw std::domain_error("hess_perm_two_dp: dimension mismatch");
  for (std::size_t m = 0; m < first.order.size(); ++m)
    if (first.order[m] == second.order[m])
      throw std::domain_error("hess_perm_two_dp: permutation pair must differ at every index");

  TwoPermHessian out;
  out.estimate.matrix = Matrix::Zero(dim, dim);
  out.estimate.structure = HessStructure::diagonal;
  out.step_values.reserve(static_cast<std::size_t>(dim));

  const std::int64_t calls_before = oracle.calls();
  double shared_center = 0.0;
  if (center == CenterMode::shared) shared_center = oracle.measure(x);

  for (std::int64_t m = 0; m < dim; ++m) {
    const double delta = checked_delta(delta_at, inner_delta_index(n, dim, m, mode));
    const Vector d = perm_row(first, m) + perm_row(second, m);
    const double yp = oracle.measure(x + delta * d);
    const double ym = oracle.measure(x - delta * d);
    const double yc = (center == CenterMode::fresh_per_step) ? oracle.measure(x) : shared_center;
    const double v = (yp + ym - 2.0 * yc) / (delta * delta);
    out.step_values.push_back(v);
    // Split the combined second difference between the two perturbed slots.
    out.estimate.matrix(first.order[static_cast<std::size_t>(m)],
                        first.order[static_cast<std::size_t>(m)]) += 0.5 * v;
    out.estimate.matrix(second.order[static_cast<std::size_t>(m)],
                        second.order[static_cast<std::size_t>(m)]) += 0.5 * v;
  }
  out.estimate.measurements_used = oracle.calls() - calls_before;
  return out;
}

}  // namespace rdsa
