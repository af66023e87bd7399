#include "rdsa/grad_est.hpp"

#include <stdexcept>

namespace rdsa {

namespace {

double checked_delta(const DeltaSchedule& delta_at, std::int64_t idx) {
  const double d = delta_at(idx);
  if (!(d > 0.0)) throw std::domain_error("delta schedule must be positive");
  return d;
}

}  // namespace

std::int64_t inner_delta_index(std::int64_t n, std::int64_t loop_len, std::int64_t m,
                               DeltaMode mode) {
  if (n < 1) throw std::domain_error("outer iteration index is 1-based");
  if (mode == DeltaMode::frozen) return (n - 1) * loop_len + 1;
  return (n - 1) * loop_len + m + 1;
}

GradientEstimate grad_lex_dp(MeasurementOracle& oracle, const Vector& x,
                             const DeltaSchedule& delta_at, std::int64_t n, DeltaMode mode) {
  const int dim = static_cast<int>(x.size());
  const std::int64_t cycle = pow3(dim);
  GradientEstimate est;
  est.vector = Vector::Zero(dim);
  for (std::int64_t m = 0; m < cycle; ++m) {
    const double delta = checked_delta(delta_at, inner_delta_index(n, cycle, m, mode));
    if (m == 0) est.delta_used = delta;
    const Vector d = lex_row(dim, m);
    const double yp = oracle.measure(x + delta * d);
    const double ym = oracle.measure(x - delta * d);
    est.vector += d * ((yp - ym) / (2.0 * delta));
  }
  est.vector /= 2.0 * static_cast<double>(cycle);
  est.measurements_used = 2 * cycle;
  return est;
}

GradientEstimate grad_perm_dp(MeasurementOracle& oracle, const Vector& x,
                              const DeltaSchedule& delta_at, std::int64_t n,
                              const PermSequence& seq, DeltaMode mode) {
  const int dim = static_cast<int>(x.size());
  if (seq.dim != dim) throw std::domain_error("grad_perm_dp: dimension mismatch");
  GradientEstimate est;
  est.vector = Vector::Zero(dim);
  for (std::int64_t m = 0; m < dim; ++m) {
    const double delta = checked_delta(delta_at, inner_delta_index(n, dim, m, mode));
    if (m == 0) est.delta_used = delta;
    const Vector d = perm_row(seq, m);
    const double yp = oracle.measure(x + delta * d);
    const double ym = oracle.measure(x - delta * d);
    est.vector += d * ((yp - ym) / (2.0 * delta));
  }
  est.measurements_used = 2 * dim;
  return est;
}

GradientEstimate grad_kw_dp(MeasurementOracle& oracle, const Vector& x,
                            const DeltaSchedule& delta_at, std::int64_t n, DeltaMode mode) {
  const int dim = static_cast<int>(x.size());
  GradientEstimate est;
  est.vector = Vector::Zero(dim);
  for (std::int64_t m = 0; m < dim; ++m) {
    const double delta = checked_delta(delta_at, inner_delta_index(n, dim, m, mode));
    if (m == 0) est.delta_used = delta;
    Vector xp = x, xm = x;
    xp[m] += delta;
    xm[m] -= delta;
    est.vector[m] = (oracle.measure(xp) - oracle.measure(xm)) / (2.0 * delta);
  }
  est.measurements_used = 2 * dim;
  return est;
}

GradientEstimate grad_spsa(MeasurementOracle& oracle, const Vector& x, double delta, Rng& rng) {
  if (!(delta > 0.0)) throw std::domain_error("grad_spsa: delta must be > 0");
  const int dim = static_cast<int>(x.size());
  const Vector d = sample_direction(RandomDirectionDist::rademacher(), dim, rng);
  const double yp = oracle.measure(x + delta * d);
  const double ym = oracle.measure(x - delta * d);
  GradientEstimate est;
  est.vector = Vector(dim);
  const double diff = (yp - ym) / (2.0 * delta);
  for (int i = 0; i < dim; ++i) est.vector[i] = diff / d[i];
  est.measurements_used = 2;
  est.delta_used = delta;
  return est;
}

GradientEstimate grad_rdsa_random(MeasurementOracle& oracle, const Vector& x, double delta,
                                  const RandomDirectionDist& dist, Rng& rng) {
  if (!(delta > 0.0)) throw std::domain_error("grad_rdsa_random: delta must be > 0");
  if (dist.kind == RandomDirectionDist::Kind::rademacher)
    throw std::domain_error("grad_rdsa_random: use grad_spsa for Rademacher perturbations");
  const int dim = static_cast<int>(x.size());
  const Vector d = sample_direction(dist, dim, rng);
  const double yp = oracle.measure(x + delta * d);
  const double ym = oracle.measure(x - delta * d);
  GradientEstimate est;
  est.vector = d * ((yp - ym) / (2.0 * delta) / dist.second_moment());
  est.measurements_used = 2;
  est.delta_used = delta;
  return est;
}

}  // namespace rdsa
