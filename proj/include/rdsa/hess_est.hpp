#pragma once

#include <vector>

#include "rdsa/grad_est.hpp"

namespace rdsa {

enum class HessStructure { full, diagonal };

struct HessianEstimate {
  Matrix matrix;
  std::int64_t measurements_used = 0;
  HessStructure structure = HessStructure::full;
};

// Center measurement policy for second-difference estimates.  Fresh-per-step
// matches the per-iteration budget arithmetic (3 measurements per inner step);
// shared takes a single center measurement per outer iteration.
enum class CenterMode { fresh_per_step, shared };

/// kappa = (1/(2*3^(N-1)) - 1)^(-1); negative for all N >= 1.
double lex_kappa(int n);

struct CorrectionMatrix {
  Matrix entries;
  double kappa;
};

/// Correction matrix M_m for one semi-lexicographic row: off-diagonal
/// d^i d^j, diagonal kappa((d^i)^2 - 2*3^N).
CorrectionMatrix mm_matrix(const Vector& d, int n);

// Combined second-order estimate: gradient and Hessian from the same inner
// loop of measurements.
struct SecondOrderEstimate {
  GradientEstimate grad;
  HessianEstimate hess;
  std::int64_t measurements_used = 0;
};

SecondOrderEstimate second_order_lex_dp(MeasurementOracle& oracle, const Vector& x,
                                        const DeltaSchedule& delta_at, std::int64_t n,
                                        DeltaMode mode = DeltaMode::per_step,
                                        CenterMode center = CenterMode::fresh_per_step);

SecondOrderEstimate second_order_perm_dp(MeasurementOracle& oracle, const Vector& x,
                                         const DeltaSchedule& delta_at, std::int64_t n,
                                         const PermSequence& seq,
                                         DeltaMode mode = DeltaMode::per_step,
                                         CenterMode center = CenterMode::fresh_per_step);

/// Four-measurement 2SPSA estimate (nested Rademacher perturbations).
SecondOrderEstimate second_order_spsa(MeasurementOracle& oracle, const Vector& x, double delta,
                                      Rng& rng);

/// Three-measurement random-perturbation 2RDSA estimate (uniform or
/// asymmetric Bernoulli directions).
SecondOrderEstimate second_order_rdsa_random(MeasurementOracle& oracle, const Vector& x,
                                             double delta, const RandomDirectionDist& dist,
                                             Rng& rng);

/// Full-Hessian semi-lexicographic DP estimate (symmetrized).
HessianEstimate hess_lex_dp(MeasurementOracle& oracle, const Vector& x,
                            const DeltaSchedule& delta_at, std::int64_t n,
                            DeltaMode mode = DeltaMode::per_step,
                            CenterMode center = CenterMode::fresh_per_step);

/// Diagonal permutation-DP estimate; slot sigma(m) gets the second difference
/// along e_{sigma(m)}.
HessianEstimate hess_perm_dp(MeasurementOracle& oracle, const Vector& x,
                             const DeltaSchedule& delta_at, std::int64_t n,
                             const PermSequence& seq,
                             DeltaMode mode = DeltaMode::per_step,
                             CenterMode center = CenterMode::fresh_per_step);

enum class BaselineHessianKind { spsa2, rdsa_unif, rdsa_asymber };

HessianEstimate hess_baseline(MeasurementOracle& oracle, const Vector& x, double delta,
                              BaselineHessianKind kind, Rng& rng);

// Two-permutation alternative: perturb along d_m + d_hat_m, record the
// per-step second difference for slot pair (sigma(m), sigma_hat(m)).
struct TwoPermHessian {
  HessianEstimate estimate;
  std::vector<double> step_values;
};

TwoPermHessian hess_perm_two_dp(MeasurementOracle& oracle, const Vector& x,
                                const DeltaSchedule& delta_at, std::int64_t n,
                                const PermSequence& first, const PermSequence& second,
                                DeltaMode mode = DeltaMode::per_step,
                                CenterMode center = CenterMode::fresh_per_step);

}  // namespace rdsa
