#pragma once

#include <cstdint>
#include <functional>

#include "rdsa/objectives.hpp"
#include "rdsa/perturb.hpp"

namespace rdsa {

// Counts every noisy function measurement; single owner per replication.
class MeasurementOracle {
 public:
  MeasurementOracle(const Objective& obj, double sigma, std::uint64_t noise_seed)
      : obj_(&obj), noise_(sigma, noise_seed) {}

  double measure(const Vector& x) {
    ++calls_;
    return obj_->eval_clean(x) + noise_.sample(x);
  }

  std::int64_t calls() const { return calls_; }
  const Objective& objective() const { return *obj_; }

 private:
  const Objective* obj_;
  NoiseModel noise_;
  std::int64_t calls_ = 0;
};

/// Perturbation-constant schedule, 1-indexed by global measurement-pair index.
using DeltaSchedule = std::function<double(std::int64_t)>;

// The delta subscript runs over the global inner-step index by default; the
// frozen mode holds the first delta of the loop for the whole inner loop.
enum class DeltaMode { per_step, frozen };

/// 1-based schedule index for inner step m of outer iteration n (1-based).
std::int64_t inner_delta_index(std::int64_t n, std::int64_t loop_len, std::int64_t m,
                               DeltaMode mode);

struct GradientEstimate {
  Vector vector;
  std::int64_t measurements_used = 0;
  double delta_used = 0.0;  // first delta of the inner loop
};

/// Semi-lexicographic DP gradient: (1/(2*3^N)) sum_m d_m (y+ - y-)/(2 delta).
GradientEstimate grad_lex_dp(MeasurementOracle& oracle, const Vector& x,
                             const DeltaSchedule& delta_at, std::int64_t n,
                             DeltaMode mode = DeltaMode::per_step);

/// Permutation DP gradient: sum_m e_{sigma(m)} (y+ - y-)/(2 delta), no prefactor.
GradientEstimate grad_perm_dp(MeasurementOracle& oracle, const Vector& x,
                              const DeltaSchedule& delta_at, std::int64_t n,
                              const PermSequence& seq,
                              DeltaMode mode = DeltaMode::per_step);

/// Kiefer-Wolfowitz style coordinate-wise central differences, 2N measurements.
GradientEstimate grad_kw_dp(MeasurementOracle& oracle, const Vector& x,
                            const DeltaSchedule& delta_at, std::int64_t n,
                            DeltaMode mode = DeltaMode::per_step);

/// Standard SPSA estimate with Rademacher perturbations, 2 measurements.
GradientEstimate grad_spsa(MeasurementOracle& oracle, const Vector& x, double delta, Rng& rng);

/// Random-perturbation RDSA estimate; scaling 1/(1+eps) for asymmetric
/// Bernoulli, 3/eta^2 for uniform (inverse of E[d d^T]).
GradientEstimate grad_rdsa_random(MeasurementOracle& oracle, const Vector& x, double delta,
                                  const RandomDirectionDist& dist, Rng& rng);

}  // namespace rdsa
