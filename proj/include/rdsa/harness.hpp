#pragma once

#include <string>
#include <vector>

#include "rdsa/optimize.hpp"

namespace rdsa {

// ---------------------------------------------------------------------------
// Algorithm identifiers.

struct AlgorithmId {
  std::string name;
  bool second_order = false;
  FirstOrderAlgo first = FirstOrderAlgo::spsa;
  SecondOrderAlgo second = SecondOrderAlgo::spsa2;
};

/// Maps a string id ("1SPSA", "1RDSA-Perm-DP", "2RDSA-Lex-DP", ...) to an
/// algorithm; throws std::invalid_argument on unknown ids.
AlgorithmId parse_algorithm(const std::string& name);

/// All implemented algorithm ids, first-order then second-order.
std::vector<std::string> algorithm_names();

// ---------------------------------------------------------------------------
// Experiment configuration and results.

struct ExperimentConfig {
  std::string objective = "quadratic";  // quadratic | fourth | rastrigin
  int dim = 5;
  double sigma = 0.001;
  std::int64_t budget = 50000;
  std::vector<std::string> algorithms;
  int replications = 50;
  std::uint64_t base_seed = 1;
  FirstOrderScheduleParams first_sched{};
  SecondOrderScheduleParams second_sched{};
  BoxProjection box{};
  double init_fraction = 0.2;
  bool record_trajectory = false;
  int threads = 0;  // 0 = hardware concurrency
};

Objective make_objective(const std::string& name, int dim);

struct RunResult {
  std::string algorithm;
  std::uint64_t seed = 0;
  int dim = 0;
  double sigma = 0.0;
  std::int64_t budget = 0;
  std::int64_t tau = 0;
  std::int64_t measurements = 0;
  double param_error = 0.0;
  bool no_update = false;
  std::vector<std::pair<std::int64_t, double>> error_trajectory;  // (measurements, error)

  bool operator==(const RunResult& o) const {
    return algorithm == o.algorithm && seed == o.seed && dim == o.dim && sigma == o.sigma &&
           budget == o.budget && tau == o.tau && measurements == o.measurements &&
           param_error == o.param_error;
  }
};

struct AlgorithmSummary {
  std::string algorithm;
  int replications = 0;
  double mean_error = 0.0;
  double stderr_error = 0.0;

  bool operator==(const AlgorithmSummary& o) const {
    return algorithm == o.algorithm && replications == o.replications &&
           mean_error == o.mean_error && stderr_error == o.stderr_error;
  }
};

struct ExperimentResults {
  int dim = 0;
  double sigma = 0.0;
  std::int64_t budget = 0;
  std::vector<RunResult> runs;          // sorted by (algorithm order, seed)
  std::vector<AlgorithmSummary> summaries;  // one per algorithm
};

/// Normalized squared distance ||x_tau - x*||^2 / ||x0 - x*||^2.
double parameter_error(const Vector& x_tau, const Vector& x0, const Vector& x_star);

/// Runs every algorithm x replication cell (seed = base_seed xor replication
/// index), concurrently, with deterministic per-cell results.
ExperimentResults run_experiment(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Emission.  CSV columns: algorithm, seed, dim, sigma, budget, tau,
// measurements, param_error.  One data row per run; one summary row per
// algorithm with seed = "summary", tau = replication count, measurements =
// standard error, param_error = mean.  Doubles print with %.17g so identical
// results emit byte-identical files.

std::string results_to_csv(const ExperimentResults& results);
void emit_results_csv(const ExperimentResults& results, const std::string& path);
std::string results_to_json(const ExperimentResults& results);
void emit_results_json(const ExperimentResults& results, const std::string& path);

/// Inverse of results_to_csv (data and summary rows; trajectories excluded).
ExperimentResults parse_csv(const std::string& text);

// ---------------------------------------------------------------------------
// Rate diagnostics.

enum class RateKind { thm3, thm5 };

struct Thm3Config {
  int dim = 5;
  double sigma = 0.1;
  double c = 5.0;       // requires mu * c > 1/2
  double delta = 1.0;  // constant perturbation size
  int replications = 50;
  std::int64_t n_max = 2000;
  std::int64_t n_fit_min = 100;
  std::uint64_t base_seed = 1;
  int threads = 0;
};

struct Thm5Config {
  int dim = 3;
  double b0 = 1.0;
  double r = 0.6;
  std::int64_t n_max = 10000;
  std::int64_t n_fit_min = 100;
};

struct RateDiagnostics {
  RateKind kind = RateKind::thm3;
  double mu = 0.0;  // lambda_min(A + A^T)
  double c = 0.0;
  double delta0 = 0.0;
  double delta_exp = 0.0;
  double b0 = 0.0;
  double r = 0.0;
  std::vector<double> gamma;            // partial sums of a_k, strictly increasing
  std::vector<std::int64_t> n_values;   // sample points of the fitted series
  std::vector<double> mean_error;       // thm3: RMS distance to x* per n
  std::vector<double> lambda_trace;     // thm5: trace(Lambda_n^T Lambda_n)
  std::vector<double> closed_product;   // thm5: Prod(1 - b_k)^2 trace(Lambda_0^T Lambda_0)
  std::vector<double> log_series;       // values entering the slope fit
  double max_trace_mismatch = 0.0;      // thm5: max |trace - closed product|
  double max_hess_deviation = 0.0;      // thm5: max ||Hhat_n - H*||_F over the run
  double slope = 0.0;
  double slope_expected = 0.0;
};

/// thm3: 1RDSA-Perm-DP on the noisy quadratic with a_k = c/k and constant
/// delta; fits the log-log slope of the replication-averaged RMS distance.
RateDiagnostics rate_diagnostics_thm3(const Thm3Config& cfg);

/// thm5: noise-free quadratic Hessian averaging with the semi-lexicographic
/// estimate; Lambda_n = Hbar_n - H*.  With b0 = 1 the first factor 1 - b_1 is
/// zero, so the trace series and the closed product are identically zero and
/// the decay-rate fit runs in the log domain over the factors k >= 2.
RateDiagnostics rate_diagnostics_thm5(const Thm5Config& cfg);

/// Ordinary least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rdsa
