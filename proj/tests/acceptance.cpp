// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rdsa/harness.hpp"

using namespace rdsa;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s: %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// --------------------------------------------------------------- criterion 1

void criterion_gram_identities() {
  bool ok = true;
  for (int n = 1; n <= 8 && ok; ++n) {
    const MatrixI64 g = lex_gram(n);
    const std::int64_t expect = 2 * pow3(n);
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n; ++j)
        if (g(i, j) != (i == j ? expect : 0)) {
          ok = false;
          break;
        }
  }
  std::mt19937_64 rng(2024);
  for (int n = 1; n <= 64 && ok; ++n) {
    for (int trial = 0; trial < 10 && ok; ++trial) {
      std::vector<int> order(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
      std::shuffle(order.begin(), order.end(), rng);
      const PermSequence seq(n, order);
      Matrix gram = Matrix::Zero(n, n);
      for (int m = 0; m < n; ++m) {
        const Vector d = perm_row(seq, m);
        gram += d * d.transpose();
      }
      if (!(gram == Matrix::Identity(n, n))) ok = false;
    }
  }
  report(1, ok, "cycle Gram identities, exact (lex N=1..8, permutation N=1..64 x10)");
}

// --------------------------------------------------------------- criterion 2

void criterion_moment_identities() {
  bool fourth_ok = true, pair_ok = true, cross_ok = true;
  std::int64_t pair_actual = 0, pair_stated = 0;
  int pair_n = 0;
  for (int n = 1; n <= 6; ++n) {
    const std::int64_t cycle = pow3(n);
    std::vector<std::int64_t> s4(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<std::int64_t>> s22(
        static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
    std::vector<std::vector<std::int64_t>> cr(
        static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
    for (std::int64_t m = 0; m < cycle; ++m) {
      const auto d = lex_row_int(n, m);
      for (int l = 0; l < n; ++l) {
        const std::int64_t dl = d[static_cast<std::size_t>(l)];
        s4[static_cast<std::size_t>(l)] += dl * dl * dl * dl;
        for (int i = 0; i < n; ++i) {
          const std::int64_t di = d[static_cast<std::size_t>(i)];
          s22[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] += dl * dl * di * di;
          if (l != i) cr[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] += dl * di * d[0] * d[0];
        }
      }
    }
    for (int l = 0; l < n; ++l) {
      if (s4[static_cast<std::size_t>(l)] != 2 * pow3(n + 1)) fourth_ok = false;
      for (int i = 0; i < n; ++i) {
        if (l == i) continue;
        const std::int64_t stated = 4 * pow3(n) * pow3(n);  // (2*3^N)^2
        if (s22[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] != stated) {
          if (pair_n == 0) {
            pair_n = n;
            pair_actual = s22[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
            pair_stated = stated;
          }
          pair_ok = false;
        }
        if (cr[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] != 0) cross_ok = false;
      }
    }
  }
  const bool ok = fourth_ok && pair_ok && cross_ok;
  std::string detail = "cycle moment sums, exact (N=1..6)";
  if (!pair_ok) {
    detail += "; squared-pair sum is " + std::to_string(pair_actual) + " = 4*3^N at N=" +
              std::to_string(pair_n) + ", stated value " + std::to_string(pair_stated) +
              " = (2*3^N)^2 is the product of the two single-column sums of squares and is not " +
              "attainable by the per-row sum for any N >= 2";
  }
  report(2, ok, detail);
}

// --------------------------------------------------------------- criterion 3

void criterion_estimator_exactness() {
  bool ok = true;
  std::string detail = "noise-free estimator exactness on the quadratic (N=2,5,10)";
  const auto delta = [](std::int64_t) { return 0.05; };
  for (int n : {2, 5, 10}) {
    const Objective obj = make_quadratic(n);
    MeasurementOracle oracle(obj, 0.0, 1);
    const Vector x = 0.4 * Vector::Ones(n);
    const Vector g_true = obj.grad_clean(x);
    const Matrix h_true = obj.hess_clean(x);
    const PermSequence seq = PermSequence::identity(n);

    const double rel_lex = (grad_lex_dp(oracle, x, delta, 1).vector - g_true).norm() / g_true.norm();
    const double rel_perm =
        (grad_perm_dp(oracle, x, delta, 1, seq).vector - g_true).norm() / g_true.norm();
    const double rel_kw = (grad_kw_dp(oracle, x, delta, 1).vector - g_true).norm() / g_true.norm();
    if (rel_lex > 1e-10 || rel_perm > 1e-10 || rel_kw > 1e-10) ok = false;

    const Matrix h_lex = hess_lex_dp(oracle, x, delta, 1).matrix;
    if ((h_lex - h_true).norm() > 1e-8) ok = false;
    const Matrix h_perm = hess_perm_dp(oracle, x, delta, 1, seq).matrix;
    if ((h_perm - Matrix(h_true.diagonal().asDiagonal())).norm() > 1e-8) ok = false;
  }
  report(3, ok, detail);
}

// --------------------------------------------------------------- criterion 4

void criterion_bias_order() {
  const Objective obj = make_fourth_order(2);
  const Vector x = Vector::Ones(2);
  const Vector g_true = obj.grad_clean(x);
  const Matrix h_true = obj.hess_clean(x);
  MeasurementOracle oracle(obj, 0.0, 1);
  const double d1 = 0.2, d2 = 0.1;
  const auto at1 = [d1](std::int64_t) { return d1; };
  const auto at2 = [d2](std::int64_t) { return d2; };
  const PermSequence seq = PermSequence::identity(2);

  bool ok = true;
  std::string ratios;
  const double g_lex = (grad_lex_dp(oracle, x, at1, 1).vector - g_true).norm() /
                       (grad_lex_dp(oracle, x, at2, 1).vector - g_true).norm();
  const double g_perm = (grad_perm_dp(oracle, x, at1, 1, seq).vector - g_true).norm() /
                        (grad_perm_dp(oracle, x, at2, 1, seq).vector - g_true).norm();
  for (double r : {g_lex, g_perm}) {
    if (r < 3.2 || r > 4.8) ok = false;
    ratios += " " + fmt(r);
  }
  const double hd1 = 0.4, hd2 = 0.2;
  const auto hat1 = [hd1](std::int64_t) { return hd1; };
  const auto hat2 = [hd2](std::int64_t) { return hd2; };
  const double h_lex = (hess_lex_dp(oracle, x, hat1, 1).matrix - h_true).norm() /
                       (hess_lex_dp(oracle, x, hat2, 1).matrix - h_true).norm();
  const Matrix h_diag = h_true.diagonal().asDiagonal();
  const double h_perm = (hess_perm_dp(oracle, x, hat1, 1, seq).matrix - h_diag).norm() /
                        (hess_perm_dp(oracle, x, hat2, 1, seq).matrix - h_diag).norm();
  for (double r : {h_lex, h_perm}) {
    if (r < 3.0 || r > 5.0) ok = false;
    ratios += " " + fmt(r);
  }
  report(4, ok, "quadratic-in-delta bias decay, halving ratios:" + ratios);
}

// --------------------------------------------------------------- criterion 5

void criterion_averaging_decay() {
  const RateDiagnostics d = rate_diagnostics_thm5(Thm5Config{});
  const bool trace_ok = d.max_trace_mismatch <= 1e-10;
  const bool cert_ok = d.max_hess_deviation <= 1e-10;
  const bool slope_ok = std::abs(d.slope - d.slope_expected) <= 0.10 * std::abs(d.slope_expected);
  report(5, trace_ok && cert_ok && slope_ok,
         "Hessian-averaging decay: trace mismatch " + fmt(d.max_trace_mismatch) +
             ", estimate deviation " + fmt(d.max_hess_deviation) + ", log-domain slope " +
             fmt(d.slope) + " (expected " + fmt(d.slope_expected) + ")");
}

// --------------------------------------------------------------- criterion 6

void criterion_first_order_rate() {
  const RateDiagnostics d = rate_diagnostics_thm3(Thm3Config{});
  const bool ok = std::abs(d.slope - (-0.5)) <= 0.15;
  report(6, ok, "strongly convex log-log error slope " + fmt(d.slope) +
                    " (expected -0.5 +- 0.15, mu*c = " + fmt(d.mu * d.c) + ")");
}

// --------------------------------------------------------------- criterion 7

double mean_error_for(const std::string& algo, double sigma) {
  ExperimentConfig cfg;
  cfg.objective = "quadratic";
  cfg.dim = 5;
  cfg.sigma = sigma;
  cfg.budget = 50000;
  cfg.algorithms = {algo};
  cfg.replications = 50;
  cfg.base_seed = 20240817;
  return run_experiment(cfg).summaries.front().mean_error;
}

void criterion_benchmark_magnitudes() {
  bool ok = true;
  std::string detail = "benchmark error magnitudes:";
  for (const std::string algo : {"1RDSA-Perm-DP", "1RDSA-KW-DP"}) {
    const double e = mean_error_for(algo, 0.001);
    detail += " " + algo + "=" + fmt(e);
    if (!(e < 1e-4)) ok = false;
  }
  for (const std::string algo : {"1SPSA", "1RDSA-AsymBer", "1RDSA-Unif"}) {
    const double e = mean_error_for(algo, 0.001);
    detail += " " + algo + "=" + fmt(e);
    if (!(e >= 1e-4 && e <= 1e-2)) ok = false;
  }
  const double lex2_low = mean_error_for("2RDSA-Lex-DP", 0.001);
  detail += " 2RDSA-Lex-DP=" + fmt(lex2_low);
  if (!(lex2_low < 1e-6)) ok = false;
  const double lex2_high = mean_error_for("2RDSA-Lex-DP", 0.1);
  const double perm2_low = mean_error_for("2RDSA-Perm-DP", 0.001);
  const double perm2_high = mean_error_for("2RDSA-Perm-DP", 0.1);
  const double lex_shift = std::max(lex2_high / lex2_low, lex2_low / lex2_high);
  const double perm_shift = std::max(perm2_high / perm2_low, perm2_low / perm2_high);
  detail += " lex2-noise-shift=" + fmt(lex_shift) + " perm2-noise-shift=" + fmt(perm_shift);
  if (!(lex_shift < 10.0 && perm_shift < 10.0)) ok = false;
  report(7, ok, detail);
}

// --------------------------------------------------------------- criterion 8

void criterion_budget_accounting() {
  const Objective obj = make_quadratic(10);
  const Schedules first = make_first_order_schedules();
  const Schedules second = make_second_order_schedules();
  const std::int64_t budget = 5000;

  const std::int64_t tau_perm =
      run_first_order(obj, 0.001, FirstOrderAlgo::perm_dp, first, BoxProjection{}, budget, 1).tau;
  const std::int64_t tau_spsa =
      run_first_order(obj, 0.001, FirstOrderAlgo::spsa, first, BoxProjection{}, budget, 1).tau;
  SecondOrderOptions opts;
  const std::int64_t tau_spsa2 =
      run_second_order(obj, 0.001, SecondOrderAlgo::spsa2, second, BoxProjection{}, budget, 1, opts)
          .tau;
  const std::int64_t tau_perm2 = run_second_order(obj, 0.001, SecondOrderAlgo::perm_dp2, second,
                                                  BoxProjection{}, budget, 1, opts)
                                     .tau;
  const bool ok = tau_perm == 250 && tau_spsa == 2500 && tau_spsa2 == 1000 && tau_perm2 == 133;
  report(8, ok, "update counts at N=10, budget 5000: " + std::to_string(tau_perm) + "/" +
                    std::to_string(tau_spsa) + "/" + std::to_string(tau_spsa2) + "/" +
                    std::to_string(tau_perm2) + " (expected 250/2500/1000/133)");
}

// --------------------------------------------------------------- criterion 9

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void criterion_determinism(const char* cli_path) {
  bool ok = true;
  std::string detail = "byte-identical CSV across repeated runs";
  if (cli_path == nullptr) {
    // In-library check only if the CLI path was not supplied.
    ExperimentConfig cfg;
    cfg.dim = 3;
    cfg.budget = 2000;
    cfg.algorithms = {"1SPSA", "2RDSA-Perm-DP"};
    cfg.replications = 5;
    cfg.base_seed = 3;
    ok = results_to_csv(run_experiment(cfg)) == results_to_csv(run_experiment(cfg));
    detail += " (library only, no CLI path given)";
  } else {
    const std::string base = std::string(cli_path) +
                             " run --objective quadratic --dim 4 --sigma 0.01 --budget 4000"
                             " --algos 1SPSA,1RDSA-Perm-DP,2RDSA-Perm-DP --reps 5 --seed 17"
                             " --format csv --out ";
    if (std::system((base + "acceptance_run_a.csv").c_str()) != 0) ok = false;
    if (std::system((base + "acceptance_run_b.csv").c_str()) != 0) ok = false;
    const std::string a = read_file("acceptance_run_a.csv");
    const std::string b = read_file("acceptance_run_b.csv");
    ok = ok && !a.empty() && a == b;
    std::remove("acceptance_run_a.csv");
    std::remove("acceptance_run_b.csv");
  }
  report(9, ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  criterion_gram_identities();
  criterion_moment_identities();
  criterion_estimator_exactness();
  criterion_bias_order();
  criterion_averaging_decay();
  criterion_first_order_rate();
  criterion_benchmark_magnitudes();
  criterion_budget_accounting();
  criterion_determinism(argc > 1 ? argv[1] : nullptr);
  if (g_failures > 0) std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
