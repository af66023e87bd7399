#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdsa/harness.hpp"

namespace {

struct RunArgs {
  std::string objective = "quadratic";
  int dim = 5;
  double sigma = 0.001;
  std::int64_t budget = 50000;
  std::vector<std::string> algos;
  int reps = 50;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  std::string config;
  int threads = 0;
};

// key=value config files override command-line flags.
void apply_config(RunArgs& a) {
  if (a.config.empty()) return;
  std::ifstream f(a.config);
  if (!f) throw std::runtime_error("cannot open config file: " + a.config);
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not key=value: " + line);
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    if (key == "objective")
      a.objective = val;
    else if (key == "dim")
      a.dim = std::stoi(val);
    else if (key == "sigma")
      a.sigma = std::stod(val);
    else if (key == "budget")
      a.budget = std::stoll(val);
    else if (key == "reps")
      a.reps = std::stoi(val);
    else if (key == "seed")
      a.seed = std::stoull(val);
    else if (key == "out")
      a.out = val;
    else if (key == "format")
      a.format = val;
    else if (key == "threads")
      a.threads = std::stoi(val);
    else if (key == "algos") {
      a.algos.clear();
      std::stringstream ss(val);
      std::string item;
      while (std::getline(ss, item, ',')) a.algos.push_back(item);
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
}

int do_run(const RunArgs& args) {
  rdsa::ExperimentConfig cfg;
  cfg.objective = args.objective;
  cfg.dim = args.dim;
  cfg.sigma = args.sigma;
  cfg.budget = args.budget;
  cfg.algorithms = args.algos.empty() ? std::vector<std::string>{"1RDSA-Perm-DP"} : args.algos;
  cfg.replications = args.reps;
  cfg.base_seed = args.seed;
  cfg.threads = args.threads;

  const rdsa::ExperimentResults results = rdsa::run_experiment(cfg);
  const std::string text = args.format == "json" ? rdsa::results_to_json(results)
                                                 : rdsa::results_to_csv(results);
  if (args.out.empty()) {
    std::cout << text;
  } else if (args.format == "json") {
    rdsa::emit_results_json(results, args.out);
  } else {
    rdsa::emit_results_csv(results, args.out);
  }
  return 0;
}

void print_rate_report(const rdsa::RateDiagnostics& d) {
  std::printf("{\n");
  std::printf("  \"kind\": \"%s\",\n", d.kind == rdsa::RateKind::thm3 ? "thm3" : "thm5");
  if (d.kind == rdsa::RateKind::thm3) {
    std::printf("  \"mu\": %.17g,\n", d.mu);
    std::printf("  \"c\": %.17g,\n", d.c);
    std::printf("  \"delta\": %.17g,\n", d.delta0);
  } else {
    std::printf("  \"b0\": %.17g,\n", d.b0);
    std::printf("  \"r\": %.17g,\n", d.r);
    std::printf("  \"max_trace_mismatch\": %.17g,\n", d.max_trace_mismatch);
    std::printf("  \"max_hess_deviation\": %.17g,\n", d.max_hess_deviation);
  }
  std::printf("  \"slope\": %.17g,\n", d.slope);
  std::printf("  \"slope_expected\": %.17g\n", d.slope_expected);
  std::printf("}\n");
}

int do_identities(int dim_max, int perm_trials) {
  bool ok = true;
  for (int n = 1; n <= dim_max; ++n) {
    const rdsa::MatrixI64 gram = rdsa::lex_gram(n);
    const std::int64_t expect = 2 * rdsa::pow3(n);
    bool pass = true;
    std::int64_t s4 = 0, s22 = 0, cross = 0;
    const std::int64_t cycle = rdsa::pow3(n);
    for (std::int64_t m = 0; m < cycle; ++m) {
      const auto row = rdsa::lex_row_int(n, m);
      s4 += row[0] * row[0] * row[0] * row[0];
      if (n >= 2) {
        s22 += row[0] * row[0] * row[1] * row[1];
        cross += row[0] * row[1] * (n >= 3 ? row[2] * row[2] : 1);
      }
    }
    for (int i = 0; i < n && pass; ++i)
      for (int j = 0; j < n; ++j)
        if (gram(i, j) != (i == j ? expect : 0)) {
          pass = false;
          break;
        }
    std::printf("lex N=%d gram=%s sum_d4=%lld (expect %lld) sum_d2d2=%lld sum_cross=%lld\n", n,
                pass ? "ok" : "FAIL", static_cast<long long>(s4),
                static_cast<long long>(2 * rdsa::pow3(n + 1)),
                static_cast<long long>(n >= 2 ? s22 : 0), static_cast<long long>(cross));
    ok = ok && pass;
  }
  rdsa::Rng rng(7);
  for (int t = 0; t < perm_trials; ++t) {
    const int n = 1 + static_cast<int>(rng() % 64);
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);
    const rdsa::PermSequence seq(n, order);
    rdsa::Matrix gram = rdsa::Matrix::Zero(n, n);
    for (int m = 0; m < n; ++m) {
      const rdsa::Vector d = rdsa::perm_row(seq, m);
      gram += d * d.transpose();
    }
    const bool pass = gram.isIdentity(0.0);
    std::printf("perm N=%d gram=%s\n", n, pass ? "ok" : "FAIL");
    ok = ok && pass;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic-perturbation RDSA benchmark harness"};
  app.require_subcommand(1);

  RunArgs args;
  auto* run = app.add_subcommand("run", "Run an experiment sweep");
  run->add_option("--objective", args.objective, "quadratic | fourth | rastrigin");
  run->add_option("--dim", args.dim, "problem dimension");
  run->add_option("--sigma", args.sigma, "noise level");
  run->add_option("--budget", args.budget, "measurement budget per replication");
  run->add_option("--algos", args.algos, "algorithm ids")->delimiter(',');
  run->add_option("--reps", args.reps, "replication count");
  run->add_option("--seed", args.seed, "base seed");
  run->add_option("--out", args.out, "output path (default stdout)");
  run->add_option("--format", args.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--config", args.config, "key=value config file, overrides flags");
  run->add_option("--threads", args.threads, "worker threads (0 = auto)");

  std::string rate_kind = "thm3";
  rdsa::Thm3Config t3;
  rdsa::Thm5Config t5;
  auto* rates = app.add_subcommand("rates", "Convergence-rate diagnostics");
  rates->add_option("--kind", rate_kind, "thm3 | thm5")->check(CLI::IsMember({"thm3", "thm5"}));
  rates->add_option("--dim", t3.dim, "problem dimension (thm3)");
  rates->add_option("--sigma", t3.sigma, "noise level (thm3)");
  rates->add_option("--c", t3.c, "step-size constant, a_k = c/k (thm3)");
  rates->add_option("--delta", t3.delta, "constant perturbation size (thm3)");
  rates->add_option("--reps", t3.replications, "replications (thm3)");
  rates->add_option("--seed", t3.base_seed, "base seed (thm3)");
  rates->add_option("--nmax", t3.n_max, "iterations (thm3)");
  rates->add_option("--dim5", t5.dim, "problem dimension (thm5)");
  rates->add_option("--b0", t5.b0, "averaging weight constant (thm5)");
  rates->add_option("--r", t5.r, "averaging weight exponent (thm5)");
  rates->add_option("--nmax5", t5.n_max, "iterations (thm5)");

  int dim_max = 6;
  int perm_trials = 10;
  auto* idents = app.add_subcommand("identities", "Exact perturbation-sequence identity checks");
  idents->add_option("--dim-max", dim_max, "largest lex dimension to check");
  idents->add_option("--perm-trials", perm_trials, "random permutation Gram checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      apply_config(args);
      return do_run(args);
    }
    if (rates->parsed()) {
      const rdsa::RateDiagnostics d = rate_kind == "thm3" ? rdsa::rate_diagnostics_thm3(t3)
                                                          : rdsa::rate_diagnostics_thm5(t5);
      print_rate_report(d);
      return 0;
    }
    return do_identities(dim_max, perm_trials);
  } catch (const std::invalid_argument& e) {
    std::cerr << "{\"error\":\"invalid-argument\",\"message\":\"" << e.what() << "\"}\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "{\"error\":\"domain-error\",\"message\":\"" << e.what() << "\"}\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"runtime-error\",\"message\":\"" << e.what() << "\"}\n";
    return 3;
  }
}
