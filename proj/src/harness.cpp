#include "rdsa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>
#include <json.hpp>

namespace rdsa {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

// Runs job(i) for i in [0, count) across worker threads.
void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t)>& job) {
  unsigned n_threads = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(std::max<std::int64_t>(count, 1)));
  if (n_threads <= 1) {
    for (std::int64_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t)
    pool.emplace_back([&] {
      for (std::int64_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) job(i);
    });
  for (auto& th : pool) th.join();
}

struct MeanStderr {
  double mean;
  double stderr_;
};

MeanStderr mean_stderr(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace

AlgorithmId parse_algorithm(const std::string& name) {
  AlgorithmId id;
  id.name = name;
  if (name == "1SPSA") {
    id.first = FirstOrderAlgo::spsa;
  } else if (name == "1RDSA-Unif") {
    id.first = FirstOrderAlgo::rdsa_unif;
  } else if (name == "1RDSA-AsymBer") {
    id.first = FirstOrderAlgo::rdsa_asymber;
  } else if (name == "1RDSA-Lex-DP") {
    id.first = FirstOrderAlgo::lex_dp;
  } else if (name == "1RDSA-Perm-DP") {
    id.first = FirstOrderAlgo::perm_dp;
  } else if (name == "1RDSA-KW-DP") {
    id.first = FirstOrderAlgo::kw_dp;
  } else if (name == "2SPSA") {
    id.second_order = true;
    id.second = SecondOrderAlgo::spsa2;
  } else if (name == "2RDSA-Unif") {
    id.second_order = true;
    id.second = SecondOrderAlgo::rdsa_unif2;
  } else if (name == "2RDSA-AsymBer") {
    id.second_order = true;
    id.second = SecondOrderAlgo::rdsa_asymber2;
  } else if (name == "2RDSA-Lex-DP") {
    id.second_order = true;
    id.second = SecondOrderAlgo::lex_dp2;
  } else if (name == "2RDSA-Perm-DP") {
    id.second_order = true;
    id.second = SecondOrderAlgo::perm_dp2;
  } else {
    throw std::invalid_argument("unknown algorithm id: " + name);
  }
  return id;
}

std::vector<std::string> algorithm_names() {
  return {"1SPSA",         "1RDSA-Unif",   "1RDSA-AsymBer", "1RDSA-Lex-DP",
          "1RDSA-Perm-DP", "1RDSA-KW-DP",  "2SPSA",         "2RDSA-Unif",
          "2RDSA-AsymBer", "2RDSA-Lex-DP", "2RDSA-Perm-DP"};
}

Objective make_objective(const std::string& name, int dim) {
  if (name == "quadratic") return make_quadratic(dim);
  if (name == "fourth") return make_fourth_order(dim);
  if (name == "rastrigin") return make_rastrigin(dim);
  throw std::invalid_argument("unknown objective: " + name);
}

double parameter_error(const Vector& x_tau, const Vector& x0, const Vector& x_star) {
  const double denom = (x0 - x_star).squaredNorm();
  if (denom == 0.0) throw std::domain_error("parameter_error: x0 equals x_star");
  return (x_tau - x_star).squaredNorm() / denom;
}

ExperimentResults run_experiment(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("run_experiment: replications >= 1");
  if (cfg.budget < 0) throw std::invalid_argument("run_experiment: budget must be >= 0");
  if (cfg.algorithms.empty()) throw std::invalid_argument("run_experiment: no algorithms");

  std::vector<AlgorithmId> algos;
  algos.reserve(cfg.algorithms.size());
  for (const auto& name : cfg.algorithms) algos.push_back(parse_algorithm(name));

  const Objective obj = make_objective(cfg.objective, cfg.dim);
  const Schedules first_sched = make_first_order_schedules(cfg.first_sched);
  const Schedules second_sched = make_second_order_schedules(cfg.second_sched);

  ExperimentResults out;
  out.dim = cfg.dim;
  out.sigma = cfg.sigma;
  out.budget = cfg.budget;

  const std::int64_t cells = static_cast<std::int64_t>(algos.size()) * cfg.replications;
  out.runs.resize(static_cast<std::size_t>(cells));

  parallel_for(cells, cfg.threads, [&](std::int64_t cell) {
    const std::size_t a = static_cast<std::size_t>(cell) / cfg.replications;
    const int rep = static_cast<int>(cell % cfg.replications);
    const std::uint64_t seed = cfg.base_seed ^ static_cast<std::uint64_t>(rep);
    const AlgorithmId& id = algos[a];

    OptimRun run;
    if (id.second_order) {
      SecondOrderOptions opts;
      opts.init_fraction = cfg.init_fraction;
      opts.init_schedules = first_sched;
      opts.record_trajectory = cfg.record_trajectory;
      run = run_second_order(obj, cfg.sigma, id.second, second_sched, cfg.box, cfg.budget, seed,
                             opts);
    } else {
      FirstOrderOptions opts;
      opts.record_trajectory = cfg.record_trajectory;
      run = run_first_order(obj, cfg.sigma, id.first, first_sched, cfg.box, cfg.budget, seed,
                            opts);
    }

    RunResult r;
    r.algorithm = id.name;
    r.seed = seed;
    r.dim = cfg.dim;
    r.sigma = cfg.sigma;
    r.budget = cfg.budget;
    r.tau = run.tau;
    r.measurements = run.measurements;
    r.no_update = run.no_update;
    r.param_error = parameter_error(run.x_final, obj.x0, obj.x_star);
    if (cfg.record_trajectory) {
      r.error_trajectory.reserve(run.trajectory.size());
      for (const auto& [calls, x] : run.trajectory)
        r.error_trajectory.emplace_back(calls, parameter_error(x, obj.x0, obj.x_star));
    }
    out.runs[static_cast<std::size_t>(cell)] = std::move(r);
  });

  out.summaries.reserve(algos.size());
  for (std::size_t a = 0; a < algos.size(); ++a) {
    std::vector<double> errors;
    errors.reserve(static_cast<std::size_t>(cfg.replications));
    for (int rep = 0; rep < cfg.replications; ++rep)
      errors.push_back(out.runs[a * cfg.replications + static_cast<std::size_t>(rep)].param_error);
    const MeanStderr ms = mean_stderr(errors);
    out.summaries.push_back({algos[a].name, cfg.replications, ms.mean, ms.stderr_});
  }
  return out;
}

std::string results_to_csv(const ExperimentResults& results) {
  if (results.runs.empty()) throw std::invalid_argument("results_to_csv: empty results");
  std::string out = "algorithm,seed,dim,sigma,budget,tau,measurements,param_error\n";
  for (const auto& r : results.runs) {
    out += r.algorithm;
    out += ',' + std::to_string(r.seed);
    out += ',' + std::to_string(r.dim);
    out += ',' + fmt_double(r.sigma);
    out += ',' + std::to_string(r.budget);
    out += ',' + std::to_string(r.tau);
    out += ',' + std::to_string(r.measurements);
    out += ',' + fmt_double(r.param_error);
    out += '\n';
  }
  for (const auto& s : results.summaries) {
    out += s.algorithm;
    out += ",summary";
    out += ',' + std::to_string(results.dim);
    out += ',' + fmt_double(results.sigma);
    out += ',' + std::to_string(results.budget);
    out += ',' + std::to_string(s.replications);
    out += ',' + fmt_double(s.stderr_error);
    out += ',' + fmt_double(s.mean_error);
    out += '\n';
  }
  return out;
}

void emit_results_csv(const ExperimentResults& results, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_results_csv: cannot open " + path);
  f << results_to_csv(results);
  if (!f) throw std::runtime_error("emit_results_csv: write failed for " + path);
}

std::string results_to_json(const ExperimentResults& results) {
  if (results.runs.empty()) throw std::invalid_argument("results_to_json: empty results");
  nlohmann::ordered_json j;
  j["dim"] = results.dim;
  j["sigma"] = results.sigma;
  j["budget"] = results.budget;
  j["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : results.runs) {
    nlohmann::ordered_json row;
    row["algorithm"] = r.algorithm;
    row["seed"] = r.seed;
    row["dim"] = r.dim;
    row["sigma"] = r.sigma;
    row["budget"] = r.budget;
    row["tau"] = r.tau;
    row["measurements"] = r.measurements;
    row["param_error"] = r.param_error;
    if (!r.error_trajectory.empty()) {
      auto traj = nlohmann::ordered_json::array();
      for (const auto& [calls, err] : r.error_trajectory) traj.push_back({calls, err});
      row["error_trajectory"] = std::move(traj);
    }
    j["runs"].push_back(std::move(row));
  }
  j["summary"] = nlohmann::ordered_json::array();
  for (const auto& s : results.summaries)
    j["summary"].push_back({{"algorithm", s.algorithm},
                            {"replications", s.replications},
                            {"mean", s.mean_error},
                            {"stderr", s.stderr_error}});
  return j.dump(2) + "\n";
}

void emit_results_json(const ExperimentResults& results, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_results_json: cannot open " + path);
  f << results_to_json(results);
  if (!f) throw std::runtime_error("emit_results_json: write failed for " + path);
}

ExperimentResults parse_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line) || line != "algorithm,seed,dim,sigma,budget,tau,measurements,param_error")
    throw std::invalid_argument("parse_csv: missing or malformed header");

  ExperimentResults out;
  bool first = true;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) throw std::invalid_argument("parse_csv: expected 8 fields: " + line);
    if (f[1] == "summary") {
      AlgorithmSummary s;
      s.algorithm = f[0];
      s.replications = std::stoi(f[5]);
      s.stderr_error = std::stod(f[6]);
      s.mean_error = std::stod(f[7]);
      out.summaries.push_back(std::move(s));
      continue;
    }
    RunResult r;
    r.algorithm = f[0];
    r.seed = std::stoull(f[1]);
    r.dim = std::stoi(f[2]);
    r.sigma = std::stod(f[3]);
    r.budget = std::stoll(f[4]);
    r.tau = std::stoll(f[5]);
    r.measurements = std::stoll(f[6]);
    r.param_error = std::stod(f[7]);
    if (first) {
      out.dim = r.dim;
      out.sigma = r.sigma;
      out.budget = r.budget;
      first = false;
    }
    out.runs.push_back(std::move(r));
  }
  return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_slope: need at least two matched points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_slope: degenerate abscissa");
  return sxy / sxx;
}

RateDiagnostics rate_diagnostics_thm3(const Thm3Config& cfg) {
  const Objective obj = make_quadratic(cfg.dim);
  const Matrix h_star = obj.hess_clean(obj.x0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h_star);
  const double mu = es.eigenvalues().minCoeff();
  if (!(mu * cfg.c > 0.5))
    throw std::domain_error("rate_diagnostics_thm3: requires mu * c > 1/2");
  if (!(cfg.delta > 0.0)) throw std::domain_error("rate_diagnostics_thm3: delta must be > 0");

  RateDiagnostics d;
  d.kind = RateKind::thm3;
  d.mu = mu;
  d.c = cfg.c;
  d.delta0 = cfg.delta;
  d.delta_exp = 0.0;

  Schedules sched;
  sched.a_of = [c = cfg.c](std::int64_t n) { return c / static_cast<double>(n); };
  sched.delta_of = [delta = cfg.delta](std::int64_t) { return delta; };
  sched.b_of = [](std::int64_t) { return 0.0; };

  d.gamma.reserve(static_cast<std::size_t>(cfg.n_max));
  double acc = 0.0;
  for (std::int64_t n = 1; n <= cfg.n_max; ++n) {
    acc += sched.a_of(n);
    d.gamma.push_back(acc);
  }

  const std::int64_t budget = cfg.n_max * 2 * cfg.dim;
  std::vector<std::vector<double>> sq_err(static_cast<std::size_t>(cfg.replications));
  parallel_for(cfg.replications, cfg.threads, [&](std::int64_t rep) {
    FirstOrderOptions opts;
    opts.record_trajectory = true;
    const std::uint64_t seed = cfg.base_seed ^ static_cast<std::uint64_t>(rep);
    const OptimRun run = run_first_order(obj, cfg.sigma, FirstOrderAlgo::perm_dp, sched,
                                         BoxProjection{}, budget, seed, opts);
    auto& errs = sq_err[static_cast<std::size_t>(rep)];
    errs.reserve(run.trajectory.size());
    for (const auto& [calls, x] : run.trajectory) errs.push_back((x - obj.x_star).squaredNorm());
  });

  const std::size_t n_updates = sq_err.front().size();
  std::vector<double> log_n, log_rms;
  for (std::size_t i = 0; i < n_updates; ++i) {
    double mean = 0.0;
    for (const auto& errs : sq_err) mean += errs[i];
    mean /= static_cast<double>(cfg.replications);
    const std::int64_t n = static_cast<std::int64_t>(i) + 1;
    const double rms = std::sqrt(mean);
    d.n_values.push_back(n);
    d.mean_error.push_back(rms);
    if (n >= cfg.n_fit_min) {
      log_n.push_back(std::log(static_cast<double>(n)));
      log_rms.push_back(std::log(rms));
    }
  }
  d.log_series = log_rms;
  d.slope = fit_slope(log_n, log_rms);
  d.slope_expected = -0.5;
  return d;
}

RateDiagnostics rate_diagnostics_thm5(const Thm5Config& cfg) {
  const Objective obj = make_quadratic(cfg.dim);
  const Matrix h_star = obj.hess_clean(obj.x0);

  RateDiagnostics d;
  d.kind = RateKind::thm5;
  d.b0 = cfg.b0;
  d.r = cfg.r;
  d.delta0 = 3.8;
  d.delta_exp = 0.101;
  d.slope_expected = -2.0 * cfg.b0 / (1.0 - cfg.r);

  const Schedules sched = make_second_order_schedules(
      SecondOrderScheduleParams{.b0 = cfg.b0, .r = cfg.r});

  MeasurementOracle oracle(obj, 0.0, 0);
  Matrix h_bar = Matrix::Identity(cfg.dim, cfg.dim);
  const double trace0 = (h_bar - h_star).squaredNorm();

  std::vector<double> x_fit, y_fit;
  double log_product = 0.0;  // sum over factors with 1 - b_k > 0
  double linear_product = 1.0;
  for (std::int64_t n = 1; n <= cfg.n_max; ++n) {
    const double b_n = sched.b_of(n);
    const HessianEstimate est = hess_lex_dp(oracle, obj.x0, sched.delta_of, n);
    d.max_hess_deviation =
        std::max(d.max_hess_deviation, (est.matrix - h_star).norm());
    h_bar = (1.0 - b_n) * h_bar + b_n * est.matrix;
    const double trace = (h_bar - h_star).squaredNorm();

    linear_product *= (1.0 - b_n) * (1.0 - b_n);
    if (1.0 - b_n > 0.0) log_product += 2.0 * std::log1p(-b_n);
    d.n_values.push_back(n);
    d.lambda_trace.push_back(trace);
    d.closed_product.push_back(linear_product * trace0);
    d.max_trace_mismatch =
        std::max(d.max_trace_mismatch, std::abs(trace - linear_product * trace0));
    if (n >= cfg.n_fit_min) {
      x_fit.push_back(std::pow(static_cast<double>(n), 1.0 - cfg.r));
      y_fit.push_back(log_product + std::log(trace0));
    }
  }
  d.log_series = y_fit;
  d.slope = fit_slope(x_fit, y_fit);
  return d;
}

}  // namespace rdsa
