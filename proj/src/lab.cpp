#include "mfpde/lab.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "mfpde/fields.hpp"
#include "mfpde/policy_search.hpp"

namespace mfpde {

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool moments_characterize_limit(const TargetDistribution& target) {
  return target.name.rfind("gaussian", 0) == 0 || target.name.rfind("point", 0) == 0;
}

// g(N(m, v)) for the supported terminal functionals
double gaussian_functional(const std::string& g_name, double m, double v) {
  if (g_name == "cos") return std::cos(m) * std::exp(-0.5 * v);
  if (g_name == "linear") return m;
  if (g_name == "one") return 1.0;
  throw std::invalid_argument("chaos: no analytic target for g '" + g_name + "'");
}

TerminalReward functional_by_name(const std::string& g_name) {
  if (g_name == "one") return [](const EmpiricalMeasure&) { return 1.0; };
  const SmoothScalarField f = field_by_name(g_name == "cos" ? "cos" : "linear");
  return [f](const EmpiricalMeasure& mu) {
    return mu.average([&](const auto& x) { return f.value(x); });
  };
}

}  // namespace

ConvergenceReport run_value_convergence(const ExperimentPreset& preset,
                                        const InitialDataSchedule& schedule,
                                        const ConvergenceOptions& options) {
  ConvergenceReport report;
  report.preset = preset.name;
  report.solver = options.solver;
  report.target = schedule.target.name;
  report.seed = options.seed;

  const auto rows_in = build_initial_data(schedule);

  if (options.solver == "riccati") {
    if (!preset.lq)
      throw std::invalid_argument("run_value_convergence: preset '" + preset.name +
                                  "' has no Riccati oracle");
    const RiccatiSolution sol = solve_lq_meanfield(*preset.lq);
    report.limit_value =
        sol.value_at(0.0, schedule.target.mean, schedule.target.variance);
    for (std::size_t k = 0; k < rows_in.size(); ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      ConvergenceRow row;
      row.N = schedule.Ns[k];
      const EmpiricalMeasure mu(rows_in[k].points);
      row.value = vn_lq_from_solution(sol, row.N, mu.mean()(0), variance(mu));
      row.std_error = 0;
      row.w2_proxy = rows_in[k].w2_to_target;
      row.gap = std::abs(row.value - report.limit_value);
      row.runtime_sec = seconds_since(t0);
      report.rows.push_back(row);
    }
  } else if (options.solver == "policy_mc") {
    MKVProblemSpec problem = preset.problem;
    ControlPolicy policy = zero_policy(problem.actions.front().size());
    if (preset.lq) {
      // search over scaled Riccati feedback, best member reported
      const RiccatiSolution sol = solve_lq_meanfield(*preset.lq);
      report.limit_value = sol.value_at(0.0, schedule.target.mean, schedule.target.variance);
      PolicyFamily family;
      for (const double s : {0.0, 0.5, 0.9, 1.0, 1.1, 1.5}) {
        family.members.push_back(lq_scaled_policy(sol, problem, s));
        family.labels.push_back("gain_scale=" + std::to_string(s));
      }
      for (std::size_t k = 0; k < rows_in.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto res = value_policy_search(problem, family, rows_in[k].points, options.reps,
                                             options.seed, options.jobs);
        ConvergenceRow row;
        row.N = schedule.Ns[k];
        row.value = res.best.mean;
        row.std_error = res.best.std_error;
        row.w2_proxy = rows_in[k].w2_to_target;
        row.gap = std::abs(row.value - report.limit_value);
        row.runtime_sec = seconds_since(t0);
        report.rows.push_back(row);
      }
    } else {
      if (!preset.gaussian_limit || !moments_characterize_limit(schedule.target))
        throw std::invalid_argument("run_value_convergence: no analytic limit for this preset/target");
      problem.g = functional_by_name(options.g_name);
      report.limit_value =
          gaussian_functional(options.g_name, preset.limit_mean(schedule.target.mean),
                              preset.limit_variance(schedule.target.variance));
      for (std::size_t k = 0; k < rows_in.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        const ValueEstimate est = evaluate_policy(problem, policy, rows_in[k].points,
                                                  options.reps, options.seed, options.jobs);
        ConvergenceRow row;
        row.N = schedule.Ns[k];
        row.value = est.mean;
        row.std_error = est.std_error;
        row.w2_proxy = rows_in[k].w2_to_target;
        row.gap = std::abs(row.value - report.limit_value);
        row.runtime_sec = seconds_since(t0);
        report.rows.push_back(row);
      }
    }
  } else {
    throw std::invalid_argument("run_value_convergence: unknown solver '" + options.solver + "'");
  }

  report.rate = fit_convergence_rate(report.rows);
  return report;
}

ChaosReport run_chaos_experiment(const ExperimentPreset& preset,
                                 const InitialDataSchedule& schedule,
                                 const ChaosOptions& options) {
  if (!preset.gaussian_limit)
    throw std::invalid_argument("run_chaos_experiment: preset '" + preset.name +
                                "' has no analytic limit law");
  if (!moments_characterize_limit(schedule.target))
    throw std::invalid_argument(
        "run_chaos_experiment: initial target '" + schedule.target.name +
        "' does not keep the limit law Gaussian");
  if (options.reps < 2) throw std::invalid_argument("run_chaos_experiment: reps must be >= 2");

  ChaosReport report;
  report.preset = preset.name;
  report.g_name = options.g_name;
  report.target = schedule.target.name;
  report.seed = options.seed;
  report.reps = options.reps;
  report.pilot_N = options.pilot_N;

  const double mT = preset.limit_mean(schedule.target.mean);
  const double vT = preset.limit_variance(schedule.target.variance);
  report.target_value = gaussian_functional(options.g_name, mT, vT);

  MKVProblemSpec problem = preset.problem;
  problem.g = functional_by_name(options.g_name);
  const ControlPolicy policy = zero_policy(problem.actions.front().size());

  const auto estimate_at = [&](Eigen::Index n, std::uint64_t seed,
                               Eigen::Index reps) -> ValueEstimate {
    InitialDataSchedule one = schedule;
    one.Ns = {n};
    one.seed = seed;
    const auto data = build_initial_data(one);
    return evaluate_policy(problem, policy, data[0].points, reps, seed, options.jobs);
  };

  // pilot batch fixes the bias budget coefficient C in C / sqrt(N)
  const ValueEstimate pilot =
      estimate_at(options.pilot_N, substream_seed(options.seed, 0x9110ULL), options.pilot_reps);
  const double pilot_bias = std::abs(pilot.mean - report.target_value);
  report.budget_coefficient =
      1.5 * std::sqrt(static_cast<double>(options.pilot_N)) * std::max(pilot_bias, pilot.std_error);

  for (std::size_t k = 0; k < schedule.Ns.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::Index n = schedule.Ns[k];
    const ValueEstimate est =
        estimate_at(n, substream_seed(options.seed, 0xc0deULL + static_cast<std::uint64_t>(k)),
                    options.reps);
    ChaosRow row;
    row.N = n;
    row.estimate = est.mean;
    row.std_error = est.std_error;
    row.bias = est.mean - report.target_value;
    row.budget = report.budget_coefficient / std::sqrt(static_cast<double>(n));
    row.pass = std::abs(row.bias) <= 3.0 * est.std_error + row.budget;
    row.runtime_sec = seconds_since(t0);
    report.rows.push_back(row);
  }
  return report;
}

SemilimitProxies estimate_semilimits(const std::vector<double>& values,
                                     std::ptrdiff_t tail_start) {
  if (values.size() < 3) throw std::invalid_argument("estimate_semilimits: need at least 3 rows");
  std::size_t start;
  if (tail_start < 0)
    start = values.size() / 2;
  else if (static_cast<std::size_t>(tail_start) >= values.size())
    throw std::invalid_argument("estimate_semilimits: tail start beyond the sequence");
  else
    start = static_cast<std::size_t>(tail_start);

  SemilimitProxies out;
  out.tail_start = start;
  out.liminf_proxy = values[start];
  out.limsup_proxy = values[start];
  for (std::size_t i = start; i < values.size(); ++i) {
    out.liminf_proxy = std::min(out.liminf_proxy, values[i]);
    out.limsup_proxy = std::max(out.limsup_proxy, values[i]);
  }
  return out;
}

RateFit fit_convergence_rate(const std::vector<ConvergenceRow>& rows) {
  // weighted least squares on log gap vs log N; SE-weighted when available
  std::vector<double> xs, ys, ws;
  for (const auto& r : rows) {
    if (r.gap <= 0 || r.N < 1) continue;
    xs.push_back(std::log(static_cast<double>(r.N)));
    ys.push_back(std::log(r.gap));
    const double se = std::max(r.std_error, 1e-12);
    // delta method: sd of log gap ~ se / gap
    const double sd_log = std::max(se / r.gap, 1e-6);
    ws.push_back(1.0 / (sd_log * sd_log));
  }
  RateFit fit;
  if (xs.size() < 4) return fit;

  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sw += ws[i];
    sx += ws[i] * xs[i];
    sy += ws[i] * ys[i];
    sxx += ws[i] * xs[i] * xs[i];
    sxy += ws[i] * xs[i] * ys[i];
  }
  const double det = sw * sxx - sx * sx;
  if (std::abs(det) < 1e-12) return fit;
  fit.slope = (sw * sxy - sx * sy) / det;
  fit.intercept = (sxx * sy - sx * sxy) / det;
  fit.slope_stderr = std::sqrt(sw / det);
  fit.valid = true;
  return fit;
}

}  // namespace mfpde
