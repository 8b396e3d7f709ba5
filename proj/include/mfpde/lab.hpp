#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfpde/presets.hpp"
#include "mfpde/schedule.hpp"

namespace mfpde {

struct ConvergenceRow {
  Eigen::Index N = 0;
  double value = 0;      // per-particle value V^N / N
  double std_error = 0;  // 0 for the Riccati route
  double w2_proxy = 0;
  double gap = 0;  // |value - limit_value|
  double runtime_sec = 0;
};

struct RateFit {
  bool valid = false;
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
};

struct ConvergenceReport {
  std::string preset;
  std::string solver;
  std::string target;
  std::uint64_t seed = 0;
  double limit_value = 0;  // V(0, mu_target)
  std::vector<ConvergenceRow> rows;
  RateFit rate;  // log gap vs log N, weighted; only with >= 4 usable rows
};

struct ConvergenceOptions {
  std::string solver = "riccati";  // "riccati" | "policy_mc"
  std::string g_name = "cos";      // terminal functional for uncontrolled presets
  Eigen::Index reps = 200;
  int jobs = 1;
  std::uint64_t seed = 0;
};

// Per-particle N-particle values along the schedule against the mean-field
// limit. The LQ preset uses Riccati integration on both sides; uncontrolled
// presets with a Gaussian limit law use Monte Carlo under the zero policy.
ConvergenceReport run_value_convergence(const ExperimentPreset& preset,
                                        const InitialDataSchedule& schedule,
                                        const ConvergenceOptions& options);

struct ChaosRow {
  Eigen::Index N = 0;
  double estimate = 0;
  double std_error = 0;
  double bias = 0;    // estimate - target
  double budget = 0;  // bias_budget(N) = C / sqrt(N)
  bool pass = false;  // |bias| <= 3 SE + budget
  double runtime_sec = 0;
};

struct ChaosReport {
  std::string preset;
  std::string g_name;
  std::string target;
  std::uint64_t seed = 0;
  double target_value = 0;  // g(limit law), analytic
  double budget_coefficient = 0;
  Eigen::Index pilot_N = 0;
  Eigen::Index reps = 0;
  std::vector<ChaosRow> rows;
};

struct ChaosOptions {
  std::string g_name = "cos";  // "cos" | "linear" | "one"
  Eigen::Index reps = 200;
  int jobs = 1;
  std::uint64_t seed = 0;
  Eigen::Index pilot_N = 8;
  Eigen::Index pilot_reps = 200;
};

// Monte Carlo estimates of E[g(mu^N(X_T))] against the analytic value on the
// limit law. Presets without an analytic limit law are rejected; so are
// initial targets that break Gaussianity of the limit. The bias budget
// coefficient C is fitted from a pilot batch at pilot_N and recorded.
ChaosReport run_chaos_experiment(const ExperimentPreset& preset,
                                 const InitialDataSchedule& schedule, const ChaosOptions& options);

struct SemilimitProxies {
  double liminf_proxy = 0;
  double limsup_proxy = 0;
  std::size_t tail_start = 0;
};

// Tail min/max of a finite value sequence; a diagnostic stand-in for the
// relaxed semi-limits, not a limit. Default tail is the second half.
SemilimitProxies estimate_semilimits(const std::vector<double>& values,
                                     std::ptrdiff_t tail_start = -1);

RateFit fit_convergence_rate(const std::vector<ConvergenceRow>& rows);

}  // namespace mfpde
