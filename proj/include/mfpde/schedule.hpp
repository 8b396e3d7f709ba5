#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mfpde/empirical.hpp"
#include "mfpde/rng.hpp"

namespace mfpde {

// Sampling target with analytic moments; inv_cdf is present for d = 1
// targets and enables the quantile construction and the exact distance
// quadrature.
struct TargetDistribution {
  std::string name;
  Eigen::Index dim = 1;
  double mean = 0;
  double variance = 0;
  std::function<Eigen::VectorXd(GaussianStream&)> sampler;
  std::function<double(double)> inv_cdf;  // null when unavailable
};

TargetDistribution gaussian_target(double mean, double sd);
TargetDistribution uniform_target(double a, double b);
TargetDistribution point_target(double c);
// "gaussian:m,sd" | "uniform:a,b" | "point:c"
TargetDistribution target_by_name(const std::string& description);

// Deterministic schedule of initial configurations whose empirical measures
// converge to the target. "quantile" (d = 1) places atoms at the
// (i - 1/2)/N quantiles; "iid" draws seeded samples.
struct InitialDataSchedule {
  TargetDistribution target;
  std::string method = "quantile";  // "quantile" | "iid"
  std::vector<Eigen::Index> Ns;
  std::uint64_t seed = 0;
};

struct InitialDataRow {
  Eigen::MatrixXd points;  // d x N
  double w2_to_target = 0;
};

// Exact squared-distance integral between the step quantile function of a
// sorted 1-d cloud and the target quantile function, by per-cell
// Gauss-Legendre quadrature.
double w2_quantile_quadrature(const Eigen::VectorXd& sorted_points,
                              const std::function<double(double)>& inv_cdf,
                              int nodes_per_cell = 32);

// Builds the configurations and records the distance-to-target proxies
// (exact quadrature for d = 1; assignment against a replicated reference
// cloud for d > 1). For the quantile method the recorded distances must be
// nonincreasing in N; violation throws.
std::vector<InitialDataRow> build_initial_data(const InitialDataSchedule& schedule);

}  // namespace mfpde
