#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mfpde/operators.hpp"
#include "mfpde/rng.hpp"

namespace mfpde {

// Controlled interacting-particle problem data: HJB coefficients plus the
// Euler step. T/dt must be integral.
struct MKVProblemSpec {
  DriftCoefficient b;
  DiffusionCoefficient sigma;
  RunningReward f;
  TerminalReward g;
  std::vector<Eigen::VectorXd> actions;
  double L = 0;
  double T = 1;
  double dt = 1e-2;
};

// Symmetric feedback applied per particle. Must return grid actions only.
struct ControlPolicy {
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&, const EmpiricalMeasure&)> act;
};

ControlPolicy zero_policy(Eigen::Index action_dim = 1);

// Euler trajectory of the N-particle system with per-step characteristic
// records. states[k] is the d x N configuration at time k dt.
struct PathBundle {
  Eigen::VectorXd times;
  std::vector<Eigen::MatrixXd> states;
  Eigen::VectorXd drift_sup;  // max |b| component over particles, per step
  Eigen::VectorXd diff_sup;   // max |sigma| component over particles, per step
  // left-endpoint Riemann sum of (1/N) sum_i f(t, X^i, mu, a^i) dt when the
  // spec carries a running reward, 0 otherwise
  double running_reward = 0;
  std::uint64_t seed = 0;
};

// Euler–Maruyama with one independent Gaussian stream per particle, derived
// from the master seed by a counter split keyed on stream_ids (defaults to
// the particle index), so growing the ensemble never reshuffles the noise of
// existing particles. Throws if |b| or |sigma| exceeds spec.L componentwise
// at any evaluated point.
PathBundle simulate_nparticle(const MKVProblemSpec& spec, const ControlPolicy& policy,
                              const Eigen::MatrixXd& x0, std::uint64_t seed,
                              const std::vector<std::uint64_t>& stream_ids = {});

// Terminal empirical measure of a large-M reference system, a surrogate for
// the McKean–Vlasov law. For presets with an exact terminal sampler prefer
// that sampler (see presets.hpp); this one carries Euler and finite-M bias.
EmpiricalMeasure simulate_limit_law(
    const MKVProblemSpec& spec, const ControlPolicy& policy,
    const std::function<Eigen::VectorXd(GaussianStream&)>& mu0_sampler, Eigen::Index M,
    std::uint64_t seed);

struct CharacteristicsReport {
  double max_drift = 0;
  double max_diff = 0;
  bool within_bound = true;
};

// Report-only scan of the recorded per-step characteristic magnitudes.
CharacteristicsReport check_characteristics(const PathBundle& bundle, double L);

}  // namespace mfpde
