#pragma once

#include <optional>
#include <string>

#include "mfpde/dynamics.hpp"
#include "mfpde/lq.hpp"
#include "mfpde/operators.hpp"

namespace mfpde {

// ---- operator presets (lift-check and operator-level experiments) ----

// Pinned LQ instance shared by the solvers and the experiment lab.
LQSpec lq_preset();

// HJB operator of the pinned LQ instance on its action grid.
HJBSpec hjb_lq_operator();

// Bounded trigonometric coefficients; satisfies the uniform bound honestly.
HJBSpec hjb_bounded_operator();

// Two-player bilinear reward f = a1 a2 with b = sigma = 0 and {-1, 1} grids.
IsaacsSpec isaacs_bilinear_operator();

// Uncontrolled mean-reverting generator pieces.
UncontrolledDrift ou_drift(double kappa);
UncontrolledDiffusion constant_diffusion(double sigma0);

// Seeded random bounded HJB coefficient spec (trigonometric in x, the
// action, the sample mean and t), for the operator identity suites.
HJBSpec random_hjb_spec(std::uint64_t seed, Eigen::Index dim, Eigen::Index action_count,
                        Eigen::Index action_dim = 1);

// ---- experiment presets (simulation lab) ----

// Named problem with the analytic data the lab needs. When gaussian_limit is
// set and the initial law is Gaussian or a point mass with moments (m0, v0),
// the McKean-Vlasov terminal law is N(limit_mean(m0), limit_variance(v0)).
struct ExperimentPreset {
  std::string name;
  MKVProblemSpec problem;
  bool gaussian_limit = false;
  std::function<double(double)> limit_mean;
  std::function<double(double)> limit_variance;
  std::optional<LQSpec> lq;
};

// "ou" | "lq" | "bounded_drift" | "heat"
ExperimentPreset experiment_preset(const std::string& name);

}  // namespace mfpde
