#pragma once

#include <vector>

#include "mfpde/empirical.hpp"
#include "mfpde/fields.hpp"

namespace mfpde {

// Test function on Wasserstein space, affine in time and linear in the
// measure: (s, nu) -> v + a (s - anchor_t) + <nu - anchor_mu, f>.
struct Semijet {
  double v = 0;         // value at the anchor
  double a = 0;         // time slope
  SmoothScalarField f;  // measure direction
  double anchor_t = 0;
  EmpiricalMeasure anchor_mu;
};

double semijet_eval(const Semijet& psi, double s, const EmpiricalMeasure& nu);

// The projection phi(s, x) = psi(s, mu^N(x)) of a semijet onto particle
// configurations x in R^{d x N}.
struct LiftedTestFunction {
  Semijet base;
  Eigen::Index particles = 0;

  double operator()(double s, const Eigen::MatrixXd& x) const {
    return semijet_eval(base, s, EmpiricalMeasure(x));
  }
};

struct LiftPartials {
  double dt = 0;
  Eigen::MatrixXd grad;                 // d x N
  std::vector<Eigen::MatrixXd> hess_diag;  // N symmetric d x d blocks
};

// Closed-form partial derivatives of the projected test function:
// dt = a, grad_i = f'(x_i)/N, hess_diag_i = f''(x_i)/N. No numerical
// differentiation happens here.
LiftPartials lift_partials(const LiftedTestFunction& phi, double s, const Eigen::MatrixXd& x);

// Central-difference oracle for lift_partials, differentiating the scalar
// map (s, x) -> phi(s, x) directly.
LiftPartials finite_diff_partials(const LiftedTestFunction& phi, double s,
                                  const Eigen::MatrixXd& x, double h);

// Residual of the linear-derivative identity for the cylinder function
// u(mu) = <mu, f>, whose measure derivative is f itself. The lambda-integral
// is evaluated by quadrature; for cylinder functions the integrand is
// constant, so the residual is pure rounding noise.
double functional_derivative_check(const SmoothScalarField& f, const EmpiricalMeasure& mu,
                                   const EmpiricalMeasure& nu, int quadrature_nodes = 16);

}  // namespace mfpde
