#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

namespace mfpde {

// Twice-differentiable scalar field on R^d with caller-supplied analytic
// derivatives. `bound` records the sup-norm bound on the value and both
// derivatives; it is checked by sampled assertion, not proof.
struct SmoothScalarField {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
  double bound = 0;
  bool analytic_derivatives = true;  // false for the finite-difference fallback

  double operator()(const Eigen::VectorXd& x) const { return value(x); }
};

// Fallback for fields given only by their value; derivatives are central
// differences with the given step. Flagged, since oracle tests require exact
// derivatives.
SmoothScalarField make_numeric_field(std::function<double(const Eigen::VectorXd&)> value,
                                     double bound, double step = 1e-5);

SmoothScalarField scale_field(const SmoothScalarField& f, double c);

// Named fields addressable from CLI configs: "quadratic", "gauss_bump",
// "cos", "linear".
SmoothScalarField field_by_name(const std::string& name);
std::vector<std::string> field_names();

// max over sample points of |f|, |grad f|_inf, |hess f|_inf against f.bound
bool check_field_bound(const SmoothScalarField& f, const Eigen::MatrixXd& sample_points);

}  // namespace mfpde
