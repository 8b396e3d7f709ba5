#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mfpde/empirical.hpp"

namespace mfpde {

// Gradient-type and Hessian-type fields fed to a mean-field operator.
// growth_constant records C in |Z(x)| + |Gamma(x)| <= C (1 + |x|^2).
struct SpatialFields {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> Z;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> Gamma;
  double growth_constant = 0;
};

// Operator F(t, mu, y, Z, Gamma) evaluated at empirical measures. Locality:
// the value may depend on the fields only through their restriction to the
// atoms of mu.
struct MeanFieldOperator {
  std::function<double(double, const EmpiricalMeasure&, double, const SpatialFields&)> eval;
  std::string name;

  double operator()(double t, const EmpiricalMeasure& mu, double y,
                    const SpatialFields& fields) const {
    return eval(t, mu, y, fields);
  }
};

using DriftCoefficient = std::function<Eigen::VectorXd(
    double, const Eigen::VectorXd&, const EmpiricalMeasure&, const Eigen::VectorXd&)>;
using DiffusionCoefficient = std::function<Eigen::MatrixXd(
    double, const Eigen::VectorXd&, const EmpiricalMeasure&, const Eigen::VectorXd&)>;
using RunningReward = std::function<double(
    double, const Eigen::VectorXd&, const EmpiricalMeasure&, const Eigen::VectorXd&)>;
using TerminalReward = std::function<double(const EmpiricalMeasure&)>;

// Controlled coefficients (b, sigma, f, g) with a finite action grid, the
// uniform characteristic bound L and the horizon T.
struct HJBSpec {
  DriftCoefficient b;
  DiffusionCoefficient sigma;
  RunningReward f;
  TerminalReward g;
  std::vector<Eigen::VectorXd> actions;
  double L = 0;
  double T = 1;
};

// Two-player version; coefficients take (a1, a2) stacked grids.
struct IsaacsSpec {
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&, const EmpiricalMeasure&,
                                const Eigen::VectorXd&, const Eigen::VectorXd&)>
      b;
  std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&, const EmpiricalMeasure&,
                                const Eigen::VectorXd&, const Eigen::VectorXd&)>
      sigma;
  std::function<double(double, const Eigen::VectorXd&, const EmpiricalMeasure&,
                       const Eigen::VectorXd&, const Eigen::VectorXd&)>
      f;
  TerminalReward g;
  std::vector<Eigen::VectorXd> actions1;
  std::vector<Eigen::VectorXd> actions2;
  double L = 0;
  double T = 1;
};

// <mu, sup_a { b.Z + (1/2) sigma sigma^T : Gamma + f }> over the atoms of mu.
// Ties in the sup resolve to the first grid index.
double eval_hjb(const HJBSpec& spec, double t, const EmpiricalMeasure& mu,
                const SpatialFields& fields);

// <mu, inf_{a2} sup_{a1} { b.Z + (1/2) sigma sigma^T : Gamma + f }>, the
// inner sup computed before the outer inf, per atom.
double eval_isaacs(const IsaacsSpec& spec, double t, const EmpiricalMeasure& mu,
                   const SpatialFields& fields);

using UncontrolledDrift =
    std::function<Eigen::VectorXd(double, const Eigen::VectorXd&, const EmpiricalMeasure&)>;
using UncontrolledDiffusion =
    std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&, const EmpiricalMeasure&)>;

// <mu, b.Z + (1/2) sigma sigma^T : Gamma>, the generator of the uncontrolled
// dynamics applied through the fields.
double eval_linear_generator(const UncontrolledDrift& b, const UncontrolledDiffusion& sigma,
                             double t, const EmpiricalMeasure& mu, const SpatialFields& fields);

// Finite-dimensional projection of a mean-field operator: the fields are the
// scaled indicator fields N z . 1_x and N gamma . 1_x, defined only on the
// atom set and zero elsewhere. The indicator construction is ambiguous when
// two coincident particles carry different (z, gamma), so such inputs are
// rejected.
class LiftedOperator {
 public:
  LiftedOperator(MeanFieldOperator op, Eigen::Index particles)
      : op_(std::move(op)), particles_(particles) {}

  double operator()(double t, const Eigen::MatrixXd& x, double y, const Eigen::MatrixXd& z,
                    const std::vector<Eigen::MatrixXd>& gamma) const;

  const MeanFieldOperator& base() const { return op_; }

 private:
  MeanFieldOperator op_;
  Eigen::Index particles_;
};

inline LiftedOperator lift_operator(MeanFieldOperator op, Eigen::Index particles) {
  return LiftedOperator(std::move(op), particles);
}

// The N-particle Hamiltonian sum_i max_a { b(t,x_i,mu,a).z_i
// + (1/2) sigma sigma^T : gamma_i + f(t,x_i,mu,a)/N }, in the per-particle
// value normalization used throughout (terminal data g(mu^N), running reward
// averaged over particles). Coincides with the lifted HJB operator.
double hjb_lift_closed_form(const HJBSpec& spec, double t, const Eigen::MatrixXd& x,
                            const Eigen::MatrixXd& z, const std::vector<Eigen::MatrixXd>& gamma);

MeanFieldOperator make_hjb_operator(HJBSpec spec, std::string name = "hjb");
MeanFieldOperator make_isaacs_operator(IsaacsSpec spec, std::string name = "isaacs");
MeanFieldOperator make_linear_operator(UncontrolledDrift b, UncontrolledDiffusion sigma,
                                       std::string name = "linear");

}  // namespace mfpde
