#pragma once

#include <Eigen/Core>

#include "mfpde/dynamics.hpp"

namespace mfpde {

// Linear-quadratic mean-field problem in d = 1:
//   drift      b = a + kappa (mean(mu) - x)
//   volatility sigma0 (constant)
//   running    f = -(q x^2 + r a^2)
//   terminal   g(mu) = -c <mu, (x - mean(mu))^2>
// Actions live in the box [-a_max, a_max]; parameters must keep the optimal
// feedback strictly interior (asserted post-solve over the confinement
// radius below).
struct LQSpec {
  double kappa = 0;
  double sigma0 = 0;
  double q = 0;
  double r = 1;
  double c = 0;
  double a_max = 4;
  double T = 1;
  double state_radius = 4;  // confinement radius used for the interiority and L assertions
};

// Quadratic value ansatz V(t, mu) = Q(t) mean^2 + P(t) var + S(t), with
//   Q' = q - Q^2 / r,            Q(T) = 0   (mean block)
//   P' = q + 2 kappa P - P^2/r,  P(T) = -c  (fluctuation block)
//   S' = -sigma0^2 P,            S(T) = 0
// integrated backward by fixed-step RK4. qp_integral(t) stores
// int_t^T (Q - P) ds, the only N-dependent piece of the particle value.
class RiccatiSolution {
 public:
  RiccatiSolution(const LQSpec& spec, Eigen::VectorXd times, Eigen::MatrixXd states);

  double value_at(double t, double mean, double variance) const;

  double mean_coeff(double t) const { return interp(0, t); }       // Q
  double variance_coeff(double t) const { return interp(1, t); }   // P
  double constant_coeff(double t) const { return interp(2, t); }   // S
  double qp_integral(double t) const { return interp(3, t); }

  // optimal feedback a*(t, x, mu) = mean_gain(t) mean + deviation_gain(t) (x - mean)
  double mean_gain(double t) const;
  double deviation_gain(double t) const;

  double max_residual() const { return max_residual_; }
  const Eigen::VectorXd& times() const { return times_; }
  const LQSpec& spec() const { return spec_; }

 private:
  double interp(int row, double t) const;  // cubic Hermite using the ODE slope

  LQSpec spec_;
  Eigen::VectorXd times_;
  Eigen::MatrixXd states_;  // rows (Q, P, S, I), one column per grid time
  double max_residual_ = 0;
};

// Integrates the Riccati system. Throws on blow-up before t = 0, on residual
// above 1e-8, or when the optimal feedback escapes the action box over the
// confinement radius.
RiccatiSolution solve_lq_meanfield(const LQSpec& spec, Eigen::Index grid_steps = 4000);

// Per-particle value of the N-particle problem started from x0 (1 x N):
//   V^N/N = Q(0) xbar^2 + P(0) vhat + S(0) + (sigma0^2 / N) int_0^T (Q - P),
// with xbar, vhat the sample mean and population variance of x0. The raw
// particle-sum value of the problem is N times this number.
double solve_vn_lq(const LQSpec& spec, Eigen::Index N, const Eigen::MatrixXd& x0,
                   Eigen::Index grid_steps = 4000);

// Same evaluation from precomputed Riccati data.
double vn_lq_from_solution(const RiccatiSolution& sol, Eigen::Index N, double sample_mean,
                           double sample_variance);

// Controlled-coefficient view of the LQ problem for the simulators. Actions
// form a uniform grid of n_actions points on [-a_max, a_max]; L is derived
// from the box and the confinement radius.
MKVProblemSpec lq_problem(const LQSpec& spec, Eigen::Index n_actions = 801, double dt = 1e-3);

// Riccati feedback snapped to the action grid of `problem`.
ControlPolicy lq_riccati_policy(const RiccatiSolution& sol, const MKVProblemSpec& problem);

// Riccati feedback scaled by `gain_scale` (1 = optimal), for policy-search
// families around the optimum.
ControlPolicy lq_scaled_policy(const RiccatiSolution& sol, const MKVProblemSpec& problem,
                               double gain_scale);

}  // namespace mfpde
