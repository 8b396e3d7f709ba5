#include "mfpde/lq.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "mfpde/empirical.hpp"

namespace mfpde {

namespace {

using State = Eigen::Vector4d;  // (Q, P, S, I)

State rhs(const LQSpec& spec, const State& y) {
  State dy;
  dy(0) = spec.q - y(0) * y(0) / spec.r;
  dy(1) = spec.q + 2.0 * spec.kappa * y(1) - y(1) * y(1) / spec.r;
  dy(2) = -spec.sigma0 * spec.sigma0 * y(1);
  dy(3) = -(y(0) - y(1));
  return dy;
}

}  // namespace

RiccatiSolution::RiccatiSolution(const LQSpec& spec, Eigen::VectorXd times, Eigen::MatrixXd states)
    : spec_(spec), times_(std::move(times)), states_(std::move(states)) {
  // re-substitution residual: 5-point central difference vs the ODE right side
  const Eigen::Index m = times_.size();
  const double h = times_(1) - times_(0);
  double worst = 0;
  for (Eigen::Index k = 2; k + 2 < m; ++k) {
    const State fd = (-states_.col(k + 2) + 8 * states_.col(k + 1) - 8 * states_.col(k - 1) +
                      states_.col(k - 2)) /
                     (12 * h);
    const State want = rhs(spec_, states_.col(k));
    worst = std::max(worst, (fd - want).cwiseAbs().maxCoeff());
  }
  max_residual_ = worst;
}

double RiccatiSolution::interp(int row, double t) const {
  const Eigen::Index m = times_.size();
  const double t0 = times_(0), t1 = times_(m - 1);
  if (t < t0 - 1e-12 || t > t1 + 1e-12)
    throw std::invalid_argument("RiccatiSolution: time outside the solved horizon");
  const double h = times_(1) - times_(0);
  Eigen::Index k = static_cast<Eigen::Index>(std::floor((t - t0) / h));
  k = std::max<Eigen::Index>(0, std::min(k, m - 2));
  const double u = (t - times_(k)) / h;
  // cubic Hermite; the slopes are exact from the ODE
  const State ya = states_.col(k), yb = states_.col(k + 1);
  const State fa = rhs(spec_, ya), fb = rhs(spec_, yb);
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
  return h00 * ya(row) + h * h10 * fa(row) + h01 * yb(row) + h * h11 * fb(row);
}

double RiccatiSolution::value_at(double t, double mean, double variance) const {
  return mean_coeff(t) * mean * mean + variance_coeff(t) * variance + constant_coeff(t);
}

double RiccatiSolution::mean_gain(double t) const { return mean_coeff(t) / spec_.r; }
double RiccatiSolution::deviation_gain(double t) const { return variance_coeff(t) / spec_.r; }

RiccatiSolution solve_lq_meanfield(const LQSpec& spec, Eigen::Index grid_steps) {
  if (spec.r <= 0) throw std::invalid_argument("solve_lq_meanfield: r must be positive");
  if (spec.q < 0 || spec.c < 0) throw std::invalid_argument("solve_lq_meanfield: q, c must be nonnegative");
  if (spec.T <= 0 || grid_steps < 8) throw std::invalid_argument("solve_lq_meanfield: bad horizon or grid");

  const Eigen::Index m = grid_steps + 1;
  Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(m, 0.0, spec.T);
  Eigen::MatrixXd states(4, m);

  const double h = -spec.T / static_cast<double>(grid_steps);  // backward
  State y;
  y << 0.0, -spec.c, 0.0, 0.0;
  states.col(m - 1) = y;
  for (Eigen::Index k = m - 1; k > 0; --k) {
    const State k1 = rhs(spec, y);
    const State k2 = rhs(spec, y + 0.5 * h * k1);
    const State k3 = rhs(spec, y + 0.5 * h * k2);
    const State k4 = rhs(spec, y + h * k3);
    y += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!y.allFinite() || y.cwiseAbs().maxCoeff() > 1e8)
      throw std::runtime_error("solve_lq_meanfield: Riccati blow-up before t=0; parameters rejected");
    states.col(k - 1) = y;
  }

  RiccatiSolution sol(spec, std::move(times), std::move(states));
  if (sol.max_residual() > 1e-8)
    throw std::runtime_error("solve_lq_meanfield: Riccati residual above 1e-8");

  // interiority of the optimal feedback over the confinement radius
  double gain = 0;
  for (Eigen::Index k = 0; k < sol.times().size(); ++k) {
    const double t = sol.times()(k);
    gain = std::max(gain, std::abs(sol.mean_gain(t)) + std::abs(sol.deviation_gain(t)) * 2.0);
  }
  if (gain * spec.state_radius >= spec.a_max)
    throw std::runtime_error("solve_lq_meanfield: optimal feedback leaves the action box");
  return sol;
}

double vn_lq_from_solution(const RiccatiSolution& sol, Eigen::Index N, double sample_mean,
                           double sample_variance) {
  if (N < 1) throw std::invalid_argument("vn_lq: N must be positive");
  const LQSpec& spec = sol.spec();
  const double s_extra = spec.sigma0 * spec.sigma0 / static_cast<double>(N) * sol.qp_integral(0.0);
  return sol.value_at(0.0, sample_mean, sample_variance) + s_extra;
}

double solve_vn_lq(const LQSpec& spec, Eigen::Index N, const Eigen::MatrixXd& x0,
                   Eigen::Index grid_steps) {
  if (x0.rows() != 1 || x0.cols() != N)
    throw std::invalid_argument("solve_vn_lq: x0 must be 1 x N");
  const RiccatiSolution sol = solve_lq_meanfield(spec, grid_steps);
  const EmpiricalMeasure mu(x0);
  return vn_lq_from_solution(sol, N, mu.mean()(0), variance(mu));
}

MKVProblemSpec lq_problem(const LQSpec& spec, Eigen::Index n_actions, double dt) {
  if (n_actions < 2) throw std::invalid_argument("lq_problem: need at least two actions");
  MKVProblemSpec p;
  const double kappa = spec.kappa, q = spec.q, r = spec.r, c = spec.c, sigma0 = spec.sigma0;
  p.b = [kappa](double, const Eigen::VectorXd& x, const EmpiricalMeasure& mu,
                const Eigen::VectorXd& a) -> Eigen::VectorXd {
    Eigen::VectorXd out(1);
    out(0) = a(0) + kappa * (mu.mean()(0) - x(0));
    return out;
  };
  p.sigma = [sigma0](double, const Eigen::VectorXd&, const EmpiricalMeasure&,
                     const Eigen::VectorXd&) -> Eigen::MatrixXd {
    Eigen::MatrixXd s(1, 1);
    s(0, 0) = sigma0;
    return s;
  };
  p.f = [q, r](double, const Eigen::VectorXd& x, const EmpiricalMeasure&,
               const Eigen::VectorXd& a) { return -(q * x(0) * x(0) + r * a(0) * a(0)); };
  p.g = [c](const EmpiricalMeasure& mu) { return -c * variance(mu); };
  p.actions.reserve(static_cast<std::size_t>(n_actions));
  for (Eigen::Index k = 0; k < n_actions; ++k) {
    Eigen::VectorXd a(1);
    a(0) = -spec.a_max + 2.0 * spec.a_max * static_cast<double>(k) /
                             static_cast<double>(n_actions - 1);
    p.actions.push_back(a);
  }
  p.L = spec.a_max + 2.0 * spec.kappa * spec.state_radius + 1.0;
  if (spec.sigma0 > p.L) p.L = spec.sigma0 + 1.0;
  p.T = spec.T;
  p.dt = dt;
  return p;
}

namespace {

ControlPolicy snapped_linear_policy(const RiccatiSolution& sol, const MKVProblemSpec& problem,
                                    double gain_scale) {
  const double a_lo = problem.actions.front()(0);
  const double a_hi = problem.actions.back()(0);
  const double mesh = (a_hi - a_lo) / static_cast<double>(problem.actions.size() - 1);
  // copy the coefficient trajectories; the policy must outlive the solution
  auto sol_copy = std::make_shared<RiccatiSolution>(sol);
  ControlPolicy pol;
  pol.act = [sol_copy, a_lo, a_hi, mesh, gain_scale](
                double t, const Eigen::VectorXd& x, const EmpiricalMeasure& mu) -> Eigen::VectorXd {
    const double m = mu.mean()(0);
    double a = gain_scale *
               (sol_copy->mean_gain(t) * m + sol_copy->deviation_gain(t) * (x(0) - m));
    a = std::min(a_hi, std::max(a_lo, a));
    const double snapped = a_lo + mesh * std::round((a - a_lo) / mesh);
    Eigen::VectorXd out(1);
    out(0) = std::min(a_hi, std::max(a_lo, snapped));
    return out;
  };
  return pol;
}

}  // namespace

ControlPolicy lq_riccati_policy(const RiccatiSolution& sol, const MKVProblemSpec& problem) {
  return snapped_linear_policy(sol, problem, 1.0);
}

ControlPolicy lq_scaled_policy(const RiccatiSolution& sol, const MKVProblemSpec& problem,
                               double gain_scale) {
  return snapped_linear_policy(sol, problem, gain_scale);
}

}  // namespace mfpde
