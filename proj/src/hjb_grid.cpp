#include "mfpde/hjb_grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mfpde {

double GridSolution::value_at(const Eigen::VectorXd& x) const {
  if (x.size() != arity_) throw std::invalid_argument("GridSolution: point arity mismatch");
  const Eigen::Index m = axis_.size();
  const double lo = axis_(0), h = axis_(1) - axis_(0);
  Eigen::Matrix<Eigen::Index, 2, 1> j0;
  Eigen::Vector2d w;
  for (Eigen::Index k = 0; k < arity_; ++k) {
    const double s = (x(k) - lo) / h;
    Eigen::Index j = static_cast<Eigen::Index>(std::floor(s));
    j = std::max<Eigen::Index>(0, std::min(j, m - 2));
    j0(k) = j;
    w(k) = std::min(1.0, std::max(0.0, s - static_cast<double>(j)));
  }
  if (arity_ == 1) return (1 - w(0)) * at(j0(0)) + w(0) * at(j0(0) + 1);
  return (1 - w(0)) * ((1 - w(1)) * at(j0(0), j0(1)) + w(1) * at(j0(0), j0(1) + 1)) +
         w(0) * ((1 - w(1)) * at(j0(0) + 1, j0(1)) + w(1) * at(j0(0) + 1, j0(1) + 1));
}

namespace {

struct Workspace {
  Eigen::Index m = 0;      // nodes per axis
  Eigen::Index arity = 0;  // N
  Eigen::VectorXd axis;
  double h = 0;
};

// per-node Hamiltonian contribution of one axis, with one-sided differences
// at the box edge and the running reward in the per-particle normalization
double axis_hamiltonian(const MKVProblemSpec& spec, double t, const EmpiricalMeasure& mu,
                        double x_i, double u0, double um, double up, bool at_lo, bool at_hi,
                        double h, double invn, double dt, bool& cfl_ok) {
  double best = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd xi(1);
  xi(0) = x_i;
  for (const auto& a : spec.actions) {
    const double b = spec.b(t, xi, mu, a)(0);
    const double s = spec.sigma(t, xi, mu, a)(0, 0);
    const double s2 = s * s;
    double drift;
    if (b >= 0)
      drift = at_hi ? b * (u0 - um) / h : b * (up - u0) / h;
    else
      drift = at_lo ? b * (up - u0) / h : b * (u0 - um) / h;
    const double diffusion = (at_lo || at_hi) ? 0.0 : 0.5 * s2 * (up - 2 * u0 + um) / (h * h);
    const double reward = spec.f ? invn * spec.f(t, xi, mu, a) : 0.0;
    if (dt * (std::abs(b) / h + s2 / (h * h)) > 1.0 + 1e-12) cfl_ok = false;
    const double val = drift + diffusion + reward;
    if (val > best) best = val;
  }
  return best;
}

double max_cfl_coefficient(const MKVProblemSpec& spec, const Workspace& ws) {
  double worst = 0;
  Eigen::VectorXd xi(1);
  Eigen::MatrixXd pts(1, ws.arity);
  const Eigen::Index total = ws.arity == 1 ? ws.m : ws.m * ws.m;
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    const Eigen::Index j1 = ws.arity == 1 ? flat : flat / ws.m;
    const Eigen::Index j2 = ws.arity == 1 ? 0 : flat % ws.m;
    pts(0, 0) = ws.axis(j1);
    if (ws.arity == 2) pts(0, 1) = ws.axis(j2);
    const EmpiricalMeasure mu(pts);
    double coef = 0;
    for (Eigen::Index ax = 0; ax < ws.arity; ++ax) {
      xi(0) = pts(0, ax);
      double axis_worst = 0;
      for (const auto& a : spec.actions) {
        const double b = std::abs(spec.b(0.0, xi, mu, a)(0));
        const double s = spec.sigma(0.0, xi, mu, a)(0, 0);
        axis_worst = std::max(axis_worst, b / ws.h + s * s / (ws.h * ws.h));
      }
      coef += axis_worst;
    }
    worst = std::max(worst, coef);
  }
  return worst;
}

}  // namespace

GridSolution solve_hjb_grid(const MKVProblemSpec& spec, Eigen::Index N, const GridConfig& cfg) {
  if (N < 1 || N > 2) throw std::invalid_argument("solve_hjb_grid: N must be 1 or 2 (N*d <= 2)");
  if (spec.actions.empty()) throw std::invalid_argument("solve_hjb_grid: empty action grid");
  if (cfg.nodes_per_axis < 5) throw std::invalid_argument("solve_hjb_grid: too few nodes");

  Workspace ws;
  ws.m = cfg.nodes_per_axis;
  ws.arity = N;
  ws.axis = Eigen::VectorXd::LinSpaced(ws.m, -cfg.box_radius, cfg.box_radius);
  ws.h = ws.axis(1) - ws.axis(0);

  double dt = cfg.dt;
  if (dt <= 0) {
    const double cap = max_cfl_coefficient(spec, ws);
    if (cap <= 0) throw std::invalid_argument("solve_hjb_grid: degenerate coefficients");
    dt = 0.9 / cap;
  }
  const auto steps = static_cast<Eigen::Index>(std::ceil(spec.T / dt - 1e-12));
  dt = spec.T / static_cast<double>(steps);

  const Eigen::Index total = N == 1 ? ws.m : ws.m * ws.m;
  Eigen::VectorXd u(total), unew(total);
  Eigen::MatrixXd pts(1, N);
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    const Eigen::Index j1 = N == 1 ? flat : flat / ws.m;
    const Eigen::Index j2 = N == 1 ? 0 : flat % ws.m;
    pts(0, 0) = ws.axis(j1);
    if (N == 2) pts(0, 1) = ws.axis(j2);
    u(flat) = spec.g ? spec.g(EmpiricalMeasure(pts)) : 0.0;
  }

  const double invn = 1.0 / static_cast<double>(N);
  bool cfl_ok = true;
  for (Eigen::Index k = steps - 1; k >= 0; --k) {
    const double t = dt * static_cast<double>(k);
    for (Eigen::Index flat = 0; flat < total; ++flat) {
      const Eigen::Index j1 = N == 1 ? flat : flat / ws.m;
      const Eigen::Index j2 = N == 1 ? 0 : flat % ws.m;
      pts(0, 0) = ws.axis(j1);
      if (N == 2) pts(0, 1) = ws.axis(j2);
      const EmpiricalMeasure mu(pts);

      double ham = 0;
      {
        const double u0 = u(flat);
        const double um = j1 > 0 ? u(flat - (N == 1 ? 1 : ws.m)) : u0;
        const double up = j1 < ws.m - 1 ? u(flat + (N == 1 ? 1 : ws.m)) : u0;
        ham += axis_hamiltonian(spec, t, mu, ws.axis(j1), u0, um, up, j1 == 0, j1 == ws.m - 1,
                                ws.h, invn, dt, cfl_ok);
      }
      if (N == 2) {
        const double u0 = u(flat);
        const double um = j2 > 0 ? u(flat - 1) : u0;
        const double up = j2 < ws.m - 1 ? u(flat + 1) : u0;
        ham += axis_hamiltonian(spec, t, mu, ws.axis(j2), u0, um, up, j2 == 0, j2 == ws.m - 1,
                                ws.h, invn, dt, cfl_ok);
      }
      unew(flat) = u(flat) + dt * ham;
    }
    if (!cfl_ok) throw std::runtime_error("solve_hjb_grid: CFL condition violated");
    u.swap(unew);
  }

  return GridSolution(ws.axis, N, u);
}

}  // namespace mfpde
