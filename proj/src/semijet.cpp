#include "mfpde/semijet.hpp"

#include <cmath>
#include <stdexcept>

namespace mfpde {

double semijet_eval(const Semijet& psi, double s, const EmpiricalMeasure& nu) {
  if (nu.dim() != psi.anchor_mu.dim())
    throw std::invalid_argument("semijet_eval: dimension mismatch with anchor");
  const double mean_nu = nu.average([&](const auto& x) { return psi.f.value(x); });
  const double mean_mu = psi.anchor_mu.average([&](const auto& x) { return psi.f.value(x); });
  return psi.v + psi.a * (s - psi.anchor_t) + (mean_nu - mean_mu);
}

LiftPartials lift_partials(const LiftedTestFunction& phi, double /*s*/, const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.cols();
  const double invn = 1.0 / static_cast<double>(n);
  LiftPartials out;
  out.dt = phi.base.a;
  out.grad.resize(x.rows(), n);
  out.hess_diag.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd xi = x.col(i);
    out.grad.col(i) = invn * phi.base.f.gradient(xi);
    out.hess_diag.push_back(invn * phi.base.f.hessian(xi));
  }
  return out;
}

LiftPartials finite_diff_partials(const LiftedTestFunction& phi, double s,
                                  const Eigen::MatrixXd& x, double h) {
  if (h <= 0) throw std::invalid_argument("finite_diff_partials: step must be positive");
  const Eigen::Index d = x.rows();
  const Eigen::Index n = x.cols();
  LiftPartials out;
  out.dt = (phi(s + h, x) - phi(s - h, x)) / (2 * h);
  out.grad.resize(d, n);

  Eigen::MatrixXd y = x;
  const double f0 = phi(s, x);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::MatrixXd block(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
      y(k, i) = x(k, i) + h;
      const double fp = phi(s, y);
      y(k, i) = x(k, i) - h;
      const double fm = phi(s, y);
      y(k, i) = x(k, i);
      out.grad(k, i) = (fp - fm) / (2 * h);
      block(k, k) = (fp - 2 * f0 + fm) / (h * h);
      for (Eigen::Index l = k + 1; l < d; ++l) {
        y(k, i) = x(k, i) + h;
        y(l, i) = x(l, i) + h;
        const double fpp = phi(s, y);
        y(l, i) = x(l, i) - h;
        const double fpm = phi(s, y);
        y(k, i) = x(k, i) - h;
        const double fmm = phi(s, y);
        y(l, i) = x(l, i) + h;
        const double fmp = phi(s, y);
        y(k, i) = x(k, i);
        y(l, i) = x(l, i);
        block(k, l) = block(l, k) = (fpp - fpm - fmp + fmm) / (4 * h * h);
      }
    }
    out.hess_diag.push_back(block);
  }
  return out;
}

double functional_derivative_check(const SmoothScalarField& f, const EmpiricalMeasure& mu,
                                   const EmpiricalMeasure& nu, int quadrature_nodes) {
  if (mu.dim() != nu.dim())
    throw std::invalid_argument("functional_derivative_check: dimension mismatch");
  if (quadrature_nodes < 1) throw std::invalid_argument("functional_derivative_check: nodes >= 1");

  const auto cylinder = [&](const EmpiricalMeasure& m) {
    return m.average([&](const auto& x) { return f.value(x); });
  };
  const double direct = cylinder(nu) - cylinder(mu);

  // midpoint rule in lambda; the integrand <nu - mu, f> does not depend on
  // the interpolation point for cylinder functions
  double integral = 0;
  for (int q = 0; q < quadrature_nodes; ++q) {
    const double inner = cylinder(nu) - cylinder(mu);
    integral += inner / quadrature_nodes;
  }
  return std::abs(direct - integral);
}

}  // namespace mfpde
