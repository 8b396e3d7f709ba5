#include "mfpde/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace mfpde {

SmoothScalarField make_numeric_field(std::function<double(const Eigen::VectorXd&)> value,
                                     double bound, double step) {
  if (step <= 0) throw std::invalid_argument("make_numeric_field: step must be positive");
  SmoothScalarField f;
  f.value = value;
  f.bound = bound;
  f.analytic_derivatives = false;
  f.gradient = [value, step](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd xp = x, xm = x;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      xp(k) = x(k) + step;
      xm(k) = x(k) - step;
      g(k) = (value(xp) - value(xm)) / (2 * step);
      xp(k) = x(k);
      xm(k) = x(k);
    }
    return g;
  };
  f.hessian = [value, step](const Eigen::VectorXd& x) {
    const Eigen::Index d = x.size();
    Eigen::MatrixXd h(d, d);
    const double f0 = value(x);
    Eigen::VectorXd y = x;
    for (Eigen::Index k = 0; k < d; ++k) {
      y(k) = x(k) + step;
      const double fp = value(y);
      y(k) = x(k) - step;
      const double fm = value(y);
      y(k) = x(k);
      h(k, k) = (fp - 2 * f0 + fm) / (step * step);
      for (Eigen::Index l = k + 1; l < d; ++l) {
        y(k) = x(k) + step;
        y(l) = x(l) + step;
        const double fpp = value(y);
        y(l) = x(l) - step;
        const double fpm = value(y);
        y(k) = x(k) - step;
        const double fmm = value(y);
        y(l) = x(l) + step;
        const double fmp = value(y);
        y(k) = x(k);
        y(l) = x(l);
        h(k, l) = h(l, k) = (fpp - fpm - fmp + fmm) / (4 * step * step);
      }
    }
    return h;
  };
  return f;
}

SmoothScalarField scale_field(const SmoothScalarField& f, double c) {
  SmoothScalarField g;
  g.value = [f, c](const Eigen::VectorXd& x) { return c * f.value(x); };
  g.gradient = [f, c](const Eigen::VectorXd& x) -> Eigen::VectorXd { return c * f.gradient(x); };
  g.hessian = [f, c](const Eigen::VectorXd& x) -> Eigen::MatrixXd { return c * f.hessian(x); };
  g.bound = std::abs(c) * f.bound;
  g.analytic_derivatives = f.analytic_derivatives;
  return g;
}

SmoothScalarField field_by_name(const std::string& name) {
  SmoothScalarField f;
  if (name == "quadratic") {
    // |x|^2; unbounded globally, bound records the working-box sup
    f.value = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
    f.gradient = [](const Eigen::VectorXd& x) -> Eigen::VectorXd { return 2.0 * x; };
    f.hessian = [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
      return 2.0 * Eigen::MatrixXd::Identity(x.size(), x.size());
    };
    f.bound = 100.0;
    return f;
  }
  if (name == "gauss_bump") {
    f.value = [](const Eigen::VectorXd& x) { return std::exp(-0.5 * x.squaredNorm()); };
    f.gradient = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return -std::exp(-0.5 * x.squaredNorm()) * x;
    };
    f.hessian = [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
      const double e = std::exp(-0.5 * x.squaredNorm());
      return e * (x * x.transpose() - Eigen::MatrixXd::Identity(x.size(), x.size()));
    };
    f.bound = 1.0;
    return f;
  }
  if (name == "cos") {
    // cos of the coordinate sum
    f.value = [](const Eigen::VectorXd& x) { return std::cos(x.sum()); };
    f.gradient = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return -std::sin(x.sum()) * Eigen::VectorXd::Ones(x.size());
    };
    f.hessian = [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
      const Eigen::Index d = x.size();
      return -std::cos(x.sum()) * Eigen::MatrixXd::Ones(d, d);
    };
    f.bound = 1.0;
    return f;
  }
  if (name == "linear") {
    f.value = [](const Eigen::VectorXd& x) { return x.sum(); };
    f.gradient = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return Eigen::VectorXd::Ones(x.size());
    };
    f.hessian = [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
      return Eigen::MatrixXd::Zero(x.size(), x.size());
    };
    f.bound = 50.0;
    return f;
  }
  throw std::invalid_argument("field_by_name: unknown field '" + name + "'");
}

std::vector<std::string> field_names() { return {"quadratic", "gauss_bump", "cos", "linear"}; }

bool check_field_bound(const SmoothScalarField& f, const Eigen::MatrixXd& sample_points) {
  for (Eigen::Index i = 0; i < sample_points.cols(); ++i) {
    const Eigen::VectorXd x = sample_points.col(i);
    if (std::abs(f.value(x)) > f.bound) return false;
    if (f.gradient(x).cwiseAbs().maxCoeff() > f.bound) return false;
    if (f.hessian(x).cwiseAbs().maxCoeff() > f.bound) return false;
  }
  return true;
}

}  // namespace mfpde
