#include "mfpde/operators.hpp"

#include <limits>
#include <stdexcept>

namespace mfpde {

namespace {

double half_sigma2_gamma(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& gamma) {
  return 0.5 * (sigma * sigma.transpose()).cwiseProduct(gamma).sum();
}

}  // namespace

double eval_hjb(const HJBSpec& spec, double t, const EmpiricalMeasure& mu,
                const SpatialFields& fields) {
  if (spec.actions.empty()) throw std::invalid_argument("eval_hjb: empty action grid");
  return mu.average([&](const auto& xi) {
    const Eigen::VectorXd x = xi;
    const Eigen::VectorXd zx = fields.Z(x);
    const Eigen::MatrixXd gx = fields.Gamma(x);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& a : spec.actions) {
      const double val =
          spec.b(t, x, mu, a).dot(zx) + half_sigma2_gamma(spec.sigma(t, x, mu, a), gx) +
          spec.f(t, x, mu, a);
      if (val > best) best = val;
    }
    return best;
  });
}

double eval_isaacs(const IsaacsSpec& spec, double t, const EmpiricalMeasure& mu,
                   const SpatialFields& fields) {
  if (spec.actions1.empty() || spec.actions2.empty())
    throw std::invalid_argument("eval_isaacs: empty action grid");
  return mu.average([&](const auto& xi) {
    const Eigen::VectorXd x = xi;
    const Eigen::VectorXd zx = fields.Z(x);
    const Eigen::MatrixXd gx = fields.Gamma(x);
    double outer = std::numeric_limits<double>::infinity();
    for (const auto& a2 : spec.actions2) {
      double inner = -std::numeric_limits<double>::infinity();
      for (const auto& a1 : spec.actions1) {
        const double val = spec.b(t, x, mu, a1, a2).dot(zx) +
                           half_sigma2_gamma(spec.sigma(t, x, mu, a1, a2), gx) +
                           spec.f(t, x, mu, a1, a2);
        if (val > inner) inner = val;
      }
      if (inner < outer) outer = inner;
    }
    return outer;
  });
}

double eval_linear_generator(const UncontrolledDrift& b, const UncontrolledDiffusion& sigma,
                             double t, const EmpiricalMeasure& mu, const SpatialFields& fields) {
  return mu.average([&](const auto& xi) {
    const Eigen::VectorXd x = xi;
    return b(t, x, mu).dot(fields.Z(x)) + half_sigma2_gamma(sigma(t, x, mu), fields.Gamma(x));
  });
}

double LiftedOperator::operator()(double t, const Eigen::MatrixXd& x, double y,
                                  const Eigen::MatrixXd& z,
                                  const std::vector<Eigen::MatrixXd>& gamma) const {
  const Eigen::Index n = x.cols();
  if (n != particles_) throw std::invalid_argument("LiftedOperator: wrong particle count");
  if (z.cols() != n || z.rows() != x.rows())
    throw std::invalid_argument("LiftedOperator: z shape mismatch");
  if (static_cast<Eigen::Index>(gamma.size()) != n)
    throw std::invalid_argument("LiftedOperator: gamma count mismatch");

  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (x.col(i) == x.col(j) && (z.col(i) != z.col(j) || gamma[i] != gamma[j]))
        throw std::invalid_argument(
            "LiftedOperator: coincident particles with conflicting field data");

  const double scale = static_cast<double>(n);
  SpatialFields fields;
  fields.Z = [x, z, scale](const Eigen::VectorXd& q) -> Eigen::VectorXd {
    for (Eigen::Index k = 0; k < x.cols(); ++k)
      if (q == x.col(k)) return scale * z.col(k);
    return Eigen::VectorXd::Zero(q.size());
  };
  fields.Gamma = [x, gamma, scale](const Eigen::VectorXd& q) -> Eigen::MatrixXd {
    for (Eigen::Index k = 0; k < x.cols(); ++k)
      if (q == x.col(k)) return scale * gamma[static_cast<std::size_t>(k)];
    return Eigen::MatrixXd::Zero(q.size(), q.size());
  };
  double growth = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double num = scale * (z.col(k).norm() + gamma[static_cast<std::size_t>(k)].norm());
    growth = std::max(growth, num / (1.0 + x.col(k).squaredNorm()));
  }
  fields.growth_constant = growth;

  return op_.eval(t, EmpiricalMeasure(x), y, fields);
}

double hjb_lift_closed_form(const HJBSpec& spec, double t, const Eigen::MatrixXd& x,
                            const Eigen::MatrixXd& z, const std::vector<Eigen::MatrixXd>& gamma) {
  if (spec.actions.empty()) throw std::invalid_argument("hjb_lift_closed_form: empty action grid");
  const Eigen::Index n = x.cols();
  if (z.cols() != n || static_cast<Eigen::Index>(gamma.size()) != n)
    throw std::invalid_argument("hjb_lift_closed_form: shape mismatch");

  const EmpiricalMeasure mu(x);
  const double invn = 1.0 / static_cast<double>(n);
  double total = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd xi = x.col(i);
    const Eigen::VectorXd zi = z.col(i);
    const Eigen::MatrixXd& gi = gamma[static_cast<std::size_t>(i)];
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& a : spec.actions) {
      const double val = spec.b(t, xi, mu, a).dot(zi) +
                         half_sigma2_gamma(spec.sigma(t, xi, mu, a), gi) +
                         invn * spec.f(t, xi, mu, a);
      if (val > best) best = val;
    }
    total += best;
  }
  return total;
}

MeanFieldOperator make_hjb_operator(HJBSpec spec, std::string name) {
  MeanFieldOperator op;
  op.name = std::move(name);
  op.eval = [spec = std::move(spec)](double t, const EmpiricalMeasure& mu, double /*y*/,
                                     const SpatialFields& fields) {
    return eval_hjb(spec, t, mu, fields);
  };
  return op;
}

MeanFieldOperator make_isaacs_operator(IsaacsSpec spec, std::string name) {
  MeanFieldOperator op;
  op.name = std::move(name);
  op.eval = [spec = std::move(spec)](double t, const EmpiricalMeasure& mu, double /*y*/,
                                     const SpatialFields& fields) {
    return eval_isaacs(spec, t, mu, fields);
  };
  return op;
}

MeanFieldOperator make_linear_operator(UncontrolledDrift b, UncontrolledDiffusion sigma,
                                       std::string name) {
  MeanFieldOperator op;
  op.name = std::move(name);
  op.eval = [b = std::move(b), sigma = std::move(sigma)](double t, const EmpiricalMeasure& mu,
                                                         double /*y*/,
                                                         const SpatialFields& fields) {
    return eval_linear_generator(b, sigma, t, mu, fields);
  };
  return op;
}

}  // namespace mfpde
