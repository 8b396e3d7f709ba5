#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfpde/operators.hpp"
#include "mfpde/presets.hpp"
#include "oracles.hpp"

using namespace mfpde;

namespace {

HJBSpec drift_control_spec(std::vector<double> grid, double sigma = 0.0) {
  HJBSpec s;
  s.b = [](double, const Eigen::VectorXd& x, const EmpiricalMeasure&,
           const Eigen::VectorXd& a) -> Eigen::VectorXd {
    return a(0) * Eigen::VectorXd::Ones(x.size());
  };
  s.sigma = [sigma](double, const Eigen::VectorXd& x, const EmpiricalMeasure&,
                    const Eigen::VectorXd&) -> Eigen::MatrixXd {
    return sigma * Eigen::MatrixXd::Identity(x.size(), x.size());
  };
  s.f = [](double, const Eigen::VectorXd&, const EmpiricalMeasure&, const Eigen::VectorXd&) {
    return 0.0;
  };
  s.g = [](const EmpiricalMeasure&) { return 0.0; };
  for (double v : grid) {
    Eigen::VectorXd a(1);
    a(0) = v;
    s.actions.push_back(a);
  }
  s.L = 3.0;
  s.T = 1.0;
  return s;
}

SpatialFields constant_fields(double z, double gamma, Eigen::Index d) {
  SpatialFields f;
  f.Z = [z, d](const Eigen::VectorXd&) -> Eigen::VectorXd {
    return z * Eigen::VectorXd::Ones(d);
  };
  f.Gamma = [gamma, d](const Eigen::VectorXd&) -> Eigen::MatrixXd {
    return gamma * Eigen::MatrixXd::Identity(d, d);
  };
  return f;
}

}  // namespace

TEST_CASE("drift control picks the sign of Z") {
  const auto spec = drift_control_spec({-1.0, 1.0});
  const auto mu = make_empirical({{0.4}});
  CHECK(eval_hjb(spec, 0.0, mu, constant_fields(0.3, 0.0, 1)) ==
        doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("pure diffusion term") {
  auto spec = drift_control_spec({0.0}, std::sqrt(2.0));
  const auto mu = make_empirical({{1.0}});
  const double gamma = -0.7;
  CHECK(eval_hjb(spec, 0.0, mu, constant_fields(0.0, gamma, 1)) ==
        doctest::Approx(gamma).epsilon(1e-13));
}

TEST_CASE("quadratic action cost on a grid attains z^2/2 at a grid point") {
  HJBSpec spec = drift_control_spec({});
  for (int k = 0; k <= 40; ++k) {
    Eigen::VectorXd a(1);
    a(0) = -1.0 + 0.05 * k;
    spec.actions.push_back(a);
  }
  spec.f = [](double, const Eigen::VectorXd&, const EmpiricalMeasure&, const Eigen::VectorXd& a) {
    return -0.5 * a(0) * a(0);
  };
  const auto mu = make_empirical({{0.0}});
  CHECK(eval_hjb(spec, 0.0, mu, constant_fields(0.4, 0.0, 1)) ==
        doctest::Approx(0.08).epsilon(1e-13));
  HJBSpec empty = spec;
  empty.actions.clear();
  CHECK_THROWS_AS(eval_hjb(empty, 0.0, mu, constant_fields(0.4, 0.0, 1)), std::invalid_argument);
}

TEST_CASE("two-particle lift of the drift-control operator") {
  const auto spec = drift_control_spec({-1.0, 1.0});
  const auto lifted = lift_operator(make_hjb_operator(spec), 2);
  Eigen::MatrixXd x(1, 2), z(1, 2);
  x << 0.0, 1.0;
  z << 0.3, -0.2;
  const std::vector<Eigen::MatrixXd> gamma(2, Eigen::MatrixXd::Zero(1, 1));
  CHECK(lifted(0.0, x, 0.0, z, gamma) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(hjb_lift_closed_form(spec, 0.0, x, z, gamma) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("null operator lifts to zero") {
  const auto zero_op = make_linear_operator(
      [](double, const Eigen::VectorXd& x, const EmpiricalMeasure&) -> Eigen::VectorXd {
        return Eigen::VectorXd::Zero(x.size());
      },
      [](double, const Eigen::VectorXd& x, const EmpiricalMeasure&) -> Eigen::MatrixXd {
        return Eigen::MatrixXd::Zero(x.size(), x.size());
      });
  const auto lifted = lift_operator(zero_op, 3);
  Xoshiro256 rng(17);
  const Eigen::MatrixXd x = oracles::random_cloud(rng, 1, 3);
  const Eigen::MatrixXd z = oracles::random_cloud(rng, 1, 3);
  std::vector<Eigen::MatrixXd> gamma;
  for (int i = 0; i < 3; ++i) gamma.push_back(oracles::random_symmetric(rng, 1));
  CHECK(lifted(0.0, x, 0.0, z, gamma) == 0.0);
}

TEST_CASE("positive homogeneity of the indicator construction") {
  const auto spec = drift_control_spec({-1.0, 1.0});
  const auto lifted = lift_operator(make_hjb_operator(spec), 2);
  Eigen::MatrixXd x(1, 2), z(1, 2);
  x << 0.0, 1.0;
  z << 0.3, -0.2;
  const std::vector<Eigen::MatrixXd> gamma(2, Eigen::MatrixXd::Zero(1, 1));
  const double v1 = lifted(0.0, x, 0.0, z, gamma);
  const double v2 = lifted(0.0, x, 0.0, (2.0 * z).eval(), gamma);
  CHECK(v2 == doctest::Approx(2.0 * v1).epsilon(1e-14));
}

TEST_CASE("lift equals closed form and product-grid enumeration, 200 draws") {
  Xoshiro256 rng(909);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = 1 + rng.next() % 2;
    const Eigen::Index n = 1 + rng.next() % 4;
    const Eigen::Index na = 2 + rng.next() % 8;
    const HJBSpec spec = random_hjb_spec(rng.next(), d, na);
    const Eigen::MatrixXd x = oracles::random_cloud(rng, d, n);
    const Eigen::MatrixXd z = oracles::random_cloud(rng, d, n, 1.0);
    std::vector<Eigen::MatrixXd> gamma;
    for (Eigen::Index i = 0; i < n; ++i) gamma.push_back(oracles::random_symmetric(rng, d));
    const double t = rng.uniform();

    const auto lifted = lift_operator(make_hjb_operator(spec), n);
    const double via_lift = lifted(t, x, 0.0, z, gamma);
    const double via_closed = hjb_lift_closed_form(spec, t, x, z, gamma);
    const double via_grid = oracles::product_grid_hamiltonian(spec, t, x, z, gamma);
    CHECK(std::abs(via_lift - via_closed) <= 1e-12 * (1.0 + std::abs(via_closed)));
    CHECK(std::abs(via_grid - via_closed) <= 1e-12 * (1.0 + std::abs(via_closed)));
  }
}

TEST_CASE("single-particle closed form reduces to the operator itself") {
  Xoshiro256 rng(5);
  const HJBSpec spec = random_hjb_spec(rng.next(), 1, 5);
  Eigen::MatrixXd x(1, 1), z(1, 1);
  x << 0.3;
  z << -0.8;
  std::vector<Eigen::MatrixXd> gamma{oracles::random_symmetric(rng, 1)};
  const double closed = hjb_lift_closed_form(spec, 0.2, x, z, gamma);
  SpatialFields fields;
  fields.Z = [&z](const Eigen::VectorXd&) -> Eigen::VectorXd { return z.col(0); };
  fields.Gamma = [&gamma](const Eigen::VectorXd&) -> Eigen::MatrixXd { return gamma[0]; };
  CHECK(closed ==
        doctest::Approx(eval_hjb(spec, 0.2, EmpiricalMeasure(x), fields)).epsilon(1e-14));
}

TEST_CASE("off-support perturbations leave the lift bit-identical") {
  Xoshiro256 rng(1717);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index d = 1 + rng.next() % 2;
    const Eigen::Index n = 1 + rng.next() % 4;
    const HJBSpec spec = random_hjb_spec(rng.next(), d, 4);
    const Eigen::MatrixXd x = oracles::random_cloud(rng, d, n);
    const Eigen::MatrixXd z = oracles::random_cloud(rng, d, n, 1.0);
    std::vector<Eigen::MatrixXd> gamma;
    for (Eigen::Index i = 0; i < n; ++i) gamma.push_back(oracles::random_symmetric(rng, d));

    const EmpiricalMeasure mu(x);
    const double scale = static_cast<double>(n);
    SpatialFields base;
    base.Z = [x, z, scale](const Eigen::VectorXd& q) -> Eigen::VectorXd {
      for (Eigen::Index k = 0; k < x.cols(); ++k)
        if (q == x.col(k)) return scale * z.col(k);
      return Eigen::VectorXd::Zero(q.size());
    };
    base.Gamma = [x, gamma, scale](const Eigen::VectorXd& q) -> Eigen::MatrixXd {
      for (Eigen::Index k = 0; k < x.cols(); ++k)
        if (q == x.col(k)) return scale * gamma[static_cast<std::size_t>(k)];
      return Eigen::MatrixXd::Zero(q.size(), q.size());
    };
    // junk everywhere off the atom set
    SpatialFields perturbed;
    perturbed.Z = [x, base](const Eigen::VectorXd& q) -> Eigen::VectorXd {
      for (Eigen::Index k = 0; k < x.cols(); ++k)
        if (q == x.col(k)) return base.Z(q);
      return 1e6 * Eigen::VectorXd::Ones(q.size());
    };
    perturbed.Gamma = [x, base](const Eigen::VectorXd& q) -> Eigen::MatrixXd {
      for (Eigen::Index k = 0; k < x.cols(); ++k)
        if (q == x.col(k)) return base.Gamma(q);
      return -1e6 * Eigen::MatrixXd::Identity(q.size(), q.size());
    };
    const double a = eval_hjb(spec, 0.1, mu, base);
    const double b = eval_hjb(spec, 0.1, mu, perturbed);
    CHECK(a == b);  // exactly zero difference
  }
}

TEST_CASE("coincident particles with conflicting data are rejected") {
  const auto spec = drift_control_spec({-1.0, 1.0});
  const auto lifted = lift_operator(make_hjb_operator(spec), 2);
  Eigen::MatrixXd x(1, 2), z(1, 2);
  x << 0.5, 0.5;
  z << 0.3, -0.2;
  const std::vector<Eigen::MatrixXd> gamma(2, Eigen::MatrixXd::Zero(1, 1));
  CHECK_THROWS_AS(lifted(0.0, x, 0.0, z, gamma), std::invalid_argument);
  // agreeing duplicates are fine
  Eigen::MatrixXd z2(1, 2);
  z2 << 0.3, 0.3;
  CHECK(lifted(0.0, x, 0.0, z2, gamma) == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("evaluation is continuous along converging empirical measures") {
  const HJBSpec spec = hjb_bounded_operator();
  Eigen::MatrixXd x(1, 3);
  x << -0.5, 0.2, 1.0;
  const auto fields = constant_fields(0.4, 0.3, 1);
  const double at_limit = eval_hjb(spec, 0.3, EmpiricalMeasure(x), fields);
  // shifting every atom by eps makes W2 to the limit exactly eps; a linear
  // modulus fitted on the sequence must stay bounded and the gaps vanish
  double max_ratio = 0, last_gap = 0;
  for (const double eps : {0.4, 0.2, 0.1, 0.05, 0.025}) {
    Eigen::MatrixXd xk = x.array() + eps;
    const double gap = std::abs(eval_hjb(spec, 0.3, EmpiricalMeasure(xk), fields) - at_limit);
    max_ratio = std::max(max_ratio, gap / eps);
    last_gap = gap;
  }
  CHECK(max_ratio <= 10.0);
  CHECK(last_gap <= 0.05 * max_ratio + 1e-12);
}

TEST_CASE("bilinear game value") {
  const IsaacsSpec spec = isaacs_bilinear_operator();
  const auto mu = make_empirical({{0.0}});
  const auto fields = constant_fields(0.0, 0.0, 1);
  CHECK(eval_isaacs(spec, 0.0, mu, fields) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("degenerate second player reduces to the control operator") {
  IsaacsSpec spec = isaacs_bilinear_operator();
  Eigen::VectorXd fixed(1);
  fixed << 1.0;
  spec.actions2 = {fixed};
  spec.b = [](double, const Eigen::VectorXd& x, const EmpiricalMeasure&, const Eigen::VectorXd& a1,
              const Eigen::VectorXd&) -> Eigen::VectorXd {
    return a1(0) * Eigen::VectorXd::Ones(x.size());
  };
  spec.f = [](double, const Eigen::VectorXd&, const EmpiricalMeasure&, const Eigen::VectorXd&,
              const Eigen::VectorXd&) { return 0.0; };
  const auto mu = make_empirical({{0.0}});
  const auto fields = constant_fields(0.3, 0.0, 1);
  const auto hjb = drift_control_spec({-1.0, 1.0});
  CHECK(eval_isaacs(spec, 0.0, mu, fields) ==
        doctest::Approx(eval_hjb(hjb, 0.0, mu, fields)).epsilon(1e-14));
}

TEST_CASE("zero coefficients give zero and inf-sup is below sup-inf") {
  IsaacsSpec spec = isaacs_bilinear_operator();
  const auto mu = make_empirical({{0.0}, {1.0}});
  const auto fields = constant_fields(0.2, -0.1, 1);
  IsaacsSpec zero = spec;
  zero.f = [](double, const Eigen::VectorXd&, const EmpiricalMeasure&, const Eigen::VectorXd&,
              const Eigen::VectorXd&) { return 0.0; };
  CHECK(eval_isaacs(zero, 0.0, mu, fields) == 0.0);

  // weak duality on the bilinear instance, enumerated exactly
  const double infsup = eval_isaacs(spec, 0.0, mu, fields);
  double supinf = -std::numeric_limits<double>::infinity();
  for (const auto& a1 : spec.actions1) {
    double inner = std::numeric_limits<double>::infinity();
    for (const auto& a2 : spec.actions2) inner = std::min(inner, a1(0) * a2(0));
    supinf = std::max(supinf, inner);
  }
  CHECK(supinf <= infsup);
  CHECK_THROWS_AS(eval_isaacs(IsaacsSpec{}, 0.0, mu, fields), std::invalid_argument);
}

TEST_CASE("linear generator examples") {
  const auto mu = make_empirical({{0.0}, {2.0}});
  const auto one = [](double, const Eigen::VectorXd& x, const EmpiricalMeasure&) -> Eigen::VectorXd {
    return Eigen::VectorXd::Ones(x.size());
  };
  const auto zero_s = [](double, const Eigen::VectorXd& x, const EmpiricalMeasure&) -> Eigen::MatrixXd {
    return Eigen::MatrixXd::Zero(x.size(), x.size());
  };
  CHECK(eval_linear_generator(one, zero_s, 0.0, mu, constant_fields(0.7, 0.0, 1)) ==
        doctest::Approx(0.7).epsilon(1e-14));

  const auto zero_b = [](double, const Eigen::VectorXd& x, const EmpiricalMeasure&) -> Eigen::VectorXd {
    return Eigen::VectorXd::Zero(x.size());
  };
  CHECK(eval_linear_generator(zero_b, constant_diffusion(1.0), 0.0, mu,
                              constant_fields(0.0, 2.0, 1)) == doctest::Approx(1.0).epsilon(1e-14));

  // singleton action grid with f = 0 collapses the sup
  HJBSpec hjb = drift_control_spec({1.0});
  hjb.b = [&one](double t, const Eigen::VectorXd& x, const EmpiricalMeasure& mu_,
                 const Eigen::VectorXd&) { return one(t, x, mu_); };
  hjb.sigma = [](double, const Eigen::VectorXd& x, const EmpiricalMeasure&,
                 const Eigen::VectorXd&) -> Eigen::MatrixXd {
    return Eigen::MatrixXd::Identity(x.size(), x.size());
  };
  const auto fields = constant_fields(0.5, 1.2, 1);
  CHECK(eval_hjb(hjb, 0.0, mu, fields) ==
        doctest::Approx(eval_linear_generator(one, constant_diffusion(1.0), 0.0, mu, fields))
            .epsilon(1e-14));
}
