#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfpde/dynamics.hpp"
#include "mfpde/presets.hpp"
#include "oracles.hpp"

using namespace mfpde;

namespace {

MKVProblemSpec frozen_spec(double T = 1.0, double dt = 0.1) {
  MKVProblemSpec s;
  s.b = [](double, const Eigen::VectorXd& x, const EmpiricalMeasure&,
           const Eigen::VectorXd&) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(x.size()); };
  s.sigma = [](double, const Eigen::VectorXd& x, const EmpiricalMeasure&,
               const Eigen::VectorXd&) -> Eigen::MatrixXd {
    return Eigen::MatrixXd::Zero(x.size(), x.size());
  };
  s.actions = {Eigen::VectorXd::Zero(1)};
  s.L = 1.0;
  s.T = T;
  s.dt = dt;
  return s;
}

}  // namespace

TEST_CASE("frozen dynamics keep the configuration") {
  const auto spec = frozen_spec();
  Eigen::MatrixXd x0(2, 3);
  x0 << 1, 2, 3, -1, 0, 1;
  const auto bundle = simulate_nparticle(spec, zero_policy(), x0, 7);
  for (const auto& state : bundle.states) CHECK(state == x0);
  const auto rep = check_characteristics(bundle, spec.L);
  CHECK(rep.max_drift == 0.0);
  CHECK(rep.max_diff == 0.0);
  CHECK(rep.within_bound);
}

TEST_CASE("unit drift advances linearly and reports its characteristic") {
  auto spec = frozen_spec(1.0, 0.25);
  spec.b = [](double, const Eigen::VectorXd& x, const EmpiricalMeasure&,
              const Eigen::VectorXd&) -> Eigen::VectorXd { return Eigen::VectorXd::Ones(x.size()); };
  Eigen::MatrixXd x0(1, 2);
  x0 << 0.0, 5.0;
  const auto bundle = simulate_nparticle(spec, zero_policy(), x0, 7);
  for (std::size_t k = 0; k < bundle.states.size(); ++k) {
    CHECK(bundle.states[k](0, 0) == doctest::Approx(0.25 * k).epsilon(1e-14));
    CHECK(bundle.states[k](0, 1) == doctest::Approx(5.0 + 0.25 * k).epsilon(1e-14));
  }
  CHECK(check_characteristics(bundle, spec.L).max_drift == 1.0);
}

TEST_CASE("coefficient bound violations are hard errors naming L") {
  auto spec = frozen_spec();
  spec.b = [](double, const Eigen::VectorXd& x, const EmpiricalMeasure&,
              const Eigen::VectorXd&) -> Eigen::VectorXd {
    return 2.0 * Eigen::VectorXd::Ones(x.size());
  };
  spec.L = 1.0;
  Eigen::MatrixXd x0(1, 1);
  x0 << 0.0;
  CHECK_THROWS_WITH_AS(simulate_nparticle(spec, zero_policy(), x0, 7),
                       doctest::Contains("L=1"), std::runtime_error);
}

TEST_CASE("T/dt must be integral") {
  auto spec = frozen_spec(1.0, 0.3);
  Eigen::MatrixXd x0(1, 1);
  x0 << 0.0;
  CHECK_THROWS_AS(simulate_nparticle(spec, zero_policy(), x0, 7), std::invalid_argument);
}

TEST_CASE("identical seeds give bit-identical bundles") {
  const auto preset = experiment_preset("ou");
  auto spec = preset.problem;
  spec.dt = 0.01;
  Eigen::MatrixXd x0 = Eigen::MatrixXd::Zero(1, 16);
  const auto a = simulate_nparticle(spec, zero_policy(), x0, 123);
  const auto b = simulate_nparticle(spec, zero_policy(), x0, 123);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k) CHECK(a.states[k] == b.states[k]);
  const auto c = simulate_nparticle(spec, zero_policy(), x0, 124);
  CHECK(a.states.back() != c.states.back());
}

TEST_CASE("permuting particles and their noise streams permutes the paths") {
  const auto preset = experiment_preset("ou");
  auto spec = preset.problem;
  spec.dt = 0.01;
  Xoshiro256 rng(4);
  const Eigen::Index n = 6;
  const Eigen::MatrixXd x0 = oracles::random_cloud(rng, 1, n);
  const auto base = simulate_nparticle(spec, zero_policy(), x0, 55);

  const std::vector<Eigen::Index> perm{3, 1, 5, 0, 2, 4};
  Eigen::MatrixXd xp(1, n);
  std::vector<std::uint64_t> streams(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    xp.col(i) = x0.col(perm[i]);
    streams[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(perm[i]);
  }
  const auto permuted = simulate_nparticle(spec, zero_policy(), xp, 55, streams);
  for (std::size_t k = 0; k < base.states.size(); ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      CHECK(permuted.states[k](0, i) == base.states[k](0, perm[i]));
}

TEST_CASE("characteristic bounds hold on every accepted step") {
  const auto preset = experiment_preset("ou");
  auto spec = preset.problem;
  spec.dt = 0.01;
  Eigen::MatrixXd x0 = Eigen::MatrixXd::Zero(1, 32);
  const auto bundle = simulate_nparticle(spec, zero_policy(), x0, 9);
  for (Eigen::Index k = 0; k < bundle.drift_sup.size(); ++k) {
    CHECK(bundle.drift_sup(k) <= spec.L);
    CHECK(bundle.diff_sup(k) <= spec.L);
  }
}

TEST_CASE("zero-noise path solves the ODE with second-order local error") {
  // mean-field pull toward the sample mean of a two-particle system
  auto coarse = experiment_preset("ou").problem;
  coarse.dt = 0.05;
  auto fine = coarse;
  fine.dt = 0.0125;  // 4x refinement
  coarse.sigma = fine.sigma = [](double, const Eigen::VectorXd& x, const EmpiricalMeasure&,
                                 const Eigen::VectorXd&) -> Eigen::MatrixXd {
    return Eigen::MatrixXd::Zero(x.size(), x.size());
  };
  Eigen::MatrixXd x0(1, 2);
  x0 << 0.0, 1.0;
  const auto a = simulate_nparticle(coarse, zero_policy(), x0, 1);
  const auto b = simulate_nparticle(fine, zero_policy(), x0, 1);
  // exact solution: mean stays 0.5, deviations decay at rate kappa = 1
  const double exact = 0.5 + 0.5 * std::exp(-1.0);
  const double err_coarse = std::abs(a.states.back()(0, 1) - exact);
  const double err_fine = std::abs(b.states.back()(0, 1) - exact);
  // global order one in dt: 4x smaller step, ~4x smaller error
  CHECK(err_fine <= err_coarse / 2.5);
  CHECK(err_coarse <= 0.05);
}

TEST_CASE("mean-field pull keeps the ensemble mean a martingale plus decay") {
  const auto preset = experiment_preset("ou");
  auto spec = preset.problem;
  spec.dt = 1e-2;
  const Eigen::Index n = 256;
  Eigen::MatrixXd x0 = Eigen::MatrixXd::Constant(1, n, 0.7);
  const auto bundle = simulate_nparticle(spec, zero_policy(), x0, 2024);
  const EmpiricalMeasure terminal(bundle.states.back());
  // the sample mean is driven only by the averaged noise: variance sigma^2 T / N
  const double se = std::sqrt(1.0 / static_cast<double>(n));
  CHECK(std::abs(terminal.mean()(0) - 0.7) <= 4.0 * se);
}

TEST_CASE("surrogate limit law reproduces the stationary-decay variance") {
  const auto preset = experiment_preset("ou");
  auto spec = preset.problem;
  spec.dt = 1e-3;
  const Eigen::Index m = 4000;
  const auto mu_T = simulate_limit_law(
      spec, zero_policy(),
      [](GaussianStream&) { return Eigen::VectorXd::Zero(1); }, m, 77);
  const double v_T = (1.0 - std::exp(-2.0)) / 2.0;  // 0.43233...
  const double sample_var = variance(mu_T);
  // the variance of a variance estimate: ~ v sqrt(2/(m-1))
  const double se = v_T * std::sqrt(2.0 / static_cast<double>(m - 1));
  CHECK(std::abs(sample_var - v_T) <= 4.0 * se + 2e-3);
}

TEST_CASE("degenerate M=1 surrogate is a single uninteracting path") {
  const auto preset = experiment_preset("ou");
  auto spec = preset.problem;
  spec.dt = 0.05;
  const auto mu_T = simulate_limit_law(
      spec, zero_policy(), [](GaussianStream&) { return Eigen::VectorXd::Zero(1); }, 1, 5);
  CHECK(mu_T.size() == 1);
}

TEST_CASE("frozen dynamics leave the sampled initial law unchanged") {
  auto spec = frozen_spec();
  const auto mu_T = simulate_limit_law(
      spec, zero_policy(),
      [](GaussianStream& g) {
        Eigen::VectorXd x(1);
        x(0) = g.next();
        return x;
      },
      64, 3);
  CHECK(mu_T.size() == 64);
  // same seed, same sampler: the draw is reproducible
  const auto again = simulate_limit_law(
      spec, zero_policy(),
      [](GaussianStream& g) {
        Eigen::VectorXd x(1);
        x(0) = g.next();
        return x;
      },
      64, 3);
  CHECK(mu_T.points() == again.points());
}
