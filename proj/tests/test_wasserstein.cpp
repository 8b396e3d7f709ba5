#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mfpde/rng.hpp"
#include "mfpde/wasserstein.hpp"
#include "oracles.hpp"

using namespace mfpde;

TEST_CASE("two-atom example on the line") {
  const auto mu = make_empirical({{0.0}, {2.0}});
  const auto nu = make_empirical({{1.0}, {3.0}});
  const auto res = wasserstein2(mu, nu);
  CHECK(res.distance == doctest::Approx(1.0).epsilon(1e-14));
  // identity pairing after sorting
  CHECK(res.plan.permutation[0] == 0);
  CHECK(res.plan.permutation[1] == 1);
  CHECK(brute_force_w2(mu, nu) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("single atom brute force") {
  const auto mu = make_empirical({{3.0}});
  const auto nu = make_empirical({{7.0}});
  CHECK(brute_force_w2(mu, nu) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("identical clouds have distance zero") {
  Xoshiro256 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = oracles::random_cloud(rng, 1 + rng.next() % 3, 1 + rng.next() % 6);
    const EmpiricalMeasure mu(x);
    CHECK(wasserstein2(mu, mu).distance == 0.0);
  }
}

TEST_CASE("mismatched shapes are rejected") {
  const auto a = make_empirical({{0.0}, {1.0}});
  const auto b = make_empirical({{0.0}});
  CHECK_THROWS_AS(wasserstein2(a, b), std::invalid_argument);
  const auto c = make_empirical({{0.0, 1.0}, {1.0, 2.0}});
  CHECK_THROWS_AS(wasserstein2(a, c), std::invalid_argument);
  const auto big = make_empirical(std::vector<std::vector<double>>(10, {0.0}));
  CHECK_THROWS_AS(brute_force_w2(big, big), std::invalid_argument);
}

TEST_CASE("oracle equivalence on random instances") {
  Xoshiro256 rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    const Eigen::Index d = 1 + rng.next() % 3;
    const Eigen::Index n = 1 + rng.next() % 7;
    const EmpiricalMeasure mu(oracles::random_cloud(rng, d, n));
    const EmpiricalMeasure nu(oracles::random_cloud(rng, d, n));
    const auto fast = wasserstein2(mu, nu);
    CHECK(std::abs(fast.distance - brute_force_w2(mu, nu)) <= 1e-9);
    // the reported plan must realize the reported distance
    double cost = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      cost += (nu.atom(i) - mu.atom(fast.plan.permutation[i])).squaredNorm();
    CHECK(fast.distance ==
          doctest::Approx(std::sqrt(cost / static_cast<double>(n))).epsilon(1e-12));
  }
}

TEST_CASE("symmetry and triangle inequality") {
  Xoshiro256 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index d = 1 + rng.next() % 2;
    const Eigen::Index n = 2 + rng.next() % 5;
    const EmpiricalMeasure mu(oracles::random_cloud(rng, d, n));
    const EmpiricalMeasure nu(oracles::random_cloud(rng, d, n));
    const EmpiricalMeasure rho(oracles::random_cloud(rng, d, n));
    const double ab = wasserstein2(mu, nu).distance;
    const double ba = wasserstein2(nu, mu).distance;
    CHECK(std::abs(ab - ba) <= 1e-12);
    const double ac = wasserstein2(mu, rho).distance;
    const double bc = wasserstein2(nu, rho).distance;
    CHECK(ac <= ab + bc + 1e-9);
  }
}

TEST_CASE("d=1 sorting path equals the assignment path") {
  Xoshiro256 rng(5150);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index n = 1 + rng.next() % 8;
    const Eigen::MatrixXd xs = oracles::random_cloud(rng, 1, n);
    const Eigen::MatrixXd ys = oracles::random_cloud(rng, 1, n);
    const EmpiricalMeasure mu(xs), nu(ys);
    const double sorted_path = wasserstein2(mu, nu).distance;
    // force the assignment path by lifting to d=2 with a zero row
    Eigen::MatrixXd xs2 = Eigen::MatrixXd::Zero(2, n), ys2 = Eigen::MatrixXd::Zero(2, n);
    xs2.row(0) = xs;
    ys2.row(0) = ys;
    const double assign_path = wasserstein2(EmpiricalMeasure(xs2), EmpiricalMeasure(ys2)).distance;
    CHECK(std::abs(sorted_path - assign_path) <= 1e-12);
  }
}

TEST_CASE("distances ignore the order of the point lists") {
  Xoshiro256 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index d = 1 + rng.next() % 3;
    const Eigen::Index n = 2 + rng.next() % 5;
    const Eigen::MatrixXd x = oracles::random_cloud(rng, d, n);
    const Eigen::MatrixXd y = oracles::random_cloud(rng, d, n);
    std::vector<Eigen::Index> perm(n);
    std::iota(perm.begin(), perm.end(), Eigen::Index(0));
    for (Eigen::Index i = n - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.next() % (i + 1)]);
    Eigen::MatrixXd xp(d, n);
    for (Eigen::Index i = 0; i < n; ++i) xp.col(i) = x.col(perm[i]);
    const double base = wasserstein2(EmpiricalMeasure(x), EmpiricalMeasure(y)).distance;
    const double shuffled = wasserstein2(EmpiricalMeasure(xp), EmpiricalMeasure(y)).distance;
    CHECK(std::abs(base - shuffled) <= 1e-12);
  }
}

TEST_CASE("lexicographically smallest optimal plan under ties") {
  // all four pairings cost the same; identity must win
  Eigen::MatrixXd x(2, 2), y(2, 2);
  x << -1, 1, 0, 0;
  y << 0, 0, -1, 1;
  const auto res = wasserstein2(EmpiricalMeasure(x), EmpiricalMeasure(y));
  CHECK(res.plan.permutation[0] == 0);
  CHECK(res.plan.permutation[1] == 1);
  CHECK(res.distance == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("compensated accumulation keeps large-N cost exact") {
  const Eigen::Index n = 20000;
  Eigen::MatrixXd x(1, n), y(1, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(0, i) = static_cast<double>(i);
    y(0, i) = static_cast<double>(i) + 0.5;
  }
  const auto res = wasserstein2(EmpiricalMeasure(x), EmpiricalMeasure(y));
  CHECK(res.distance == doctest::Approx(0.5).epsilon(1e-13));
}
