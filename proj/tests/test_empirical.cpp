#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfpde/empirical.hpp"

using namespace mfpde;

TEST_CASE("construction from point lists") {
  const auto mu = make_empirical({{0.0}, {1.0}});
  CHECK(mu.size() == 2);
  CHECK(mu.dim() == 1);
  CHECK(mu.points()(0, 0) == 0.0);
  CHECK(mu.points()(0, 1) == 1.0);
}

TEST_CASE("empty and ragged inputs are rejected") {
  CHECK_THROWS_AS(make_empirical(std::vector<std::vector<double>>{}), std::invalid_argument);
  CHECK_THROWS_AS(make_empirical({{0.0, 1.0}, {2.0}}), std::invalid_argument);
}

TEST_CASE("point order is preserved") {
  Eigen::MatrixXd pts(2, 3);
  pts << 3, 1, 2, 0, -1, 5;
  const EmpiricalMeasure mu(pts);
  CHECK(mu.atom(1)(0) == 1.0);
  CHECK(mu.atom(2)(1) == 5.0);
}

TEST_CASE("moment examples") {
  const auto a = make_empirical({{0.0}, {2.0}});
  CHECK(moment(a, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  const auto b = make_empirical({{-1.5}, {-1.5}, {-1.5}});
  for (int p = 1; p <= 4; ++p) CHECK(moment(b, p) == doctest::Approx(1.5).epsilon(1e-14));

  const auto c = make_empirical({{1.0}, {2.0}, {3.0}});
  CHECK(moment(c, 1) == doctest::Approx(2.0).epsilon(1e-14));

  CHECK_THROWS_AS(moment(a, 0), std::invalid_argument);
}

TEST_CASE("mean cache survives in-place mutation") {
  Eigen::MatrixXd pts(1, 2);
  pts << 0, 4;
  EmpiricalMeasure mu(pts);
  CHECK(mu.mean()(0) == 2.0);
  mu.mutable_points()(0, 0) = 4.0;
  CHECK(mu.mean()(0) == 4.0);
}

TEST_CASE("variance of atoms around the sample mean") {
  const auto mu = make_empirical({{0.0}, {2.0}});
  CHECK(variance(mu) == doctest::Approx(1.0).epsilon(1e-14));
  const auto constant = make_empirical({{3.0}, {3.0}, {3.0}});
  CHECK(variance(constant) == 0.0);
}
