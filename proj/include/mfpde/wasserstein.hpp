#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mfpde/assignment.hpp"
#include "mfpde/empirical.hpp"

namespace mfpde {

// Matching between two equal-size clouds: atom i of the second cloud is
// paired with atom permutation[i] of the first. cost is the squared-distance
// average (1/N) sum_i |y_i - x_{perm(i)}|^2.
struct CouplingPlan {
  std::vector<Eigen::Index> permutation;
  double cost = 0;
};

struct Wasserstein2Result {
  double distance = 0;
  CouplingPlan plan;
};

namespace detail {

template <typename Scalar>
Scalar plan_cost(const EmpiricalMeasureT<Scalar>& mu, const EmpiricalMeasureT<Scalar>& nu,
                 const std::vector<Eigen::Index>& perm) {
  Scalar acc = 0, comp = 0;  // compensated summation, stable for large N
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    const Scalar term = (nu.atom(i) - mu.atom(perm[i])).squaredNorm() - comp;
    const Scalar next = acc + term;
    comp = (next - acc) - term;
    acc = next;
  }
  return acc / static_cast<Scalar>(nu.size());
}

template <typename Scalar>
void check_compatible(const EmpiricalMeasureT<Scalar>& mu, const EmpiricalMeasureT<Scalar>& nu) {
  if (mu.size() != nu.size()) throw std::invalid_argument("wasserstein2: clouds must have equal size");
  if (mu.dim() != nu.dim()) throw std::invalid_argument("wasserstein2: clouds must have equal dimension");
}

// indices of a 1-d cloud sorted by value, ties by original index
template <typename Scalar>
std::vector<Eigen::Index> sorted_order_1d(const EmpiricalMeasureT<Scalar>& mu) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(mu.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index(0));
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return mu.points()(0, a) < mu.points()(0, b); });
  return idx;
}

}  // namespace detail

// Quadratic Wasserstein distance between equal-size empirical measures via
// the optimal permutation (couplings between uniform atomic measures reduce
// to permutation matrices). d = 1 pairs sorted order statistics; d > 1
// solves the exact assignment on the squared-distance matrix. Among
// equal-cost optima the lexicographically smallest permutation is returned.
template <typename Scalar>
Wasserstein2Result wasserstein2(const EmpiricalMeasureT<Scalar>& mu,
                                const EmpiricalMeasureT<Scalar>& nu) {
  detail::check_compatible(mu, nu);
  const Eigen::Index n = mu.size();
  Wasserstein2Result out;
  out.plan.permutation.assign(static_cast<std::size_t>(n), 0);

  if (mu.dim() == 1) {
    const auto mi = detail::sorted_order_1d(mu);
    const auto ni = detail::sorted_order_1d(nu);
    for (Eigen::Index k = 0; k < n; ++k) out.plan.permutation[ni[k]] = mi[k];
  } else {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> cost(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        cost(i, j) = (nu.atom(i) - mu.atom(j)).squaredNorm();
    auto res = solve_assignment(cost);
    canonicalize_assignment(cost, res);
    out.plan.permutation.assign(res.col_for_row.begin(), res.col_for_row.end());
  }

  out.plan.cost = detail::plan_cost(mu, nu, out.plan.permutation);
  out.distance = std::sqrt(out.plan.cost);
  return out;
}

// Exhaustive minimum over all N! permutations; the independent oracle for
// wasserstein2. Refuses N > 9.
template <typename Scalar>
Scalar brute_force_w2(const EmpiricalMeasureT<Scalar>& mu, const EmpiricalMeasureT<Scalar>& nu) {
  detail::check_compatible(mu, nu);
  const Eigen::Index n = mu.size();
  if (n > 9) throw std::invalid_argument("brute_force_w2: N too large for enumeration (max 9)");

  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index(0));
  Scalar best = std::numeric_limits<Scalar>::infinity();
  do {
    Scalar acc = 0;
    for (Eigen::Index i = 0; i < n; ++i) acc += (nu.atom(i) - mu.atom(perm[i])).squaredNorm();
    if (acc < best) best = acc;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best / static_cast<Scalar>(n));
}

}  // namespace mfpde
