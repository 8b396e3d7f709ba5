#pragma once

#include <Eigen/Core>

#include <limits>
#include <stdexcept>
#include <vector>

namespace mfpde {

template <typename Scalar>
struct AssignmentResult {
  std::vector<Eigen::Index> col_for_row;  // row i matched to col_for_row[i]
  std::vector<Scalar> row_potential;      // dual u
  std::vector<Scalar> col_potential;      // dual v
  Scalar cost = 0;                        // sum of matched entries
};

// Exact linear assignment by shortest augmenting paths with dual potentials
// (Jonker–Volgenant / Hungarian family), O(n^3). Deterministic: scanning
// order breaks ties towards the smallest column index.
template <typename Derived>
AssignmentResult<typename Derived::Scalar> solve_assignment(
    const Eigen::MatrixBase<Derived>& cost) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = cost.rows();
  if (cost.cols() != n || n < 1) throw std::invalid_argument("solve_assignment: square nonempty cost matrix required");

  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  // 1-based with virtual column 0 holding the row being inserted
  std::vector<Scalar> u(n + 1, 0), v(n + 1, 0), minv(n + 1, 0);
  std::vector<Eigen::Index> match(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1, false);

  for (Eigen::Index i = 1; i <= n; ++i) {
    match[0] = i;
    Eigen::Index j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const Eigen::Index i0 = match[j0];
      Scalar delta = inf;
      Eigen::Index j1 = 0;
      for (Eigen::Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const Scalar cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Eigen::Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const Eigen::Index j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  AssignmentResult<Scalar> out;
  out.col_for_row.assign(n, -1);
  out.row_potential.assign(n, 0);
  out.col_potential.assign(n, 0);
  for (Eigen::Index j = 1; j <= n; ++j) out.col_for_row[match[j] - 1] = j - 1;
  for (Eigen::Index i = 1; i <= n; ++i) out.row_potential[i - 1] = u[i];
  for (Eigen::Index j = 1; j <= n; ++j) out.col_potential[j - 1] = v[j];
  Scalar total = 0;
  for (Eigen::Index i = 0; i < n; ++i) total += cost(i, out.col_for_row[i]);
  out.cost = total;
  return out;
}

namespace detail {

// Kuhn augmenting-path search restricted to tight arcs.
inline bool kuhn_augment(Eigen::Index row, const std::vector<std::vector<Eigen::Index>>& adj,
                         std::vector<Eigen::Index>& row_of_col, std::vector<char>& seen) {
  for (const Eigen::Index j : adj[row]) {
    if (seen[j]) continue;
    seen[j] = 1;
    if (row_of_col[j] < 0 || kuhn_augment(row_of_col[j], adj, row_of_col, seen)) {
      row_of_col[j] = row;
      return true;
    }
  }
  return false;
}

}  // namespace detail

// Rewrites an optimal assignment into the lexicographically smallest optimal
// one. By complementary slackness every optimal matching lives inside the
// graph of tight arcs c(i,j) - u_i - v_j ~= 0, so a greedy smallest-column
// choice with a perfect-matching feasibility check stays optimal.
template <typename Derived>
void canonicalize_assignment(const Eigen::MatrixBase<Derived>& cost,
                             AssignmentResult<typename Derived::Scalar>& res) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = cost.rows();
  const Scalar scale = Scalar(1) + cost.cwiseAbs().maxCoeff();
  const Scalar tol = std::numeric_limits<Scalar>::epsilon() * scale * Scalar(64) * Scalar(n);

  std::vector<std::vector<Eigen::Index>> adj(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Scalar red = cost(i, j) - res.row_potential[i] - res.col_potential[j];
      if (red <= tol || j == res.col_for_row[i]) adj[i].push_back(j);
    }
  }

  std::vector<Eigen::Index> row_of_col(n, -1);
  for (Eigen::Index i = 0; i < n; ++i) row_of_col[res.col_for_row[i]] = i;

  std::vector<char> fixed_col(n, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index current = res.col_for_row[i];
    for (const Eigen::Index j : adj[i]) {
      if (fixed_col[j]) continue;
      if (j >= current) break;  // adj sorted ascending; current is feasible
      // try to free column j by rerouting its occupant
      const Eigen::Index occupant = row_of_col[j];
      row_of_col[j] = -1;
      row_of_col[current] = -1;
      std::vector<char> seen(n, 0);
      for (Eigen::Index k = 0; k < n; ++k) seen[k] = fixed_col[k];
      seen[j] = 1;
      if (occupant == i || detail::kuhn_augment(occupant, adj, row_of_col, seen)) {
        row_of_col[j] = i;
        res.col_for_row[i] = j;
        // rebuild row->col view for rows not yet fixed
        for (Eigen::Index jj = 0; jj < n; ++jj)
          if (row_of_col[jj] >= 0) res.col_for_row[row_of_col[jj]] = jj;
        break;
      }
      // infeasible: restore
      row_of_col[j] = occupant;
      row_of_col[current] = i;
    }
    fixed_col[res.col_for_row[i]] = 1;
  }

  Scalar total = 0;
  for (Eigen::Index i = 0; i < n; ++i) total += cost(i, res.col_for_row[i]);
  res.cost = total;
}

}  // namespace mfpde
