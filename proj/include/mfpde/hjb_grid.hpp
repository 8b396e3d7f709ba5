#pragma once

#include <Eigen/Core>

#include "mfpde/dynamics.hpp"

namespace mfpde {

// Explicit monotone finite-difference solve of the N-particle equation for
// N * d <= 2 (d = 1, N in {1, 2}): upwind drift, centered diffusion, one-sided
// differences at the box edge. dt = 0 picks the largest stable step from the
// CFL scan at t = 0; the monotonicity condition is re-checked every sweep.
struct GridConfig {
  double box_radius = 4;
  Eigen::Index nodes_per_axis = 201;
  double dt = 0;
};

class GridSolution {
 public:
  GridSolution(Eigen::VectorXd axis, Eigen::Index arity, Eigen::VectorXd values)
      : axis_(std::move(axis)), arity_(arity), values_(std::move(values)) {}

  const Eigen::VectorXd& axis() const { return axis_; }
  Eigen::Index arity() const { return arity_; }
  const Eigen::VectorXd& values() const { return values_; }

  double at(Eigen::Index j) const { return values_(j); }
  double at(Eigen::Index j1, Eigen::Index j2) const { return values_(j1 * axis_.size() + j2); }

  // multilinear interpolation inside the box
  double value_at(const Eigen::VectorXd& x) const;

 private:
  Eigen::VectorXd axis_;
  Eigen::Index arity_;
  Eigen::VectorXd values_;
};

GridSolution solve_hjb_grid(const MKVProblemSpec& spec, Eigen::Index N, const GridConfig& cfg);

}  // namespace mfpde
