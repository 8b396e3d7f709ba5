#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <utility>
#include <vector>

namespace mfpde {

// Uniform atomic measure on N points of R^d, stored column-wise as a d x N
// matrix. All atoms carry weight 1/N; there is no weight field.
template <typename Scalar>
class EmpiricalMeasureT {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  EmpiricalMeasureT() = default;

  template <typename Derived>
  explicit EmpiricalMeasureT(const Eigen::MatrixBase<Derived>& points)
      : points_(points), mean_(points_.rowwise().mean()) {
    if (points_.cols() < 1) throw std::invalid_argument("EmpiricalMeasure: needs at least one atom");
    if (points_.rows() < 1) throw std::invalid_argument("EmpiricalMeasure: dimension must be positive");
  }

  Eigen::Index size() const { return points_.cols(); }
  Eigen::Index dim() const { return points_.rows(); }

  const Matrix& points() const { return points_; }
  auto atom(Eigen::Index i) const { return points_.col(i); }

  // The mean is computed at construction, so concurrent reads are safe.
  // After mutable_points() it is refreshed lazily on the mutating thread.
  const Vector& mean() const {
    if (mean_dirty_) {
      mean_ = points_.rowwise().mean();
      mean_dirty_ = false;
    }
    return mean_;
  }

  // simulators mutate the configuration in place between steps
  Matrix& mutable_points() {
    mean_dirty_ = true;
    return points_;
  }

  template <typename F>
  Scalar average(F&& f) const {
    Scalar acc = 0, comp = 0;  // Kahan
    for (Eigen::Index i = 0; i < points_.cols(); ++i) {
      const Scalar term = f(points_.col(i)) - comp;
      const Scalar next = acc + term;
      comp = (next - acc) - term;
      acc = next;
    }
    return acc / static_cast<Scalar>(points_.cols());
  }

 private:
  Matrix points_;
  mutable Vector mean_;
  mutable bool mean_dirty_ = false;
};

using EmpiricalMeasure = EmpiricalMeasureT<double>;

template <typename Scalar>
EmpiricalMeasureT<Scalar> make_empirical(
    const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& points) {
  if (points.empty()) throw std::invalid_argument("make_empirical: empty point list");
  const Eigen::Index d = points.front().size();
  if (d < 1) throw std::invalid_argument("make_empirical: zero-dimensional point");
  typename EmpiricalMeasureT<Scalar>::Matrix m(d, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != d) throw std::invalid_argument("make_empirical: ragged dimensions");
    m.col(static_cast<Eigen::Index>(i)) = points[i];
  }
  return EmpiricalMeasureT<Scalar>(m);
}

inline EmpiricalMeasure make_empirical(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw std::invalid_argument("make_empirical: empty point list");
  const std::size_t d = points.front().size();
  if (d == 0) throw std::invalid_argument("make_empirical: zero-dimensional point");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != d) throw std::invalid_argument("make_empirical: ragged dimensions");
    for (std::size_t k = 0; k < d; ++k) m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = points[i][k];
  }
  return EmpiricalMeasure(m);
}

// p-th moment ((1/N) sum |x_i|^p)^(1/p) with Euclidean atom norms.
template <typename Scalar>
Scalar moment(const EmpiricalMeasureT<Scalar>& mu, int p) {
  if (p < 1) throw std::invalid_argument("moment: p must be >= 1");
  const auto& pts = mu.points();
  if (p == 2) return std::sqrt(pts.squaredNorm() / static_cast<Scalar>(pts.cols()));
  Scalar acc = 0;
  for (Eigen::Index i = 0; i < pts.cols(); ++i)
    acc += std::pow(pts.col(i).norm(), static_cast<Scalar>(p));
  return std::pow(acc / static_cast<Scalar>(pts.cols()), Scalar(1) / static_cast<Scalar>(p));
}

// Population variance of the atoms around the sample mean, summed over
// coordinates: <mu, |x - mean|^2>.
template <typename Scalar>
Scalar variance(const EmpiricalMeasureT<Scalar>& mu) {
  const auto m = mu.mean();
  return (mu.points().colwise() - m).squaredNorm() / static_cast<Scalar>(mu.size());
}

}  // namespace mfpde
