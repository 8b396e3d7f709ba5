#include "mfpde/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mfpde/gaussian.hpp"
#include "mfpde/wasserstein.hpp"

namespace mfpde {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on the
// Legendre recurrence.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("target_by_name: bad number '" + s + "'");
  return v;
}

}  // namespace

TargetDistribution gaussian_target(double mean, double sd) {
  if (sd <= 0) throw std::invalid_argument("gaussian_target: sd must be positive");
  TargetDistribution t;
  std::ostringstream name;
  name << "gaussian:" << mean << "," << sd;
  t.name = name.str();
  t.mean = mean;
  t.variance = sd * sd;
  t.sampler = [mean, sd](GaussianStream& g) {
    Eigen::VectorXd x(1);
    x(0) = mean + sd * g.next();
    return x;
  };
  t.inv_cdf = [mean, sd](double u) { return mean + sd * gaussian_inv_cdf(u); };
  return t;
}

TargetDistribution uniform_target(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("uniform_target: need a < b");
  TargetDistribution t;
  std::ostringstream name;
  name << "uniform:" << a << "," << b;
  t.name = name.str();
  t.mean = 0.5 * (a + b);
  t.variance = (b - a) * (b - a) / 12.0;
  t.sampler = [a, b](GaussianStream& g) {
    Eigen::VectorXd x(1);
    x(0) = a + (b - a) * g.uniform();
    return x;
  };
  t.inv_cdf = [a, b](double u) { return a + (b - a) * u; };
  return t;
}

TargetDistribution point_target(double c) {
  TargetDistribution t;
  std::ostringstream name;
  name << "point:" << c;
  t.name = name.str();
  t.mean = c;
  t.variance = 0;
  t.sampler = [c](GaussianStream&) {
    Eigen::VectorXd x(1);
    x(0) = c;
    return x;
  };
  t.inv_cdf = [c](double) { return c; };
  return t;
}

TargetDistribution target_by_name(const std::string& description) {
  const auto colon = description.find(':');
  const std::string kind = description.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::string rest = description.substr(colon + 1);
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) args.push_back(parse_number(item));
  }
  if (kind == "gaussian" && args.size() == 2) return gaussian_target(args[0], args[1]);
  if (kind == "uniform" && args.size() == 2) return uniform_target(args[0], args[1]);
  if (kind == "point" && args.size() == 1) return point_target(args[0]);
  throw std::invalid_argument("target_by_name: cannot parse '" + description + "'");
}

double w2_quantile_quadrature(const Eigen::VectorXd& sorted_points,
                              const std::function<double(double)>& inv_cdf,
                              int nodes_per_cell) {
  if (!inv_cdf) throw std::invalid_argument("w2_quantile_quadrature: target has no inverse CDF");
  const Eigen::Index n = sorted_points.size();
  std::vector<double> nodes, weights;
  gauss_legendre(nodes_per_cell, nodes, weights);

  double acc = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double cell = 0;
    for (int k = 0; k < nodes_per_cell; ++k) {
      const double u = mid + half * nodes[k];
      const double diff = sorted_points(i) - inv_cdf(u);
      cell += weights[k] * diff * diff;
    }
    acc += half * cell;
  }
  return std::sqrt(acc);
}

std::vector<InitialDataRow> build_initial_data(const InitialDataSchedule& schedule) {
  const TargetDistribution& target = schedule.target;
  if (!target.sampler) throw std::invalid_argument("build_initial_data: target has no sampler");
  if (schedule.method == "quantile") {
    if (target.dim != 1) throw std::invalid_argument("build_initial_data: quantile method needs d=1");
    if (!target.inv_cdf) throw std::invalid_argument("build_initial_data: quantile method needs an inverse CDF");
  } else if (schedule.method != "iid") {
    throw std::invalid_argument("build_initial_data: unknown method '" + schedule.method + "'");
  }
  if (schedule.Ns.empty()) throw std::invalid_argument("build_initial_data: empty schedule");

  std::vector<InitialDataRow> rows;
  rows.reserve(schedule.Ns.size());
  for (std::size_t row = 0; row < schedule.Ns.size(); ++row) {
    const Eigen::Index n = schedule.Ns[row];
    if (n < 1) throw std::invalid_argument("build_initial_data: N must be positive");
    InitialDataRow out;
    if (schedule.method == "quantile") {
      out.points.resize(1, n);
      for (Eigen::Index i = 0; i < n; ++i)
        out.points(0, i) =
            target.inv_cdf((static_cast<double>(i) + 0.5) / static_cast<double>(n));
      out.w2_to_target = w2_quantile_quadrature(out.points.row(0).transpose(), target.inv_cdf);
    } else {
      GaussianStream g(schedule.seed, 0xa11ULL + static_cast<std::uint64_t>(row));
      Eigen::VectorXd probe = target.sampler(g);
      out.points.resize(probe.size(), n);
      out.points.col(0) = probe;
      for (Eigen::Index i = 1; i < n; ++i) out.points.col(i) = target.sampler(g);
      if (target.dim == 1 && target.inv_cdf) {
        Eigen::VectorXd sorted = out.points.row(0).transpose();
        std::sort(sorted.data(), sorted.data() + sorted.size());
        out.w2_to_target = w2_quantile_quadrature(sorted, target.inv_cdf);
      } else {
        // replicate the cloud against a larger iid reference of equal total size
        const Eigen::Index k = std::max<Eigen::Index>(1, 1024 / n);
        const Eigen::Index m = k * n;
        GaussianStream ref_stream(schedule.seed, 0x4ef0ULL + static_cast<std::uint64_t>(row));
        Eigen::MatrixXd ref(out.points.rows(), m);
        for (Eigen::Index i = 0; i < m; ++i) ref.col(i) = target.sampler(ref_stream);
        Eigen::MatrixXd replicated(out.points.rows(), m);
        for (Eigen::Index i = 0; i < m; ++i) replicated.col(i) = out.points.col(i % n);
        out.w2_to_target =
            wasserstein2(EmpiricalMeasure(replicated), EmpiricalMeasure(ref)).distance;
      }
    }
    rows.push_back(std::move(out));
  }

  if (schedule.method == "quantile") {
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].w2_to_target > rows[i - 1].w2_to_target + 1e-12)
        throw std::runtime_error("build_initial_data: quantile distances not nonincreasing");
  }
  return rows;
}

}  // namespace mfpde
