#include "mfpde/presets.hpp"

#include <cmath>
#include <stdexcept>

#include "mfpde/fields.hpp"

namespace mfpde {

LQSpec lq_preset() {
  LQSpec s;
  s.kappa = 0.6;
  s.sigma0 = 0.5;
  s.q = 0.25;
  s.r = 1.0;
  s.c = 0.6;
  s.a_max = 4.0;
  s.T = 1.0;
  s.state_radius = 4.0;
  return s;
}

HJBSpec hjb_lq_operator() {
  const LQSpec lq = lq_preset();
  const MKVProblemSpec p = lq_problem(lq);
  HJBSpec h;
  h.b = p.b;
  h.sigma = p.sigma;
  h.f = p.f;
  h.g = p.g;
  h.actions = p.actions;
  h.L = p.L;
  h.T = p.T;
  return h;
}

HJBSpec hjb_bounded_operator() {
  HJBSpec h;
  h.b = [](double t, const Eigen::VectorXd& x, const EmpiricalMeasure& mu,
           const Eigen::VectorXd& a) -> Eigen::VectorXd {
    Eigen::VectorXd out(x.size());
    const double m = mu.mean()(0);
    for (Eigen::Index k = 0; k < x.size(); ++k)
      out(k) = 0.5 * std::tanh(a(0)) + 0.3 * std::sin(x(k) + 0.2 * t) + 0.2 * std::tanh(m);
    return out;
  };
  h.sigma = [](double, const Eigen::VectorXd& x, const EmpiricalMeasure&,
               const Eigen::VectorXd& a) -> Eigen::MatrixXd {
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(x.size(), x.size());
    return (0.4 + 0.1 * std::cos(a(0))) * s;
  };
  h.f = [](double, const Eigen::VectorXd& x, const EmpiricalMeasure& mu,
           const Eigen::VectorXd& a) {
    return 0.5 * std::cos(x.sum()) - 0.1 * a.squaredNorm() + 0.2 * std::tanh(mu.mean().sum());
  };
  h.g = [](const EmpiricalMeasure& mu) {
    return mu.average([](const auto& x) { return std::cos(x.sum()); });
  };
  for (int k = -2; k <= 2; ++k) {
    Eigen::VectorXd a(1);
    a(0) = 0.5 * k;
    h.actions.push_back(a);
  }
  h.L = 1.0;
  h.T = 1.0;
  return h;
}

IsaacsSpec isaacs_bilinear_operator() {
  IsaacsSpec s;
  s.b = [](double, const Eigen::VectorXd& x, const EmpiricalMeasure&, const Eigen::VectorXd&,
           const Eigen::VectorXd&) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(x.size()); };
  s.sigma = [](double, const Eigen::VectorXd& x, const EmpiricalMeasure&, const Eigen::VectorXd&,
               const Eigen::VectorXd&) -> Eigen::MatrixXd {
    return Eigen::MatrixXd::Zero(x.size(), x.size());
  };
  s.f = [](double, const Eigen::VectorXd&, const EmpiricalMeasure&, const Eigen::VectorXd& a1,
           const Eigen::VectorXd& a2) { return a1(0) * a2(0); };
  s.g = [](const EmpiricalMeasure&) { return 0.0; };
  for (const double v : {-1.0, 1.0}) {
    Eigen::VectorXd a(1);
    a(0) = v;
    s.actions1.push_back(a);
    s.actions2.push_back(a);
  }
  s.L = 1.0;
  s.T = 1.0;
  return s;
}

UncontrolledDrift ou_drift(double kappa) {
  return [kappa](double, const Eigen::VectorXd& x, const EmpiricalMeasure& mu) -> Eigen::VectorXd {
    return kappa * (mu.mean() - x);
  };
}

UncontrolledDiffusion constant_diffusion(double sigma0) {
  return [sigma0](double, const Eigen::VectorXd& x, const EmpiricalMeasure&) -> Eigen::MatrixXd {
    return sigma0 * Eigen::MatrixXd::Identity(x.size(), x.size());
  };
}

HJBSpec random_hjb_spec(std::uint64_t seed, Eigen::Index dim, Eigen::Index action_count,
                        Eigen::Index action_dim) {
  if (dim < 1 || action_count < 1 || action_dim < 1)
    throw std::invalid_argument("random_hjb_spec: bad shape parameters");
  Xoshiro256 rng(substream_seed(seed, 0x5becULL));
  const auto coin = [&rng](double lo, double hi) {
    return lo + (hi - lo) * rng.uniform();
  };

  // b_k = c1 sin(w1 x_k + w2 sum(a) + p) + c2 cos(w3 t) + c3 tanh(mean_k)
  Eigen::VectorXd c1(dim), c2(dim), c3(dim), w1(dim), p1(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    c1(k) = coin(-0.8, 0.8);
    c2(k) = coin(-0.5, 0.5);
    c3(k) = coin(-0.5, 0.5);
    w1(k) = coin(0.3, 2.0);
    p1(k) = coin(0.0, 6.28);
  }
  const double w2 = coin(0.2, 1.5), w3 = coin(0.2, 1.5);

  HJBSpec h;
  h.b = [=](double t, const Eigen::VectorXd& x, const EmpiricalMeasure& mu,
            const Eigen::VectorXd& a) -> Eigen::VectorXd {
    Eigen::VectorXd out(x.size());
    const Eigen::VectorXd m = mu.mean();
    const double asum = a.sum();
    for (Eigen::Index k = 0; k < x.size(); ++k)
      out(k) = c1(k) * std::sin(w1(k) * x(k) + w2 * asum + p1(k)) + c2(k) * std::cos(w3 * t) +
               c3(k) * std::tanh(m(k));
    return out;
  };

  // sigma = d0 I + symmetric trigonometric perturbation
  const double d0 = coin(0.2, 0.8);
  Eigen::MatrixXd amp(dim, dim), freq(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      amp(i, j) = coin(-0.3, 0.3);
      freq(i, j) = coin(0.3, 1.5);
    }
  amp = ((amp + amp.transpose()) / 2.0).eval();
  freq = ((freq + freq.transpose()) / 2.0).eval();
  h.sigma = [=](double, const Eigen::VectorXd& x, const EmpiricalMeasure&,
                const Eigen::VectorXd& a) -> Eigen::MatrixXd {
    const Eigen::Index d = x.size();
    Eigen::MatrixXd s = d0 * Eigen::MatrixXd::Identity(d, d);
    const double phase = x.sum() + 0.5 * a.sum();
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) s(i, j) += amp(i, j) * std::sin(freq(i, j) * phase);
    return s;
  };

  const double f1 = coin(-1.0, 1.0), f2 = coin(-0.6, 0.6), f3 = coin(0.3, 1.5);
  h.f = [=](double t, const Eigen::VectorXd& x, const EmpiricalMeasure& mu,
            const Eigen::VectorXd& a) {
    return f1 * std::cos(f3 * x.sum() + a.sum()) + f2 * std::sin(t + mu.mean().sum());
  };
  h.g = [](const EmpiricalMeasure& mu) {
    return mu.average([](const auto& x) { return std::cos(x.sum()); });
  };

  h.actions.reserve(static_cast<std::size_t>(action_count));
  for (Eigen::Index k = 0; k < action_count; ++k) {
    Eigen::VectorXd a(action_dim);
    for (Eigen::Index j = 0; j < action_dim; ++j) a(j) = coin(-1.0, 1.0);
    h.actions.push_back(a);
  }
  h.L = 3.0;
  h.T = 1.0;
  return h;
}

ExperimentPreset experiment_preset(const std::string& name) {
  ExperimentPreset p;
  p.name = name;
  if (name == "ou") {
    const double kappa = 1.0, sigma = 1.0, T = 1.0;
    MKVProblemSpec& prob = p.problem;
    prob.b = [kappa](double, const Eigen::VectorXd& x, const EmpiricalMeasure& mu,
                     const Eigen::VectorXd&) -> Eigen::VectorXd {
      return kappa * (mu.mean() - x);
    };
    prob.sigma = [sigma](double, const Eigen::VectorXd& x, const EmpiricalMeasure&,
                         const Eigen::VectorXd&) -> Eigen::MatrixXd {
      return sigma * Eigen::MatrixXd::Identity(x.size(), x.size());
    };
    prob.actions = {Eigen::VectorXd::Zero(1)};
    prob.L = 8.0;
    prob.T = T;
    prob.dt = 1e-3;
    p.gaussian_limit = true;
    p.limit_mean = [](double m0) { return m0; };
    p.limit_variance = [kappa, sigma, T](double v0) {
      const double decay = std::exp(-2.0 * kappa * T);
      return decay * v0 + sigma * sigma * (1.0 - decay) / (2.0 * kappa);
    };
    return p;
  }
  if (name == "bounded_drift") {
    const double beta = 0.3, sigma = 0.5, T = 1.0;
    MKVProblemSpec& prob = p.problem;
    prob.b = [beta](double, const Eigen::VectorXd& x, const EmpiricalMeasure&,
                    const Eigen::VectorXd&) -> Eigen::VectorXd {
      return beta * Eigen::VectorXd::Ones(x.size());
    };
    prob.sigma = [sigma](double, const Eigen::VectorXd& x, const EmpiricalMeasure&,
                         const Eigen::VectorXd&) -> Eigen::MatrixXd {
      return sigma * Eigen::MatrixXd::Identity(x.size(), x.size());
    };
    prob.actions = {Eigen::VectorXd::Zero(1)};
    prob.L = 1.0;
    prob.T = T;
    prob.dt = 1e-3;
    p.gaussian_limit = true;
    p.limit_mean = [beta, T](double m0) { return m0 + beta * T; };
    p.limit_variance = [sigma, T](double v0) { return v0 + sigma * sigma * T; };
    return p;
  }
  if (name == "heat") {
    const double sigma = 0.5, T = 1.0, clip = 2.0;
    MKVProblemSpec& prob = p.problem;
    prob.b = [](double, const Eigen::VectorXd& x, const EmpiricalMeasure&,
                const Eigen::VectorXd&) -> Eigen::VectorXd {
      return Eigen::VectorXd::Zero(x.size());
    };
    prob.sigma = [sigma](double, const Eigen::VectorXd& x, const EmpiricalMeasure&,
                         const Eigen::VectorXd&) -> Eigen::MatrixXd {
      return sigma * Eigen::MatrixXd::Identity(x.size(), x.size());
    };
    prob.g = [clip](const EmpiricalMeasure& mu) {
      return mu.average(
          [clip](const auto& x) { return std::min(clip, std::max(-clip, x(0))); });
    };
    prob.actions = {Eigen::VectorXd::Zero(1)};
    prob.L = 1.0;
    prob.T = T;
    prob.dt = 1e-3;
    p.gaussian_limit = true;
    p.limit_mean = [](double m0) { return m0; };
    p.limit_variance = [sigma, T](double v0) { return v0 + sigma * sigma * T; };
    return p;
  }
  if (name == "lq") {
    const LQSpec lq = lq_preset();
    p.problem = lq_problem(lq);
    p.lq = lq;
    return p;
  }
  throw std::invalid_argument("experiment_preset: unknown preset '" + name + "'");
}

}  // namespace mfpde
