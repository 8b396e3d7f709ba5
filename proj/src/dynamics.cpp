#include "mfpde/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mfpde {

namespace {

Eigen::Index step_count(const MKVProblemSpec& spec) {
  if (spec.dt <= 0) throw std::invalid_argument("simulate: dt must be positive");
  const double ratio = spec.T / spec.dt;
  const auto steps = static_cast<Eigen::Index>(std::llround(ratio));
  if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-9)
    throw std::invalid_argument("simulate: T/dt must be a positive integer");
  return steps;
}

[[noreturn]] void bound_violation(const char* what, double value, double L, double t) {
  std::ostringstream msg;
  msg << "simulate: " << what << " magnitude " << value << " exceeds the characteristic bound L="
      << L << " at t=" << t;
  throw std::runtime_error(msg.str());
}

}  // namespace

ControlPolicy zero_policy(Eigen::Index action_dim) {
  ControlPolicy p;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(action_dim);
  p.act = [a](double, const Eigen::VectorXd&, const EmpiricalMeasure&) { return a; };
  return p;
}

PathBundle simulate_nparticle(const MKVProblemSpec& spec, const ControlPolicy& policy,
                              const Eigen::MatrixXd& x0, std::uint64_t seed,
                              const std::vector<std::uint64_t>& stream_ids) {
  const Eigen::Index n = x0.cols();
  const Eigen::Index d = x0.rows();
  if (n < 1 || d < 1) throw std::invalid_argument("simulate: x0 must be a d x N configuration");
  if (!stream_ids.empty() && static_cast<Eigen::Index>(stream_ids.size()) != n)
    throw std::invalid_argument("simulate: stream_ids size mismatch");
  const Eigen::Index steps = step_count(spec);

  std::vector<GaussianStream> noise;
  noise.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::uint64_t id = stream_ids.empty() ? static_cast<std::uint64_t>(i)
                                                : stream_ids[static_cast<std::size_t>(i)];
    noise.emplace_back(seed, id);
  }

  PathBundle out;
  out.seed = seed;
  out.times = Eigen::VectorXd::LinSpaced(steps + 1, 0.0, spec.T);
  out.states.reserve(static_cast<std::size_t>(steps + 1));
  out.states.push_back(x0);
  out.drift_sup = Eigen::VectorXd::Zero(steps);
  out.diff_sup = Eigen::VectorXd::Zero(steps);

  const double sqdt = std::sqrt(spec.dt);
  EmpiricalMeasure mu(x0);
  Eigen::MatrixXd next(d, n);
  Eigen::VectorXd xi(d), shock(d);
  const bool has_reward = static_cast<bool>(spec.f);
  double reward = 0;

  for (Eigen::Index k = 0; k < steps; ++k) {
    const double t = out.times(k);
    const Eigen::MatrixXd& cur = mu.points();
    double drift_max = 0, diff_max = 0, step_reward = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      xi = cur.col(i);
      const Eigen::VectorXd a = policy.act(t, xi, mu);
      const Eigen::VectorXd bi = spec.b(t, xi, mu, a);
      const Eigen::MatrixXd si = spec.sigma(t, xi, mu, a);
      const double bmax = bi.cwiseAbs().maxCoeff();
      const double smax = si.cwiseAbs().maxCoeff();
      if (bmax > spec.L) bound_violation("drift", bmax, spec.L, t);
      if (smax > spec.L) bound_violation("diffusion", smax, spec.L, t);
      drift_max = std::max(drift_max, bmax);
      diff_max = std::max(diff_max, smax);
      if (has_reward) step_reward += spec.f(t, xi, mu, a);
      for (Eigen::Index c = 0; c < d; ++c) shock(c) = noise[static_cast<std::size_t>(i)].next();
      next.col(i) = xi + spec.dt * bi + sqdt * (si * shock);
    }
    out.drift_sup(k) = drift_max;
    out.diff_sup(k) = diff_max;
    reward += step_reward * spec.dt / static_cast<double>(n);
    mu.mutable_points() = next;
    out.states.push_back(next);
  }
  out.running_reward = reward;
  return out;
}

EmpiricalMeasure simulate_limit_law(
    const MKVProblemSpec& spec, const ControlPolicy& policy,
    const std::function<Eigen::VectorXd(GaussianStream&)>& mu0_sampler, Eigen::Index M,
    std::uint64_t seed) {
  if (M < 1) throw std::invalid_argument("simulate_limit_law: M must be positive");
  GaussianStream init(seed, 0xfeedULL);
  Eigen::VectorXd probe = mu0_sampler(init);
  Eigen::MatrixXd x0(probe.size(), M);
  x0.col(0) = probe;
  for (Eigen::Index i = 1; i < M; ++i) x0.col(i) = mu0_sampler(init);
  const PathBundle bundle = simulate_nparticle(spec, policy, x0, seed);
  return EmpiricalMeasure(bundle.states.back());
}

CharacteristicsReport check_characteristics(const PathBundle& bundle, double L) {
  CharacteristicsReport rep;
  if (bundle.drift_sup.size() > 0) rep.max_drift = bundle.drift_sup.maxCoeff();
  if (bundle.diff_sup.size() > 0) rep.max_diff = bundle.diff_sup.maxCoeff();
  rep.within_bound = rep.max_drift <= L && rep.max_diff <= L;
  return rep;
}

}  // namespace mfpde
