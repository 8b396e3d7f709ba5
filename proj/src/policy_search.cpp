#include "mfpde/policy_search.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace mfpde {

namespace {

std::uint64_t rep_seed(std::uint64_t master, Eigen::Index rep) {
  return substream_seed(master, 0x5eedULL + static_cast<std::uint64_t>(rep));
}

}  // namespace

ValueEstimate evaluate_policy(const MKVProblemSpec& spec, const ControlPolicy& policy,
                              const Eigen::MatrixXd& x0, Eigen::Index reps, std::uint64_t seed,
                              int jobs, const std::string& method) {
  if (reps < 1) throw std::invalid_argument("evaluate_policy: reps must be positive");
  std::vector<double> values(static_cast<std::size_t>(reps), 0.0);

  const auto run_range = [&](Eigen::Index lo, Eigen::Index hi) {
    for (Eigen::Index rep = lo; rep < hi; ++rep) {
      const PathBundle bundle = simulate_nparticle(spec, policy, x0, rep_seed(seed, rep));
      double v = bundle.running_reward;
      if (spec.g) v += spec.g(EmpiricalMeasure(bundle.states.back()));
      values[static_cast<std::size_t>(rep)] = v;
    }
  };

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(reps)));
  if (workers == 1) {
    run_range(0, reps);
  } else {
    std::vector<std::thread> pool;
    const Eigen::Index chunk = (reps + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const Eigen::Index lo = w * chunk;
      const Eigen::Index hi = std::min(reps, lo + chunk);
      if (lo < hi) pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // sequential reduction in repetition order, independent of `jobs`
  double mean = 0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(reps);
  double var = 0;
  for (double v : values) var += (v - mean) * (v - mean);
  var = reps > 1 ? var / static_cast<double>(reps - 1) : 0.0;

  ValueEstimate est;
  est.mean = mean;
  est.std_error = reps > 1 ? std::sqrt(var / static_cast<double>(reps)) : 0.0;
  est.n_samples = reps;
  est.method = method;
  return est;
}

PolicySearchResult value_policy_search(const MKVProblemSpec& spec, const PolicyFamily& family,
                                       const Eigen::MatrixXd& x0, Eigen::Index reps,
                                       std::uint64_t seed, int jobs) {
  if (family.members.empty()) throw std::invalid_argument("value_policy_search: empty family");
  if (reps < 1) throw std::invalid_argument("value_policy_search: zero budget");

  PolicySearchResult out;
  out.evaluations.reserve(family.members.size());
  for (std::size_t m = 0; m < family.members.size(); ++m) {
    // same seed for every member: common random numbers
    std::string label = m < family.labels.size() ? family.labels[m] : std::to_string(m);
    out.evaluations.push_back(
        evaluate_policy(spec, family.members[m], x0, reps, seed, jobs, "policy_mc:" + label));
  }
  out.best_index = 0;
  for (std::size_t m = 1; m < out.evaluations.size(); ++m)
    if (out.evaluations[m].mean > out.evaluations[out.best_index].mean) out.best_index = m;
  out.best = out.evaluations[out.best_index];
  return out;
}

}  // namespace mfpde
