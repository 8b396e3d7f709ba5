#pragma once

#include <string>
#include <vector>

#include "mfpde/dynamics.hpp"

namespace mfpde {

// Monte Carlo estimate with symmetric confidence interval mean +- 3 SE.
struct ValueEstimate {
  double mean = 0;
  double std_error = 0;
  Eigen::Index n_samples = 0;
  std::string method;
};

// Per-particle reward of one policy: mean over repetitions of
// (1/N) sum_i int f dt + g(mu^N(X_T)), left-endpoint Riemann sum in time,
// one independent master seed per repetition split from `seed`.
ValueEstimate evaluate_policy(const MKVProblemSpec& spec, const ControlPolicy& policy,
                              const Eigen::MatrixXd& x0, Eigen::Index reps, std::uint64_t seed,
                              int jobs = 1, const std::string& method = "policy_mc");

struct PolicyFamily {
  std::vector<ControlPolicy> members;
  std::vector<std::string> labels;
};

struct PolicySearchResult {
  ValueEstimate best;
  std::size_t best_index = 0;
  std::vector<ValueEstimate> evaluations;
};

// Maximizes the Monte Carlo estimate over the family with common random
// numbers: every member sees the same per-repetition noise, so ranking noise
// cancels to first order. Deterministic for a fixed seed, bit for bit.
PolicySearchResult value_policy_search(const MKVProblemSpec& spec, const PolicyFamily& family,
                                       const Eigen::MatrixXd& x0, Eigen::Index reps,
                                       std::uint64_t seed, int jobs = 1);

}  // namespace mfpde
