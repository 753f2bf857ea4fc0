#ifndef MEANTEST_BOOTSTRAP_HPP
#define MEANTEST_BOOTSTRAP_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "meantest/compositional.hpp"
#include "meantest/moments.hpp"

namespace meantest {

struct BootstrapConfig {
  int B = 299;
  std::uint64_t master_seed = 0;
  // 0 = use hardware concurrency. Results do not depend on this value.
  int max_parallelism = 0;
  // Fraction of failed replicates above which the whole calibration fails.
  double max_failure_fraction = 0.10;
  // Keep the per-replicate statistics in the outcome.
  bool retain_replicates = false;
};

struct BootstrapOutcome {
  double t_obs = 0.0;
  double p_value = 1.0;
  int successes = 0;
  int failures = 0;
  std::optional<std::vector<double>> replicate_statistics;
};

// Precision-weighted common mean under the null:
// mu_c = [(n1-1) S1^-1 + (n2-1) S2^-1]^-1 [(n1-1) S1^-1 xbar1 + (n2-1) S2^-1 xbar2].
Eigen::VectorXd common_mean_estimate(const SampleMoments& m1, const SampleMoments& m2);

// Shifts both samples so each has mean exactly mu_c: y_ji = x_ji - xbar_j + mu_c.
std::pair<EuclideanSample, EuclideanSample> center_to_null(const EuclideanSample& s1,
                                                           const EuclideanSample& s2);

using StatisticFn = std::function<double(const EuclideanSample&, const EuclideanSample&)>;

// Nonparametric bootstrap calibration of an arbitrary two-sample statistic:
// computes the statistic on the observed data, centers the samples to the
// null, then recomputes it on B with-replacement resample pairs. Replicate b
// draws from the stream (master_seed, b), so the p-value is independent of
// worker count and execution order. Replicates where the statistic throws a
// library error are dropped and counted; the run fails if the failure
// fraction exceeds cfg.max_failure_fraction.
//
// p = (#{T_b > T_obs} + 1) / (successes + 1), strict inequality.
BootstrapOutcome bootstrap_pvalue(const StatisticFn& statistic, const EuclideanSample& s1,
                                  const EuclideanSample& s2, const BootstrapConfig& cfg);

}  // namespace meantest

#endif
