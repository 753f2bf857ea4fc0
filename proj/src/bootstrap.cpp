#include "meantest/bootstrap.hpp"

#include <cmath>

#include "meantest/errors.hpp"
#include "meantest/parallel.hpp"
#include "meantest/rng.hpp"

namespace meantest {

Eigen::VectorXd common_mean_estimate(const SampleMoments& m1, const SampleMoments& m2) {
  if (m1.mean.size() != m2.mean.size())
    throw DimensionError("common_mean_estimate: dimension mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt1(m1.cov);
  Eigen::LLT<Eigen::MatrixXd> llt2(m2.cov);
  if (llt1.info() != Eigen::Success || llt2.info() != Eigen::Success)
    throw SingularCovarianceError("common_mean_estimate: singular sample covariance");
  const double w1 = m1.n - 1, w2 = m2.n - 1;
  const Eigen::MatrixXd p1 = w1 * llt1.solve(Eigen::MatrixXd::Identity(m1.mean.size(), m1.mean.size()));
  const Eigen::MatrixXd p2 = w2 * llt2.solve(Eigen::MatrixXd::Identity(m2.mean.size(), m2.mean.size()));
  Eigen::LLT<Eigen::MatrixXd> lltsum(p1 + p2);
  if (lltsum.info() != Eigen::Success)
    throw SingularCovarianceError("common_mean_estimate: singular precision sum");
  return lltsum.solve(p1 * m1.mean + p2 * m2.mean);
}

std::pair<EuclideanSample, EuclideanSample> center_to_null(const EuclideanSample& s1,
                                                           const EuclideanSample& s2) {
  const SampleMoments m1 = moments(s1);
  const SampleMoments m2 = moments(s2);
  const Eigen::VectorXd mu_c = common_mean_estimate(m1, m2);
  EuclideanSample y1, y2;
  y1.data = s1.data.rowwise() + (mu_c - m1.mean).transpose();
  y2.data = s2.data.rowwise() + (mu_c - m2.mean).transpose();
  return {std::move(y1), std::move(y2)};
}

namespace {

EuclideanSample resample_rows(const EuclideanSample& s, RngStream& rng) {
  const int n = s.size();
  EuclideanSample out;
  out.data.resize(n, s.dim());
  for (int i = 0; i < n; ++i)
    out.data.row(i) = s.data.row(static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n))));
  return out;
}

}  // namespace

BootstrapOutcome bootstrap_pvalue(const StatisticFn& statistic, const EuclideanSample& s1,
                                  const EuclideanSample& s2, const BootstrapConfig& cfg) {
  if (cfg.B < 1) throw InvalidInputError("bootstrap: B must be >= 1");
  BootstrapOutcome out;
  out.t_obs = statistic(s1, s2);  // uncomputable observed statistic propagates

  const auto [y1, y2] = center_to_null(s1, s2);

  std::vector<double> stats(static_cast<std::size_t>(cfg.B),
                            std::numeric_limits<double>::quiet_NaN());
  parallel_for(static_cast<std::size_t>(cfg.B), cfg.max_parallelism, [&](std::size_t b) {
    RngStream rng(cfg.master_seed, static_cast<std::uint64_t>(b));
    const EuclideanSample b1 = resample_rows(y1, rng);
    const EuclideanSample b2 = resample_rows(y2, rng);
    try {
      stats[b] = statistic(b1, b2);
    } catch (const Error&) {
      // replicate statistic uncomputable (hull violation, singularity, ...)
    }
  });

  int exceed = 0;
  for (double t : stats) {
    if (std::isnan(t)) {
      ++out.failures;
    } else {
      ++out.successes;
      if (t > out.t_obs) ++exceed;
    }
  }
  if (out.successes == 0)
    throw ConvergenceError("bootstrap: every replicate failed", static_cast<double>(cfg.B));
  if (out.failures > cfg.max_failure_fraction * cfg.B)
    throw ConvergenceError("bootstrap: " + std::to_string(out.failures) + " of " +
                               std::to_string(cfg.B) + " replicates failed",
                           static_cast<double>(out.failures));
  out.p_value = (exceed + 1.0) / (out.successes + 1.0);
  if (cfg.retain_replicates) out.replicate_statistics = std::move(stats);
  return out;
}

}  // namespace meantest
