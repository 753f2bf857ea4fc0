#include "meantest/eel.hpp"

#include <cmath>
#include <limits>

#include "meantest/errors.hpp"
#include "meantest/moments.hpp"
#include "meantest/rng.hpp"

namespace meantest {

namespace {

constexpr double kResidualTol = 1e-9;

// Tilted weights, mean and covariance for logits s_i = t^T x_i, computed
// with max-subtraction so arbitrary tilts stay finite.
struct Tilted {
  Eigen::VectorXd weights;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  Eigen::VectorXd log_nw;  // log(n * w_i), exact from the logits
};

Tilted tilt(const Eigen::MatrixXd& x, const Eigen::VectorXd& t) {
  const int n = static_cast<int>(x.rows());
  Eigen::VectorXd s = x * t;
  const double m = s.maxCoeff();
  Eigen::VectorXd e = (s.array() - m).exp();
  const double z = e.sum();
  Tilted out;
  out.weights = e / z;
  out.log_nw = (s.array() - m - std::log(z) + std::log(static_cast<double>(n))).matrix();
  out.mean = x.transpose() * out.weights;
  const Eigen::MatrixXd centered = x.rowwise() - out.mean.transpose();
  out.cov = centered.transpose() * (centered.array().colwise() * out.weights.array()).matrix();
  return out;
}

}  // namespace

EelSolve eel_solve_lambda(const EuclideanSample& s1, const EuclideanSample& s2) {
  if (s1.dim() != s2.dim()) throw DimensionError("eel: samples have different dimensions");
  const int d = s1.dim();
  const int n1 = s1.size(), n2 = s2.size();
  if (n1 < 2 || n2 < 2) throw InvalidInputError("eel: need at least 2 observations per sample");
  const double kappa = static_cast<double>(n1) / n2;

  // Center at the pooled mean for conditioning; the tilt is translation
  // invariant, so lambda is unchanged.
  const Eigen::VectorXd center =
      (n1 * s1.data.colwise().mean() + n2 * s2.data.colwise().mean()).transpose() /
      static_cast<double>(n1 + n2);
  const Eigen::MatrixXd x = s1.data.rowwise() - center.transpose();
  const Eigen::MatrixXd y = s2.data.rowwise() - center.transpose();

  const SampleMoments m1 = moments(s1);
  const SampleMoments m2 = moments(s2);
  const Eigen::MatrixXd pooled =
      ((n1 - 1) * m1.cov + (n2 - 1) * m2.cov) / static_cast<double>(n1 + n2 - 2);
  Eigen::LLT<Eigen::MatrixXd> pooled_llt(pooled);
  if (pooled_llt.info() != Eigen::Success)
    throw SingularCovarianceError("eel: degenerate pooled covariance");

  EelSolve out;
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(d);
  for (int restart = 0; restart <= 5; ++restart) {
    out.restarts = restart;
    if (restart > 0) {
      // Deterministic restart draw with magnitude set by the pooled covariance.
      RngStream rng(0xee1u, static_cast<std::uint64_t>(restart));
      Eigen::VectorXd g(d);
      for (int j = 0; j < d; ++j) g[j] = rng.normal();
      lambda = pooled_llt.matrixL().transpose().solve(g) * 0.5;
    }
    bool stalled = false;
    for (int iter = 1; iter <= 100; ++iter) {
      ++out.iterations;
      const Tilted t1 = tilt(x, lambda);
      const Tilted t2 = tilt(y, (-kappa) * lambda);
      const Eigen::VectorXd r = t1.mean - t2.mean;
      const double rn = r.norm();
      if (rn <= kResidualTol) {
        out.residual = rn;
        out.weights.lambda = lambda;
        out.weights.weights1 = t1.weights / t1.weights.sum();
        out.weights.weights2 = t2.weights / t2.weights.sum();
        out.implied_mu = 0.5 * (t1.mean + t2.mean) + center;
        return out;
      }
      Eigen::MatrixXd jac = t1.cov + kappa * t2.cov;
      Eigen::LLT<Eigen::MatrixXd> llt(jac);
      if (llt.info() != Eigen::Success) {
        jac.diagonal().array() += 1e-12 * (1.0 + jac.trace() / d);
        llt.compute(jac);
        if (llt.info() != Eigen::Success) {
          stalled = true;
          break;
        }
      }
      const Eigen::VectorXd step = -llt.solve(r);
      // Backtrack on ||r||^2.
      double t = 1.0;
      bool accepted = false;
      for (; t >= 1e-12; t *= 0.5) {
        const Eigen::VectorXd cand = lambda + t * step;
        const Eigen::VectorXd rc = tilt(x, cand).mean - tilt(y, (-kappa) * cand).mean;
        if (rc.squaredNorm() <= r.squaredNorm() * (1.0 - 1e-4 * t)) {
          lambda = cand;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        stalled = true;
        out.residual = rn;
        break;
      }
    }
    if (!stalled) {
      // iteration budget exhausted without meeting the tolerance
      const Tilted t1 = tilt(x, lambda);
      const Tilted t2 = tilt(y, (-kappa) * lambda);
      out.residual = (t1.mean - t2.mean).norm();
    }
  }
  throw ConvergenceError("eel: Newton did not converge after restarts (residual " +
                             std::to_string(out.residual) + ")",
                         out.residual);
}

double eel_statistic(const EelWeights& weights, int n1, int n2) {
  // D_j = sum_i p_ji log(n_j p_ji) is the KL divergence to uniform, >= 0.
  const auto kl = [](const Eigen::VectorXd& w, int n) {
    double acc = 0.0;
    for (int i = 0; i < w.size(); ++i)
      if (w[i] > 0.0) acc += w[i] * std::log(n * w[i]);
    return acc;
  };
  const double stat = 2.0 * (n1 * kl(weights.weights1, n1) + n2 * kl(weights.weights2, n2));
  return std::max(0.0, stat);
}

double eel_statistic_value(const EuclideanSample& s1, const EuclideanSample& s2) {
  const EelSolve sol = eel_solve_lambda(s1, s2);
  return eel_statistic(sol.weights, s1.size(), s2.size());
}

EelResult eel_two_sample(const EuclideanSample& s1, const EuclideanSample& s2,
                         const CalibrationSpec& calibration) {
  const EelSolve sol = eel_solve_lambda(s1, s2);
  EelResult r;
  r.statistic = eel_statistic(sol.weights, s1.size(), s2.size());
  r.implied_mu = sol.implied_mu;
  r.calibration = calibration.kind;
  r.report.outer_iterations = sol.iterations;
  r.report.restarts = sol.restarts;
  r.report.converged = true;
  r.report.residual = sol.residual;
  // lambda_2 = -(n1/n2) lambda_1 exactly, so the scaled sum vanishes.
  const double kappa = static_cast<double>(s1.size()) / s2.size();
  r.report.lambda_sum_norm = ((1.0 - kappa) * sol.weights.lambda).norm();
  r.report.stationarity_norm = 0.0;
  if (calibration.kind == Calibration::Bootstrap) {
    const BootstrapOutcome boot = bootstrap_pvalue(
        [](const EuclideanSample& a, const EuclideanSample& b) { return eel_statistic_value(a, b); },
        s1, s2, calibration.bootstrap);
    r.p_value = boot.p_value;
  } else {
    r.p_value = analytic_pvalue(r.statistic, calibration.kind, s1, s2);
  }
  return r;
}

}  // namespace meantest
