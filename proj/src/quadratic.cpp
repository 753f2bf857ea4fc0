#include "meantest/quadratic.hpp"

#include <cmath>

#include "meantest/distributions.hpp"
#include "meantest/errors.hpp"

namespace meantest {

namespace {

// Cholesky solve with an explicit singularity check; no silent regularization.
Eigen::LLT<Eigen::MatrixXd> checked_llt(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw SingularCovarianceError(std::string(what) + " is singular or not positive definite");
  return llt;
}

double clamp_statistic(double t) {
  // PSD quadratic form; wipe out sign noise from the solve.
  if (t < 0.0 && t > -1e-9) return 0.0;
  return t;
}

void check_dims(const EuclideanSample& s1, const EuclideanSample& s2) {
  if (s1.dim() != s2.dim()) throw DimensionError("samples have different dimensions");
  if (s1.dim() < 1) throw DimensionError("samples must have dimension >= 1");
}

}  // namespace

double hotelling_statistic(const EuclideanSample& s1, const EuclideanSample& s2) {
  check_dims(s1, s2);
  const SampleMoments m1 = moments(s1);
  const SampleMoments m2 = moments(s2);
  const int n1 = m1.n, n2 = m2.n;
  const int d = s1.dim();
  if (n1 + n2 - d + 1 <= 0)
    throw InvalidInputError("hotelling: n1 + n2 - d + 1 must be positive");
  const Eigen::MatrixXd pooled =
      ((n1 - 1) * m1.cov + (n2 - 1) * m2.cov) / static_cast<double>(n1 + n2 - 2);
  const double factor = 1.0 / n1 + 1.0 / n2;
  const auto llt = checked_llt(pooled * factor, "pooled covariance");
  const Eigen::VectorXd diff = m1.mean - m2.mean;
  return clamp_statistic(diff.dot(llt.solve(diff)));
}

QuadraticResult hotelling(const EuclideanSample& s1, const EuclideanSample& s2) {
  const double t2 = hotelling_statistic(s1, s2);
  const int n1 = s1.size(), n2 = s2.size(), d = s1.dim();
  const double df2 = n1 + n2 - d + 1;
  // Reference law T^2 ~ (n1+n2) d / (n1+n2-d+1) F_{d, n1+n2-d+1}.
  const double scaled = t2 * df2 / (static_cast<double>(n1 + n2) * d);
  QuadraticResult r;
  r.statistic = t2;
  r.calibration = Calibration::F;
  r.p_value = 1.0 - f_cdf(scaled, d, df2);
  r.aux["df1"] = d;
  r.aux["df2"] = df2;
  r.aux["scale"] = static_cast<double>(n1 + n2) * d / df2;
  return r;
}

JamesParts james_statistic(const EuclideanSample& s1, const EuclideanSample& s2) {
  check_dims(s1, s2);
  JamesParts parts;
  parts.m1 = moments(s1);
  parts.m2 = moments(s2);
  parts.s1_tilde = parts.m1.cov / parts.m1.n;
  parts.s2_tilde = parts.m2.cov / parts.m2.n;
  parts.s_tilde = parts.s1_tilde + parts.s2_tilde;
  const auto llt = checked_llt(parts.s_tilde, "S1/n1 + S2/n2");
  const Eigen::VectorXd diff = parts.m1.mean - parts.m2.mean;
  parts.t2u = clamp_statistic(diff.dot(llt.solve(diff)));
  return parts;
}

std::pair<double, double> james_coefficients(const Eigen::MatrixXd& s1_tilde,
                                             const Eigen::MatrixXd& s2_tilde,
                                             const Eigen::MatrixXd& s_tilde, int n1, int n2,
                                             int d) {
  if (s1_tilde.rows() != d || s2_tilde.rows() != d || s_tilde.rows() != d)
    throw DimensionError("james_coefficients: matrix dimensions do not match d");
  const auto llt = checked_llt(s_tilde, "S1/n1 + S2/n2");
  const Eigen::MatrixXd w1 = llt.solve(s1_tilde);  // S~^-1 S1~
  const Eigen::MatrixXd w2 = llt.solve(s2_tilde);
  const double tr1 = w1.trace(), tr2 = w2.trace();
  const double trsq1 = (w1 * w1).trace(), trsq2 = (w2 * w2).trace();
  const double n1m = n1 - 1, n2m = n2 - 1;
  const double A = 1.0 + (tr1 * tr1 / n1m + tr2 * tr2 / n2m) / (2.0 * d);
  const double B = (0.5 * (trsq1 / n1m + trsq2 / n2m) + 0.5 * (tr1 * tr1 / n1m + tr2 * tr2 / n2m)) /
                   (d * (d + 2.0));
  return {A, B};
}

double james_pvalue_corrected_chi2(double t2u, double A, double B, int d) {
  if (!(A > 0.0) || B < 0.0) throw InvalidInputError("corrected chi2: need A > 0, B >= 0");
  if (t2u < 0.0) throw InvalidInputError("corrected chi2: statistic must be nonnegative");
  // q solves q (A + B q) = t2u; linear branch avoids 0/0 when B = 0.
  const double q = (B > 0.0) ? (-A + std::sqrt(A * A + 4.0 * B * t2u)) / (2.0 * B) : t2u / A;
  return 1.0 - chi2_cdf(q, d);
}

double krishnamoorthy_nu(const Eigen::MatrixXd& s1_tilde, const Eigen::MatrixXd& s2_tilde,
                         const Eigen::MatrixXd& s_tilde, int n1, int n2, int d) {
  const auto llt = checked_llt(s_tilde, "S1/n1 + S2/n2");
  // tr((S_j~ S~^-1)^2) = tr((S~^-1 S_j~)^2) and likewise for the plain trace.
  const Eigen::MatrixXd w1 = llt.solve(s1_tilde);
  const Eigen::MatrixXd w2 = llt.solve(s2_tilde);
  const double tr1 = w1.trace(), tr2 = w2.trace();
  const double trsq1 = (w1 * w1).trace(), trsq2 = (w2 * w2).trace();
  const double denom = (trsq1 + tr1 * tr1) / n1 + (trsq2 + tr2 * tr2) / n2;
  if (!(denom > 0.0)) throw SingularCovarianceError("nu: degenerate covariance structure");
  const double nu = (d + d * d) / denom;
  if (!(nu > 0.0)) throw SingularCovarianceError("nu: nonpositive degrees of freedom");
  return nu;
}

double james_pvalue_f(double t2u, double nu, int d) {
  if (t2u < 0.0) throw InvalidInputError("james F p-value: statistic must be nonnegative");
  const double df2 = nu - d + 1;
  if (!(df2 > 0.0))
    throw CalibrationError("F calibration undefined: nu <= d - 1 (nu = " + std::to_string(nu) +
                           ")");
  return 1.0 - f_cdf(t2u * df2 / (nu * d), d, df2);
}

QuadraticResult james(const EuclideanSample& s1, const EuclideanSample& s2, Calibration kind) {
  const JamesParts parts = james_statistic(s1, s2);
  const int d = s1.dim();
  QuadraticResult r;
  r.statistic = parts.t2u;
  r.calibration = kind;
  switch (kind) {
    case Calibration::Chi2:
      r.p_value = 1.0 - chi2_cdf(parts.t2u, d);
      r.aux["df"] = d;
      break;
    case Calibration::CorrectedChi2: {
      const auto [A, B] =
          james_coefficients(parts.s1_tilde, parts.s2_tilde, parts.s_tilde, parts.m1.n, parts.m2.n, d);
      r.p_value = james_pvalue_corrected_chi2(parts.t2u, A, B, d);
      r.aux["A"] = A;
      r.aux["B"] = B;
      break;
    }
    case Calibration::F: {
      const double nu =
          krishnamoorthy_nu(parts.s1_tilde, parts.s2_tilde, parts.s_tilde, parts.m1.n, parts.m2.n, d);
      r.p_value = james_pvalue_f(parts.t2u, nu, d);
      r.aux["nu"] = nu;
      break;
    }
    case Calibration::Bootstrap:
      throw CalibrationError("james(): bootstrap calibration goes through bootstrap_pvalue");
  }
  return r;
}

}  // namespace meantest
