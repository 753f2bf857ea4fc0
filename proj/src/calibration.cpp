#include "meantest/calibration.hpp"

#include "meantest/distributions.hpp"
#include "meantest/errors.hpp"
#include "meantest/quadratic.hpp"

namespace meantest {

std::string to_string(Calibration c) {
  switch (c) {
    case Calibration::Chi2: return "chi2";
    case Calibration::CorrectedChi2: return "corrected-chi2";
    case Calibration::F: return "f";
    case Calibration::Bootstrap: return "bootstrap";
  }
  return "?";
}

Calibration calibration_from_string(const std::string& s) {
  if (s == "chi2") return Calibration::Chi2;
  if (s == "corrected-chi2") return Calibration::CorrectedChi2;
  if (s == "f") return Calibration::F;
  if (s == "bootstrap") return Calibration::Bootstrap;
  throw InvalidInputError("unknown calibration '" + s +
                          "' (expected chi2 | corrected-chi2 | f | bootstrap)");
}

double analytic_pvalue(double statistic, Calibration kind, const EuclideanSample& s1,
                       const EuclideanSample& s2) {
  const int d = s1.dim();
  switch (kind) {
    case Calibration::Chi2:
      return 1.0 - chi2_cdf(statistic, d);
    case Calibration::CorrectedChi2: {
      const SampleMoments m1 = moments(s1), m2 = moments(s2);
      const Eigen::MatrixXd s1t = m1.cov / m1.n;
      const Eigen::MatrixXd s2t = m2.cov / m2.n;
      const auto [A, B] = james_coefficients(s1t, s2t, s1t + s2t, m1.n, m2.n, d);
      return james_pvalue_corrected_chi2(statistic, A, B, d);
    }
    case Calibration::F: {
      const SampleMoments m1 = moments(s1), m2 = moments(s2);
      const Eigen::MatrixXd s1t = m1.cov / m1.n;
      const Eigen::MatrixXd s2t = m2.cov / m2.n;
      const double nu = krishnamoorthy_nu(s1t, s2t, s1t + s2t, m1.n, m2.n, d);
      return james_pvalue_f(statistic, nu, d);
    }
    case Calibration::Bootstrap:
      throw CalibrationError("analytic_pvalue: bootstrap is not an analytic calibration");
  }
  throw CalibrationError("unknown calibration");
}

}  // namespace meantest
