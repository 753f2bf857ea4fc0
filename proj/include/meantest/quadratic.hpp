#ifndef MEANTEST_QUADRATIC_HPP
#define MEANTEST_QUADRATIC_HPP

#include <map>
#include <string>
#include <utility>

#include "meantest/calibration.hpp"
#include "meantest/moments.hpp"

namespace meantest {

struct QuadraticResult {
  double statistic = 0.0;
  double p_value = 1.0;
  Calibration calibration = Calibration::F;
  // A, B, nu, degrees of freedom, bootstrap counts as applicable.
  std::map<std::string, double> aux;
};

// Hotelling T^2 with pooled covariance and its F reference
// T^2 ~ (n1+n2) d / (n1+n2-d+1) * F_{d, n1+n2-d+1}.
QuadraticResult hotelling(const EuclideanSample& s1, const EuclideanSample& s2);
double hotelling_statistic(const EuclideanSample& s1, const EuclideanSample& s2);

// James statistic and the matrices downstream calibrations need:
// S_j~ = S_j / n_j and S~ = S1~ + S2~.
struct JamesParts {
  double t2u = 0.0;
  SampleMoments m1, m2;
  Eigen::MatrixXd s1_tilde, s2_tilde, s_tilde;
};
JamesParts james_statistic(const EuclideanSample& s1, const EuclideanSample& s2);

// James's correction coefficients A and B (trace polynomials in S~^-1 S_j~).
std::pair<double, double> james_coefficients(const Eigen::MatrixXd& s1_tilde,
                                             const Eigen::MatrixXd& s2_tilde,
                                             const Eigen::MatrixXd& s_tilde, int n1, int n2,
                                             int d);

// p-value for the corrected chi-squared reference: solves q (A + B q) = t2u
// in closed form and evaluates 1 - chi2_cdf(q, d). Rejecting at level alpha
// with this p-value is equivalent to t2u > 2h(alpha).
double james_pvalue_corrected_chi2(double t2u, double A, double B, int d);

// Estimated degrees of freedom for the F reference (two-sample case).
double krishnamoorthy_nu(const Eigen::MatrixXd& s1_tilde, const Eigen::MatrixXd& s2_tilde,
                         const Eigen::MatrixXd& s_tilde, int n1, int n2, int d);

// p-value for T_u^2 ~ nu d / (nu - d + 1) * F_{d, nu-d+1}; requires nu > d - 1.
double james_pvalue_f(double t2u, double nu, int d);

// James test with one of the analytic calibrations (Chi2, CorrectedChi2, F).
QuadraticResult james(const EuclideanSample& s1, const EuclideanSample& s2, Calibration kind);

}  // namespace meantest

#endif
