#ifndef MEANTEST_CALIBRATION_HPP
#define MEANTEST_CALIBRATION_HPP

#include <string>

#include "meantest/bootstrap.hpp"

namespace meantest {

// Reference distribution used to turn a statistic into a p-value.
//   Chi2          : chi-squared with d degrees of freedom.
//   CorrectedChi2 : James's corrected chi-squared quantile (coefficients A, B).
//   F             : F with estimated degrees of freedom (Krishnamoorthy-Yu nu);
//                   for the Hotelling statistic, its own pooled-covariance law.
//   Bootstrap     : nonparametric bootstrap (see bootstrap.hpp).
enum class Calibration { Chi2, CorrectedChi2, F, Bootstrap };

std::string to_string(Calibration c);
Calibration calibration_from_string(const std::string& s);

struct CalibrationSpec {
  Calibration kind = Calibration::F;
  BootstrapConfig bootstrap;  // used when kind == Bootstrap
};

// p-value of `statistic` under the analytic calibrations (Chi2,
// CorrectedChi2, F). The corrected-chi2 and F references estimate their
// coefficients from the two samples' S_j / n_j matrices. Throws
// CalibrationError for Calibration::Bootstrap.
double analytic_pvalue(double statistic, Calibration kind, const EuclideanSample& s1,
                       const EuclideanSample& s2);

}  // namespace meantest

#endif
