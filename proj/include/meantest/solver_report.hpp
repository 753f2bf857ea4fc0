#ifndef MEANTEST_SOLVER_REPORT_HPP
#define MEANTEST_SOLVER_REPORT_HPP

#include <string>

namespace meantest {

// Diagnostics attached to EL/EEL results.
struct SolverReport {
  int outer_iterations = 0;  // mean-search iterations (EL) or Newton iterations (EEL)
  int inner_iterations = 0;  // total dual-solve iterations across evaluations
  int restarts = 0;
  bool converged = false;
  std::string hull_status = "ok";  // ok | violation | unknown
  double residual = 0.0;           // final constraint violation
  double lambda_sum_norm = 0.0;    // ||lambda_1 + lambda_2||
  // ||n1 lambda_1 + n2 lambda_2|| / (n1 + n2); zero at an exact optimum.
  double stationarity_norm = 0.0;
};

}  // namespace meantest

#endif
