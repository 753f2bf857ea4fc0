#ifndef MEANTEST_EEL_HPP
#define MEANTEST_EEL_HPP

#include "meantest/calibration.hpp"
#include "meantest/compositional.hpp"
#include "meantest/solver_report.hpp"

namespace meantest {

// Exponentially tilted weights for the two samples. lambda is the first
// sample's tilt; the second sample's is -(n1/n2) lambda, which makes the two
// weighted means agree at the solution without estimating the common mean.
struct EelWeights {
  Eigen::VectorXd lambda;
  Eigen::VectorXd weights1;
  Eigen::VectorXd weights2;
};

struct EelSolve {
  EelWeights weights;
  Eigen::VectorXd implied_mu;  // the common weighted mean
  int iterations = 0;
  int restarts = 0;
  double residual = 0.0;
};

// Newton root search (analytic Jacobian = sum of tilted covariances) on the
// d-dimensional residual between the two tilted means. Log-sum-exp
// stabilized; up to 5 deterministic restarts scaled by the pooled covariance.
EelSolve eel_solve_lambda(const EuclideanSample& s1, const EuclideanSample& s2);

// Lambda = 2 [ n1 sum_i p1i log(n1 p1i) + n2 sum_i p2i log(n2 p2i) ] >= 0.
double eel_statistic(const EelWeights& weights, int n1, int n2);

struct EelResult {
  double statistic = 0.0;
  Eigen::VectorXd implied_mu;
  double p_value = 1.0;
  Calibration calibration = Calibration::Chi2;
  SolverReport report;
};

EelResult eel_two_sample(const EuclideanSample& s1, const EuclideanSample& s2,
                         const CalibrationSpec& calibration);

// Statistic only; used as the bootstrap replicate function.
double eel_statistic_value(const EuclideanSample& s1, const EuclideanSample& s2);

}  // namespace meantest

#endif
