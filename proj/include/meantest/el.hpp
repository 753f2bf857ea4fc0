#ifndef MEANTEST_EL_HPP
#define MEANTEST_EL_HPP

#include <array>

#include "meantest/calibration.hpp"
#include "meantest/compositional.hpp"
#include "meantest/solver_report.hpp"

namespace meantest {

// One-sample empirical-likelihood weights at a candidate mean mu:
// p_i = 1 / (n (1 + lambda^T (x_i - mu))), positive and summing to one,
// with sum_i p_i x_i = mu.
struct ElWeights {
  Eigen::VectorXd lambda;
  Eigen::VectorXd weights;
  Eigen::VectorXd mu;
};

struct ElPartial {
  ElWeights weights;
  // 2 sum_i log(1 + lambda^T (x_i - mu)) = -2 sum_i log(n p_i), >= 0.
  double statistic = 0.0;
  int iterations = 0;
};

// Solves the one-sample dual for lambda by damped Newton. Requires mu
// strictly inside the convex hull of the rows; throws ConvexHullError
// (verified by an LP-feasibility check) when it is not, ConvergenceError when
// the dual stalls for another reason. sample_label tags the error (1 or 2).
ElPartial el_one_sample(const EuclideanSample& sample, const Eigen::VectorXd& mu,
                        int sample_label = 0);

// True when mu lies in the convex hull of the sample rows (Frank-Wolfe
// feasibility check with a separation certificate for the outside case).
bool mu_inside_hull(const EuclideanSample& sample, const Eigen::VectorXd& mu);

struct ElResult {
  double statistic = 0.0;  // Lambda = min over mu of the summed partials
  Eigen::VectorXd mu_hat;
  std::array<Eigen::VectorXd, 2> lambdas;
  double p_value = 1.0;
  Calibration calibration = Calibration::Chi2;
  SolverReport report;
};

// Two-sample empirical likelihood: minimizes partial_1(mu) + partial_2(mu)
// over the common mean with a derivative-free simplex search started at the
// precision-weighted common mean. Throws ConvexHullError when no feasible mu
// exists (sample hulls do not intersect), ConvergenceError on stalls.
ElResult el_two_sample(const EuclideanSample& s1, const EuclideanSample& s2,
                       const CalibrationSpec& calibration);

// Statistic only; used as the bootstrap replicate function.
double el_statistic_value(const EuclideanSample& s1, const EuclideanSample& s2);

}  // namespace meantest

#endif
