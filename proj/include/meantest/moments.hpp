#ifndef MEANTEST_MOMENTS_HPP
#define MEANTEST_MOMENTS_HPP

#include <Eigen/Dense>

#include "meantest/compositional.hpp"

namespace meantest {

// First two sample moments: arithmetic mean and the unbiased covariance
// (divisor n - 1). Requires n >= 2.
struct SampleMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  int n = 0;
};

SampleMoments moments(const EuclideanSample& sample);

}  // namespace meantest

#endif
