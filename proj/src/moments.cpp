#include "meantest/moments.hpp"

#include "meantest/errors.hpp"

namespace meantest {

SampleMoments moments(const EuclideanSample& sample) {
  const int n = sample.size();
  const int d = sample.dim();
  if (n < 2) throw InvalidInputError("moments: need at least 2 observations");
  if (d < 1) throw DimensionError("moments: need at least 1 dimension");
  SampleMoments m;
  m.n = n;
  m.mean = sample.data.colwise().mean();
  const Eigen::MatrixXd centered = sample.data.rowwise() - m.mean.transpose();
  m.cov = centered.transpose() * centered / static_cast<double>(n - 1);
  return m;
}

}  // namespace meantest
