#ifndef MEANTEST_DISTRIBUTIONS_HPP
#define MEANTEST_DISTRIBUTIONS_HPP

#include <Eigen/Dense>
#include <vector>

#include "meantest/compositional.hpp"
#include "meantest/rng.hpp"

namespace meantest {

// Regularized lower incomplete gamma P(a, x); series for x < a+1, Lentz
// continued fraction otherwise. Internal target 1e-15 relative.
double regularized_gamma_p(double a, double x);

// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction.
double regularized_beta(double x, double a, double b);

// Chi-squared CDF/quantile with k > 0 degrees of freedom.
double chi2_cdf(double x, double k);
double chi2_quantile(double p, double k);
// Chi-squared density (used by the quantile Newton steps and by tests).
double chi2_pdf(double x, double k);

// F distribution CDF/quantile with d1, d2 > 0 degrees of freedom.
double f_cdf(double x, double d1, double d2);
double f_quantile(double p, double d1, double d2);
double f_pdf(double x, double d1, double d2);

// Dirichlet parameters: all entries strictly positive.
struct DirichletParams {
  Eigen::VectorXd alpha;
  int parts() const { return static_cast<int>(alpha.size()); }
};

// Finite mixture of Dirichlets over a common simplex dimension.
struct DirichletMixture {
  Eigen::VectorXd weights;
  std::vector<DirichletParams> components;
};

// Normal on R^d pushed onto the simplex through the inverse alr map.
// sigma must be symmetric positive semi-definite; the all-zero matrix is
// accepted as the degenerate point mass.
struct LogisticNormalParams {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
};

void validate(const DirichletParams& p);
void validate(const DirichletMixture& m);
void validate(const LogisticNormalParams& p);

CompositionalSample sample_dirichlet(const DirichletParams& params, int n, RngStream& rng);
CompositionalSample sample_dirichlet_mixture(const DirichletMixture& mix, int n, RngStream& rng);
CompositionalSample sample_logistic_normal(const LogisticNormalParams& params, int n, RngStream& rng);

}  // namespace meantest

#endif
