#include "meantest/distributions.hpp"

#include <cmath>
#include <limits>

#include "meantest/errors.hpp"

namespace meantest {

namespace {

constexpr double kEps = 1e-15;
constexpr int kMaxIter = 2000;

// Series expansion of P(a,x), valid and fast for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw ConvergenceError("incomplete gamma series did not converge", del);
}

// Modified Lentz continued fraction for Q(a,x), x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps)
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw ConvergenceError("incomplete gamma continued fraction did not converge", h);
}

double beta_cf(double x, double a, double b) {
  const double tiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  throw ConvergenceError("incomplete beta continued fraction did not converge", h);
}

// Monotone CDF inversion: safeguarded Newton inside a maintained bracket.
template <typename Cdf, typename Pdf>
double invert_cdf(const Cdf& cdf, const Pdf& pdf, double p, double lo, double hi, double x0) {
  double flo = cdf(lo) - p;
  if (flo > 0.0) return lo;
  double x = std::min(std::max(x0, lo), hi);
  for (int i = 0; i < 200; ++i) {
    const double f = cdf(x) - p;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    if (std::abs(f) < 1e-13 || hi - lo < 1e-14 * (std::abs(x) + 1e-300)) break;
    const double df = pdf(x);
    double next = (df > 0.0) ? x - f / df : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw InvalidInputError("regularized_gamma_p: a must be positive");
  if (x < 0.0) throw InvalidInputError("regularized_gamma_p: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double regularized_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidInputError("regularized_beta: a,b must be positive");
  if (x < 0.0 || x > 1.0) throw InvalidInputError("regularized_beta: x must be in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(x, a, b) / a;
  return 1.0 - front * beta_cf(1.0 - x, b, a) / b;
}

double chi2_cdf(double x, double k) {
  if (!(k > 0.0)) throw InvalidInputError("chi2_cdf: k must be positive");
  if (x < 0.0) throw InvalidInputError("chi2_cdf: x must be nonnegative");
  return regularized_gamma_p(0.5 * k, 0.5 * x);
}

double chi2_pdf(double x, double k) {
  if (!(k > 0.0)) throw InvalidInputError("chi2_pdf: k must be positive");
  if (x < 0.0) return 0.0;
  if (x == 0.0) return k < 2.0 ? std::numeric_limits<double>::infinity() : (k == 2.0 ? 0.5 : 0.0);
  const double hk = 0.5 * k;
  return std::exp((hk - 1.0) * std::log(x) - 0.5 * x - hk * std::log(2.0) - std::lgamma(hk));
}

double chi2_quantile(double p, double k) {
  if (!(k > 0.0)) throw InvalidInputError("chi2_quantile: k must be positive");
  if (!(p > 0.0 && p < 1.0)) throw InvalidInputError("chi2_quantile: p must be in (0,1)");
  double hi = k + 10.0 * std::sqrt(2.0 * k) + 50.0;
  while (chi2_cdf(hi, k) < p) hi *= 2.0;
  return invert_cdf([k](double x) { return chi2_cdf(x, k); },
                    [k](double x) { return chi2_pdf(x, k); }, p, 0.0, hi, k);
}

double f_cdf(double x, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw InvalidInputError("f_cdf: degrees of freedom must be positive");
  if (x < 0.0) throw InvalidInputError("f_cdf: x must be nonnegative");
  if (x == 0.0) return 0.0;
  const double z = d1 * x / (d1 * x + d2);
  return regularized_beta(z, 0.5 * d1, 0.5 * d2);
}

double f_pdf(double x, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw InvalidInputError("f_pdf: degrees of freedom must be positive");
  if (x <= 0.0) return 0.0;
  const double a = 0.5 * d1, b = 0.5 * d2;
  const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double lx = std::log(x);
  const double l = a * std::log(d1 / d2) + (a - 1.0) * lx -
                   (a + b) * std::log1p(d1 * x / d2) - lbeta;
  return std::exp(l);
}

double f_quantile(double p, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0))
    throw InvalidInputError("f_quantile: degrees of freedom must be positive");
  if (!(p > 0.0 && p < 1.0)) throw InvalidInputError("f_quantile: p must be in (0,1)");
  double hi = 10.0 + 10.0 * d2 / std::max(1.0, d2 - 2.0);
  while (f_cdf(hi, d1, d2) < p) hi *= 2.0;
  return invert_cdf([&](double x) { return f_cdf(x, d1, d2); },
                    [&](double x) { return f_pdf(x, d1, d2); }, p, 0.0, hi, 1.0);
}

void validate(const DirichletParams& p) {
  if (p.parts() < 2) throw DimensionError("dirichlet needs at least 2 parts");
  for (int i = 0; i < p.parts(); ++i)
    if (!(p.alpha[i] > 0.0)) throw InvalidInputError("dirichlet alpha entries must be positive");
}

void validate(const DirichletMixture& m) {
  if (m.components.empty()) throw InvalidInputError("mixture needs at least one component");
  if (m.weights.size() != static_cast<Eigen::Index>(m.components.size()))
    throw DimensionError("mixture weights/components size mismatch");
  double sum = 0.0;
  for (int i = 0; i < m.weights.size(); ++i) {
    if (m.weights[i] < 0.0) throw InvalidInputError("mixture weights must be nonnegative");
    sum += m.weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) throw InvalidInputError("mixture weights must sum to 1");
  const int D = m.components.front().parts();
  for (const auto& c : m.components) {
    validate(c);
    if (c.parts() != D) throw DimensionError("mixture components must share D");
  }
}

void validate(const LogisticNormalParams& p) {
  const auto d = p.mu.size();
  if (d < 1) throw DimensionError("logistic normal needs d >= 1");
  if (p.sigma.rows() != d || p.sigma.cols() != d)
    throw DimensionError("logistic normal sigma must be d x d");
  if ((p.sigma - p.sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw InvalidInputError("logistic normal sigma must be symmetric");
  if (p.sigma.isZero(0.0)) return;  // degenerate point mass is allowed
  Eigen::LLT<Eigen::MatrixXd> llt(p.sigma);
  if (llt.info() != Eigen::Success)
    throw InvalidInputError("logistic normal sigma is not positive definite");
}

CompositionalSample sample_dirichlet(const DirichletParams& params, int n, RngStream& rng) {
  validate(params);
  if (n < 1) throw InvalidInputError("sample size must be >= 1");
  const int D = params.parts();
  CompositionalSample out;
  out.data.resize(n, D);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < D; ++j) {
      const double g = rng.gamma(params.alpha[j]);
      out.data(i, j) = g;
      sum += g;
    }
    out.data.row(i) /= sum;
  }
  return out;
}

CompositionalSample sample_dirichlet_mixture(const DirichletMixture& mix, int n, RngStream& rng) {
  validate(mix);
  if (n < 1) throw InvalidInputError("sample size must be >= 1");
  const int D = mix.components.front().parts();
  CompositionalSample out;
  out.data.resize(n, D);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t pick = mix.components.size() - 1;
    for (std::size_t c = 0; c < mix.components.size(); ++c) {
      acc += mix.weights[static_cast<Eigen::Index>(c)];
      if (u < acc) {
        pick = c;
        break;
      }
    }
    const auto& alpha = mix.components[pick].alpha;
    double sum = 0.0;
    for (int j = 0; j < D; ++j) {
      const double g = rng.gamma(alpha[j]);
      out.data(i, j) = g;
      sum += g;
    }
    out.data.row(i) /= sum;
  }
  return out;
}

CompositionalSample sample_logistic_normal(const LogisticNormalParams& params, int n, RngStream& rng) {
  validate(params);
  if (n < 1) throw InvalidInputError("sample size must be >= 1");
  const int d = static_cast<int>(params.mu.size());
  Eigen::MatrixXd chol = Eigen::MatrixXd::Zero(d, d);
  if (!params.sigma.isZero(0.0)) {
    Eigen::LLT<Eigen::MatrixXd> llt(params.sigma);
    chol = llt.matrixL();
  }
  CompositionalSample out;
  out.data.resize(n, d + 1);
  Eigen::VectorXd z(d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) z[j] = rng.normal();
    const Eigen::VectorXd v = params.mu + chol * z;
    out.data.row(i) = alr_inverse(v).values.transpose();
  }
  return out;
}

}  // namespace meantest
