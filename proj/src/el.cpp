#include "meantest/el.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "meantest/errors.hpp"

namespace meantest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kResidualTol = 1e-9;

struct DualSolve {
  bool converged = false;
  bool hull_suspect = false;
  Eigen::VectorXd lambda;
  double log_sum = 0.0;  // sum_i log(1 + lambda^T z_i) at the solution
  double residual = 0.0;
  int iterations = 0;
};

// Damped Newton ascent on the concave dual L(lambda) = sum log(1 + lambda^T z_i)
// over the domain where every 1 + lambda^T z_i stays above the positivity
// floor. Stationarity of L is exactly the EL moment constraint.
DualSolve solve_dual(const Eigen::MatrixXd& z, int max_iter = 80) {
  const int n = static_cast<int>(z.rows());
  const int d = static_cast<int>(z.cols());
  const double floor = 1e-10 / n;
  DualSolve out;
  out.lambda = Eigen::VectorXd::Zero(d);

  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);  // w_i = 1 + lambda^T z_i
  const double zscale = std::max(1.0, z.cwiseAbs().maxCoeff());
  int floor_hits = 0;

  for (int iter = 1; iter <= max_iter; ++iter) {
    out.iterations = iter;
    const Eigen::VectorXd u = w.cwiseInverse();
    const Eigen::VectorXd g = z.transpose() * u / n;  // moment residual
    const double resnorm = g.norm();
    if (resnorm <= kResidualTol) {
      out.converged = true;
      out.residual = resnorm;
      out.log_sum = w.array().log().sum();
      return out;
    }
    // H = (1/n) sum z_i z_i^T / w_i^2, positive definite on nondegenerate data.
    const Eigen::MatrixXd zu = z.array().colwise() * u.array();
    Eigen::MatrixXd h = zu.transpose() * zu / n;
    Eigen::LLT<Eigen::MatrixXd> llt(h);
    if (llt.info() != Eigen::Success) {
      h.diagonal().array() += 1e-12 * (1.0 + h.trace() / d);
      llt.compute(h);
      if (llt.info() != Eigen::Success) {
        out.residual = resnorm;
        return out;  // degenerate sample
      }
    }
    const Eigen::VectorXd step = llt.solve(g);
    const Eigen::VectorXd s = z * step;

    // Largest step keeping all w_i above the floor.
    double tmax = 1.0;
    for (int i = 0; i < n; ++i)
      if (s[i] < 0.0) tmax = std::min(tmax, (w[i] - floor) / (-s[i]));
    double t = std::min(1.0, 0.995 * tmax);
    if (t < 1e-13) {
      if (++floor_hits >= 5) {
        out.hull_suspect = true;
        out.residual = resnorm;
        return out;
      }
      t = 1e-13;
    }

    const double l0 = w.array().log().sum();
    const double slope = n * g.dot(step);  // directional derivative of L
    bool accepted = false;
    Eigen::VectorXd w_new;
    for (; t >= 1e-13; t *= 0.5) {
      w_new = w + t * s;
      if (w_new.minCoeff() < 0.5 * floor) continue;
      const double l1 = w_new.array().log().sum();
      if (l1 >= l0 + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.residual = resnorm;
      return out;
    }
    out.lambda += t * step;
    w = Eigen::VectorXd::Ones(n) + z * out.lambda;  // refresh, no drift

    const double l = w.array().log().sum();
    if (out.lambda.norm() * zscale > 1e10 || l > 50.0 * n) {
      // dual climbing without bound: mu is outside (or on the edge of) the hull
      out.hull_suspect = true;
      out.residual = (z.transpose() * w.cwiseInverse() / n).norm();
      return out;
    }
  }
  out.residual = (z.transpose() * w.cwiseInverse() / n).norm();
  out.hull_suspect = w.minCoeff() < 2e-10 / n;
  return out;
}

}  // namespace

bool mu_inside_hull(const EuclideanSample& sample, const Eigen::VectorXd& mu) {
  const Eigen::MatrixXd& x = sample.data;
  const int n = sample.size();
  if (mu.size() != x.cols()) throw DimensionError("mu_inside_hull: dimension mismatch");
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  const double tol2 = std::pow(1e-10 * scale, 2);

  // Frank-Wolfe on min ||v - mu||^2 over the hull. The support-function test
  // min_j r^T (x_j - mu) > 0 is a strict separation certificate.
  int j0 = 0;
  double best = kInf;
  for (int j = 0; j < n; ++j) {
    const double dd = (x.row(j).transpose() - mu).squaredNorm();
    if (dd < best) {
      best = dd;
      j0 = j;
    }
  }
  Eigen::VectorXd v = x.row(j0).transpose();
  for (int iter = 0; iter < 20000; ++iter) {
    const Eigen::VectorXd r = v - mu;
    if (r.squaredNorm() <= tol2) return true;
    const Eigen::VectorXd scores = x * r;
    int jstar = 0;
    double smin = kInf;
    for (int j = 0; j < n; ++j)
      if (scores[j] < smin) {
        smin = scores[j];
        jstar = j;
      }
    if (smin - r.dot(mu) > 0.0) return false;
    const Eigen::VectorXd dir = x.row(jstar).transpose() - v;
    const double denom = dir.squaredNorm();
    if (denom <= 1e-300) break;
    const double t = std::clamp(-r.dot(dir) / denom, 0.0, 1.0);
    if (t <= 0.0) break;
    v += t * dir;
  }
  // Undecided after the budget: distance is tiny; treat boundary as inside.
  return (v - mu).squaredNorm() <= std::pow(1e-6 * scale, 2);
}

ElPartial el_one_sample(const EuclideanSample& sample, const Eigen::VectorXd& mu,
                        int sample_label) {
  if (mu.size() != sample.dim()) throw DimensionError("el_one_sample: dimension mismatch");
  if (sample.size() < 2) throw InvalidInputError("el_one_sample: need at least 2 observations");
  const Eigen::MatrixXd z = sample.data.rowwise() - mu.transpose();
  const DualSolve sol = solve_dual(z);
  if (!sol.converged) {
    if (!mu_inside_hull(sample, mu))
      throw ConvexHullError("mu lies outside the convex hull of sample " +
                                std::to_string(sample_label == 0 ? 1 : sample_label),
                            sample_label);
    throw ConvergenceError(
        "empirical likelihood dual did not converge (mu may lie on the hull boundary)",
        sol.residual);
  }
  ElPartial part;
  part.iterations = sol.iterations;
  part.statistic = std::max(0.0, 2.0 * sol.log_sum);
  part.weights.lambda = sol.lambda;
  part.weights.mu = mu;
  Eigen::VectorXd w = (Eigen::VectorXd::Ones(sample.size()) + z * sol.lambda).cwiseInverse() /
                      static_cast<double>(sample.size());
  w /= w.sum();  // exact renormalization
  part.weights.weights = std::move(w);
  return part;
}

namespace {

// Nelder-Mead on the summed partial statistic. Infeasible mu (inner dual
// failed) evaluates to +inf and the simplex contracts away from it.
struct TwoSampleObjective {
  const Eigen::MatrixXd& x1;
  const Eigen::MatrixXd& x2;
  mutable long long inner_iterations = 0;

  double operator()(const Eigen::VectorXd& mu, DualSolve* out1 = nullptr,
                    DualSolve* out2 = nullptr) const {
    DualSolve a = solve_dual(x1.rowwise() - mu.transpose());
    inner_iterations += a.iterations;
    if (!a.converged) return kInf;
    DualSolve b = solve_dual(x2.rowwise() - mu.transpose());
    inner_iterations += b.iterations;
    if (!b.converged) return kInf;
    const double f = 2.0 * (a.log_sum + b.log_sum);
    if (out1) *out1 = std::move(a);
    if (out2) *out2 = std::move(b);
    return f;
  }
};

struct NelderMead {
  std::vector<Eigen::VectorXd> pts;
  std::vector<double> fv;
  int iterations = 0;

  template <typename F>
  void run(const F& f, const Eigen::VectorXd& start, const Eigen::VectorXd& steps, double ftol,
           int max_iter) {
    const int d = static_cast<int>(start.size());
    pts.assign(d + 1, start);
    fv.assign(d + 1, 0.0);
    fv[0] = f(start);
    for (int j = 0; j < d; ++j) {
      pts[j + 1][j] += steps[j];
      fv[j + 1] = f(pts[j + 1]);
    }
    for (iterations = 0; iterations < max_iter; ++iterations) {
      // order ascending by objective
      std::vector<int> idx(d + 1);
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
      std::vector<Eigen::VectorXd> p2(d + 1);
      std::vector<double> f2(d + 1);
      for (int k = 0; k <= d; ++k) {
        p2[k] = pts[idx[k]];
        f2[k] = fv[idx[k]];
      }
      pts.swap(p2);
      fv.swap(f2);

      double diam = 0.0;
      for (int k = 1; k <= d; ++k) diam = std::max(diam, (pts[k] - pts[0]).norm());
      const bool all_finite = std::isfinite(fv[d]);
      if ((all_finite && fv[d] - fv[0] <= ftol * (1.0 + std::abs(fv[0]))) || diam < 1e-12) break;

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
      for (int k = 0; k < d; ++k) centroid += pts[k];
      centroid /= d;

      const Eigen::VectorXd xr = centroid + (centroid - pts[d]);
      const double fr = f(xr);
      if (fr < fv[0]) {
        const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[d]);
        const double fe = f(xe);
        if (fe < fr) {
          pts[d] = xe;
          fv[d] = fe;
        } else {
          pts[d] = xr;
          fv[d] = fr;
        }
      } else if (fr < fv[d - 1]) {
        pts[d] = xr;
        fv[d] = fr;
      } else {
        const bool outside = fr < fv[d];
        const Eigen::VectorXd xc =
            outside ? centroid + 0.5 * (xr - centroid) : centroid + 0.5 * (pts[d] - centroid);
        const double fc = f(xc);
        if (fc < std::min(fr, fv[d])) {
          pts[d] = xc;
          fv[d] = fc;
        } else {
          for (int k = 1; k <= d; ++k) {
            pts[k] = pts[0] + 0.5 * (pts[k] - pts[0]);
            fv[k] = f(pts[k]);
          }
        }
      }
    }
    std::vector<int> idx(d + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    std::vector<Eigen::VectorXd> p2(d + 1);
    std::vector<double> f2(d + 1);
    for (int k = 0; k <= d; ++k) {
      p2[k] = pts[idx[k]];
      f2[k] = fv[idx[k]];
    }
    pts.swap(p2);
    fv.swap(f2);
  }
};

ElResult el_minimize(const EuclideanSample& s1, const EuclideanSample& s2) {
  if (s1.dim() != s2.dim()) throw DimensionError("el_two_sample: dimension mismatch");
  const int d = s1.dim();
  const SampleMoments m1 = moments(s1);
  const SampleMoments m2 = moments(s2);

  TwoSampleObjective obj{s1.data, s2.data};

  // Start at the precision-weighted common mean; fall back to points on the
  // segment between the sample means when it is infeasible.
  std::vector<Eigen::VectorXd> starts;
  try {
    starts.push_back(common_mean_estimate(m1, m2));
  } catch (const SingularCovarianceError&) {
  }
  starts.push_back(0.5 * (m1.mean + m2.mean));
  for (double t : {0.25, 0.75, 0.1, 0.9, 0.0, 1.0})
    starts.push_back(m1.mean + t * (m2.mean - m1.mean));

  Eigen::VectorXd best_start;
  double best_f = kInf;
  for (const auto& c : starts) {
    const double f = obj(c);
    if (f < best_f) {
      best_f = f;
      best_start = c;
    }
  }
  if (!std::isfinite(best_f)) {
    const Eigen::VectorXd mid = 0.5 * (m1.mean + m2.mean);
    const bool in1 = mu_inside_hull(s1, mid);
    const bool in2 = mu_inside_hull(s2, mid);
    throw ConvexHullError(
        "empirical likelihood statistic not computable: no common mean lies inside both sample "
        "hulls",
        in1 ? 2 : (in2 ? 1 : 0));
  }

  // Step sizes from the pooled spread of the mean, so the initial simplex
  // stays inside the hulls for reasonable data.
  const Eigen::MatrixXd pooled =
      ((m1.n - 1) * m1.cov + (m2.n - 1) * m2.cov) / static_cast<double>(m1.n + m2.n - 2);
  Eigen::VectorXd steps(d);
  for (int j = 0; j < d; ++j)
    steps[j] = std::max(1e-6, 0.05 * std::sqrt(std::max(pooled(j, j), 0.0) /
                                               std::max(1, std::min(m1.n, m2.n))));

  NelderMead nm;
  const int max_iter = 500 * d;
  nm.run([&](const Eigen::VectorXd& mu) { return obj(mu); }, best_start, steps, 1e-8, max_iter);
  int outer_iterations = nm.iterations;
  Eigen::VectorXd mu_hat = nm.pts[0];
  double f_hat = nm.fv[0];
  if (best_f < f_hat) {  // keep the better of seed and search
    mu_hat = best_start;
    f_hat = best_f;
  }

  // Local-minimum verification by coordinate probes; restart on improvement.
  for (int restart = 0; restart < 2; ++restart) {
    bool improved = false;
    for (int j = 0; j < d && !improved; ++j) {
      for (double sgn : {1.0, -1.0}) {
        Eigen::VectorXd probe = mu_hat;
        probe[j] += sgn * std::max(1e-7, 0.01 * steps[j]);
        if (obj(probe) < f_hat - 1e-9 * (1.0 + std::abs(f_hat))) {
          improved = true;
          break;
        }
      }
    }
    if (!improved) break;
    NelderMead nm2;
    nm2.run([&](const Eigen::VectorXd& mu) { return obj(mu); }, mu_hat,
            (0.1 * steps).cwiseMax(1e-7), 1e-10, max_iter);
    outer_iterations += nm2.iterations;
    if (nm2.fv[0] < f_hat) {
      mu_hat = nm2.pts[0];
      f_hat = nm2.fv[0];
    } else {
      break;
    }
  }

  DualSolve d1, d2;
  const double f_final = obj(mu_hat, &d1, &d2);
  if (!std::isfinite(f_final))
    throw ConvergenceError("empirical likelihood: minimizer evaluation failed", kInf);

  ElResult r;
  r.statistic = std::max(0.0, f_final);
  r.mu_hat = mu_hat;
  r.lambdas = {d1.lambda, d2.lambda};
  r.report.outer_iterations = outer_iterations;
  r.report.inner_iterations = static_cast<int>(obj.inner_iterations);
  r.report.converged = true;
  r.report.hull_status = "ok";
  r.report.residual = std::max(d1.residual, d2.residual);
  r.report.lambda_sum_norm = (d1.lambda + d2.lambda).norm();
  r.report.stationarity_norm =
      (m1.n * d1.lambda + m2.n * d2.lambda).norm() / static_cast<double>(m1.n + m2.n);
  return r;
}

}  // namespace

double el_statistic_value(const EuclideanSample& s1, const EuclideanSample& s2) {
  return el_minimize(s1, s2).statistic;
}

ElResult el_two_sample(const EuclideanSample& s1, const EuclideanSample& s2,
                       const CalibrationSpec& calibration) {
  ElResult r = el_minimize(s1, s2);
  r.calibration = calibration.kind;
  if (calibration.kind == Calibration::Bootstrap) {
    const BootstrapOutcome boot = bootstrap_pvalue(
        [](const EuclideanSample& a, const EuclideanSample& b) { return el_statistic_value(a, b); },
        s1, s2, calibration.bootstrap);
    r.p_value = boot.p_value;
  } else {
    r.p_value = analytic_pvalue(r.statistic, calibration.kind, s1, s2);
  }
  return r;
}

}  // namespace meantest
