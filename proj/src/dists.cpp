#include "lciclv/dists.hpp"

#include <cmath>
#include <limits>

#include "lciclv/errors.hpp"

namespace lciclv {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kSqrt2Pi = 2.5066282746310005024;
}  // namespace

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double norm_logpdf(double x) { return -0.5 * (x * x + kLogTwoPi); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double std_normal_inv_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw NumericError("std_normal_inv_cdf: p must lie strictly in (0,1)");

  // Acklam's rational approximation (|rel err| < 1.2e-9), refined below.
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;

  double x;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Halley step against the CDF.
  double e = std_normal_cdf(x) - p;
  double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double log1pexp(double x) {
  if (x > 33.3) return x;            // e^{-x} below double epsilon
  if (x < -37.0) return std::exp(x); // log1p(t) ~ t
  return std::log1p(std::exp(x));
}

Covariance Covariance::diagonal(Eigen::VectorXd variances) {
  Covariance cov;
  cov.dim_ = static_cast<int>(variances.size());
  cov.diagonal_ = true;
  for (int i = 0; i < cov.dim_; ++i)
    if (!(variances[i] > 0.0))
      throw NumericError("covariance diagonal entries must be positive");
  cov.diag_ = variances;
  cov.matrix_ = variances.asDiagonal();
  cov.chol_ = variances.array().sqrt().matrix().asDiagonal();
  cov.log_det_ = variances.array().log().sum();
  return cov;
}

Covariance Covariance::full(Eigen::MatrixXd matrix) {
  if (matrix.rows() != matrix.cols())
    throw NumericError("covariance matrix must be square");
  double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if (((matrix - matrix.transpose()).cwiseAbs().maxCoeff()) > 1e-12 * scale)
    throw NumericError("covariance matrix must be symmetric (tolerance 1e-12)");
  Eigen::LLT<Eigen::MatrixXd> llt(matrix);
  if (llt.info() != Eigen::Success)
    throw NumericError("covariance matrix is not positive definite");
  Covariance cov;
  cov.dim_ = static_cast<int>(matrix.rows());
  cov.diagonal_ = false;
  cov.diag_ = matrix.diagonal();
  cov.matrix_ = std::move(matrix);
  cov.chol_ = llt.matrixL();
  cov.log_det_ = 2.0 * cov.chol_.diagonal().array().log().sum();
  return cov;
}

double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Covariance& cov) {
  if (x.size() != cov.dim() || mean.size() != cov.dim())
    throw NumericError("mvn_logpdf: dimension mismatch");
  const int g = cov.dim();
  double quad;
  if (cov.is_diagonal()) {
    quad = ((x - mean).array().square() / cov.diag().array()).sum();
  } else {
    Eigen::VectorXd u = cov.chol().triangularView<Eigen::Lower>().solve(x - mean);
    quad = u.squaredNorm();
  }
  return -0.5 * (g * kLogTwoPi + cov.log_det() + quad);
}

Eigen::VectorXd softmax(const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  double m = v.maxCoeff();
  double total = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - m);
    total += out[i];
  }
  out /= total;
  return out;
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  double m = values[0];
  for (double v : values)
    if (v > m) m = v;
  if (!std::isfinite(m)) return m;
  double total = 0.0;
  for (double v : values) total += std::exp(v - m);
  return m + std::log(total);
}

}  // namespace lciclv
