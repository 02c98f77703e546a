#pragma once

#include <Eigen/Dense>
#include <span>

namespace lciclv {

inline constexpr double kLogTwoPi = 1.8378770664093453;
// Probabilities below exp(kLogFloor) are floored before taking logs.
inline constexpr double kLogFloor = -690.77552789821368;  // log(1e-300)

double norm_pdf(double x);
double norm_logpdf(double x);

// Standard normal CDF via erfc; |error| well below 1e-10 over the real line.
double std_normal_cdf(double x);

// Quantile: rational initial guess plus one Halley step; Phi(result) = p
// to ~1e-15. Throws NumericError unless 0 < p < 1.
double std_normal_inv_cdf(double p);

double logistic(double x);
double log1pexp(double x);  // log(1 + e^x) without overflow

// Symmetric positive-definite covariance, diagonal or full storage.
class Covariance {
 public:
  static Covariance diagonal(Eigen::VectorXd variances);
  static Covariance full(Eigen::MatrixXd matrix);  // throws NumericError if not SPD

  int dim() const { return dim_; }
  bool is_diagonal() const { return diagonal_; }
  const Eigen::VectorXd& diag() const { return diag_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  // Lower Cholesky factor (diagonal case: sqrt of the diagonal on the diagonal).
  const Eigen::MatrixXd& chol() const { return chol_; }
  double log_det() const { return log_det_; }

 private:
  Covariance() = default;
  int dim_ = 0;
  bool diagonal_ = true;
  Eigen::VectorXd diag_;
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd chol_;
  double log_det_ = 0.0;
};

double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Covariance& cov);

// Overflow-safe softmax (max subtraction); components sum to 1.
Eigen::VectorXd softmax(const Eigen::VectorXd& v);

double log_sum_exp(std::span<const double> values);

}  // namespace lciclv
