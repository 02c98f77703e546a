#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lciclv/dataset.hpp"

namespace lciclv {

// Ordered-probit measurement block for one class. Thresholds are stored as
// finite interior cut points (C_h - 1 of them, strictly increasing); the two
// boundary categories use one-sided normal tails.
struct MeasurementParams {
  Eigen::VectorXd loadings;    // H; value on the indicator's own construct
  Eigen::VectorXd intercepts;  // H
  Eigen::VectorXd error_sd;    // H; sqrt of the diagonal measurement variance
  std::vector<Eigen::VectorXd> thresholds;  // per indicator

  void check(const Bindings& b) const;  // throws NumericError on invariant breaks
};

// Deterministic part of the latent response underlying indicator h.
double indicator_propensity(const Eigen::VectorXd& latent, int h, const MeasurementParams& params,
                            const Bindings& b);

// P(indicator h falls in category m | latent), m in 1..C_h.
double indicator_cell_prob(const Eigen::VectorXd& latent, int h, int m,
                           const MeasurementParams& params, const Bindings& b);

struct UnderflowCounter {
  long count = 0;
};

// Sum of log cell probabilities over the respondent's indicator block.
// Missing responses contribute nothing. Cell probabilities below 1e-300 are
// floored and counted.
double measurement_loglik(const std::vector<int>& responses, const Eigen::VectorXd& latent,
                          const MeasurementParams& params, const Bindings& b,
                          UnderflowCounter* underflow = nullptr);

}  // namespace lciclv
