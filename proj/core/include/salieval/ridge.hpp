#pragma once

#include <vector>

#include "salieval/tensor.hpp"

namespace salieval {

// Weighted ridge regression with an unpenalized intercept: minimizes
// sum_i w_i (y_i - b0 - x_i . beta)^2 + lambda ||beta||^2, solved through the
// normal equations with a Cholesky factorization.
//
// Returns p+1 coefficients, intercept first. Throws SingularSystemError when
// the normal matrix is not positive definite, and NumericError on non-finite
// inputs.
std::vector<double> weighted_ridge(const ad::Tensor& features, const std::vector<double>& targets,
                                   const std::vector<double>& weights, double lambda);

}  // namespace salieval
