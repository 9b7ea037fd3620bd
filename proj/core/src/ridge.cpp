#include "salieval/ridge.hpp"

#include <cmath>

#include "salieval/error.hpp"

namespace salieval {

std::vector<double> weighted_ridge(const ad::Tensor& features, const std::vector<double>& targets,
                                   const std::vector<double>& weights, double lambda) {
  const int64_t n = features.rows();
  const int64_t p = features.cols();
  if (static_cast<int64_t>(targets.size()) != n || static_cast<int64_t>(weights.size()) != n)
    throw ContractError("weighted_ridge: row count mismatch");
  if (lambda < 0.0) throw ContractError("weighted_ridge: lambda must be non-negative");
  if (!features.all_finite()) throw NumericError("weighted_ridge: non-finite feature");
  for (int64_t i = 0; i < n; ++i) {
    if (!std::isfinite(targets[static_cast<size_t>(i)]) ||
        !std::isfinite(weights[static_cast<size_t>(i)]))
      throw NumericError("weighted_ridge: non-finite target or weight");
    if (weights[static_cast<size_t>(i)] < 0.0)
      throw ContractError("weighted_ridge: negative weight");
  }

  // Augmented design [1 | X]; A = sum_i w_i a_i a_i^T + lambda diag(0,1..1).
  const int64_t m = p + 1;
  std::vector<double> a(static_cast<size_t>(m * m), 0.0);
  std::vector<double> rhs(static_cast<size_t>(m), 0.0);
  std::vector<double> row(static_cast<size_t>(m), 0.0);
  for (int64_t i = 0; i < n; ++i) {
    const double w = weights[static_cast<size_t>(i)];
    if (w == 0.0) continue;
    row[0] = 1.0;
    for (int64_t j = 0; j < p; ++j) row[static_cast<size_t>(j + 1)] = features.at(i, j);
    for (int64_t r = 0; r < m; ++r) {
      const double wr = w * row[static_cast<size_t>(r)];
      if (wr == 0.0) continue;
      for (int64_t c = r; c < m; ++c)
        a[static_cast<size_t>(r * m + c)] += wr * row[static_cast<size_t>(c)];
      rhs[static_cast<size_t>(r)] += wr * targets[static_cast<size_t>(i)];
    }
  }
  for (int64_t j = 1; j < m; ++j) a[static_cast<size_t>(j * m + j)] += lambda;
  for (int64_t r = 0; r < m; ++r)
    for (int64_t c = 0; c < r; ++c) a[static_cast<size_t>(r * m + c)] = a[static_cast<size_t>(c * m + r)];

  // In-place Cholesky A = L L^T.
  for (int64_t j = 0; j < m; ++j) {
    double d = a[static_cast<size_t>(j * m + j)];
    for (int64_t k = 0; k < j; ++k) {
      const double l = a[static_cast<size_t>(j * m + k)];
      d -= l * l;
    }
    if (!(d > 1e-12)) throw SingularSystemError("weighted_ridge: normal system not positive definite");
    const double ljj = std::sqrt(d);
    a[static_cast<size_t>(j * m + j)] = ljj;
    for (int64_t i = j + 1; i < m; ++i) {
      double s = a[static_cast<size_t>(i * m + j)];
      for (int64_t k = 0; k < j; ++k)
        s -= a[static_cast<size_t>(i * m + k)] * a[static_cast<size_t>(j * m + k)];
      a[static_cast<size_t>(i * m + j)] = s / ljj;
    }
  }

  // Solve L z = rhs, then L^T beta = z.
  std::vector<double> beta(static_cast<size_t>(m));
  for (int64_t i = 0; i < m; ++i) {
    double s = rhs[static_cast<size_t>(i)];
    for (int64_t k = 0; k < i; ++k)
      s -= a[static_cast<size_t>(i * m + k)] * beta[static_cast<size_t>(k)];
    beta[static_cast<size_t>(i)] = s / a[static_cast<size_t>(i * m + i)];
  }
  for (int64_t i = m - 1; i >= 0; --i) {
    double s = beta[static_cast<size_t>(i)];
    for (int64_t k = i + 1; k < m; ++k)
      s -= a[static_cast<size_t>(k * m + i)] * beta[static_cast<size_t>(k)];
    beta[static_cast<size_t>(i)] = s / a[static_cast<size_t>(i * m + i)];
  }
  return beta;
}

}  // namespace salieval
