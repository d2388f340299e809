#pragma once

#include <cstdint>
#include <functional>

#include "nnts/core.hpp"

namespace nnts {

struct FitOptions {
  double tol = 1e-8;
  int max_iter = 500;
  int restarts = 5;
  std::uint64_t seed = 0;
  // Called with (start, iteration, log-likelihood) after each accepted step.
  std::function<void(int, int, double)> on_iteration;
};

struct FitResult {
  NntsParams params;
  double log_lik = 0.0;
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;
  int restarts_used = 0;
};

// n (I - c c^H), the observed information at the MLE.
struct ObservedInformation {
  Eigen::MatrixXcd matrix;
};

// Precomputed powers e^{i k theta_j}, j = 1..n, k = 0..m.
Eigen::MatrixXcd fourier_design(const AngleSample& sample, int m);

// sum_j ln f(theta_j); -infinity if any density value is <= 1e-300.
double log_likelihood(const NntsParams& params, const AngleSample& sample);

// Same for an arbitrary (not necessarily unit) coefficient vector.
double log_likelihood(const CoeffVector& c, const AngleSample& sample);

// Gradient with respect to conj(c): sum_j conj(e_j) / conj(e_j^T c), where
// e_j = (1, e^{i theta_j}, ..., e^{i m theta_j}).
CoeffVector likelihood_gradient(const CoeffVector& c, const AngleSample& sample);

// (I - c c^H) times the gradient above.
CoeffVector tangent_gradient(const NntsParams& params, const AngleSample& sample);

// Maximum likelihood NNTS fit of order m on the unit sphere. One start from
// the uniform point plus `restarts` random unit starts; returns the best.
FitResult fit(const AngleSample& sample, int m, const FitOptions& opts = {});

ObservedInformation observed_information(const FitResult& fit, std::size_t n);

}  // namespace nnts
