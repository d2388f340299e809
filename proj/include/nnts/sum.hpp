#pragma once

#include <span>

#include "nnts/core.hpp"

namespace nnts {

enum class SumMethod { PaperSystem, ClosedForm, SpectralFactorization };

const char* to_string(SumMethod method);

// NNTS parameters of a sum (mod 2pi) of independent NNTS variables.
struct SumResult {
  NntsParams params;
  int m_sum = 0;
  SumMethod method = SumMethod::ClosedForm;
  // Max residual of the equations the method solved.
  double residual = 0.0;
  // max_t |char_fn(params)(t) - product spectrum(t)|; nonzero where the
  // coefficient system does not reproduce the exact product spectrum.
  double spectrum_discrepancy = 0.0;
};

// phi_sum(t) = prod_s phi_s(t), truncated to the smallest order.
Spectrum spectrum_product(std::span<const Spectrum> spectra);

// Biquadratic closed form of the coefficient system
//   c0_sum * c_k_sum = prod_s c_k^(s) conj(c_0^(s)),  |c_sum| = 1,
// taking the largest root for c0_sum. Throws NoRealSolution when the
// discriminant is negative.
SumResult sum_params_closed_form(std::span<const NntsParams> summands);

// Same system solved by damped Newton from the uniform point, folding
// summands pairwise. Throws SolverDivergence after 200 iterations.
SumResult sum_params_solver(std::span<const NntsParams> summands, double tol = 1e-12);

// Coefficients whose characteristic function equals `spectrum`, by
// Fejer-Riesz factorization of the nonnegative trigonometric polynomial.
// Of the 2^m factors, returns the one with the largest c_0.
NntsParams spectrum_to_params(const Spectrum& spectrum);

// Exact route: factorize the product spectrum.
SumResult sum_params_exact(std::span<const NntsParams> summands);

// Closed form, falling back to the Newton solver if it has no real solution.
SumResult sum_params(std::span<const NntsParams> summands);

}  // namespace nnts
