#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nnts/sum.hpp"
#include "oracles.hpp"

using namespace nnts;
using oracle::C;

namespace {
const double kRoot = std::sqrt(0.5);

NntsParams cardioid() {
  CoeffVector c(2);
  c << kRoot, kRoot;
  return NntsParams::canonicalize(c);
}

// max_t |phi_a(t) - phi_b(t)| over the larger support.
double spectrum_gap(const Spectrum& a, const Spectrum& b) {
  double worst = 0.0;
  for (int t = -std::max(a.m(), b.m()); t <= std::max(a.m(), b.m()); ++t)
    worst = std::max(worst, std::abs(a(t) - b(t)));
  return worst;
}

std::vector<Spectrum> spectra_of(const std::vector<NntsParams>& ps) {
  std::vector<Spectrum> out;
  for (const auto& p : ps) out.push_back(char_fn(p));
  return out;
}
}  // namespace

TEST(SpectrumProduct, UniformFactorAbsorbs) {
  const std::vector<Spectrum> s = {char_fn(cardioid()), Spectrum::uniform()};
  const Spectrum out = spectrum_product(s);
  EXPECT_EQ(out.m(), 0);
  EXPECT_EQ(out(0), C(1.0));
}

TEST(SpectrumProduct, MultipliesCoefficients) {
  const std::vector<Spectrum> s = {char_fn(cardioid()), char_fn(cardioid())};
  const Spectrum out = spectrum_product(s);
  EXPECT_NEAR(out(1).real(), 0.25, 1e-15);
  EXPECT_NEAR(out(-1).real(), 0.25, 1e-15);
  EXPECT_EQ(out(0), C(1.0));
}

TEST(SpectrumProduct, EmptyIsAnError) {
  try {
    spectrum_product({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(SumClosedForm, WorkedExample) {
  // p1 = (1/2)(1/2) = 1/4; c0 = sqrt((1 + sqrt(1 - 1/4)) / 2) = cos(pi/12).
  const double c0 = std::sqrt((1.0 + std::sqrt(0.75)) / 2.0);
  const double c1 = 0.25 / c0;
  const std::vector<NntsParams> s = {cardioid(), cardioid()};
  const SumResult r = sum_params_closed_form(s);
  EXPECT_EQ(r.m_sum, 1);
  EXPECT_EQ(r.method, SumMethod::ClosedForm);
  EXPECT_NEAR(r.params.c0(), c0, 1e-15);
  EXPECT_NEAR(r.params[1].real(), c1, 1e-15);
  EXPECT_NEAR(r.params.c0(), 0.9659258, 5e-8);
  EXPECT_NEAR(r.params[1].real(), 0.2588190, 5e-8);
  EXPECT_LT(r.residual, 1e-12);
  // phi(1) of the result equals the product spectrum.
  EXPECT_NEAR(char_fn(r.params)(1).real(), 0.25, 1e-12);
  EXPECT_LT(r.spectrum_discrepancy, 1e-12);
}

TEST(SumClosedForm, UniformLikeCrossProducts) {
  CoeffVector a(3);
  a << 1.0, 0.0, 0.0;
  CoeffVector b(3);
  b << 0.6, C(0.0, 0.8), 0.0;
  const std::vector<NntsParams> s = {NntsParams::canonicalize(a), NntsParams::canonicalize(b)};
  const SumResult r = sum_params_closed_form(s);
  EXPECT_EQ(r.params, NntsParams::uniform(2));
}

TEST(SumClosedForm, NeedsTwoSummands) {
  const std::vector<NntsParams> one = {cardioid()};
  EXPECT_THROW(sum_params_closed_form(one), Error);
  EXPECT_THROW(sum_params_solver(one), Error);
  EXPECT_THROW(sum_params_exact(one), Error);
}

TEST(SumSolver, AgreesWithClosedForm) {
  const std::vector<NntsParams> s = {cardioid(), cardioid()};
  const SumResult a = sum_params_closed_form(s);
  const SumResult b = sum_params_solver(s);
  EXPECT_EQ(b.method, SumMethod::PaperSystem);
  EXPECT_LT((a.params.coeffs() - b.params.coeffs()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(b.residual, 1e-12);
}

TEST(SumSolver, AgreesWithClosedFormForRandomSummands) {
  Rng rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<NntsParams> s;
    const int count = 2 + rep % 3;
    for (int i = 0; i < count; ++i) s.push_back(NntsParams::canonicalize(oracle::random_coeffs(1 + rep % 5, rng)));
    const SumResult a = sum_params_closed_form(s);
    const SumResult b = sum_params_solver(s);
    EXPECT_LT((a.params.coeffs() - b.params.coeffs()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SumSolver, UniformSummandGivesUniform) {
  const std::vector<NntsParams> s = {cardioid(), NntsParams::uniform(0)};
  const SumResult r = sum_params_solver(s);
  EXPECT_EQ(r.m_sum, 0);
  EXPECT_EQ(r.params, NntsParams::uniform(0));
}

TEST(SumSolver, RejectsBadTolerance) {
  const std::vector<NntsParams> s = {cardioid(), cardioid()};
  EXPECT_THROW(sum_params_solver(s, 0.0), Error);
}

TEST(SumSolver, ThreeSummandsAreCloserToUniform) {
  Rng rng(2);
  const NntsParams p = NntsParams::canonicalize(oracle::random_coeffs(5, rng));
  const std::vector<NntsParams> two = {p, p}, three = {p, p, p};
  const SumResult r2 = sum_params_solver(two), r3 = sum_params_solver(three);
  double sup2 = 0.0, sup3 = 0.0;
  for (int i = 0; i < 2048; ++i) {
    const double th = kTwoPi * i / 2048;
    sup2 = std::max(sup2, std::abs(density(r2.params, th) - 1.0 / kTwoPi));
    sup3 = std::max(sup3, std::abs(density(r3.params, th) - 1.0 / kTwoPi));
  }
  EXPECT_LT(sup3, sup2);
}

TEST(SumClosure, ExactForOrderOneAndSurfacedOtherwise) {
  Rng rng(23);
  for (int m = 1; m <= 5; ++m)
    for (int rep = 0; rep < 5; ++rep) {
      const std::vector<NntsParams> s = {NntsParams::canonicalize(oracle::random_coeffs(m, rng)),
                                         NntsParams::canonicalize(oracle::random_coeffs(m, rng))};
      const Spectrum truth = spectrum_product(spectra_of(s));
      const SumResult r = sum_params_solver(s);
      const double gap = spectrum_gap(char_fn(r.params), truth);
      // The discrepancy is either tiny or reported as such.
      EXPECT_TRUE(gap < 1e-6 || std::abs(gap - r.spectrum_discrepancy) < 1e-12);
      EXPECT_NEAR(r.spectrum_discrepancy, gap, 1e-12);
      if (m == 1) EXPECT_LT(gap, 1e-12);
      // The factorization route reproduces the product exactly.
      EXPECT_LT(spectrum_gap(char_fn(sum_params_exact(s).params), truth), 1e-8);
    }
}

TEST(SumClosure, EmpiricalSumsMatchProductSpectrum) {
  Rng rng(31);
  const NntsParams a = NntsParams::canonicalize(oracle::random_coeffs(3, rng));
  const NntsParams b = NntsParams::canonicalize(oracle::random_coeffs(2, rng));
  constexpr std::size_t n = 100000;
  const AngleSample xa = sample(a, n, 1), xb = sample(b, n, 2);
  const std::vector<Spectrum> s = {char_fn(a), char_fn(b)};
  const Spectrum prod = spectrum_product(s);
  ASSERT_EQ(prod.m(), 2);
  const double tol = 3.0 / std::sqrt(static_cast<double>(n));
  for (int t = 1; t <= 2; ++t) {
    C mean(0.0);
    for (std::size_t i = 0; i < n; ++i) mean += std::polar(1.0, t * (xa[i] + xb[i]));
    mean /= static_cast<double>(n);
    EXPECT_LT(std::abs(mean.real() - prod(t).real()), tol);
    EXPECT_LT(std::abs(mean.imag() - prod(t).imag()), tol);
  }
}

TEST(SumClosure, Commutative) {
  Rng rng(41);
  std::vector<NntsParams> s;
  for (int i = 0; i < 4; ++i) s.push_back(NntsParams::canonicalize(oracle::random_coeffs(3, rng)));
  const Spectrum base = spectrum_product(spectra_of(s));
  std::vector<NntsParams> perm = s;
  std::reverse(perm.begin(), perm.end());
  std::rotate(perm.begin(), perm.begin() + 1, perm.end());
  EXPECT_LT(spectrum_gap(base, spectrum_product(spectra_of(perm))), 1e-12);
  EXPECT_LT(spectrum_gap(char_fn(sum_params_solver(s).params), char_fn(sum_params_solver(perm).params)), 1e-12);
}

TEST(SumClosure, MonotoneConvergenceToUniformity) {
  Rng rng(43);
  const NntsParams p = NntsParams::canonicalize(oracle::random_coeffs(4, rng));
  double previous = 1.0;
  std::vector<Spectrum> s;
  for (int count = 1; count <= 6; ++count) {
    s.push_back(char_fn(p));
    const Spectrum prod = spectrum_product(s);
    double worst = 0.0;
    for (int t = 1; t <= prod.m(); ++t) worst = std::max(worst, std::abs(prod(t)));
    EXPECT_LE(worst, previous + 1e-15);
    previous = worst;
  }
}

TEST(SpectrumToParams, UniformAndWorkedExample) {
  EXPECT_EQ(spectrum_to_params(Spectrum::uniform()), NntsParams::uniform(0));
  const std::vector<C> phi = {0.25, 1.0, 0.25};
  const NntsParams p = spectrum_to_params(Spectrum::from_full(phi));
  EXPECT_NEAR(p.c0(), 0.9659258, 5e-8);
  EXPECT_NEAR(p[1].real(), 0.2588190, 5e-8);
  EXPECT_NEAR(p[1].imag(), 0.0, 1e-12);
}

TEST(SpectrumToParams, RoundTripsRandomSpectra) {
  Rng rng(47);
  for (int m = 1; m <= 7; ++m)
    for (int rep = 0; rep < 5; ++rep) {
      const Spectrum s = char_fn(NntsParams::canonicalize(oracle::random_coeffs(m, rng)));
      const NntsParams p = spectrum_to_params(s);
      EXPECT_EQ(p.m(), m);
      EXPECT_LT(spectrum_gap(char_fn(p), s), 1e-8) << "m=" << m;
    }
}

TEST(SpectrumToParams, PicksLargestC0Representative) {
  // (0.6, 0.8) and (0.8, 0.6) share a spectrum; the larger c0 wins.
  CoeffVector c(2);
  c << 0.6, 0.8;
  const NntsParams p = spectrum_to_params(char_fn(NntsParams::canonicalize(c)));
  EXPECT_NEAR(p.c0(), 0.8, 1e-12);
}

TEST(SpectrumToParams, LargestC0AmongAllRootFlips) {
  // Brute force: replacing a root factor (z - r) of q(z) = sum c_k z^k by
  // (1 - conj(r) z) keeps |q| on the unit circle, so all 2^m flips share one
  // spectrum. The factorization must return the flip with the largest c0.
  Rng rng(21);
  for (int m : {2, 3, 4}) {
    const NntsParams p = NntsParams::canonicalize(oracle::random_coeffs(m, rng));
    const CoeffVector& c = p.coeffs();
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
    for (int j = 0; j < m; ++j) companion(j, m - 1) = -c(j) / c(m);
    const Eigen::VectorXcd roots = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(companion).eigenvalues();

    double best = 0.0;
    for (int mask = 0; mask < (1 << m); ++mask) {
      C q0 = c(m);
      for (int i = 0; i < m; ++i) q0 *= (mask >> i & 1) ? C(1.0) : -roots(i);
      best = std::max(best, std::abs(q0));
    }
    EXPECT_NEAR(spectrum_to_params(char_fn(p)).c0(), best, 1e-9) << "m=" << m;
  }
}

TEST(SpectrumToParams, RejectsNonDensity) {
  const std::vector<C> phi = {0.9, 1.0, 0.9};  // 1 + 1.8 cos(theta) < 0 at pi
  try {
    spectrum_to_params(Spectrum::from_full(phi));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotADensity);
  }
}

TEST(SumDefault, UsesClosedForm) {
  const std::vector<NntsParams> s = {cardioid(), cardioid()};
  EXPECT_EQ(sum_params(s).method, SumMethod::ClosedForm);
}

TEST(SolverDivergenceError, CarriesResidual) {
  const SolverDivergence e("x", 0.5);
  EXPECT_EQ(e.kind(), ErrorKind::SolverDivergence);
  EXPECT_EQ(e.residual(), 0.5);
}
