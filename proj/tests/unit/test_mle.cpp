#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "nnts/io.hpp"
#include "nnts/mle.hpp"
#include "oracles.hpp"

using namespace nnts;
using oracle::C;

namespace {
constexpr double kPi = std::numbers::pi;
const double kLogTwoPi = std::log(kTwoPi);

NntsParams cardioid() {
  CoeffVector c(2);
  c << std::sqrt(0.5), std::sqrt(0.5);
  return NntsParams::canonicalize(c);
}

// ln likelihood by the oracle density, for unnormalized c as well.
double oracle_loglik(const CoeffVector& c, const AngleSample& x) {
  std::vector<C> v(c.data(), c.data() + c.size());
  double s = 0.0;
  for (double a : x) s += std::log(oracle::density(v, a));
  return s;
}
}  // namespace

TEST(LogLikelihood, UniformValue) {
  const AngleSample x = sample(NntsParams::uniform(0), 37, 1);
  EXPECT_NEAR(log_likelihood(NntsParams::uniform(3), x), -37 * kLogTwoPi, 1e-12);
}

TEST(LogLikelihood, SingleObservation) {
  const AngleSample x({0.0});
  EXPECT_NEAR(log_likelihood(cardioid(), x), std::log(1.0 / kPi), 1e-14);
  EXPECT_NEAR(log_likelihood(cardioid(), x), -1.1447299, 1e-7);
}

TEST(LogLikelihood, PhaseInvariant) {
  Rng rng(1);
  const CoeffVector c = oracle::random_coeffs(3, rng);
  const AngleSample x = sample(NntsParams::uniform(0), 50, 2);
  const double a = log_likelihood(c, x);
  const double b = log_likelihood(CoeffVector(c * std::polar(1.0, 1.234)), x);
  EXPECT_NEAR(a, b, 1e-12);
}

TEST(LogLikelihood, SentinelAtZeroDensity) {
  // c0 + c1 vanishes exactly at theta = 0.
  CoeffVector c(2);
  c << std::sqrt(0.5), -std::sqrt(0.5);
  const AngleSample x({0.0, kPi});
  EXPECT_EQ(log_likelihood(NntsParams::canonicalize(c), x), -std::numeric_limits<double>::infinity());
}

TEST(LogLikelihood, EmptySampleIsAnError) {
  try {
    log_likelihood(cardioid(), AngleSample{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(Gradient, MatchesCentralDifferences) {
  // d/dRe c_k = 2 Re g_k and d/dIm c_k = 2 Im g_k for g = dl/dconj(c).
  Rng rng(3);
  const AngleSample x = sample(NntsParams::uniform(0), 40, 4);
  for (int rep = 0; rep < 5; ++rep) {
    const CoeffVector c = oracle::random_coeffs(3, rng);
    const CoeffVector g = likelihood_gradient(c, x);
    const double h = 1e-6;
    for (int k = 0; k <= 3; ++k)
      for (int part = 0; part < 2; ++part) {
        CoeffVector up = c, down = c;
        const C step = part == 0 ? C(h, 0) : C(0, h);
        up(k) += step;
        down(k) -= step;
        const double fd = (oracle_loglik(up, x) - oracle_loglik(down, x)) / (2 * h);
        const double an = 2.0 * (part == 0 ? g(k).real() : g(k).imag());
        EXPECT_NEAR(an, fd, 1e-5 * std::max(1.0, std::abs(fd)));
      }
  }
}

TEST(Gradient, TangentPartMatchesDifferencesOnSphere) {
  Rng rng(5);
  const AngleSample x = sample(NntsParams::uniform(0), 40, 6);
  for (int rep = 0; rep < 5; ++rep) {
    const NntsParams p = NntsParams::canonicalize(oracle::random_coeffs(2, rng));
    const CoeffVector tg = tangent_gradient(p, x);
    EXPECT_LT(std::abs((p.coeffs().adjoint() * tg)(0)), 1e-9);
    const CoeffVector c = p.coeffs();
    for (int k = 0; k <= 2; ++k)
      for (int part = 0; part < 2; ++part) {
        CoeffVector d = CoeffVector::Zero(3);
        d(k) = part == 0 ? C(1, 0) : C(0, 1);
        d -= c * (c.adjoint() * d)(0);  // project onto the tangent space
        const double h = 1e-6;
        const CoeffVector up = (c + h * d).normalized(), down = (c - h * d).normalized();
        const double fd = (oracle_loglik(up, x) - oracle_loglik(down, x)) / (2 * h);
        const double an = 2.0 * (tg.adjoint() * d)(0).real();
        EXPECT_NEAR(an, fd, 1e-5 * std::max(1.0, std::abs(fd)));
      }
  }
}

TEST(Fit, UniformSampleIsFeasible) {
  for (int m : {1, 2, 4}) {
    const AngleSample x = sample(NntsParams::uniform(0), 60, static_cast<std::uint64_t>(m));
    const FitResult f = fit(x, m);
    EXPECT_GE(f.log_lik, -60 * kLogTwoPi - 1e-9);
    EXPECT_NEAR(f.params.coeffs().norm(), 1.0, 1e-10);
    EXPECT_EQ(f.params[0].imag(), 0.0);
    EXPECT_EQ(f.restarts_used, 5);
  }
}

TEST(Fit, PigeonReducedControlGroup) {
  const AngleSample x = fixture(FixtureName::PigeonReducedC).angles;
  const FitResult f = fit(x, 1);
  EXPECT_TRUE(f.converged);
  EXPECT_NEAR(2 * f.log_lik + 2 * 25 * kLogTwoPi, 11.26, 0.05);
}

TEST(Fit, DeterministicForSeed) {
  const AngleSample x = sample(cardioid(), 80, 7);
  FitOptions o;
  o.seed = 12;
  const FitResult a = fit(x, 3, o), b = fit(x, 3, o);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.log_lik, b.log_lik);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Fit, ConvergedImpliesSmallGradient) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const AngleSample x = sample(NntsParams::uniform(0), 50, seed);
    FitOptions o;
    o.seed = seed;
    const FitResult f = fit(x, 2, o);
    EXPECT_TRUE(f.converged);
    if (f.converged) EXPECT_LT(f.grad_norm, o.tol);
    // The reported norm is the norm of (I - c c^H) g at the returned point.
    EXPECT_NEAR(tangent_gradient(f.params, x).norm(), f.grad_norm, 1e-6);
  }
}

TEST(Fit, AscentPropertyPerStart) {
  const AngleSample x = sample(cardioid(), 60, 9);
  std::vector<std::vector<double>> trace(6);
  FitOptions o;
  o.on_iteration = [&](int start, int, double ll) { trace[static_cast<std::size_t>(start)].push_back(ll); };
  fit(x, 3, o);
  for (const auto& t : trace)
    for (std::size_t i = 1; i < t.size(); ++i)
      // Steps whose gain is below double rounding may lose a few ulps.
      EXPECT_GE(t[i], t[i - 1] - 1e-12 * std::abs(t[i - 1]));
}

TEST(Fit, NestedOrdersDoNotLoseLikelihood) {
  const AngleSample x = sample(cardioid(), 70, 10);
  double previous = -std::numeric_limits<double>::infinity();
  for (int m = 0; m <= 4; ++m) {
    const double ll = fit(x, m).log_lik;
    EXPECT_GE(ll, previous - 1e-9);
    previous = ll;
  }
}

TEST(Fit, OrderZeroShortCircuits) {
  const AngleSample x = sample(cardioid(), 10, 1);
  const FitResult f = fit(x, 0);
  EXPECT_EQ(f.params, NntsParams::uniform(0));
  EXPECT_NEAR(f.log_lik, -10 * kLogTwoPi, 1e-12);
  EXPECT_TRUE(f.converged);
}

TEST(Fit, Errors) {
  try {
    fit(AngleSample({1.0}), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
  }
  EXPECT_THROW(fit(AngleSample({1.0, 2.0}), -1), Error);
}

TEST(Fit, RecoversGeneratingDensity) {
  CoeffVector c(3);
  c << 0.6, C(0.3, 0.5), C(-0.2, 0.5);
  const NntsParams truth = NntsParams::canonicalize(c);
  const AngleSample x = sample(truth, 20000, 3);
  const FitResult f = fit(x, 2);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double th = kTwoPi * i / 200;
    worst = std::max(worst, std::abs(density(f.params, th) - density(truth, th)));
  }
  EXPECT_LT(worst, 0.02);
}

TEST(ObservedInformation, ProjectionProperties) {
  const AngleSample x = sample(cardioid(), 50, 2);
  const FitResult f = fit(x, 3);
  const Eigen::MatrixXcd j = observed_information(f, 50).matrix;
  const CoeffVector& c = f.params.coeffs();
  EXPECT_LT((j - 50.0 * (Eigen::MatrixXcd::Identity(4, 4) - c * c.adjoint())).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((j * c).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(j.trace().real(), 50.0 * 3, 1e-10);
  const Eigen::MatrixXcd p = j / 50.0;
  EXPECT_LT((p * p - p).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((p - p.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ObservedInformation, UniformPoint) {
  const FitResult f{NntsParams::uniform(2)};
  const Eigen::MatrixXcd j = observed_information(f, 10).matrix;
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(3, 3);
  expected(1, 1) = expected(2, 2) = 10.0;
  EXPECT_EQ(j, expected);
}
