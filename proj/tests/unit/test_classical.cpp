#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "nnts/classical.hpp"
#include "oracles.hpp"

using namespace nnts;

namespace {
constexpr double kPi = std::numbers::pi;

// Direct double sums with std::sin/std::cos on each difference.
double hro_direct(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double s = 0.0;
  for (double a : x)
    for (double b : x) s += std::abs(std::sin(a - b));
  return n / kPi - s / (2.0 * n);
}

double hrm_direct(const std::vector<double>& x) {
  double s = 0.0;
  for (double a : x)
    for (double b : x)
      s += std::abs(std::abs(a - b) - kPi) - kPi / 2 - 2.895 * (std::abs(std::sin(a - b)) - 2.0 / kPi);
  return s / static_cast<double>(x.size());
}

double pycke_direct(const std::vector<double>& x) {
  const double r = std::sqrt(0.5);
  double s = 0.0;
  for (double a : x)
    for (double b : x) s += 2.0 * (std::cos(a - b) - r) / (1.5 - 2.0 * r * std::cos(a - b));
  return s / static_cast<double>(x.size());
}

std::vector<double> draws(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& a : v) a = rng.angle();
  return v;
}
}  // namespace

TEST(Rayleigh, Extremes) {
  EXPECT_NEAR(rayleigh(AngleSample({1.0, 1.0, 1.0})).value, 1.0, 1e-15);
  EXPECT_NEAR(rayleigh(AngleSample({0.0, kPi})).value, 0.0, 1e-15);
  EXPECT_NEAR(rayleigh(AngleSample({0.0, kPi / 2, kPi, 1.5 * kPi})).value, 0.0, 1e-15);
  const double r = rayleigh(AngleSample(draws(30, 1))).value;
  EXPECT_GE(r, 0.0);
  EXPECT_LE(r, 1.0);
}

TEST(HermansRassonOriginal, HandValues) {
  EXPECT_NEAR(hermans_rasson_original(AngleSample({2.0})).value, 1.0 / kPi, 1e-15);
  EXPECT_NEAR(hermans_rasson_original(AngleSample({0.0, kPi / 2})).value, 2.0 / kPi - 0.5, 1e-15);
  EXPECT_NEAR(hermans_rasson_original(AngleSample({0.0, kPi / 2})).value, 0.1366198, 1e-7);
}

TEST(HermansRassonModified, HandValues) {
  const double diag = kPi / 2 + 2.895 * 2.0 / kPi;
  EXPECT_NEAR(hermans_rasson_modified(AngleSample({1.0})).value, diag, 1e-14);
  EXPECT_NEAR(diag, 3.4138106, 1e-7);
}

TEST(Pycke, HandValues) {
  EXPECT_NEAR(pycke(AngleSample({0.3})).value, 4.0 + 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(pycke(AngleSample({0.0, kPi})).value, pycke_direct({0.0, kPi}), 1e-12);
}

TEST(Classical, MatchDirectFormulas) {
  for (std::size_t n : {1u, 2u, 7u, 40u}) {
    const auto v = draws(n, n);
    const AngleSample x(v);
    EXPECT_NEAR(hermans_rasson_original(x).value, hro_direct(v), 1e-10);
    EXPECT_NEAR(hermans_rasson_modified(x).value, hrm_direct(v), 1e-10);
    EXPECT_NEAR(pycke(x).value, pycke_direct(v), 1e-10);
  }
}

TEST(Classical, DiagonalOfHrmIsDataIndependent) {
  // Two coincident points: every term is a diagonal term.
  EXPECT_NEAR(hermans_rasson_modified(AngleSample({1.0, 1.0})).value, 2 * 3.4138106, 1e-6);
}

TEST(Classical, RotationInvariance) {
  Rng rng(2);
  for (int rep = 0; rep < 10; ++rep) {
    const AngleSample x(draws(25, 100 + rep));
    const AngleSample y = x.rotated(rng.angle());
    for (TestMethod m : {TestMethod::Rayleigh, TestMethod::HRo, TestMethod::HRm, TestMethod::Pycke})
      EXPECT_NEAR(classical_statistic(m, x).value, classical_statistic(m, y).value, 1e-9) << to_string(m);
  }
}

TEST(Classical, ReflectionInvariance) {
  const auto v = draws(20, 5);
  std::vector<double> w;
  for (double a : v) w.push_back(kTwoPi - a);
  for (TestMethod m : {TestMethod::Rayleigh, TestMethod::HRo, TestMethod::HRm, TestMethod::Pycke})
    EXPECT_NEAR(classical_statistic(m, AngleSample(v)).value, classical_statistic(m, AngleSample(w)).value, 1e-9);
}

TEST(Classical, EmptySampleIsAnError) {
  for (TestMethod m : {TestMethod::Rayleigh, TestMethod::HRo, TestMethod::HRm, TestMethod::Pycke}) {
    try {
      classical_statistic(m, AngleSample{});
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
    }
  }
  EXPECT_THROW(classical_statistic(TestMethod::NNTS2, AngleSample({1.0})), Error);
}

TEST(McPValue, RangeDeterminismAndUpperBound) {
  const AngleSample x(draws(20, 9));
  const double p = mc_p_value(TestMethod::Pycke, x, 500, 3);
  EXPECT_GE(p, 1.0 / 501);
  EXPECT_LE(p, 1.0);
  EXPECT_EQ(p, mc_p_value(TestMethod::Pycke, x, 500, 3));
  EXPECT_EQ(p, mc_p_value(TestMethod::Pycke, x, 500, 3, 4));  // worker count does not matter
  // Perfectly spread points give the smallest possible Rayleigh statistic.
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(kTwoPi * i / 20);
  EXPECT_EQ(mc_p_value(TestMethod::Rayleigh, AngleSample(grid), 200, 1), 1.0);
  // Concentrated data: nothing simulated reaches it.
  EXPECT_NEAR(mc_p_value(TestMethod::Rayleigh, AngleSample(std::vector<double>(20, 1.0)), 200, 1), 1.0 / 201, 1e-15);
  EXPECT_THROW(mc_p_value(TestMethod::Pycke, x, 99, 1), Error);
}

TEST(McPValue, UniformUnderNull) {
  // KS distance of 1000 null p-values from U(0, 1).
  std::vector<double> p;
  for (std::uint64_t r = 0; r < 1000; ++r)
    p.push_back(mc_p_value(TestMethod::HRm, AngleSample(draws(15, 5000 + r)), 200, r));
  std::sort(p.begin(), p.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double n = static_cast<double>(p.size());
    ks = std::max({ks, std::abs(p[i] - static_cast<double>(i) / n), std::abs(p[i] - static_cast<double>(i + 1) / n)});
  }
  EXPECT_LT(ks, 0.05);
}
