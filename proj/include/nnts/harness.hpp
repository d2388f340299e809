#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nnts/core.hpp"
#include "nnts/method.hpp"
#include "nnts/mle.hpp"
#include "nnts/uniformity.hpp"

namespace nnts {

struct SimulationPlan {
  TestMethod test = TestMethod::NNTS2;
  int m = 1;  // ignored by the classical tests
  std::size_t n = 50;
  std::vector<double> alphas{0.10, 0.05, 0.01};
  std::size_t reps = 10000;
  std::uint64_t base_seed = 0;
  unsigned threads = 0;
  FitOptions fit;
};

struct CriticalValueEstimate {
  double alpha = 0.0;
  double raw = 0.0;      // type-7 sample quantile at 1 - alpha
  double rounded = 0.0;  // to 0.1
};

struct CriticalValueSimulation {
  std::vector<CriticalValueEstimate> values;  // in plan.alphas order
  std::size_t reps = 0;
  std::size_t failures = 0;  // null fits that threw FitFailure; excluded
};

// Linear interpolation between order statistics (R's type 7).
double quantile_type7(std::vector<double> values, double p);

// Null statistics of plan.test, one per replicate; replicate r draws from
// Rng(base_seed, r). Failed fits come back as NaN.
std::vector<double> simulate_null_statistics(const SimulationPlan& plan);

// Upper-alpha quantiles of the null statistic. Requires reps >= 1000 and,
// for NNTS tests, n >= min_ss(m). More than 1% failed fits is a HarnessError.
CriticalValueSimulation simulate_critical_values(const SimulationPlan& plan);

struct RegressionFit {
  RegressionGroup group = RegressionGroup::M1;
  double alpha = 0.0;
  RegressionCoefficients coefficients;
  double r_squared = 0.0;
  double max_abs_error = 0.0;  // of predictions rounded to 0.1
  double max_rel_error = 0.0;
  std::size_t points = 0;
};

// OLS of the critical value on {1, 1/n} separately for M = 1 and M = 2, and
// on {1, M, 1/n, M/n, 1/n^2} pooled over M = 3..7, per alpha. Asymptotic
// cells are ignored. Throws RegressionError for a singular design.
std::vector<RegressionFit> fit_cv_regression(const CvTable& table);

struct PowerMethod {
  TestMethod method = TestMethod::NNTS2;
  int m = 1;  // fitted order for the NNTS tests
};

struct PowerEntry {
  PowerMethod method;
  double critical_value = 0.0;
  bool simulated_cv = false;  // true when no published value applies
  double rejection_pct = 0.0;
  int rounded_pct = 0;
};

struct PowerReport {
  NntsParams alternative = NntsParams::uniform(0);
  std::size_t n = 0;
  double alpha = 0.05;
  std::size_t reps = 0;
  std::vector<PowerEntry> entries;
};

struct PowerOptions {
  // Null replicates used when a critical value has to be simulated.
  std::size_t null_reps = 10000;
  unsigned threads = 0;
  FitOptions fit;
};

// Rejection percentages under `alt`. NNTS tests use the published critical
// values (Auto source) where they exist; the classical tests, and NNTS cells
// without a published value, use simulated null quantiles. A test rejects
// when its statistic exceeds the critical value.
PowerReport power_study(const NntsParams& alt, std::size_t n, double alpha, std::size_t reps,
                        const std::vector<PowerMethod>& methods, std::uint64_t base_seed,
                        const PowerOptions& opts = {});

// c_0 = c0, the other coefficients drawn from a seeded complex Gaussian and
// scaled so that sum_{k>=1} |c_k|^2 = 1 - c0^2.
NntsParams make_alternative(int m, double c0, std::uint64_t seed);

}  // namespace nnts
