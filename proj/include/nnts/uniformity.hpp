#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <tuple>

#include "nnts/core.hpp"
#include "nnts/method.hpp"
#include "nnts/mle.hpp"

namespace nnts {

enum class CvSource { Table, Regression, Auto };
enum class Decision { Reject, FailToReject, Inconclusive };

const char* to_string(CvSource source);
const char* to_string(Decision decision);

inline constexpr std::array<double, 3> kAlphaLevels{0.10, 0.05, 0.01};

// Column key for the asymptotic ("infinite n") column of the NNTS2 table.
inline constexpr std::size_t kAsymptoticN = std::numeric_limits<std::size_t>::max();

// Index of alpha in kAlphaLevels; throws UnsupportedAlpha otherwise.
int alpha_index(double alpha);

// intercept + b_m M + b_inv / n + b_m_inv M / n + b_inv2 / n^2
struct RegressionCoefficients {
  double intercept = 0.0;
  double m = 0.0;
  double inv_n = 0.0;
  double m_inv_n = 0.0;
  double inv_n2 = 0.0;

  double predict(int order, double n) const {
    return intercept + m * order + inv_n / n + m_inv_n * order / n + inv_n2 / (n * n);
  }
};

// Regression groups: M = 1, M = 2, and M = 3..7 pooled.
enum class RegressionGroup { M1, M2, Pooled };

RegressionGroup regression_group(int m);

// (M, alpha index, n) -> critical value
using CvTable = std::map<std::tuple<int, int, std::size_t>, double>;

class CriticalValueModel {
 public:
  static constexpr int kMaxTable1Order = 5;
  static constexpr int kMaxTable2Order = 7;

  // The published critical values, regression coefficients and sample-size
  // limits.
  static const CriticalValueModel& embedded();

  std::optional<double> table1(int m, double alpha, std::size_t n) const;
  // n = kAsymptoticN selects the asymptotic column.
  std::optional<double> table2(int m, double alpha, std::size_t n) const;
  const RegressionCoefficients& regression(int m, double alpha) const;
  const RegressionCoefficients& regression(RegressionGroup group, int alpha_idx) const;

  // Minimum usable sample size: 15 for M=1, 25 for M=2, 10(M+1) otherwise.
  static std::size_t min_ss(int m);
  // Sample size from which the asymptotic column applies (M = 1..7).
  std::size_t asy_ss(int m) const;

  const CvTable& table1_cells() const { return table1_; }
  const CvTable& table2_cells() const { return table2_; }

 private:
  CriticalValueModel();

  CvTable table1_;
  CvTable table2_;
  std::array<std::array<RegressionCoefficients, 3>, 3> regression_{};
  std::array<std::size_t, 8> asy_ss_{};
};

double nnts1_statistic(const FitResult& fit, std::size_t n);
double nnts2_statistic(const FitResult& fit, std::size_t n);

// Table: exact lookup. Regression (NNTS2 only): model prediction rounded to
// 0.1, or the asymptotic column once n >= asy_ss(m). Auto: regression for
// NNTS2, table for NNTS1.
double critical_value(const CriticalValueModel& model, TestMethod test, int m, double alpha, std::size_t n,
                      CvSource source = CvSource::Auto);

// The concrete source Auto resolves to for `test`.
CvSource resolve_source(TestMethod test, CvSource source);

struct TestOptions {
  std::optional<std::size_t> p_value_reps;
  std::uint64_t seed = 0;
  CvSource source = CvSource::Auto;
  FitOptions fit;
  unsigned threads = 0;
};

struct TestOutcome {
  TestMethod method = TestMethod::NNTS2;
  double statistic = 0.0;
  int m = 0;
  std::size_t n = 0;
  double alpha = 0.05;
  std::optional<double> critical_value;
  std::optional<double> p_value;
  Decision decision = Decision::FailToReject;
  std::optional<std::uint64_t> seed;
  std::optional<FitResult> fit;
};

// Fits NNTS(m), computes the statistic and decides against the critical
// value. Regression-sourced values get the 0.1 inconclusive band. When no
// critical value exists for (m, n) the decision uses the Monte-Carlo
// p-value, which then must be requested.
TestOutcome run_uniformity_test(const AngleSample& sample, int m, double alpha, TestMethod method,
                                const TestOptions& opts = {});

// Classical counterpart: Monte-Carlo p-value, reject iff p <= alpha.
TestOutcome run_classical_test(const AngleSample& sample, TestMethod method, double alpha, std::size_t reps,
                               std::uint64_t seed, unsigned threads = 0);

// Statistic of one NNTS test on a sample (fits internally).
double nnts_statistic(TestMethod method, const AngleSample& sample, int m, const FitOptions& opts = {});

// Monte-Carlo p-value of an NNTS statistic: replicate r refits a uniform
// sample drawn from Rng(seed, r).
double nnts_mc_p_value(TestMethod method, double observed, std::size_t n, int m, std::size_t reps,
                       std::uint64_t seed, const FitOptions& fit_opts = {}, unsigned threads = 0);

}  // namespace nnts
