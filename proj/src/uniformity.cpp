#include "nnts/uniformity.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nnts/classical.hpp"
#include "nnts/parallel.hpp"

namespace nnts {

namespace {

const double kLogTwoPi = std::log(kTwoPi);
constexpr double kInconclusiveBand = 0.1;

double round_tenth(double x) { return std::round(x * 10.0) / 10.0; }

// Published NNTS1 critical values; rows are alpha = .10, .05, .01 and
// columns n = 25, 50, 100, 200, 500. Zero marks an empty cell.
constexpr std::size_t kTable1N[] = {25, 50, 100, 200, 500};
constexpr double kTable1[5][3][5] = {
    {{2.7, 2.5, 2.4, 2.3, 2.3}, {3.7, 3.3, 3.1, 3.1, 3.1}, {8.0, 5.3, 4.8, 4.8, 4.7}},
    {{8.6, 4.6, 4.3, 4.1, 3.9}, {9.2, 5.9, 5.2, 5.0, 4.9}, {10.7, 10.1, 7.6, 7.2, 6.8}},
    {{0, 7.9, 6.1, 5.6, 5.4}, {0, 13.1, 7.3, 6.7, 6.4}, {0, 15.4, 10.1, 9.0, 8.7}},
    {{0, 12.5, 7.9, 7.3, 6.8}, {0, 13.9, 9.6, 8.4, 7.9}, {0, 18.1, 15.0, 11.3, 10.4}},
    {{0, 0, 10.1, 8.6, 8.2}, {0, 0, 13.0, 10.0, 9.4}, {0, 0, 20.9, 13.4, 12.1}},
};

// Published NNTS2 critical values. Each row starts at the M-specific first
// column of kTable2N and runs to its last filled cell; the asymptotic value
// is kept separately.
constexpr std::size_t kTable2N[] = {20,  30,  40,  50,  60,  70,  80,  90,  100, 110,
                                    120, 130, 140, 150, 200, 300, 400, 500, 600, 700};

struct Table2Row {
  int m;
  std::size_t first_n;
  std::vector<double> values;
  double asymptote;
};

const std::vector<Table2Row>& table2_rows() {
  static const std::vector<Table2Row> rows = {
      {1, 20, {5.0, 4.9, 4.9, 4.7, 4.7, 4.7, 4.6, 4.6, 4.6}, 4.6},
      {1, 20, {6.6, 6.3, 6.3, 6.1, 6.1, 6.1, 6.1, 6.1, 6.1}, 6.1},
      {1, 20, {10.3, 9.8, 9.8, 9.5, 9.5, 9.4, 9.4, 9.3, 9.3}, 9.3},
      {2, 30, {8.5, 8.3, 8.1, 8.1, 8.0, 8.0, 8.0, 7.9, 7.9}, 7.9},
      {2, 30, {10.5, 10.2, 9.9, 9.8, 9.8, 9.7, 9.7, 9.7, 9.7}, 9.7},
      {2, 30, {14.5, 14.3, 14.0, 13.8, 13.7, 13.7, 13.6, 13.5, 13.5}, 13.5},
      {3, 40, {11.6, 11.3, 11.2, 11.1, 11.0, 11.0, 10.9, 10.9, 10.9, 10.8, 10.8, 10.8, 10.8, 10.8}, 10.8},
      {3, 40, {13.7, 13.5, 13.2, 13.1, 13.1, 13.0, 12.9, 12.9, 12.9, 12.8, 12.8, 12.8, 12.8, 12.8}, 12.8},
      {3, 40, {17.9, 17.9, 17.9, 17.6, 17.5, 17.4, 17.3, 17.3, 17.3, 17.2, 17.1, 17.1, 17.0, 17.0}, 17.0},
      {4, 50, {14.5, 14.2, 14.1, 13.9, 13.9, 13.8, 13.7, 13.7, 13.7, 13.7, 13.6, 13.6, 13.5, 13.5}, 13.5},
      {4, 50, {16.7, 16.6, 16.4, 16.3, 16.1, 16.0, 15.9, 15.9, 15.9, 15.8, 15.8, 15.8, 15.7, 15.7}, 15.7},
      {4, 50, {21.4, 21.4, 21.3, 20.9, 20.9, 20.8, 20.8, 20.7, 20.6, 20.5, 20.5, 20.3, 20.3, 20.3}, 20.3},
      {5, 60, {17.3, 17.1, 16.9, 16.8, 16.7, 16.6, 16.5, 16.5, 16.4, 16.3, 16.3, 16.2, 16.1, 16.1}, 16.1},
      {5, 60, {19.7, 19.6, 19.5, 19.2, 19.1, 19.0, 18.9, 18.9, 18.8, 18.7, 18.6, 18.6, 18.5, 18.5}, 18.5},
      {5, 60, {24.6, 24.6, 24.5, 24.4, 24.3, 24.2, 24.0, 24.0, 23.8, 23.6, 23.6, 23.5, 23.4, 23.4}, 23.4},
      {6, 70, {20.0, 19.9, 19.7, 19.5, 19.4, 19.3, 19.2, 19.1, 19.1, 18.9, 18.8, 18.7, 18.7, 18.7}, 18.7},
      {6, 70, {22.6, 22.4, 22.4, 22.1, 22.0, 21.9, 21.9, 21.8, 21.7, 21.5, 21.3, 21.2, 21.2, 21.2}, 21.2},
      {6, 70, {27.9, 27.8, 27.8, 27.6, 27.6, 27.3, 27.3, 27.1, 27.1, 26.7, 26.6, 26.5, 26.5, 26.5}, 26.5},
      {7, 80, {22.7, 22.6, 22.4, 22.2, 22.1, 22.0, 21.9, 21.9, 21.6, 21.4, 21.2, 21.2, 21.2, 21.2}, 21.2},
      {7, 80, {25.4, 25.4, 25.1, 25.0, 24.9, 24.9, 24.7, 24.6, 24.3, 24.1, 24.0, 24.0, 23.9, 23.9}, 23.9},
      {7, 80, {31.0, 31.0, 30.9, 30.8, 30.6, 30.6, 30.5, 30.5, 29.9, 29.8, 29.6, 29.6, 29.6, 29.6}, 29.6},
  };
  return rows;
}

constexpr std::size_t kAsySs[] = {0, 85, 98, 173, 203, 278, 386, 562};

void require_order(int m, int max_order, const char* what) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, std::string(what) + " needs M >= 1");
  if (m > max_order)
    throw Error(ErrorKind::CriticalValueUnavailable,
                std::string(what) + " critical values exist for M <= " + std::to_string(max_order));
}

}  // namespace

const char* to_string(CvSource source) {
  switch (source) {
    case CvSource::Table: return "table";
    case CvSource::Regression: return "regression";
    case CvSource::Auto: return "auto";
  }
  return "unknown";
}

const char* to_string(Decision decision) {
  switch (decision) {
    case Decision::Reject: return "reject";
    case Decision::FailToReject: return "fail-to-reject";
    case Decision::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

int alpha_index(double alpha) {
  for (int i = 0; i < 3; ++i)
    if (std::abs(alpha - kAlphaLevels[static_cast<std::size_t>(i)]) < 1e-12) return i;
  throw Error(ErrorKind::UnsupportedAlpha, "alpha must be 0.10, 0.05 or 0.01, got " + std::to_string(alpha));
}

RegressionGroup regression_group(int m) {
  if (m == 1) return RegressionGroup::M1;
  if (m == 2) return RegressionGroup::M2;
  return RegressionGroup::Pooled;
}

// --- CriticalValueModel -----------------------------------------------------

CriticalValueModel::CriticalValueModel() {
  for (int m = 1; m <= kMaxTable1Order; ++m)
    for (int a = 0; a < 3; ++a)
      for (int j = 0; j < 5; ++j) {
        const double v = kTable1[m - 1][a][j];
        if (v > 0.0) table1_[{m, a, kTable1N[j]}] = v;
      }

  int row_index = 0;
  for (const Table2Row& row : table2_rows()) {
    const int a = row_index++ % 3;
    const std::size_t* first = std::find(std::begin(kTable2N), std::end(kTable2N), row.first_n);
    for (std::size_t j = 0; j < row.values.size(); ++j) table2_[{row.m, a, first[j]}] = row.values[j];
    table2_[{row.m, a, kAsymptoticN}] = row.asymptote;
  }

  using G = RegressionGroup;
  auto& r = regression_;
  r[static_cast<int>(G::M1)] = {{{4.5128, 0, 10.8062, 0, 0}, {5.9269, 0, 12.7461, 0, 0}, {9.0630, 0, 24.5377, 0, 0}}};
  r[static_cast<int>(G::M2)] = {{{7.6807, 0, 24.1698, 0, 0}, {9.3118, 0, 34.1750, 0, 0}, {13.1063, 0, 43.7094, 0, 0}}};
  r[static_cast<int>(G::Pooled)] = {{{3.2703, 2.5317, -108.3235, 32.8331, 1618.5535},
                                     {4.6077, 2.7291, -91.8270, 31.8820, 1368.6187},
                                     {7.2135, 3.1555, 26.9335, 21.0319, -1549.4894}}};
  std::copy(std::begin(kAsySs), std::end(kAsySs), asy_ss_.begin());
}

const CriticalValueModel& CriticalValueModel::embedded() {
  static const CriticalValueModel model;
  return model;
}

std::optional<double> CriticalValueModel::table1(int m, double alpha, std::size_t n) const {
  const auto it = table1_.find({m, alpha_index(alpha), n});
  if (it == table1_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> CriticalValueModel::table2(int m, double alpha, std::size_t n) const {
  const auto it = table2_.find({m, alpha_index(alpha), n});
  if (it == table2_.end()) return std::nullopt;
  return it->second;
}

const RegressionCoefficients& CriticalValueModel::regression(int m, double alpha) const {
  return regression(regression_group(m), alpha_index(alpha));
}

const RegressionCoefficients& CriticalValueModel::regression(RegressionGroup group, int alpha_idx) const {
  return regression_[static_cast<std::size_t>(group)][static_cast<std::size_t>(alpha_idx)];
}

std::size_t CriticalValueModel::min_ss(int m) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "min_ss needs M >= 1");
  if (m == 1) return 15;
  if (m == 2) return 25;
  return 10 * static_cast<std::size_t>(m + 1);
}

std::size_t CriticalValueModel::asy_ss(int m) const {
  require_order(m, kMaxTable2Order, "NNTS2");
  return asy_ss_[static_cast<std::size_t>(m)];
}

// --- Statistics -------------------------------------------------------------

double nnts1_statistic(const FitResult& fit, std::size_t n) {
  const double c0 = fit.params.c0();
  return static_cast<double>(n) * std::max(0.0, 1.0 - c0 * c0);
}

double nnts2_statistic(const FitResult& fit, std::size_t n) {
  // The uniform point is feasible, so the true value is >= 0; clamp rounding.
  return std::max(0.0, 2.0 * fit.log_lik + 2.0 * static_cast<double>(n) * kLogTwoPi);
}

CvSource resolve_source(TestMethod test, CvSource source) {
  if (!is_nnts(test)) throw Error(ErrorKind::InvalidArgument, "critical values exist only for nnts1/nnts2");
  if (source != CvSource::Auto) return source;
  return test == TestMethod::NNTS2 ? CvSource::Regression : CvSource::Table;
}

double critical_value(const CriticalValueModel& model, TestMethod test, int m, double alpha, std::size_t n,
                      CvSource source) {
  const CvSource resolved = resolve_source(test, source);
  const int a = alpha_index(alpha);
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "critical values need M >= 1");
  if (n < CriticalValueModel::min_ss(m))
    throw Error(ErrorKind::SampleTooSmall, "n = " + std::to_string(n) + " is below the minimum " +
                                               std::to_string(CriticalValueModel::min_ss(m)) + " for M = " +
                                               std::to_string(m));

  if (test == TestMethod::NNTS1) {
    if (resolved == CvSource::Regression)
      throw Error(ErrorKind::CriticalValueUnavailable, "no regression model for NNTS1");
    require_order(m, CriticalValueModel::kMaxTable1Order, "NNTS1");
    if (auto v = model.table1(m, alpha, n)) return *v;
    throw Error(ErrorKind::CriticalValueUnavailable,
                "NNTS1 critical value not tabulated for M = " + std::to_string(m) + ", n = " + std::to_string(n));
  }

  require_order(m, CriticalValueModel::kMaxTable2Order, "NNTS2");
  if (resolved == CvSource::Table) {
    if (auto v = model.table2(m, alpha, n)) return *v;
    throw Error(ErrorKind::CriticalValueUnavailable,
                "NNTS2 critical value not tabulated for M = " + std::to_string(m) + ", n = " + std::to_string(n));
  }
  if (n >= model.asy_ss(m)) return *model.table2(m, alpha, kAsymptoticN);
  return round_tenth(model.regression(regression_group(m), a).predict(m, static_cast<double>(n)));
}

// --- Tests ------------------------------------------------------------------

double nnts_statistic(TestMethod method, const AngleSample& sample, int m, const FitOptions& opts) {
  const FitResult f = fit(sample, m, opts);
  return method == TestMethod::NNTS1 ? nnts1_statistic(f, sample.size()) : nnts2_statistic(f, sample.size());
}

double nnts_mc_p_value(TestMethod method, double observed, std::size_t n, int m, std::size_t reps,
                       std::uint64_t seed, const FitOptions& fit_opts, unsigned threads) {
  if (!is_nnts(method)) throw Error(ErrorKind::InvalidArgument, "not an NNTS test");
  if (reps < 100) throw Error(ErrorKind::InvalidArgument, "Monte-Carlo p-value needs reps >= 100");
  const double cut = observed - 1e-12 * std::max(1.0, std::abs(observed));

  // 0 = below, 1 = at or above, 2 = fit failed
  std::vector<unsigned char> flags(reps, 0);
  parallel_for(reps, threads, [&](std::size_t r) {
    Rng rng(seed, r);
    const AngleSample null = sample(NntsParams::uniform(0), n, rng);
    FitOptions opts = fit_opts;
    opts.on_iteration = nullptr;
    opts.seed = rng.next();
    try {
      flags[r] = nnts_statistic(method, null, m, opts) >= cut ? 1 : 0;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::FitFailure) throw;
      flags[r] = 2;
    }
  });
  std::size_t count = 0, used = 0;
  for (unsigned char f : flags) {
    if (f == 2) continue;
    ++used;
    count += f;
  }
  if (used == 0) throw Error(ErrorKind::FitFailure, "every null replicate failed to fit");
  return static_cast<double>(1 + count) / static_cast<double>(used + 1);
}

TestOutcome run_uniformity_test(const AngleSample& sample, int m, double alpha, TestMethod method,
                                const TestOptions& opts) {
  if (!is_nnts(method)) throw Error(ErrorKind::InvalidArgument, "run_uniformity_test handles nnts1/nnts2");
  alpha_index(alpha);
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "uniformity test needs M >= 1");
  const std::size_t n = sample.size();
  if (n < CriticalValueModel::min_ss(m))
    throw Error(ErrorKind::SampleTooSmall, "n = " + std::to_string(n) + " is below the minimum " +
                                               std::to_string(CriticalValueModel::min_ss(m)));

  TestOutcome out;
  out.method = method;
  out.m = m;
  out.n = n;
  out.alpha = alpha;
  out.fit = fit(sample, m, opts.fit);
  out.statistic = method == TestMethod::NNTS1 ? nnts1_statistic(*out.fit, n) : nnts2_statistic(*out.fit, n);

  const CvSource source = resolve_source(method, opts.source);
  try {
    out.critical_value = critical_value(CriticalValueModel::embedded(), method, m, alpha, n, source);
  } catch (const Error& e) {
    // Untabulated cells fall back to the Monte-Carlo p-value, if requested.
    if (e.kind() != ErrorKind::CriticalValueUnavailable || !opts.p_value_reps) throw;
  }
  if (opts.p_value_reps) {
    out.seed = opts.seed;
    out.p_value = nnts_mc_p_value(method, out.statistic, n, m, *opts.p_value_reps, opts.seed, opts.fit, opts.threads);
  }

  if (out.critical_value) {
    const double cv = *out.critical_value;
    if (source == CvSource::Regression && std::abs(out.statistic - cv) < kInconclusiveBand)
      out.decision = Decision::Inconclusive;
    else
      out.decision = out.statistic > cv ? Decision::Reject : Decision::FailToReject;
  } else {
    out.decision = *out.p_value <= alpha ? Decision::Reject : Decision::FailToReject;
  }
  return out;
}

TestOutcome run_classical_test(const AngleSample& sample, TestMethod method, double alpha, std::size_t reps,
                               std::uint64_t seed, unsigned threads) {
  if (is_nnts(method)) throw Error(ErrorKind::InvalidArgument, "use run_uniformity_test for NNTS tests");
  alpha_index(alpha);
  TestOutcome out;
  out.method = method;
  out.n = sample.size();
  out.alpha = alpha;
  out.statistic = classical_statistic(method, sample).value;
  out.p_value = mc_p_value(method, sample, reps, seed, threads);
  out.seed = seed;
  out.decision = *out.p_value <= alpha ? Decision::Reject : Decision::FailToReject;
  return out;
}

}  // namespace nnts
