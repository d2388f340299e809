#include "nnts/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <Eigen/QR>

#include "nnts/classical.hpp"
#include "nnts/parallel.hpp"

namespace nnts {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double round_tenth(double x) { return std::round(x * 10.0) / 10.0; }

double null_statistic(const SimulationPlan& plan, Rng& rng) {
  std::vector<double> angles(plan.n);
  for (double& a : angles) a = rng.angle();
  const AngleSample null(std::move(angles));
  if (!is_nnts(plan.test)) return classical_statistic(plan.test, null).value;
  FitOptions opts = plan.fit;
  opts.on_iteration = nullptr;
  opts.seed = rng.next();
  try {
    return nnts_statistic(plan.test, null, plan.m, opts);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::FitFailure) throw;
    return kNaN;
  }
}

}  // namespace

double quantile_type7(std::vector<double> values, double p) {
  if (values.empty()) throw Error(ErrorKind::InvalidArgument, "quantile of an empty set");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidArgument, "quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<double> simulate_null_statistics(const SimulationPlan& plan) {
  if (plan.n == 0) throw Error(ErrorKind::InvalidArgument, "sample size must be positive");
  if (is_nnts(plan.test) && plan.m < 1) throw Error(ErrorKind::InvalidArgument, "NNTS tests need M >= 1");
  std::vector<double> stats(plan.reps);
  parallel_for(plan.reps, plan.threads, [&](std::size_t r) {
    Rng rng(plan.base_seed, r);
    stats[r] = null_statistic(plan, rng);
  });
  return stats;
}

CriticalValueSimulation simulate_critical_values(const SimulationPlan& plan) {
  if (plan.reps < 1000) throw Error(ErrorKind::HarnessError, "critical values need reps >= 1000");
  if (plan.alphas.empty()) throw Error(ErrorKind::InvalidArgument, "no alpha levels requested");
  for (double a : plan.alphas)
    if (!(a > 0.0 && a < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
  if (is_nnts(plan.test) && plan.m >= 1 && plan.n < CriticalValueModel::min_ss(plan.m))
    throw Error(ErrorKind::SampleTooSmall, "n is below the minimum sample size for M = " + std::to_string(plan.m));

  std::vector<double> stats = simulate_null_statistics(plan);
  CriticalValueSimulation out;
  out.reps = plan.reps;
  std::erase_if(stats, [](double s) { return std::isnan(s); });
  out.failures = plan.reps - stats.size();
  if (out.failures * 100 > plan.reps)
    throw Error(ErrorKind::HarnessError,
                std::to_string(out.failures) + " of " + std::to_string(plan.reps) + " null fits failed");

  std::sort(stats.begin(), stats.end());
  for (double a : plan.alphas) {
    const double q = quantile_type7(stats, 1.0 - a);
    out.values.push_back({a, q, round_tenth(q)});
  }
  return out;
}

std::vector<RegressionFit> fit_cv_regression(const CvTable& table) {
  std::vector<RegressionFit> fits;
  for (RegressionGroup group : {RegressionGroup::M1, RegressionGroup::M2, RegressionGroup::Pooled}) {
    for (int a = 0; a < 3; ++a) {
      struct Point {
        int m;
        double n, value;
      };
      std::vector<Point> points;
      for (const auto& [key, value] : table) {
        const auto& [m, alpha_idx, n] = key;
        if (alpha_idx != a || n == kAsymptoticN || regression_group(m) != group) continue;
        if (group == RegressionGroup::Pooled && m > CriticalValueModel::kMaxTable2Order) continue;
        points.push_back({m, static_cast<double>(n), value});
      }
      if (points.empty()) continue;

      const bool pooled = group == RegressionGroup::Pooled;
      const Eigen::Index cols = pooled ? 5 : 2;
      const auto rows = static_cast<Eigen::Index>(points.size());
      Eigen::MatrixXd x(rows, cols);
      Eigen::VectorXd y(rows);
      for (Eigen::Index i = 0; i < rows; ++i) {
        const Point& p = points[static_cast<std::size_t>(i)];
        if (pooled)
          x.row(i) << 1.0, p.m, 1.0 / p.n, p.m / p.n, 1.0 / (p.n * p.n);
        else
          x.row(i) << 1.0, 1.0 / p.n;
        y(i) = p.value;
      }
      const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
      if (rows < cols || qr.rank() < cols)
        throw Error(ErrorKind::RegressionError, "singular design for the critical-value regression");
      const Eigen::VectorXd beta = qr.solve(y);

      RegressionFit fit;
      fit.group = group;
      fit.alpha = kAlphaLevels[static_cast<std::size_t>(a)];
      fit.points = points.size();
      if (pooled)
        fit.coefficients = {beta(0), beta(1), beta(2), beta(3), beta(4)};
      else
        fit.coefficients = {beta(0), 0.0, beta(1), 0.0, 0.0};

      const Eigen::VectorXd resid = y - x * beta;
      const double centered = (y.array() - y.mean()).matrix().squaredNorm();
      fit.r_squared = centered > 0.0 ? 1.0 - resid.squaredNorm() / centered : 1.0;
      for (const Point& p : points) {
        const double err = std::abs(round_tenth(fit.coefficients.predict(p.m, p.n)) - p.value);
        fit.max_abs_error = std::max(fit.max_abs_error, err);
        fit.max_rel_error = std::max(fit.max_rel_error, err / p.value);
      }
      fits.push_back(fit);
    }
  }
  return fits;
}

PowerReport power_study(const NntsParams& alt, std::size_t n, double alpha, std::size_t reps,
                        const std::vector<PowerMethod>& methods, std::uint64_t base_seed, const PowerOptions& opts) {
  if (reps < 100) throw Error(ErrorKind::InvalidArgument, "power study needs reps >= 100");
  if (methods.empty()) throw Error(ErrorKind::InvalidArgument, "no test methods requested");
  alpha_index(alpha);

  PowerReport report;
  report.alternative = alt;
  report.n = n;
  report.alpha = alpha;
  report.reps = reps;

  // Critical values, published where possible.
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const PowerMethod& pm = methods[i];
    PowerEntry entry{pm};
    bool published = false;
    if (is_nnts(pm.method)) {
      try {
        entry.critical_value = critical_value(CriticalValueModel::embedded(), pm.method, pm.m, alpha, n);
        published = true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::CriticalValueUnavailable) throw;
      }
    }
    if (!published) {
      SimulationPlan plan;
      plan.test = pm.method;
      plan.m = pm.m;
      plan.n = n;
      plan.alphas = {alpha};
      plan.reps = std::max<std::size_t>(opts.null_reps, 1000);
      plan.base_seed = mix64(base_seed ^ (0xa076'1d64'78bd'642fULL + i));
      plan.threads = opts.threads;
      plan.fit = opts.fit;
      entry.critical_value = simulate_critical_values(plan).values.front().raw;
      entry.simulated_cv = true;
    }
    report.entries.push_back(entry);
  }

  // One fit per distinct order serves both NNTS statistics.
  std::vector<int> orders;
  for (const PowerMethod& pm : methods)
    if (is_nnts(pm.method) && std::find(orders.begin(), orders.end(), pm.m) == orders.end()) orders.push_back(pm.m);

  std::vector<unsigned char> rejected(reps * methods.size(), 0);
  parallel_for(reps, opts.threads, [&](std::size_t r) {
    Rng rng(base_seed, r);
    const AngleSample x = sample(alt, n, rng);
    FitOptions fopts = opts.fit;
    fopts.on_iteration = nullptr;
    fopts.seed = rng.next();
    std::map<int, FitResult> fits;
    for (int m : orders) fits.emplace(m, fit(x, m, fopts));
    for (std::size_t i = 0; i < methods.size(); ++i) {
      const PowerMethod& pm = methods[i];
      double stat = 0.0;
      if (pm.method == TestMethod::NNTS1)
        stat = nnts1_statistic(fits.at(pm.m), n);
      else if (pm.method == TestMethod::NNTS2)
        stat = nnts2_statistic(fits.at(pm.m), n);
      else
        stat = classical_statistic(pm.method, x).value;
      rejected[r * methods.size() + i] = stat > report.entries[i].critical_value;
    }
  });

  for (std::size_t i = 0; i < methods.size(); ++i) {
    std::size_t count = 0;
    for (std::size_t r = 0; r < reps; ++r) count += rejected[r * methods.size() + i];
    PowerEntry& e = report.entries[i];
    e.rejection_pct = 100.0 * static_cast<double>(count) / static_cast<double>(reps);
    e.rounded_pct = static_cast<int>(std::lround(e.rejection_pct));
  }
  return report;
}

NntsParams make_alternative(int m, double c0, std::uint64_t seed) {
  if (m < 0) throw Error(ErrorKind::InvalidParameter, "order m must be nonnegative");
  if (!(c0 > 0.0 && c0 <= 1.0)) throw Error(ErrorKind::InvalidParameter, "c0 must lie in (0, 1]");
  if (c0 == 1.0) return NntsParams::uniform(m);
  if (m == 0) throw Error(ErrorKind::InvalidParameter, "order 0 admits only c0 = 1");

  Rng rng(seed);
  CoeffVector tail(m);
  for (int k = 0; k < m; ++k) {
    const double re = rng.normal();
    tail(k) = Complex(re, rng.normal());
  }
  CoeffVector c(m + 1);
  c(0) = c0;
  c.tail(m) = tail * (std::sqrt(1.0 - c0 * c0) / tail.norm());
  return NntsParams::canonicalize(c);
}

}  // namespace nnts
