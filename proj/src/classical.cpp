#include "nnts/classical.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "nnts/parallel.hpp"

namespace nnts {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHrmWeight = 2.895;
const double kRootHalf = std::sqrt(0.5);

void require_nonempty(const AngleSample& sample) {
  if (sample.empty()) throw Error(ErrorKind::InvalidArgument, "empty sample");
}

// Pairwise sums only need cos/sin of each angle once:
// cos(a - b) = ca cb + sa sb, sin(a - b) = sa cb - ca sb.
struct Trig {
  std::vector<double> c, s;
  explicit Trig(const AngleSample& sample) : c(sample.size()), s(sample.size()) {
    for (std::size_t i = 0; i < sample.size(); ++i) {
      c[i] = std::cos(sample[i]);
      s[i] = std::sin(sample[i]);
    }
  }
};

double hro_value(const AngleSample& x, const Trig& t) {
  const std::size_t n = x.size();
  double off = 0.0;  // sum over i < j; the diagonal is zero
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) off += std::abs(t.s[i] * t.c[j] - t.c[i] * t.s[j]);
  const double nd = static_cast<double>(n);
  return nd / kPi - off / nd;
}

double hrm_value(const AngleSample& x, const Trig& t) {
  const std::size_t n = x.size();
  const double shift = kPi / 2.0 - kHrmWeight * 2.0 / kPi;
  double off = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::abs(x[i] - x[j]);
      const double sine = std::abs(t.s[i] * t.c[j] - t.c[i] * t.s[j]);
      off += std::abs(d - kPi) - kHrmWeight * sine - shift;
    }
  const double diag = kPi - shift;
  const double nd = static_cast<double>(n);
  return (nd * diag + 2.0 * off) / nd;
}

double pycke_value(const AngleSample& x, const Trig& t) {
  const std::size_t n = x.size();
  auto kernel = [](double cosine) { return 2.0 * (cosine - kRootHalf) / (1.5 - 2.0 * kRootHalf * cosine); };
  double off = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) off += kernel(t.c[i] * t.c[j] + t.s[i] * t.s[j]);
  const double nd = static_cast<double>(n);
  return (nd * kernel(1.0) + 2.0 * off) / nd;
}

double rayleigh_value(const Trig& t) {
  double sc = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < t.c.size(); ++i) {
    sc += t.c[i];
    ss += t.s[i];
  }
  return std::hypot(sc, ss) / static_cast<double>(t.c.size());
}

double value_of(TestMethod method, const AngleSample& sample) {
  const Trig t(sample);
  switch (method) {
    case TestMethod::Rayleigh: return rayleigh_value(t);
    case TestMethod::HRo: return hro_value(sample, t);
    case TestMethod::HRm: return hrm_value(sample, t);
    case TestMethod::Pycke: return pycke_value(sample, t);
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument, std::string("not a classical test: ") + to_string(method));
}

}  // namespace

ClassicalStatistic rayleigh(const AngleSample& sample) {
  return classical_statistic(TestMethod::Rayleigh, sample);
}

ClassicalStatistic hermans_rasson_original(const AngleSample& sample) {
  return classical_statistic(TestMethod::HRo, sample);
}

ClassicalStatistic hermans_rasson_modified(const AngleSample& sample) {
  return classical_statistic(TestMethod::HRm, sample);
}

ClassicalStatistic pycke(const AngleSample& sample) {
  return classical_statistic(TestMethod::Pycke, sample);
}

ClassicalStatistic classical_statistic(TestMethod method, const AngleSample& sample) {
  require_nonempty(sample);
  return {method, value_of(method, sample)};
}

double mc_p_value(TestMethod method, const AngleSample& sample, std::size_t reps, std::uint64_t seed,
                  unsigned threads) {
  if (reps < 100) throw Error(ErrorKind::InvalidArgument, "Monte-Carlo p-value needs reps >= 100");
  const double observed = classical_statistic(method, sample).value;
  const double cut = observed - 1e-12 * std::max(1.0, std::abs(observed));
  const std::size_t n = sample.size();

  std::vector<unsigned char> exceeds(reps, 0);
  parallel_for(reps, threads, [&](std::size_t r) {
    Rng rng(seed, r);
    std::vector<double> angles(n);
    for (double& a : angles) a = rng.angle();
    exceeds[r] = value_of(method, AngleSample(std::move(angles))) >= cut;
  });
  std::size_t count = 0;
  for (unsigned char e : exceeds) count += e;
  return static_cast<double>(1 + count) / static_cast<double>(reps + 1);
}

}  // namespace nnts
