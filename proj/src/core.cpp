#include "nnts/core.hpp"

#include <cmath>
#include <string>

namespace nnts {

double reduce_angle(double theta) noexcept {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// --- NntsParams -------------------------------------------------------------

NntsParams NntsParams::uniform(int m) {
  if (m < 0) throw Error(ErrorKind::InvalidParameter, "order m must be nonnegative");
  CoeffVector c = CoeffVector::Zero(m + 1);
  c(0) = 1.0;
  return NntsParams(std::move(c));
}

NntsParams NntsParams::canonicalize(std::span<const Complex> raw) {
  CoeffVector c(static_cast<Eigen::Index>(raw.size()));
  for (std::size_t k = 0; k < raw.size(); ++k) c(static_cast<Eigen::Index>(k)) = raw[k];
  return canonicalize(c);
}

NntsParams NntsParams::canonicalize(const CoeffVector& raw) {
  if (raw.size() == 0) throw Error(ErrorKind::InvalidParameter, "empty coefficient vector");
  if (!raw.allFinite()) throw Error(ErrorKind::InvalidParameter, "non-finite coefficient");
  const double norm = raw.norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::InvalidParameter, "all-zero coefficient vector");

  CoeffVector c = raw / norm;
  bool warning = false;
  Eigen::Index pivot = 0;
  if (c(0) == Complex(0.0)) {
    warning = true;
    while (c(pivot) == Complex(0.0)) ++pivot;
  }
  const Complex phase = std::conj(c(pivot)) / std::abs(c(pivot));
  c *= phase;
  c(pivot) = Complex(std::abs(c(pivot)), 0.0);
  c(0) = Complex(c(0).real(), 0.0);
  return NntsParams(std::move(c), warning);
}

NntsParams NntsParams::from_canonical(const CoeffVector& c) {
  if (c.size() == 0) throw Error(ErrorKind::InvalidParameter, "empty coefficient vector");
  if (!c.allFinite()) throw Error(ErrorKind::InvalidParameter, "non-finite coefficient");
  if (std::abs(c.squaredNorm() - 1.0) > kNormTolerance)
    throw Error(ErrorKind::InvalidParameter, "coefficients must have unit norm");
  if (c(0).imag() != 0.0 || c(0).real() < 0.0)
    throw Error(ErrorKind::InvalidParameter, "c_0 must be real and nonnegative");
  return NntsParams(c);
}

// --- Spectrum ---------------------------------------------------------------

Spectrum Spectrum::from_nonnegative(const CoeffVector& phi) {
  if (phi.size() == 0) throw Error(ErrorKind::InvalidSpectrum, "empty spectrum");
  if (std::abs(phi(0) - Complex(1.0)) > kTolerance)
    throw Error(ErrorKind::InvalidSpectrum, "phi(0) must equal 1");
  for (Eigen::Index t = 1; t < phi.size(); ++t) {
    if (!(std::abs(phi(t)) <= 1.0 + kTolerance))
      throw Error(ErrorKind::InvalidSpectrum, "|phi(" + std::to_string(t) + ")| exceeds 1");
  }
  CoeffVector out = phi;
  out(0) = 1.0;
  return Spectrum(std::move(out));
}

Spectrum Spectrum::from_full(std::span<const Complex> phi) {
  if (phi.size() % 2 == 0) throw Error(ErrorKind::InvalidSpectrum, "expected 2m+1 values");
  const auto m = static_cast<Eigen::Index>(phi.size() / 2);
  CoeffVector nonneg(m + 1);
  for (Eigen::Index t = 0; t <= m; ++t) {
    const Complex pos = phi[static_cast<std::size_t>(m + t)];
    const Complex neg = phi[static_cast<std::size_t>(m - t)];
    if (std::abs(neg - std::conj(pos)) > kTolerance)
      throw Error(ErrorKind::InvalidSpectrum,
                  "phi(-" + std::to_string(t) + ") is not the conjugate of phi(" + std::to_string(t) + ")");
    nonneg(t) = pos;
  }
  return from_nonnegative(nonneg);
}

Complex Spectrum::operator()(int t) const {
  const int a = t < 0 ? -t : t;
  if (a > m()) return Complex(0.0);
  return t < 0 ? std::conj(phi_(a)) : phi_(a);
}

// --- AngleSample ------------------------------------------------------------

AngleSample::AngleSample(std::vector<double> radians) : angles_(std::move(radians)) {
  for (double& a : angles_) a = reduce_angle(a);
}

AngleSample AngleSample::rotated(double delta) const {
  std::vector<double> out(angles_.begin(), angles_.end());
  for (double& a : out) a += delta;
  return AngleSample(std::move(out));
}

// --- Operations -------------------------------------------------------------

double density(const NntsParams& params, double theta) {
  return trig_sum_density(params.coeffs(), reduce_angle(theta));
}

Spectrum char_fn(const NntsParams& params) {
  CoeffVector phi = autocorrelation(params.coeffs());
  phi(0) = 1.0;
  return Spectrum::from_nonnegative(phi);
}

double density_from_spectrum(const Spectrum& spectrum, double theta) {
  // phi(t) e^{-it theta} + phi(-t) e^{it theta} = 2 Re(phi(t) e^{-it theta})
  const Complex z = std::polar(1.0, -reduce_angle(theta));
  const CoeffVector& phi = spectrum.nonnegative();
  Complex acc(0.0);
  for (Eigen::Index t = phi.size() - 1; t >= 1; --t) acc = (acc + phi(t)) * z;
  return (1.0 + 2.0 * acc.real()) / kTwoPi;
}

AngleSample sample(const NntsParams& params, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample(params, n, rng);
}

AngleSample sample(const NntsParams& params, std::size_t n, Rng& rng) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "sample size must be at least 1");
  const CoeffVector& c = params.coeffs();
  // |sum c_k e^{ik theta}|^2 <= (M+1) sum |c_k|^2 = M+1
  const double bound = static_cast<double>(c.size());
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    const double theta = rng.angle();
    const double u = rng.uniform();
    if (u * bound <= std::norm(trig_sum(c, theta))) out.push_back(theta);
  }
  return AngleSample(std::move(out));
}

}  // namespace nnts
