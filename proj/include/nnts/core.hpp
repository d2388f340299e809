#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nnts/error.hpp"
#include "nnts/rng.hpp"

namespace nnts {

using Complex = std::complex<double>;
using CoeffVector = Eigen::VectorXcd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reduces an angle into [0, 2pi).
double reduce_angle(double theta) noexcept;

// ---------------------------------------------------------------------------
// Kernels on raw coefficient vectors. These accept any Eigen column
// expression and do not require unit norm.
// ---------------------------------------------------------------------------

// sum_k c_k e^{i k theta}, evaluated by Horner's rule in z = e^{i theta}.
template <typename Derived>
std::complex<typename Derived::RealScalar> trig_sum(const Eigen::MatrixBase<Derived>& c,
                                                    typename Derived::RealScalar theta) {
  using Real = typename Derived::RealScalar;
  const std::complex<Real> z = std::polar(Real(1), theta);
  std::complex<Real> acc(0);
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) acc = acc * z + c(k);
  return acc;
}

// (1/2pi) |sum_k c_k e^{i k theta}|^2
template <typename Derived>
typename Derived::RealScalar trig_sum_density(const Eigen::MatrixBase<Derived>& c,
                                              typename Derived::RealScalar theta) {
  using Real = typename Derived::RealScalar;
  return std::norm(trig_sum(c, theta)) / (Real(2) * std::numbers::pi_v<Real>);
}

// E[e^{i t Theta}] for t = 0..M: sum_j c_j conj(c_{j+t}).
template <typename Derived>
Eigen::Matrix<std::complex<typename Derived::RealScalar>, Eigen::Dynamic, 1> autocorrelation(
    const Eigen::MatrixBase<Derived>& c) {
  using Scalar = std::complex<typename Derived::RealScalar>;
  const Eigen::Index size = c.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(size);
  for (Eigen::Index t = 0; t < size; ++t) {
    Scalar acc(0);
    for (Eigen::Index j = 0; j + t < size; ++j) acc += Scalar(c(j)) * std::conj(Scalar(c(j + t)));
    out(t) = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// NntsParams
// ---------------------------------------------------------------------------

// Coefficients c_0..c_M of one NNTS density on the complex unit sphere,
// with c_0 real and nonnegative.
class NntsParams {
 public:
  static constexpr double kNormTolerance = 1e-10;

  // Uniform density of order m: c = (1, 0, ..., 0).
  static NntsParams uniform(int m = 0);

  // Rescales to unit norm and rotates the global phase so that c_0 is real
  // and nonnegative. Throws InvalidParameter for an empty or all-zero input.
  static NntsParams canonicalize(const CoeffVector& raw);
  static NntsParams canonicalize(std::span<const Complex> raw);

  // Accepts an already-canonical vector unchanged (bit-exact); throws
  // InvalidParameter if any invariant fails.
  static NntsParams from_canonical(const CoeffVector& c);

  int m() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const CoeffVector& coeffs() const noexcept { return c_; }
  Complex operator[](int k) const { return c_(k); }
  double c0() const { return c_(0).real(); }

  // Set when canonicalize() met c_0 = 0 and fixed the phase from the first
  // nonzero coefficient instead.
  bool phase_from_later_coefficient() const noexcept { return phase_warning_; }

  friend bool operator==(const NntsParams& a, const NntsParams& b) {
    return a.c_.size() == b.c_.size() && a.c_ == b.c_;
  }

 private:
  explicit NntsParams(CoeffVector c, bool phase_warning = false)
      : c_(std::move(c)), phase_warning_(phase_warning) {}

  CoeffVector c_;
  bool phase_warning_ = false;
};

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

// Characteristic function values phi(t) for integer t in [-m, m]; zero outside.
class Spectrum {
 public:
  static constexpr double kTolerance = 1e-12;

  static Spectrum uniform() { return Spectrum(CoeffVector::Ones(1)); }

  // From phi(0..m); negative orders follow by Hermitian symmetry.
  // phi(0) must equal 1 and |phi(t)| <= 1.
  static Spectrum from_nonnegative(const CoeffVector& phi_nonneg);

  // From phi(-m..m) (index t + m). Throws InvalidSpectrum if phi(0) != 1,
  // Hermitian symmetry fails, or some |phi(t)| > 1.
  static Spectrum from_full(std::span<const Complex> phi);

  int m() const noexcept { return static_cast<int>(phi_.size()) - 1; }
  Complex operator()(int t) const;
  const CoeffVector& nonnegative() const noexcept { return phi_; }

 private:
  explicit Spectrum(CoeffVector phi) : phi_(std::move(phi)) {}

  CoeffVector phi_;  // phi(0..m)
};

// ---------------------------------------------------------------------------
// AngleSample
// ---------------------------------------------------------------------------

// Angles in radians, each reduced into [0, 2pi) on construction.
class AngleSample {
 public:
  AngleSample() = default;
  explicit AngleSample(std::vector<double> radians);

  std::size_t size() const noexcept { return angles_.size(); }
  bool empty() const noexcept { return angles_.empty(); }
  double operator[](std::size_t i) const { return angles_[i]; }
  std::span<const double> angles() const noexcept { return angles_; }
  auto begin() const noexcept { return angles_.begin(); }
  auto end() const noexcept { return angles_.end(); }

  // Every angle shifted by delta (mod 2pi).
  AngleSample rotated(double delta) const;

 private:
  std::vector<double> angles_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

double density(const NntsParams& params, double theta);

Spectrum char_fn(const NntsParams& params);

// (1/2pi) sum_t phi(t) e^{-i t theta}
double density_from_spectrum(const Spectrum& spectrum, double theta);

// n i.i.d. draws by rejection from the uniform envelope (M+1)/(2pi).
AngleSample sample(const NntsParams& params, std::size_t n, std::uint64_t seed);
AngleSample sample(const NntsParams& params, std::size_t n, Rng& rng);

}  // namespace nnts
