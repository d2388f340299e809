#include "nnts/sum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

namespace nnts {

const char* to_string(SumMethod method) {
  switch (method) {
    case SumMethod::PaperSystem: return "paper-system";
    case SumMethod::ClosedForm: return "closed-form";
    case SumMethod::SpectralFactorization: return "spectral-factorization";
  }
  return "unknown";
}

namespace {

void require_two(std::span<const NntsParams> summands) {
  if (summands.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two summands");
}

int min_order(std::span<const NntsParams> summands) {
  int m = std::numeric_limits<int>::max();
  for (const auto& p : summands) m = std::min(m, p.m());
  return m;
}

// Right-hand side of the coefficient system: prod_s c_k^(s) conj(c_0^(s)).
CoeffVector cross_products(std::span<const NntsParams> summands, int m_sum) {
  CoeffVector p = CoeffVector::Ones(m_sum + 1);
  for (const auto& s : summands) {
    const Complex c0 = std::conj(s[0]);
    for (int k = 1; k <= m_sum; ++k) p(k) *= s[k] * c0;
  }
  p(0) = 0.0;
  return p;
}

Spectrum product_of(std::span<const NntsParams> summands) {
  std::vector<Spectrum> spectra;
  spectra.reserve(summands.size());
  for (const auto& s : summands) spectra.push_back(char_fn(s));
  return spectrum_product(spectra);
}

double discrepancy(const NntsParams& params, const Spectrum& target) {
  const Spectrum got = char_fn(params);
  double worst = 0.0;
  for (int t = 0; t <= std::max(got.m(), target.m()); ++t)
    worst = std::max(worst, std::abs(got(t) - target(t)));
  return worst;
}

// One Newton solve of the two-summand (or pre-multiplied) system for rhs p.
// Unknowns x = (c0, Re c_1..m, Im c_1..m).
struct SystemSolution {
  CoeffVector c;
  double residual;
};

SystemSolution solve_system(const CoeffVector& p, double tol) {
  const int m = static_cast<int>(p.size()) - 1;
  const int dim = 2 * m + 1;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
  x(0) = 1.0;

  auto residuals = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd f(dim);
    double norm = v(0) * v(0);
    for (int k = 1; k <= m; ++k) {
      const double re = v(k), im = v(m + k);
      f(k - 1) = v(0) * re - p(k).real();
      f(m + k - 1) = v(0) * im - p(k).imag();
      norm += re * re + im * im;
    }
    f(dim - 1) = norm - 1.0;
    return f;
  };

  Eigen::VectorXd f = residuals(x);
  double res = f.cwiseAbs().maxCoeff();
  constexpr int kMaxIter = 200;
  for (int iter = 0; iter < kMaxIter && res >= tol; ++iter) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(dim, dim);
    for (int k = 1; k <= m; ++k) {
      jac(k - 1, 0) = x(k);
      jac(k - 1, k) = x(0);
      jac(m + k - 1, 0) = x(m + k);
      jac(m + k - 1, m + k) = x(0);
      jac(dim - 1, k) = 2.0 * x(k);
      jac(dim - 1, m + k) = 2.0 * x(m + k);
    }
    jac(dim - 1, 0) = 2.0 * x(0);
    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-f);

    // Halve the step while the residual grows.
    double scale = 1.0;
    Eigen::VectorXd trial = x + step;
    Eigen::VectorXd ftrial = residuals(trial);
    while (ftrial.norm() > f.norm() && scale > 1e-10) {
      scale *= 0.5;
      trial = x + scale * step;
      ftrial = residuals(trial);
    }
    x = trial;
    f = ftrial;
    res = f.cwiseAbs().maxCoeff();
  }
  if (!(res < tol)) throw SolverDivergence("Newton iteration did not converge", res);

  CoeffVector c(m + 1);
  c(0) = x(0);
  for (int k = 1; k <= m; ++k) c(k) = Complex(x(k), x(m + k));
  return {std::move(c), res};
}

}  // namespace

Spectrum spectrum_product(std::span<const Spectrum> spectra) {
  if (spectra.empty()) throw Error(ErrorKind::InvalidArgument, "empty spectrum list");
  int m = std::numeric_limits<int>::max();
  for (const auto& s : spectra) m = std::min(m, s.m());
  CoeffVector phi = CoeffVector::Ones(m + 1);
  for (const auto& s : spectra)
    for (int t = 1; t <= m; ++t) phi(t) *= s(t);
  return Spectrum::from_nonnegative(phi);
}

SumResult sum_params_closed_form(std::span<const NntsParams> summands) {
  require_two(summands);
  const int m_sum = min_order(summands);
  const CoeffVector p = cross_products(summands, m_sum);
  const double load = p.tail(m_sum).squaredNorm();
  const double disc = 1.0 - 4.0 * load;
  if (disc < 0.0) throw Error(ErrorKind::NoRealSolution, "biquadratic has no real root for c0");

  CoeffVector c(m_sum + 1);
  c(0) = std::sqrt((1.0 + std::sqrt(disc)) / 2.0);
  for (int k = 1; k <= m_sum; ++k) c(k) = p(k) / c(0).real();
  const double residual = std::abs(c.squaredNorm() - 1.0);

  NntsParams params = NntsParams::canonicalize(c);
  const double gap = discrepancy(params, product_of(summands));
  return {std::move(params), m_sum, SumMethod::ClosedForm, residual, gap};
}

SumResult sum_params_solver(std::span<const NntsParams> summands, double tol) {
  require_two(summands);
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  const int m_sum = min_order(summands);
  if (m_sum == 0) return {NntsParams::uniform(0), 0, SumMethod::PaperSystem, 0.0, 0.0};

  // Fold left: the running sum is itself an NNTS variable of order m_sum.
  CoeffVector acc = summands[0].coeffs().head(m_sum + 1);
  double worst = 0.0;
  for (std::size_t s = 1; s < summands.size(); ++s) {
    CoeffVector p = CoeffVector::Zero(m_sum + 1);
    for (int k = 1; k <= m_sum; ++k)
      p(k) = acc(k) * std::conj(acc(0)) * summands[s][k] * std::conj(summands[s][0]);
    SystemSolution sol = solve_system(p, tol);
    worst = std::max(worst, sol.residual);
    acc = std::move(sol.c);
  }
  NntsParams params = NntsParams::canonicalize(acc);
  const double gap = discrepancy(params, product_of(summands));
  return {std::move(params), m_sum, SumMethod::PaperSystem, worst, gap};
}

NntsParams spectrum_to_params(const Spectrum& spectrum) {
  constexpr int kGrid = 4096;
  for (int i = 0; i < kGrid; ++i) {
    const double theta = kTwoPi * i / kGrid;
    if (density_from_spectrum(spectrum, theta) < -1e-10)
      throw Error(ErrorKind::NotADensity, "spectrum inverts to a negative function");
  }

  int m = spectrum.m();
  while (m > 0 && std::abs(spectrum(m)) < 1e-14) --m;
  if (m == 0) return NntsParams::uniform(spectrum.m());

  // z^m L(z) with L(z) = sum_t phi(t) z^{-t}; coefficient of z^j is phi(m-j).
  const int degree = 2 * m;
  CoeffVector poly(degree + 1);
  for (int j = 0; j <= degree; ++j) poly(j) = spectrum(m - j);

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int j = 0; j < degree; ++j) companion(j, degree - 1) = -poly(j) / poly(degree);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::FactorizationUnstable, "companion eigenvalues did not converge");

  // Roots come in pairs r, 1/conj(r). Keep the member outside the unit
  // circle: q(z) = prod (z - r) then has the largest |q(0)| = c_0.
  std::vector<Complex> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + degree);
  std::vector<Complex> kept;
  kept.reserve(static_cast<std::size_t>(m));
  while (!roots.empty()) {
    auto outer = std::max_element(roots.begin(), roots.end(),
                                  [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
    const Complex r = *outer;
    roots.erase(outer);
    const Complex mirror = 1.0 / std::conj(r);
    auto partner = std::min_element(roots.begin(), roots.end(), [&](Complex a, Complex b) {
      return std::abs(a - mirror) < std::abs(b - mirror);
    });
    if (partner == roots.end() || std::abs(std::abs(r) * std::abs(*partner) - 1.0) > 1e-6)
      throw Error(ErrorKind::FactorizationUnstable, "roots do not pair as r, 1/conj(r)");
    roots.erase(partner);
    kept.push_back(r);
  }

  // Padded with zeros up to the spectrum's nominal order.
  CoeffVector q = CoeffVector::Zero(spectrum.m() + 1);
  q(0) = 1.0;
  int filled = 0;
  for (const Complex r : kept) {
    ++filled;
    for (int k = filled; k >= 1; --k) q(k) = q(k - 1) - r * q(k);
    q(0) = -r * q(0);
  }
  return NntsParams::canonicalize(q);
}

SumResult sum_params_exact(std::span<const NntsParams> summands) {
  require_two(summands);
  const Spectrum product = product_of(summands);
  NntsParams params = spectrum_to_params(product);
  const double gap = discrepancy(params, product);
  const int m_sum = min_order(summands);
  return {std::move(params), m_sum, SumMethod::SpectralFactorization, gap, gap};
}

SumResult sum_params(std::span<const NntsParams> summands) {
  try {
    return sum_params_closed_form(summands);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoRealSolution) throw;
  }
  return sum_params_solver(summands);
}

}  // namespace nnts
