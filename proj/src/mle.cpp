#include "nnts/mle.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace nnts {

namespace {

constexpr double kDensityFloor = 1e-300;
constexpr double kRoundingSlack = 1e-12;
const double kLogTwoPi = std::log(kTwoPi);

CoeffVector to_complex(const Eigen::VectorXd& x) {
  const Eigen::Index d = x.size() / 2;
  CoeffVector c(d);
  c.real() = x.head(d);
  c.imag() = x.tail(d);
  return c;
}

// Log-likelihood on the real unit sphere in R^{2(m+1)}, with derivatives.
class Objective {
 public:
  Objective(const AngleSample& sample, int m)
      : design_(fourier_design(sample, m)), n_(static_cast<double>(sample.size())) {}

  double value(const Eigen::VectorXd& x) const {
    const Eigen::VectorXcd s = design_ * to_complex(x);
    double total = 0.0;
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      const double f = std::norm(s(j));
      if (!(f > kDensityFloor)) return -std::numeric_limits<double>::infinity();
      total += std::log(f);
    }
    return total - n_ * kLogTwoPi;
  }

  // Euclidean gradient and Hessian of ln prod |e_j^T c|^2 in x.
  void derivatives(const Eigen::VectorXd& x, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
    const Eigen::Index d = x.size() / 2;
    const Eigen::VectorXcd s = design_ * to_complex(x);
    const Eigen::MatrixXcd w = design_.array().colwise() / s.array();
    const Eigen::RowVectorXcd w_sum = w.colwise().sum();
    const Eigen::MatrixXcd a = w.transpose() * w;

    grad.resize(2 * d);
    grad.head(d) = 2.0 * w_sum.real().transpose();
    grad.tail(d) = -2.0 * w_sum.imag().transpose();
    hess.resize(2 * d, 2 * d);
    hess.topLeftCorner(d, d) = -2.0 * a.real();
    hess.topRightCorner(d, d) = 2.0 * a.imag();
    hess.bottomLeftCorner(d, d) = 2.0 * a.imag();
    hess.bottomRightCorner(d, d) = 2.0 * a.real();
  }

  // Norm of the gradient projected onto the tangent basis at x.
  double tangent_grad_norm(const Eigen::VectorXd& x, const Eigen::MatrixXd& basis) const {
    const Eigen::Index d = x.size() / 2;
    const Eigen::VectorXcd s = design_ * to_complex(x);
    const Eigen::RowVectorXcd w_sum = (design_.array().colwise() / s.array()).colwise().sum();
    Eigen::VectorXd grad(2 * d);
    grad.head(d) = 2.0 * w_sum.real().transpose();
    grad.tail(d) = -2.0 * w_sum.imag().transpose();
    return 0.5 * (basis.transpose() * grad).norm();
  }

  double n() const { return n_; }

 private:
  Eigen::MatrixXcd design_;
  double n_;
};

// Orthonormal basis of the tangent directions at x that are also orthogonal
// to the global phase rotation i*c (along which the likelihood is flat).
Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& x) {
  const Eigen::Index dim = x.size();
  const Eigen::Index d = dim / 2;
  Eigen::MatrixXd span(dim, 2);
  span.col(0) = x;
  span.col(1) << -x.tail(d), x.head(d);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(span);
  const Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(dim - 2);
}

struct StartOutcome {
  Eigen::VectorXd x;
  double log_lik = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  double grad_norm = std::numeric_limits<double>::infinity();
};

// Ascent from one start. Each step moves along the tangent space and is
// retracted onto the sphere by normalization; a step is accepted only if the
// log-likelihood does not decrease. The Riemannian Newton direction is tried
// first, then the tangent gradient scaled by 1/(2n).
StartOutcome ascend(const Objective& obj, Eigen::VectorXd x, const FitOptions& opts, int start) {
  StartOutcome out;
  x.normalize();
  double f = obj.value(x);
  if (!std::isfinite(f)) return out;

  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  int iter = 0;
  double gnorm = std::numeric_limits<double>::infinity();
  for (;;) {
    obj.derivatives(x, grad, hess);
    const Eigen::MatrixXd basis = tangent_basis(x);
    const Eigen::VectorXd g_t = basis.transpose() * grad;
    // Real gradient is twice the conjugate-coordinate one.
    gnorm = 0.5 * g_t.norm();
    if (gnorm < opts.tol) {
      out.converged = true;
      break;
    }
    if (iter >= opts.max_iter) break;

    const double radial = x.dot(grad);  // = 2n on the sphere
    const Eigen::MatrixXd h_t =
        basis.transpose() * hess * basis - radial * Eigen::MatrixXd::Identity(g_t.size(), g_t.size());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h_t);

    // Modified Newton: curvature magnitudes floored so that flat or convex
    // directions still yield an ascent direction.
    std::optional<Eigen::VectorXd> newton;
    if (eig.info() == Eigen::Success) {
      const double floor = 1e-8 * radial;
      const Eigen::VectorXd curvature = eig.eigenvalues().cwiseAbs().cwiseMax(floor);
      const Eigen::VectorXd coords =
          eig.eigenvectors() * (eig.eigenvectors().transpose() * g_t).cwiseQuotient(curvature);
      newton = basis * coords;
    }
    const Eigen::VectorXd ascent = basis * g_t / radial;

    bool accepted = false;
    const std::array<const Eigen::VectorXd*, 2> directions{newton ? &*newton : nullptr, &ascent};
    for (const Eigen::VectorXd* dir : directions) {
      if (dir == nullptr) continue;
      Eigen::VectorXd step = *dir;
      if (step.norm() > 1.0) step.normalize();
      for (int halving = 0; halving < 40; ++halving) {
        const Eigen::VectorXd trial = (x + step).normalized();
        const double ft = obj.value(trial);
        if (ft >= f) {
          x = trial;
          f = ft;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (accepted) break;
    }
    // Close to the optimum the gain of a full Newton step is below the
    // rounding of the log-likelihood; take it if the gradient shrinks.
    if (!accepted && newton) {
      const Eigen::VectorXd trial = (x + *newton).normalized();
      const double ft = obj.value(trial);
      if (ft >= f - kRoundingSlack * std::max(1.0, std::abs(f)) &&
          obj.tangent_grad_norm(trial, tangent_basis(trial)) < gnorm) {
        x = trial;
        f = ft;
        accepted = true;
      }
    }
    if (!accepted) break;  // no ascent possible at working precision
    ++iter;
    if (opts.on_iteration) opts.on_iteration(start, iter, f);
  }

  out.x = std::move(x);
  out.log_lik = f;
  out.iterations = iter;
  out.grad_norm = gnorm;
  return out;
}

Eigen::VectorXd random_start(int m, std::uint64_t seed, int start) {
  Rng rng(seed, static_cast<std::uint64_t>(start));
  Eigen::VectorXd x(2 * (m + 1));
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.normal();
  return x;
}

}  // namespace

Eigen::MatrixXcd fourier_design(const AngleSample& sample, int m) {
  const auto n = static_cast<Eigen::Index>(sample.size());
  Eigen::MatrixXcd e(n, m + 1);
  for (Eigen::Index j = 0; j < n; ++j)
    for (int k = 0; k <= m; ++k) e(j, k) = std::polar(1.0, k * sample[static_cast<std::size_t>(j)]);
  return e;
}

double log_likelihood(const CoeffVector& c, const AngleSample& sample) {
  if (sample.empty()) throw Error(ErrorKind::InvalidArgument, "empty sample");
  double total = 0.0;
  for (double theta : sample) {
    const double f = trig_sum_density(c, theta);
    if (!(f > kDensityFloor)) return -std::numeric_limits<double>::infinity();
    total += std::log(f);
  }
  return total;
}

double log_likelihood(const NntsParams& params, const AngleSample& sample) {
  return log_likelihood(params.coeffs(), sample);
}

CoeffVector likelihood_gradient(const CoeffVector& c, const AngleSample& sample) {
  if (sample.empty()) throw Error(ErrorKind::InvalidArgument, "empty sample");
  const Eigen::MatrixXcd e = fourier_design(sample, static_cast<int>(c.size()) - 1);
  const Eigen::VectorXcd s = e * c;
  return (e.conjugate().array().colwise() / s.conjugate().array()).colwise().sum().transpose();
}

CoeffVector tangent_gradient(const NntsParams& params, const AngleSample& sample) {
  const CoeffVector& c = params.coeffs();
  const CoeffVector g = likelihood_gradient(c, sample);
  return g - c * (c.adjoint() * g)(0);
}

FitResult fit(const AngleSample& sample, int m, const FitOptions& opts) {
  if (sample.size() < 2) throw Error(ErrorKind::InsufficientData, "fit needs at least two angles");
  if (m < 0) throw Error(ErrorKind::InvalidArgument, "order m must be nonnegative");
  const double n = static_cast<double>(sample.size());
  if (m == 0) return {NntsParams::uniform(0), -n * kLogTwoPi, 0, true, 0.0, 0};

  const Objective obj(sample, m);
  std::optional<StartOutcome> best;
  const int starts = 1 + std::max(0, opts.restarts);
  for (int start = 0; start < starts; ++start) {
    Eigen::VectorXd x0;
    if (start == 0) {
      x0 = Eigen::VectorXd::Zero(2 * (m + 1));
      x0(0) = 1.0;
    } else {
      x0 = random_start(m, opts.seed, start);
    }
    StartOutcome run = ascend(obj, std::move(x0), opts, start);
    if (!std::isfinite(run.log_lik)) continue;
    // Among numerically tied optima keep the earliest start, unless a later
    // one got closer to stationarity.
    const double tie = 1e-10 * std::max(1.0, std::abs(run.log_lik));
    if (!best || run.log_lik > best->log_lik + tie ||
        (run.log_lik >= best->log_lik - tie && !best->converged && run.grad_norm < best->grad_norm))
      best = std::move(run);
  }
  if (!best) throw Error(ErrorKind::FitFailure, "every start diverged");

  return {NntsParams::canonicalize(to_complex(best->x)), best->log_lik, best->iterations, best->converged,
          best->grad_norm, starts - 1};
}

ObservedInformation observed_information(const FitResult& fit, std::size_t n) {
  const CoeffVector& c = fit.params.coeffs();
  const auto d = c.size();
  return {static_cast<double>(n) * (Eigen::MatrixXcd::Identity(d, d) - c * c.adjoint())};
}

}  // namespace nnts
