#include "admmkit/solvers.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace admmkit {

// ---------------------------------------------------------------------------
// RegressionSolver

RegressionSolver::RegressionSolver(Matrix<Real> D, Vector<Real> c, RegressionBranch branch)
    : D_(std::move(D)), c_(std::move(c)), cached_tau_(std::numeric_limits<double>::quiet_NaN()) {
  if (D_.rows() != c_.size()) throw ValidationError("RegressionSolver: D rows must match c");
  Dtc_ = D_.transpose() * c_;
  switch (branch) {
    case RegressionBranch::Gram: woodbury_ = false; break;
    case RegressionBranch::Woodbury: woodbury_ = true; break;
    case RegressionBranch::Auto: woodbury_ = D_.rows() < D_.cols(); break;
  }
  if (woodbury_) {
    gram_ = D_ * D_.transpose();
  } else {
    gram_ = D_.transpose() * D_;
  }
}

std::shared_ptr<const Eigen::LLT<Matrix<Real>>> RegressionSolver::factorFor(double tau) const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (cached_ && tau == cached_tau_) return cached_;
  Matrix<Real> shifted = gram_;
  shifted.diagonal().array() += tau;
  auto llt = std::make_shared<Eigen::LLT<Matrix<Real>>>(shifted);
  if (llt->info() != Eigen::Success) throw SolverError("RegressionSolver: factorization failed");
  cached_tau_ = tau;
  cached_ = llt;
  return llt;
}

Vector<Real> RegressionSolver::solveShifted(const Vector<Real>& rhs, double tau) const {
  if (tau <= 0.0) throw ValidationError("RegressionSolver: tau must be positive");
  if (rhs.size() != D_.cols()) throw ValidationError("RegressionSolver: rhs size mismatch");
  auto llt = factorFor(tau);
  if (!woodbury_) return llt->solve(rhs);
  // (D^T D + tau I)^{-1} rhs = (rhs - D^T (tau I + D D^T)^{-1} D rhs) / tau
  Vector<Real> w = rhs / tau;
  return w - D_.transpose() * llt->solve(D_ * w);
}

Vector<Real> RegressionSolver::uStep(const Vector<Real>& v, const Vector<Real>& lam, double tau) const {
  if (tau <= 0.0) throw ValidationError("RegressionSolver: tau must be positive");
  auto llt = factorFor(tau);
  if (!woodbury_) return llt->solve((tau * v + lam + Dtc_).eval());
  Vector<Real> w = v + lam / tau + Dtc_ / tau;
  return w - D_.transpose() * llt->solve(D_ * w);
}

// ---------------------------------------------------------------------------
// GradientOperator

GradientOperator::GradientOperator(Index h, Index w, bool grid) : h_(h), w_(w), grid_(grid) {
  const Index n = h_ * w_;
  mult_.resize(n);
  if (grid_) {
    for (Index r = 0; r < h_; ++r) {
      const double sr = 2.0 * std::sin(std::numbers::pi * static_cast<double>(r) / static_cast<double>(h_));
      for (Index c = 0; c < w_; ++c) {
        const double sc = 2.0 * std::sin(std::numbers::pi * static_cast<double>(c) / static_cast<double>(w_));
        mult_[r * w_ + c] = sr * sr + sc * sc;
      }
    }
    dft_ = std::make_shared<const Dft>(Dft::make2d(h_, w_));
  } else {
    for (Index i = 0; i < n; ++i) {
      const double s = 2.0 * std::sin(std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
      mult_[i] = s * s;
    }
    dft_ = std::make_shared<const Dft>(Dft::make1d(n));
  }
}

GradientOperator GradientOperator::line(Index n) {
  if (n < 2) throw ValidationError("GradientOperator: need at least two samples");
  return GradientOperator(1, n, false);
}

GradientOperator GradientOperator::grid(Index h, Index w) {
  if (h < 2 || w < 2) throw ValidationError("GradientOperator: need at least a 2x2 grid");
  return GradientOperator(h, w, true);
}

Vector<Real> GradientOperator::apply(const Vector<Real>& x) const {
  checkInput(x);
  const Index n = h_ * w_;
  if (!grid_) {
    Vector<Real> y(n);
    for (Index i = 0; i < n; ++i) y[i] = x[(i + 1) % n] - x[i];
    return y;
  }
  Vector<Real> y(2 * n);
  for (Index r = 0; r < h_; ++r) {
    for (Index c = 0; c < w_; ++c) {
      const Index i = r * w_ + c;
      y[i] = x[r * w_ + (c + 1) % w_] - x[i];           // horizontal
      y[n + i] = x[((r + 1) % h_) * w_ + c] - x[i];     // vertical
    }
  }
  return y;
}

Vector<Real> GradientOperator::applyAdjoint(const Vector<Real>& y) const {
  checkAdjointInput(y);
  const Index n = h_ * w_;
  Vector<Real> x = Vector<Real>::Zero(n);
  if (!grid_) {
    for (Index i = 0; i < n; ++i) {
      x[(i + 1) % n] += y[i];
      x[i] -= y[i];
    }
    return x;
  }
  for (Index r = 0; r < h_; ++r) {
    for (Index c = 0; c < w_; ++c) {
      const Index i = r * w_ + c;
      x[r * w_ + (c + 1) % w_] += y[i];
      x[i] -= y[i];
      x[((r + 1) % h_) * w_ + c] += y[n + i];
      x[i] -= y[n + i];
    }
  }
  return x;
}

Vector<Real> GradientOperator::solveShifted(const Vector<Real>& rhs, double tau) const {
  if (rhs.size() != cols()) throw ValidationError("GradientOperator: rhs size mismatch");
  Vector<Cplx> spectrum = dft_->forward(rhs.cast<Cplx>());
  const Index n = spectrum.size();
  for (Index i = 0; i < n; ++i) spectrum[i] /= 1.0 + tau * mult_[i];
  Vector<Cplx> back = dft_->backward(spectrum);
  // The unnormalized round trip scales by n; the result of the real system is
  // real up to roundoff, so the imaginary residue is dropped.
  return back.real() / static_cast<double>(n);
}

Vector<Real> fft_denoise_solve(const GradientOperator& grad, const Vector<Real>& c,
                               const Vector<Real>& v, const Vector<Real>& lam, double tau) {
  if (tau < 0.0) throw ValidationError("fft_denoise_solve: tau must be nonnegative");
  if (v.size() != grad.rows() || lam.size() != grad.rows())
    throw ValidationError("fft_denoise_solve: v/lam size mismatch");
  const Vector<Real> rhs = c + grad.applyAdjoint(tau * v + lam);
  return grad.solveShifted(rhs, tau);
}

// ---------------------------------------------------------------------------
// LeastSquaresSolver

LeastSquaresSolver::LeastSquaresSolver(Matrix<Cplx> D) : D_(std::move(D)), qr_(D_) {
  if (qr_.rank() < D_.cols()) throw SolverError("LeastSquaresSolver: rank-deficient matrix");
}

Vector<Cplx> LeastSquaresSolver::solve(const Vector<Cplx>& y) const {
  if (y.size() != D_.rows()) throw ValidationError("LeastSquaresSolver: rhs size mismatch");
  return qr_.solve(y);
}

Vector<Cplx> least_squares_solve(const Matrix<Cplx>& D, const Vector<Cplx>& y) {
  return LeastSquaresSolver(D).solve(y);
}

// ---------------------------------------------------------------------------
// EigShiftSolver

EigShiftSolver::EigShiftSolver(const Matrix<Real>& D)
    : two_gram_(2.0 * (D.transpose() * D)), cached_tau_(std::numeric_limits<double>::quiet_NaN()) {}

std::shared_ptr<const Eigen::PartialPivLU<Matrix<Real>>> EigShiftSolver::factorFor(double tau) const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (cached_ && tau == cached_tau_) return cached_;
  Matrix<Real> shifted = -two_gram_;
  shifted.diagonal().array() += tau;
  auto lu = std::make_shared<Eigen::PartialPivLU<Matrix<Real>>>(shifted);
  if (!(lu->rcond() > 1e-12))
    throw SolverError("EigShiftSolver: shift is numerically singular (tau near twice an eigenvalue)");
  cached_tau_ = tau;
  cached_ = lu;
  return lu;
}

Vector<Real> EigShiftSolver::solveShifted(const Vector<Real>& rhs, double tau) const {
  if (rhs.size() != two_gram_.rows()) throw ValidationError("EigShiftSolver: rhs size mismatch");
  return factorFor(tau)->solve(rhs);
}

Vector<Real> EigShiftSolver::uStep(const Vector<Real>& v, const Vector<Real>& lam, double tau) const {
  return solveShifted((tau * v + lam).eval(), tau);
}

}  // namespace admmkit
