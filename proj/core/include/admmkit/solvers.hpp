#pragma once

#include <cmath>
#include <memory>
#include <mutex>
#include <utility>

#include "admmkit/fft.hpp"
#include "admmkit/linear_map.hpp"

namespace admmkit {

enum class RegressionBranch { Auto, Gram, Woodbury };

/// Quadratic-block solver for least-squares fitting terms: computes
/// u = (D^T D + tau I)^{-1} (tau v + lam + D^T c). Uses the Gram system when
/// the matrix is tall (n >= m) and the Woodbury identity
/// u = (I - D^T (tau I + D D^T)^{-1} D)(v + lam/tau + D^T c / tau) when it is
/// wide, so the factored system is always the smaller one.
///
/// The Cholesky factor is cached per tau; repeated solves at the same tau are
/// bit-identical. The cache is internally synchronized.
class RegressionSolver {
 public:
  RegressionSolver(Matrix<Real> D, Vector<Real> c, RegressionBranch branch = RegressionBranch::Auto);

  Vector<Real> uStep(const Vector<Real>& v, const Vector<Real>& lam, double tau) const;

  /// (D^T D + tau I)^{-1} rhs through the active branch; exposed for oracle tests.
  Vector<Real> solveShifted(const Vector<Real>& rhs, double tau) const;

  bool usesWoodbury() const { return woodbury_; }
  const Matrix<Real>& D() const { return D_; }
  const Vector<Real>& c() const { return c_; }

 private:
  std::shared_ptr<const Eigen::LLT<Matrix<Real>>> factorFor(double tau) const;

  Matrix<Real> D_;
  Vector<Real> c_;
  Vector<Real> Dtc_;
  Matrix<Real> gram_;  // D^T D (Gram branch) or D D^T (Woodbury branch)
  bool woodbury_;

  mutable std::mutex mutex_;
  mutable double cached_tau_;
  mutable std::shared_ptr<const Eigen::LLT<Matrix<Real>>> cached_;
};

/// Forward-difference gradient with periodic boundaries, 1-D or 2-D. The 2-D
/// operator maps an h x w image (row-major) to stacked [horizontal; vertical]
/// differences of length 2*h*w. Periodic wraparound makes grad^T grad
/// diagonal in the DFT basis, which solveShifted exploits.
class GradientOperator final : public LinearMap<Real> {
 public:
  static GradientOperator line(Index n);
  static GradientOperator grid(Index h, Index w);

  Index rows() const override { return grid_ ? 2 * h_ * w_ : w_; }
  Index cols() const override { return h_ * w_; }

  Vector<Real> apply(const Vector<Real>& x) const override;
  Vector<Real> applyAdjoint(const Vector<Real>& y) const override;

  /// (I + tau grad^T grad)^{-1} rhs by pointwise division in the DFT basis.
  Vector<Real> solveShifted(const Vector<Real>& rhs, double tau) const;

  /// Eigenvalues of grad^T grad per DFT frequency (flattened row-major).
  const Vector<Real>& spectralMultipliers() const { return mult_; }

  bool is2d() const { return grid_; }
  Index height() const { return h_; }
  Index width() const { return w_; }

 private:
  GradientOperator(Index h, Index w, bool grid);

  Index h_, w_;
  bool grid_;
  Vector<Real> mult_;
  std::shared_ptr<const Dft> dft_;
};

/// u-step of the denoising splitting: (I + tau grad^T grad)^{-1} (c + grad^T (tau v + lam)).
Vector<Real> fft_denoise_solve(const GradientOperator& grad, const Vector<Real>& c,
                               const Vector<Real>& v, const Vector<Real>& lam, double tau);

/// Least-squares solve min_v ||D v - y||_2 for a dense complex matrix with the
/// factorization computed once up front. Rank-deficient matrices are rejected.
class LeastSquaresSolver {
 public:
  explicit LeastSquaresSolver(Matrix<Cplx> D);

  Vector<Cplx> solve(const Vector<Cplx>& y) const;

  const Matrix<Cplx>& D() const { return D_; }

 private:
  Matrix<Cplx> D_;
  Eigen::ColPivHouseholderQR<Matrix<Cplx>> qr_;
};

/// One-shot convenience wrapper around LeastSquaresSolver.
Vector<Cplx> least_squares_solve(const Matrix<Cplx>& D, const Vector<Cplx>& y);

/// Shifted solve (tau I - 2 D^T D)^{-1} (tau v + lam) for the eigenvector
/// splitting. The matrix may be indefinite; a solve is refused when the
/// estimated condition number exceeds 1e12 (tau collides with twice an
/// eigenvalue of D^T D). LU factors are cached per tau.
class EigShiftSolver {
 public:
  explicit EigShiftSolver(const Matrix<Real>& D);

  Vector<Real> uStep(const Vector<Real>& v, const Vector<Real>& lam, double tau) const;
  Vector<Real> solveShifted(const Vector<Real>& rhs, double tau) const;

  const Matrix<Real>& twoGram() const { return two_gram_; }

 private:
  std::shared_ptr<const Eigen::PartialPivLU<Matrix<Real>>> factorFor(double tau) const;

  Matrix<Real> two_gram_;  // 2 D^T D

  mutable std::mutex mutex_;
  mutable double cached_tau_;
  mutable std::shared_ptr<const Eigen::PartialPivLU<Matrix<Real>>> cached_;
};

}  // namespace admmkit
