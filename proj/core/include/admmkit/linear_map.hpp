#pragma once

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <utility>

#include "admmkit/errors.hpp"

namespace admmkit {

using Real = double;
using Cplx = std::complex<double>;
using Index = Eigen::Index;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Abstract linear operator y = M x with an adjoint. For complex scalars the
/// adjoint is the conjugate transpose, so <apply(x), y> == <x, applyAdjoint(y)>
/// under the conjugate inner product.
template <class Scalar>
class LinearMap {
 public:
  virtual ~LinearMap() = default;

  virtual Index rows() const = 0;  // output dimension
  virtual Index cols() const = 0;  // input dimension

  virtual Vector<Scalar> apply(const Vector<Scalar>& x) const = 0;
  virtual Vector<Scalar> applyAdjoint(const Vector<Scalar>& y) const = 0;

 protected:
  void checkInput(const Vector<Scalar>& x) const {
    if (x.size() != cols()) throw ValidationError("LinearMap: input dimension mismatch");
  }
  void checkAdjointInput(const Vector<Scalar>& y) const {
    if (y.size() != rows()) throw ValidationError("LinearMap: adjoint input dimension mismatch");
  }
};

/// scale * I on an n-dimensional space. Covers both I and -I constraint blocks.
template <class Scalar>
class IdentityMap final : public LinearMap<Scalar> {
 public:
  explicit IdentityMap(Index n, Scalar scale = Scalar(1)) : n_(n), scale_(scale) {}

  Index rows() const override { return n_; }
  Index cols() const override { return n_; }

  Vector<Scalar> apply(const Vector<Scalar>& x) const override {
    this->checkInput(x);
    return scale_ * x;
  }
  Vector<Scalar> applyAdjoint(const Vector<Scalar>& y) const override {
    this->checkAdjointInput(y);
    return Eigen::numext::conj(scale_) * y;
  }

 private:
  Index n_;
  Scalar scale_;
};

/// Explicit dense matrix.
template <class Scalar>
class DenseMap final : public LinearMap<Scalar> {
 public:
  explicit DenseMap(Matrix<Scalar> m) : m_(std::move(m)) {}

  Index rows() const override { return m_.rows(); }
  Index cols() const override { return m_.cols(); }

  Vector<Scalar> apply(const Vector<Scalar>& x) const override {
    this->checkInput(x);
    return m_ * x;
  }
  Vector<Scalar> applyAdjoint(const Vector<Scalar>& y) const override {
    this->checkAdjointInput(y);
    return m_.adjoint() * y;
  }

  const Matrix<Scalar>& matrix() const { return m_; }

 private:
  Matrix<Scalar> m_;
};

/// scale * M for an owned inner operator (used for the -D constraint block).
template <class Scalar>
class ScaledMap final : public LinearMap<Scalar> {
 public:
  ScaledMap(std::shared_ptr<const LinearMap<Scalar>> inner, Scalar scale)
      : inner_(std::move(inner)), scale_(scale) {}

  Index rows() const override { return inner_->rows(); }
  Index cols() const override { return inner_->cols(); }

  Vector<Scalar> apply(const Vector<Scalar>& x) const override {
    return scale_ * inner_->apply(x);
  }
  Vector<Scalar> applyAdjoint(const Vector<Scalar>& y) const override {
    return Eigen::numext::conj(scale_) * inner_->applyAdjoint(y);
  }

 private:
  std::shared_ptr<const LinearMap<Scalar>> inner_;
  Scalar scale_;
};

}  // namespace admmkit
