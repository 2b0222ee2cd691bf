#pragma once

#include <memory>

#include "admmkit/linear_map.hpp"

namespace admmkit {

/// Complex-to-complex DFT of a fixed size (1-D length n, or 2-D h x w stored
/// row-major). Transforms are unnormalized: backward(forward(x)) == size()*x.
/// Instances are immutable after construction and safe to share across
/// threads; plan creation is serialized internally.
class Dft {
 public:
  static Dft make1d(Index n);
  static Dft make2d(Index h, Index w);

  Dft(Dft&&) noexcept;
  Dft& operator=(Dft&&) noexcept;
  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;
  ~Dft();

  Index size() const;

  void forward(const Vector<Cplx>& in, Vector<Cplx>& out) const;
  void backward(const Vector<Cplx>& in, Vector<Cplx>& out) const;

  Vector<Cplx> forward(const Vector<Cplx>& in) const;
  Vector<Cplx> backward(const Vector<Cplx>& in) const;

 private:
  struct Impl;
  explicit Dft(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

}  // namespace admmkit
