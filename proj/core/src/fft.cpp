#include "admmkit/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace admmkit {

namespace {
// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex& plannerMutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Dft::Impl {
  Index n = 0;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  // Buffers used at planning time; kept alive for the lifetime of the plans.
  Vector<Cplx> plan_in, plan_out;

  ~Impl() {
    std::lock_guard<std::mutex> lock(plannerMutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

namespace {

fftw_complex* asFftw(Vector<Cplx>& v) { return reinterpret_cast<fftw_complex*>(v.data()); }

std::unique_ptr<Dft::Impl> makeImpl(Index h, Index w) {
  auto impl = std::make_unique<Dft::Impl>();
  impl->n = h * w;
  impl->plan_in.setZero(impl->n);
  impl->plan_out.setZero(impl->n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard<std::mutex> lock(plannerMutex());
  if (h == 1 || w == 1) {
    impl->fwd = fftw_plan_dft_1d(static_cast<int>(impl->n), asFftw(impl->plan_in),
                                 asFftw(impl->plan_out), FFTW_FORWARD, flags);
    impl->bwd = fftw_plan_dft_1d(static_cast<int>(impl->n), asFftw(impl->plan_in),
                                 asFftw(impl->plan_out), FFTW_BACKWARD, flags);
  } else {
    impl->fwd = fftw_plan_dft_2d(static_cast<int>(h), static_cast<int>(w), asFftw(impl->plan_in),
                                 asFftw(impl->plan_out), FFTW_FORWARD, flags);
    impl->bwd = fftw_plan_dft_2d(static_cast<int>(h), static_cast<int>(w), asFftw(impl->plan_in),
                                 asFftw(impl->plan_out), FFTW_BACKWARD, flags);
  }
  if (!impl->fwd || !impl->bwd) throw SolverError("Dft: plan creation failed");
  return impl;
}

void execute(fftw_plan plan, const Vector<Cplx>& in, Vector<Cplx>& out, Index n) {
  if (in.size() != n) throw ValidationError("Dft: input size mismatch");
  out.resize(n);
  // Out-of-place c2c transforms leave the input untouched.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<Cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

Dft Dft::make1d(Index n) {
  if (n < 1) throw ValidationError("Dft: size must be positive");
  return Dft(makeImpl(1, n));
}

Dft Dft::make2d(Index h, Index w) {
  if (h < 1 || w < 1) throw ValidationError("Dft: size must be positive");
  return Dft(makeImpl(h, w));
}

Dft::Dft(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Dft::Dft(Dft&&) noexcept = default;
Dft& Dft::operator=(Dft&&) noexcept = default;
Dft::~Dft() = default;

Index Dft::size() const { return impl_->n; }

void Dft::forward(const Vector<Cplx>& in, Vector<Cplx>& out) const {
  execute(impl_->fwd, in, out, impl_->n);
}

void Dft::backward(const Vector<Cplx>& in, Vector<Cplx>& out) const {
  execute(impl_->bwd, in, out, impl_->n);
}

Vector<Cplx> Dft::forward(const Vector<Cplx>& in) const {
  Vector<Cplx> out;
  forward(in, out);
  return out;
}

Vector<Cplx> Dft::backward(const Vector<Cplx>& in) const {
  Vector<Cplx> out;
  backward(in, out);
  return out;
}

}  // namespace admmkit
