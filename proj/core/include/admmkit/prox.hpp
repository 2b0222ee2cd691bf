#pragma once

#include <cmath>

#include "admmkit/linear_map.hpp"

namespace admmkit {

/// Proximal operator of t*||.||_0. Keeps an entry only when |z_i| is strictly
/// above sqrt(2t); ties at the threshold are zeroed.
inline Vector<Real> hard_threshold(const Vector<Real>& z, double t) {
  if (t < 0.0) throw ValidationError("hard_threshold: weight must be nonnegative");
  const double thr = std::sqrt(2.0 * t);
  Vector<Real> out = z;
  for (Index i = 0; i < out.size(); ++i) {
    if (!(std::abs(out[i]) > thr)) out[i] = 0.0;
  }
  return out;
}

/// Minimizer of 0.5*(|x|-c)^2 + (t/2)*|x-z|^2, elementwise over complex x.
/// Averages the magnitude of z toward c and keeps the phase of z; the phase of
/// a zero entry is taken to be 1 so results are reproducible.
inline Vector<Cplx> abs_project(const Vector<Cplx>& z, const Vector<Real>& c, double t) {
  if (z.size() != c.size()) throw ValidationError("abs_project: size mismatch");
  if (t <= 0.0) throw ValidationError("abs_project: weight must be positive");
  Vector<Cplx> out(z.size());
  const double inv = 1.0 / (1.0 + t);
  for (Index i = 0; i < z.size(); ++i) {
    const double mag = std::abs(z[i]);
    const double target = (t * mag + c[i]) * inv;
    const Cplx phase = mag == 0.0 ? Cplx(1.0, 0.0) : z[i] / mag;
    out[i] = target * phase;
  }
  return out;
}

/// Projection onto the unit sphere. Undefined at the origin; throws so the
/// caller can decide on a fallback.
inline Vector<Real> sphere_project(const Vector<Real>& z) {
  const double n = z.norm();
  if (n == 0.0) throw SolverError("sphere_project: zero vector");
  return z / n;
}

/// Number of entries with |z_i| > atol.
inline Index l0_norm(const Vector<Real>& z, double atol = 0.0) {
  Index count = 0;
  for (Index i = 0; i < z.size(); ++i) {
    if (std::abs(z[i]) > atol) ++count;
  }
  return count;
}

}  // namespace admmkit
