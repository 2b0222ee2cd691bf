#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "admmkit/linear_map.hpp"
#include "admmkit/policies.hpp"

namespace admmkit {

/// Which constraint block is minimized first within an iteration. SmoothFirst
/// is the conventional order (the u block, carrying the smooth fitting term,
/// goes first); NonsmoothFirst swaps the two block solves.
enum class UpdateOrder { SmoothFirst, NonsmoothFirst };

enum class SolveStatus { Converged, MaxIter, Diverged, SolverError };

inline std::string to_string(UpdateOrder order) {
  return order == UpdateOrder::SmoothFirst ? "smooth_first" : "nonsmooth_first";
}

inline UpdateOrder order_from_string(const std::string& name) {
  if (name == "smooth_first") return UpdateOrder::SmoothFirst;
  if (name == "nonsmooth_first") return UpdateOrder::NonsmoothFirst;
  throw ValidationError("unknown update order: " + name);
}

inline std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIter: return "max_iter";
    case SolveStatus::Diverged: return "diverged";
    case SolveStatus::SolverError: return "solver_error";
  }
  return "unknown";
}

/// The linear coupling A u + B v = b.
template <class Scalar>
struct ConstraintSystem {
  std::shared_ptr<const LinearMap<Scalar>> A;
  std::shared_ptr<const LinearMap<Scalar>> B;
  Vector<Scalar> b;

  void validate() const {
    if (!A || !B) throw ValidationError("ConstraintSystem: missing operator");
    if (A->rows() != B->rows() || A->rows() != b.size())
      throw ValidationError("ConstraintSystem: inconsistent dimensions");
  }
};

/// A problem in splitting form: two sub-problem oracles, the objective used
/// for reporting, and the starting point. Instances are immutable once built
/// and may be shared by concurrent solves as long as their oracles are
/// internally synchronized (the bundled builders are).
template <class Scalar>
struct ProblemInstance {
  ConstraintSystem<Scalar> constraint;
  // Minimizer of H(u) - <lam, Au> + (tau/2) ||b - Au - Bv||^2 over u.
  std::function<Vector<Scalar>(const Vector<Scalar>& v, const Vector<Scalar>& lam, double tau)> solve_u;
  // Minimizer of G(v) - <lam, Bv> + (tau/2) ||b - Au - Bv||^2 over v.
  std::function<Vector<Scalar>(const Vector<Scalar>& u, const Vector<Scalar>& lam, double tau)> solve_v;
  std::function<double(const Vector<Scalar>& u, const Vector<Scalar>& v)> objective;
  Vector<Scalar> u0, v0, lam0;
  std::string name;

  void validate() const {
    constraint.validate();
    if (!solve_u || !solve_v || !objective) throw ValidationError("ProblemInstance: missing oracle");
    if (u0.size() != constraint.A->cols() || v0.size() != constraint.B->cols() ||
        lam0.size() != constraint.b.size())
      throw ValidationError("ProblemInstance: initial iterate dimension mismatch");
  }
};

template <class Scalar>
struct SolverState {
  Vector<Scalar> u, v, lam;
  // Iterates one step back; the dual residual attaches to whichever block is
  // updated first, so both lags are kept.
  Vector<Scalar> u_prev, v_prev;
  double tau = 1.0;
  int k = 0;

  // Extrapolation state, used only in the accelerated mode.
  Vector<Scalar> u_hat, v_hat, lam_hat;
  double alpha = 1.0;
  double accel_c = std::numeric_limits<double>::infinity();   // last accepted combined residual
  double accel_c_cur = std::numeric_limits<double>::quiet_NaN();  // combined residual of this step
  bool restarted = false;
};

template <class Scalar>
struct Residuals {
  Vector<Scalar> r;  // primal: b - Au - Bv
  Vector<Scalar> d;  // dual: penalty-scaled lag of the first-updated block
  double r_norm = 0.0;
  double d_norm = 0.0;
  double r_rel_denom = 0.0;  // max(||Au||, ||Bv||, ||b||)
  double d_rel_denom = 0.0;  // ||A^T lam|| (or ||B^T lam|| with the order swapped)
};

struct SolveConfig {
  double eps_tol = 1e-3;
  int max_iter = 2000;
  UpdateOrder order = UpdateOrder::SmoothFirst;
  PolicyConfig policy;
  double tau0 = 1.0;
  bool record_trace = true;

  void validate() const {
    if (!(eps_tol >= 0.0)) throw ValidationError("SolveConfig: eps_tol must be nonnegative");
    if (max_iter < 1) throw ValidationError("SolveConfig: max_iter must be >= 1");
    if (!(tau0 > 0.0)) throw ValidationError("SolveConfig: tau0 must be positive");
    policy.validate();
  }
};

struct TracePoint {
  int k = 0;
  double r_norm = 0.0;
  double d_norm = 0.0;
  double tau = 0.0;
  double objective = 0.0;
  // Combined residual of the accelerated mode; NaN otherwise.
  double accel_c = std::numeric_limits<double>::quiet_NaN();
};

template <class Scalar>
struct SolveReport {
  SolveStatus status = SolveStatus::MaxIter;
  int iterations = 0;
  double final_objective = 0.0;
  std::vector<TracePoint> trace;
  Vector<Scalar> final_u, final_v;
  std::string message;  // non-empty only for solver_error
};

template <class Scalar>
struct PolicyContext {
  const SolverState<Scalar>& before;
  const SolverState<Scalar>& after;
  const Residuals<Scalar>& res;
  const ConstraintSystem<Scalar>& cs;
};

template <class Scalar>
struct IterationEvent {
  const SolverState<Scalar>& before;
  const SolverState<Scalar>& after;
  const Residuals<Scalar>& res;
  double objective = 0.0;
};

template <class Scalar>
using IterationObserver = std::function<void(const IterationEvent<Scalar>&)>;

/// Iterate norms above this are treated as divergence.
inline constexpr double kDivergenceGuard = 1e12;

/// One plain iteration: both block solves in the configured order, then the
/// dual ascent step lam += tau * (b - Au - Bv).
template <class Scalar>
SolverState<Scalar> step(const SolverState<Scalar>& s, const ProblemInstance<Scalar>& prob,
                         const SolveConfig& cfg) {
  SolverState<Scalar> next = s;
  next.u_prev = s.u;
  next.v_prev = s.v;
  if (cfg.order == UpdateOrder::SmoothFirst) {
    next.u = prob.solve_u(s.v, s.lam, s.tau);
    next.v = prob.solve_v(next.u, s.lam, s.tau);
  } else {
    next.v = prob.solve_v(s.u, s.lam, s.tau);
    next.u = prob.solve_u(next.v, s.lam, s.tau);
  }
  if (next.u.size() != prob.constraint.A->cols() || next.v.size() != prob.constraint.B->cols())
    throw SolverError("step: oracle returned wrong dimension");
  next.lam =
      s.lam + Scalar(s.tau) * (prob.constraint.b - prob.constraint.A->apply(next.u) -
                               prob.constraint.B->apply(next.v));
  next.k = s.k + 1;
  return next;
}

/// One iteration with Nesterov extrapolation of the lagged block and the dual,
/// restarting (momentum back to 1, extrapolation discarded) whenever the
/// combined residual fails to shrink by the restart factor.
template <class Scalar>
SolverState<Scalar> accelerated_step(const SolverState<Scalar>& s, const ProblemInstance<Scalar>& prob,
                                     const SolveConfig& cfg) {
  const auto& cs = prob.constraint;
  const bool smooth_first = cfg.order == UpdateOrder::SmoothFirst;
  SolverState<Scalar> next = s;
  // The residual lag anchors are the extrapolated points the step consumed.
  next.u_prev = smooth_first ? s.u : s.u_hat;
  next.v_prev = smooth_first ? s.v_hat : s.v;
  if (smooth_first) {
    next.u = prob.solve_u(s.v_hat, s.lam_hat, s.tau);
    next.v = prob.solve_v(next.u, s.lam_hat, s.tau);
  } else {
    next.v = prob.solve_v(s.u_hat, s.lam_hat, s.tau);
    next.u = prob.solve_u(next.v, s.lam_hat, s.tau);
  }
  if (next.u.size() != cs.A->cols() || next.v.size() != cs.B->cols())
    throw SolverError("accelerated_step: oracle returned wrong dimension");
  next.lam = s.lam_hat + Scalar(s.tau) * (cs.b - cs.A->apply(next.u) - cs.B->apply(next.v));
  next.k = s.k + 1;

  const double lag_term = smooth_first ? cs.B->apply(next.v - s.v_hat).squaredNorm()
                                       : cs.A->apply(next.u - s.u_hat).squaredNorm();
  const double c = (next.lam - s.lam_hat).squaredNorm() / s.tau + s.tau * lag_term;
  next.accel_c_cur = c;
  if (c < cfg.policy.accel.eta * s.accel_c) {
    const double alpha_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * s.alpha * s.alpha));
    const double weight = (s.alpha - 1.0) / alpha_next;
    if (smooth_first) {
      next.v_hat = next.v + Scalar(weight) * (next.v - s.v);
      next.u_hat = next.u;
    } else {
      next.u_hat = next.u + Scalar(weight) * (next.u - s.u);
      next.v_hat = next.v;
    }
    next.lam_hat = next.lam + Scalar(weight) * (next.lam - s.lam);
    next.alpha = alpha_next;
    next.accel_c = c;
    next.restarted = false;
  } else {
    // Restart: the next step runs plain from the last un-extrapolated iterate.
    next.alpha = 1.0;
    next.u_hat = s.u;
    next.v_hat = s.v;
    next.lam_hat = s.lam;
    next.accel_c = s.accel_c / cfg.policy.accel.eta;
    next.restarted = true;
  }
  return next;
}

/// Primal and dual residuals of the iterate `after`, with the relative
/// denominators of the stopping rule. The dual residual lags the block that
/// was updated first (v under SmoothFirst, u otherwise) and is scaled by the
/// penalty that produced the step.
template <class Scalar>
Residuals<Scalar> residuals(const SolverState<Scalar>& before, const SolverState<Scalar>& after,
                            const ConstraintSystem<Scalar>& cs,
                            UpdateOrder order = UpdateOrder::SmoothFirst) {
  Residuals<Scalar> res;
  const Vector<Scalar> Au = cs.A->apply(after.u);
  const Vector<Scalar> Bv = cs.B->apply(after.v);
  res.r = cs.b - Au - Bv;
  const double tau = before.tau;
  if (order == UpdateOrder::SmoothFirst) {
    res.d = Scalar(tau) * cs.A->applyAdjoint(cs.B->apply(after.v - after.v_prev));
    res.d_rel_denom = cs.A->applyAdjoint(after.lam).norm();
  } else {
    res.d = Scalar(tau) * cs.B->applyAdjoint(cs.A->apply(after.u - after.u_prev));
    res.d_rel_denom = cs.B->applyAdjoint(after.lam).norm();
  }
  res.r_norm = res.r.norm();
  res.d_norm = res.d.norm();
  res.r_rel_denom = std::max({Au.norm(), Bv.norm(), cs.b.norm()});
  return res;
}

/// Relative stopping rule; both inequalities are inclusive, so with
/// eps_tol == 0 only exactly-zero residuals stop the iteration.
template <class Scalar>
bool check_stop(const Residuals<Scalar>& res, double eps_tol) {
  return res.r_norm <= eps_tol * res.r_rel_denom && res.d_norm <= eps_tol * res.d_rel_denom;
}

namespace detail {

template <class Scalar>
bool finite_iterates(const SolverState<Scalar>& s) {
  return s.u.allFinite() && s.v.allFinite() && s.lam.allFinite();
}

template <class Scalar>
double iterate_scale(const SolverState<Scalar>& s) {
  return std::max({s.u.template lpNorm<Eigen::Infinity>(), s.v.template lpNorm<Eigen::Infinity>(),
                   s.lam.template lpNorm<Eigen::Infinity>()});
}

}  // namespace detail

/// Runs the splitting iteration until the stopping rule, the iteration cap, a
/// divergence guard, or an oracle failure ends it. Deterministic for a fixed
/// instance and config.
template <class Scalar>
SolveReport<Scalar> solve(const ProblemInstance<Scalar>& prob, const SolveConfig& cfg,
                          const IterationObserver<Scalar>& observer = {}) {
  cfg.validate();
  prob.validate();
  auto policy = make_policy<Scalar>(cfg.policy);
  const bool accel = cfg.policy.kind == PolicyKind::AcceleratedRestart;

  SolverState<Scalar> s;
  s.u = prob.u0;
  s.v = prob.v0;
  s.lam = prob.lam0;
  s.u_prev = prob.u0;
  s.v_prev = prob.v0;
  s.tau = cfg.tau0;
  if (accel) {
    s.u_hat = s.u;
    s.v_hat = s.v;
    s.lam_hat = s.lam;
  }

  SolveReport<Scalar> rep;
  rep.status = SolveStatus::MaxIter;
  if (cfg.record_trace) rep.trace.reserve(static_cast<size_t>(std::min(cfg.max_iter, 1 << 20)));

  for (int it = 0; it < cfg.max_iter; ++it) {
    SolverState<Scalar> next;
    try {
      next = accel ? accelerated_step(s, prob, cfg) : step(s, prob, cfg);
    } catch (const SolverError& err) {
      rep.status = SolveStatus::SolverError;
      rep.message = err.what();
      break;
    }
    const Residuals<Scalar> res = residuals(s, next, prob.constraint, cfg.order);
    const bool want_objective = cfg.record_trace || static_cast<bool>(observer);
    const double obj = want_objective ? prob.objective(next.u, next.v)
                                      : std::numeric_limits<double>::quiet_NaN();
    if (cfg.record_trace)
      rep.trace.push_back({next.k, res.r_norm, res.d_norm, s.tau, obj, next.accel_c_cur});
    if (observer) observer(IterationEvent<Scalar>{s, next, res, obj});

    if (!detail::finite_iterates(next) || detail::iterate_scale(next) > kDivergenceGuard) {
      s = std::move(next);
      rep.status = SolveStatus::Diverged;
      break;
    }
    if (check_stop(res, cfg.eps_tol)) {
      s = std::move(next);
      rep.status = SolveStatus::Converged;
      break;
    }
    const double tau_next = policy->propose(PolicyContext<Scalar>{s, next, res, prob.constraint});
    s = std::move(next);
    s.tau = tau_next;
  }

  rep.iterations = s.k;
  rep.final_u = s.u;
  rep.final_v = s.v;
  rep.final_objective = prob.objective(s.u, s.v);
  return rep;
}

}  // namespace admmkit
