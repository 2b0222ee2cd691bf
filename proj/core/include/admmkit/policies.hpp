#pragma once

#include <cmath>
#include <memory>
#include <string>

#include "admmkit/linear_map.hpp"

namespace admmkit {

template <class Scalar>
struct SolverState;
template <class Scalar>
struct Residuals;
template <class Scalar>
struct ConstraintSystem;
template <class Scalar>
struct PolicyContext;

enum class PolicyKind { Constant, ResidualBalance, Spectral, AcceleratedRestart };

/// Residual balancing: multiply tau by eta when the primal residual dominates
/// by more than a factor mu, divide when the dual residual dominates.
struct BalanceParams {
  double mu = 10.0;
  double eta = 2.0;
};

/// Secant-based curvature estimation of the two dual functions, applied every
/// `period` iterations with a correlation safeguard.
struct SpectralParams {
  int period = 2;
  double eps_corr = 0.2;
};

/// Nesterov extrapolation with a restart when the combined residual fails to
/// decrease by the factor eta.
struct AcceleratedParams {
  double eta = 0.999;
};

struct PolicyConfig {
  PolicyKind kind = PolicyKind::Constant;
  BalanceParams balance;
  SpectralParams spectral;
  AcceleratedParams accel;
  int adapt_horizon = 1000;  // adaptation freezes after this many iterations
  double tau_min = 1e-6;
  double tau_max = 1e6;

  void validate() const {
    if (balance.mu <= 1.0 || balance.eta <= 1.0)
      throw ValidationError("policy: balance factors must exceed 1");
    if (spectral.period < 1) throw ValidationError("policy: spectral period must be >= 1");
    if (spectral.eps_corr < 0.0 || spectral.eps_corr >= 1.0)
      throw ValidationError("policy: eps_corr must lie in [0, 1)");
    if (accel.eta <= 0.0 || accel.eta > 1.0)
      throw ValidationError("policy: restart factor must lie in (0, 1]");
    if (!(tau_min > 0.0) || !(tau_min < tau_max))
      throw ValidationError("policy: need 0 < tau_min < tau_max");
    if (adapt_horizon < 0) throw ValidationError("policy: adapt_horizon must be nonnegative");
  }
};

/// Per-solve penalty rule. propose() is invoked once after every completed
/// iteration and returns the penalty for the next one; implementations own
/// whatever memory they need. One instance serves exactly one solve.
template <class Scalar>
class PenaltyPolicy {
 public:
  virtual ~PenaltyPolicy() = default;
  virtual double propose(const PolicyContext<Scalar>& ctx) = 0;
};

namespace detail {

inline double clamp_tau(double tau, const PolicyConfig& cfg) {
  return std::min(cfg.tau_max, std::max(cfg.tau_min, tau));
}

// Real part of the conjugate inner product; plain dot product for real types.
template <class Derived, class Other>
double rdot(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Other>& b) {
  return Eigen::numext::real(a.dot(b));
}

}  // namespace detail

template <class Scalar>
class ConstantPolicy final : public PenaltyPolicy<Scalar> {
 public:
  double propose(const PolicyContext<Scalar>& ctx) override { return ctx.after.tau; }
};

template <class Scalar>
class ResidualBalancePolicy final : public PenaltyPolicy<Scalar> {
 public:
  explicit ResidualBalancePolicy(const PolicyConfig& cfg) : cfg_(cfg) {}

  double propose(const PolicyContext<Scalar>& ctx) override {
    const double tau = ctx.after.tau;
    if (ctx.after.k > cfg_.adapt_horizon) return tau;
    const double r = ctx.res.r_norm;
    const double d = ctx.res.d_norm;
    if (r > cfg_.balance.mu * d) return detail::clamp_tau(tau * cfg_.balance.eta, cfg_);
    if (d > cfg_.balance.mu * r) return detail::clamp_tau(tau / cfg_.balance.eta, cfg_);
    return tau;
  }

 private:
  PolicyConfig cfg_;
};

/// Estimates the local curvatures of the two dual functions from secant pairs
/// anchored at the previous adaptation point, hybridizes the steepest-descent
/// and minimum-gradient estimates, and sets tau to the geometric mean of
/// whichever sides pass a correlation safeguard.
template <class Scalar>
class SpectralPolicy final : public PenaltyPolicy<Scalar> {
 public:
  explicit SpectralPolicy(const PolicyConfig& cfg) : cfg_(cfg) {}

  double propose(const PolicyContext<Scalar>& ctx) override {
    const double tau = ctx.after.tau;
    const int k = ctx.after.k;
    if (k > cfg_.adapt_horizon) return tau;

    auto Au = ctx.cs.A->apply(ctx.after.u);
    auto Bv = ctx.cs.B->apply(ctx.after.v);
    // Intermediate dual after the first block update of this iteration.
    auto lam_hat =
        (ctx.before.lam + Scalar(ctx.before.tau) * (ctx.cs.b - Au - ctx.cs.B->apply(ctx.before.v))).eval();

    if (!has_anchor_) {
      setAnchor(k, Au, Bv, lam_hat, ctx.after.lam);
      return tau;
    }
    if (k - anchor_k_ < cfg_.spectral.period) return tau;

    const Estimate alpha = estimate(Au - anchor_Au_, lam_hat - anchor_lam_hat_);
    const Estimate beta = estimate(Bv - anchor_Bv_, ctx.after.lam - anchor_lam_);
    setAnchor(k, Au, Bv, lam_hat, ctx.after.lam);

    if (alpha.ok && beta.ok) return detail::clamp_tau(std::sqrt(alpha.value * beta.value), cfg_);
    if (alpha.ok) return detail::clamp_tau(alpha.value, cfg_);
    if (beta.ok) return detail::clamp_tau(beta.value, cfg_);
    return tau;
  }

 private:
  struct Estimate {
    bool ok = false;
    double value = 0.0;
  };

  // Hybrid Barzilai-Borwein estimate from the secant pair (dx, dy) with a
  // correlation safeguard; zero displacements count as a safeguard failure.
  Estimate estimate(const Vector<Scalar>& dx, const Vector<Scalar>& dy) const {
    const double nx = dx.norm();
    const double ny = dy.norm();
    if (nx == 0.0 || ny == 0.0) return {};
    const double num = detail::rdot(dx, dy);
    if (!(num > cfg_.spectral.eps_corr * nx * ny)) return {};
    const double mg = num / (nx * nx);
    const double sd = (ny * ny) / num;
    return {true, 2.0 * mg > sd ? mg : sd - 0.5 * mg};
  }

  void setAnchor(int k, Vector<Scalar> Au, Vector<Scalar> Bv, Vector<Scalar> lam_hat, Vector<Scalar> lam) {
    has_anchor_ = true;
    anchor_k_ = k;
    anchor_Au_ = std::move(Au);
    anchor_Bv_ = std::move(Bv);
    anchor_lam_hat_ = std::move(lam_hat);
    anchor_lam_ = std::move(lam);
  }

  PolicyConfig cfg_;
  bool has_anchor_ = false;
  int anchor_k_ = 0;
  Vector<Scalar> anchor_Au_, anchor_Bv_, anchor_lam_hat_, anchor_lam_;
};

// The accelerated mode keeps tau fixed; extrapolation and restarts live in
// accelerated_step().
template <class Scalar>
class AcceleratedRestartPolicy final : public PenaltyPolicy<Scalar> {
 public:
  double propose(const PolicyContext<Scalar>& ctx) override { return ctx.after.tau; }
};

template <class Scalar>
std::unique_ptr<PenaltyPolicy<Scalar>> make_policy(const PolicyConfig& cfg) {
  cfg.validate();
  switch (cfg.kind) {
    case PolicyKind::Constant: return std::make_unique<ConstantPolicy<Scalar>>();
    case PolicyKind::ResidualBalance: return std::make_unique<ResidualBalancePolicy<Scalar>>(cfg);
    case PolicyKind::Spectral: return std::make_unique<SpectralPolicy<Scalar>>(cfg);
    case PolicyKind::AcceleratedRestart: return std::make_unique<AcceleratedRestartPolicy<Scalar>>();
  }
  throw ValidationError("policy: unknown kind");
}

inline std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Constant: return "constant";
    case PolicyKind::ResidualBalance: return "residual_balance";
    case PolicyKind::Spectral: return "spectral";
    case PolicyKind::AcceleratedRestart: return "accelerated_restart";
  }
  return "unknown";
}

inline PolicyKind policy_kind_from_string(const std::string& name) {
  if (name == "constant" || name == "vanilla") return PolicyKind::Constant;
  if (name == "residual_balance" || name == "balance") return PolicyKind::ResidualBalance;
  if (name == "spectral") return PolicyKind::Spectral;
  if (name == "accelerated_restart" || name == "fast") return PolicyKind::AcceleratedRestart;
  throw ValidationError("unknown policy: " + name);
}

}  // namespace admmkit
