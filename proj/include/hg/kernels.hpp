#ifndef HG_KERNELS_HPP
#define HG_KERNELS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hg/group.hpp"
#include "hg/numerics.hpp"

namespace hg {

// ---------------------------------------------------------------------------
// Kernel parameter sets
// ---------------------------------------------------------------------------

// Omega^a(xi,eta,tau) = (|xi|^2 + |eta|^2 + |tau|)^{-(n+1-a)}, singular only
// at the origin. Parabolic-homogeneous of degree 2a - 2n - 2.
struct OmegaAParams {
  int n = 1;
  double a = 0.5;

  OmegaAParams(int n_, double a_) : n(n_), a(a_) {
    if (n < 1) throw std::invalid_argument("OmegaAParams: n must be >= 1");
    if (!(a > 0.0 && a < n + 1.0))
      throw std::invalid_argument("OmegaAParams: requires 0 < a < n+1");
  }
};

// Omega^{ab}(xi,eta,tau) = (|xi|^2+|eta|^2)^{-(n-a)} (|xi|^2+|eta|^2+|tau|)^{-(1-b)},
// singular on {(xi,eta) = 0}. a >= n*b belongs to the constraint checks, not
// to evaluation.
struct OmegaABParams {
  int n = 1;
  double a = 0.5;
  double b = 0.25;

  OmegaABParams(int n_, double a_, double b_) : n(n_), a(a_), b(b_) {
    if (n < 1) throw std::invalid_argument("OmegaABParams: n must be >= 1");
    if (!(a > 0.0 && a < static_cast<double>(n)))
      throw std::invalid_argument("OmegaABParams: requires 0 < a < n");
    if (!(b > 0.0 && b < 1.0))
      throw std::invalid_argument("OmegaABParams: requires 0 < b < 1");
  }
};

// V(xi,eta,tau) = |xi|^{a1-n} |eta|^{a2-n} |tau|^{b-1} *
//                 [ |xi||eta|/|tau| + |tau|/(|xi||eta|) ]^{-theta},
// singular where any block norm vanishes. The symmetric kernel (a1 = a2 = a)
// carries the sharp bracket exponent theta = |a - n b| / (n+1) by default.
struct VParams {
  int n = 1;
  double alpha1 = 0.5;
  double alpha2 = 0.5;
  double beta = 0.25;
  double theta = 0.0;

  VParams(int n_, double a1, double a2, double b, double th)
      : n(n_), alpha1(a1), alpha2(a2), beta(b), theta(th) {
    if (n < 1) throw std::invalid_argument("VParams: n must be >= 1");
    if (!(theta >= 0.0)) throw std::invalid_argument("VParams: theta must be >= 0");
  }

  static double default_theta(int n, double alpha, double beta) {
    return std::abs(alpha - n * beta) / (n + 1.0);
  }

  static VParams symmetric(int n, double alpha, double beta,
                           std::optional<double> theta = std::nullopt) {
    return VParams(n, alpha, alpha, beta,
                   theta ? *theta : default_theta(n, alpha, beta));
  }

  bool symmetric_exponents() const { return alpha1 == alpha2; }
};

// Product majorant |xi|^{n s/(n+1) - n} |eta|^{n s/(n+1) - n} |tau|^{s/(n+1) - 1}
// with s the total kernel order; dominates every symmetric V with default
// bracket exponent and the same order.
struct SeparableParams {
  int n = 1;
  double s = 0.75;

  SeparableParams(int n_, double s_) : n(n_), s(s_) {
    if (n < 1) throw std::invalid_argument("SeparableParams: n must be >= 1");
    if (!(s > 0.0 && s < n + 1.0))
      throw std::invalid_argument("SeparableParams: requires 0 < s < n+1");
  }

  double uv_exponent() const { return n * s / (n + 1.0) - n; }
  double t_exponent() const { return s / (n + 1.0) - 1.0; }
};

using KernelSpec = std::variant<OmegaAParams, OmegaABParams, VParams, SeparableParams>;

// ---------------------------------------------------------------------------
// Pointwise evaluation
// ---------------------------------------------------------------------------

namespace detail {
inline void check_point_dim(int n, const GroupPoint& x, const char* who) {
  if (x.n() != n)
    throw std::invalid_argument(std::string(who) + ": point dimension mismatch");
}
[[noreturn]] inline void singular(const char* who) {
  throw std::domain_error(std::string(who) + ": point lies on the singular set");
}
}  // namespace detail

inline double eval_omega_a(const OmegaAParams& p, const GroupPoint& x) {
  detail::check_point_dim(p.n, x, "eval_omega_a");
  const double base = norm_sq(x.u) + norm_sq(x.v) + std::abs(x.t);
  if (base < kSingularGuard) detail::singular("eval_omega_a");
  return pospow(base, p.a - p.n - 1.0);
}

inline double eval_omega_ab(const OmegaABParams& p, const GroupPoint& x) {
  detail::check_point_dim(p.n, x, "eval_omega_ab");
  const double r = norm_sq(x.u) + norm_sq(x.v);
  if (r < kSingularGuard) detail::singular("eval_omega_ab");
  return pospow(r, p.a - p.n) * pospow(r + std::abs(x.t), p.b - 1.0);
}

inline double eval_v_norms(const VParams& p, double r1, double r2, double r3) {
  if (r1 < kSingularGuard || r2 < kSingularGuard || r3 < kSingularGuard)
    detail::singular("eval_v");
  const double w = r1 * r2 / r3;
  const double bracket = w + 1.0 / w;
  return pospow(r1, p.alpha1 - p.n) * pospow(r2, p.alpha2 - p.n) *
         pospow(r3, p.beta - 1.0) * pospow(bracket, -p.theta);
}

inline double eval_v(const VParams& p, const GroupPoint& x) {
  detail::check_point_dim(p.n, x, "eval_v");
  return eval_v_norms(p, norm(x.u), norm(x.v), std::abs(x.t));
}

inline double eval_separable_majorant_norms(const SeparableParams& p, double r1,
                                            double r2, double r3) {
  if (r1 < kSingularGuard || r2 < kSingularGuard || r3 < kSingularGuard)
    detail::singular("eval_separable_majorant");
  const double e_uv = p.uv_exponent();
  return pospow(r1, e_uv) * pospow(r2, e_uv) * pospow(r3, p.t_exponent());
}

inline double eval_separable_majorant(int n, double s, const GroupPoint& x) {
  const SeparableParams p(n, s);
  detail::check_point_dim(n, x, "eval_separable_majorant");
  return eval_separable_majorant_norms(p, norm(x.u), norm(x.v), std::abs(x.t));
}

inline double eval_kernel(const KernelSpec& k, const GroupPoint& x) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, OmegaAParams>) return eval_omega_a(p, x);
        else if constexpr (std::is_same_v<T, OmegaABParams>) return eval_omega_ab(p, x);
        else if constexpr (std::is_same_v<T, VParams>) return eval_v(p, x);
        else return eval_separable_majorant_norms(p, norm(x.u), norm(x.v), std::abs(x.t));
      },
      k);
}

inline int kernel_n(const KernelSpec& k) {
  return std::visit([](const auto& p) { return p.n; }, k);
}

// Total kernel order: the dilation family (d,d) scales the kernel by
// d^{2(s - n - 1)}; s also fixes the admissible (p,q) line.
inline double kernel_order(const KernelSpec& k) {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, OmegaAParams>) return p.a;
        else if constexpr (std::is_same_v<T, OmegaABParams>) return p.a + p.b;
        else if constexpr (std::is_same_v<T, VParams>) return (p.alpha1 + p.alpha2) / 2.0 + p.beta;
        else return p.s;
      },
      k);
}

inline std::string kernel_name(const KernelSpec& k) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, OmegaAParams>) return "omega_a";
        else if constexpr (std::is_same_v<T, OmegaABParams>) return "omega_ab";
        else if constexpr (std::is_same_v<T, VParams>) return "v";
        else return "separable";
      },
      k);
}

// ---------------------------------------------------------------------------
// Kernel-domination machinery
// ---------------------------------------------------------------------------

// Splitting parameter theta must sit strictly inside (b, 1 - (a-nb)/(n+1));
// both V exponent pairs share the total order a + b and carry their own
// default bracket exponents.
struct DominanceWitness {
  double a = 0.0;
  double b = 0.0;
  int n = 1;
  double theta = 0.0;
  std::pair<double, double> region1_pair;  // used where |xi||eta| >= |tau|
  std::pair<double, double> region2_pair;  // used where |xi||eta| <= |tau|

  VParams region1_kernel() const {
    return VParams::symmetric(n, region1_pair.first, region1_pair.second);
  }
  VParams region2_kernel() const {
    return VParams::symmetric(n, region2_pair.first, region2_pair.second);
  }
};

inline std::pair<double, double> dominance_theta_interval(double a, double b, int n) {
  return {b, 1.0 - (a - n * b) / (n + 1.0)};
}

inline DominanceWitness dominance_pairs(double a, double b, int n,
                                        std::optional<double> theta = std::nullopt) {
  if (n < 1) throw std::invalid_argument("dominance_pairs: n must be >= 1");
  if (!(a > 0.0 && a < static_cast<double>(n)))
    throw std::invalid_argument("dominance_pairs: requires 0 < a < n");
  if (!(b > 0.0 && b < 1.0))
    throw std::invalid_argument("dominance_pairs: requires 0 < b < 1");
  if (!(a >= n * b))
    throw std::invalid_argument("dominance_pairs: requires a >= n*b");
  const auto [lo, hi] = dominance_theta_interval(a, b, n);
  double th = theta ? *theta : 0.5 * (lo + hi);
  if (!(th > lo && th < hi))
    throw std::invalid_argument("dominance_pairs: theta outside (b, 1-(a-nb)/(n+1))");
  DominanceWitness w;
  w.a = a;
  w.b = b;
  w.n = n;
  w.theta = th;
  w.region1_pair = {a, b};
  w.region2_pair = {a + th - 1.0, b - th + 1.0};
  return w;
}

struct DominanceViolation {
  GroupPoint point;
  std::string check;  // "region1", "region2", "sum"
  double lhs = 0.0;
  double rhs = 0.0;
};

struct DominanceReport {
  std::size_t checked = 0;
  std::vector<DominanceViolation> violations;
  double min_margin = std::numeric_limits<double>::infinity();  // min of rhs - lhs

  bool ok() const { return violations.empty(); }
};

// Region-wise Omega^{ab} <= V and global Omega^{ab} <= V1 + V2, with 1e-12
// relative slack. Points on |xi||eta| = |tau| are checked against both pairs.
inline DominanceReport check_pointwise_dominance(const DominanceWitness& w,
                                                 const std::vector<GroupPoint>& samples,
                                                 double slack = 1e-12) {
  const OmegaABParams om(w.n, w.a, w.b);
  const VParams v1 = w.region1_kernel();
  const VParams v2 = w.region2_kernel();
  DominanceReport rep;
  for (const auto& x : samples) {
    const double r1 = norm(x.u), r2 = norm(x.v), r3 = std::abs(x.t);
    const double omega = eval_omega_ab(om, x);
    const double v1x = eval_v_norms(v1, r1, r2, r3);
    const double v2x = eval_v_norms(v2, r1, r2, r3);
    const auto record = [&](const char* which, double lhs, double rhs) {
      rep.min_margin = std::min(rep.min_margin, rhs - lhs);
      if (lhs > rhs * (1.0 + slack))
        rep.violations.push_back({x, which, lhs, rhs});
    };
    const double prod = r1 * r2;
    if (prod >= r3) record("region1", omega, v1x);
    if (prod <= r3) record("region2", omega, v2x);
    record("sum", omega, v1x + v2x);
    ++rep.checked;
  }
  return rep;
}

// [xy/(lambda t) + lambda t/xy]^{-theta} >= m(lambda) [xy/t + t/xy]^{-theta}
// with m(lambda) = lambda^theta below 1 and lambda^{-theta} above.
inline bool check_lambda_bracket_bound(double theta, double xy, double t,
                                       double lambda, double slack = 1e-12) {
  if (!(theta >= 0.0) || !(xy > 0.0) || !(t > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("check_lambda_bracket_bound: arguments must be positive");
  const double scaled = xy / (lambda * t) + lambda * t / xy;
  const double plain = xy / t + t / xy;
  const double m = lambda < 1.0 ? pospow(lambda, theta) : pospow(lambda, -theta);
  const double lhs = pospow(scaled, -theta);
  const double rhs = m * pospow(plain, -theta);
  return lhs >= rhs * (1.0 - slack);
}

}  // namespace hg

#endif
