#ifndef HG_GROUP_HPP
#define HG_GROUP_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hg/numerics.hpp"

namespace hg {

// Heisenberg-type group on R^n x R^n x R with the twisted product
//   (u,v,t) . (xi,eta,tau) = (u+xi, v+eta, t+tau + mu*(u.eta - v.xi)).
// The twist coefficient mu is any real; mu = 0 degenerates to (R^{2n+1}, +).
struct GroupContext {
  int n = 1;
  double mu = 0.0;

  GroupContext(int n_, double mu_) : n(n_), mu(mu_) {
    if (n < 1) throw std::invalid_argument("GroupContext: n must be >= 1");
    if (!std::isfinite(mu)) throw std::invalid_argument("GroupContext: mu must be finite");
  }
};

struct GroupPoint {
  std::vector<double> u;
  std::vector<double> v;
  double t = 0.0;

  GroupPoint() = default;
  GroupPoint(std::vector<double> u_, std::vector<double> v_, double t_)
      : u(std::move(u_)), v(std::move(v_)), t(t_) {
    if (u.size() != v.size())
      throw std::invalid_argument("GroupPoint: u and v must have equal length");
    if (!finite_all(u) || !finite_all(v) || !std::isfinite(t))
      throw std::invalid_argument("GroupPoint: coordinates must be finite");
  }

  // n = 1 convenience.
  GroupPoint(double u0, double v0, double t_) : u{u0}, v{v0}, t(t_) {}

  int n() const { return static_cast<int>(u.size()); }
};

inline GroupPoint origin(int n) {
  return GroupPoint(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0.0);
}

namespace detail {
inline void check_dims(const GroupContext& ctx, const GroupPoint& x, const char* op) {
  if (x.n() != ctx.n)
    throw std::invalid_argument(std::string(op) + ": point dimension does not match context n");
}
}  // namespace detail

inline GroupPoint multiply(const GroupContext& ctx, const GroupPoint& x, const GroupPoint& y) {
  detail::check_dims(ctx, x, "multiply");
  detail::check_dims(ctx, y, "multiply");
  GroupPoint out;
  out.u.resize(x.u.size());
  out.v.resize(x.v.size());
  for (std::size_t i = 0; i < x.u.size(); ++i) {
    out.u[i] = x.u[i] + y.u[i];
    out.v[i] = x.v[i] + y.v[i];
  }
  const double twist = dot(x.u, y.v) - dot(x.v, y.u);
  out.t = x.t + y.t + ctx.mu * twist;
  return out;
}

inline GroupPoint inverse(const GroupPoint& x) {
  GroupPoint out = x;
  for (auto& c : out.u) c = -c;
  for (auto& c : out.v) c = -c;
  out.t = -out.t;
  return out;
}

// x . y^{-1} = (u-xi, v-eta, t-tau - mu*(u.eta - v.xi)).
inline GroupPoint group_difference(const GroupContext& ctx, const GroupPoint& x, const GroupPoint& y) {
  detail::check_dims(ctx, x, "group_difference");
  detail::check_dims(ctx, y, "group_difference");
  GroupPoint out;
  out.u.resize(x.u.size());
  out.v.resize(x.v.size());
  for (std::size_t i = 0; i < x.u.size(); ++i) {
    out.u[i] = x.u[i] - y.u[i];
    out.v[i] = x.v[i] - y.v[i];
  }
  const double twist = dot(x.u, y.v) - dot(x.v, y.u);
  out.t = x.t - y.t - ctx.mu * twist;
  return out;
}

enum class DilationMode { parabolic, zygmund };

// Parabolic: (u,v,t) -> (d1 u, d1 v, d1^2 lambda t).
// Zygmund:   (u,v,t) -> (d1 u, d2 v, d1 d2 lambda t).
// lambda = 1 gives a group automorphism; lambda != 1 does not.
struct DilationSpec {
  DilationMode mode = DilationMode::zygmund;
  double delta1 = 1.0;
  double delta2 = 1.0;  // ignored when parabolic
  double lambda = 1.0;

  DilationSpec(DilationMode m, double d1, double d2 = 1.0, double lam = 1.0)
      : mode(m), delta1(d1), delta2(d2), lambda(lam) {
    if (!(delta1 > 0.0) || !(delta2 > 0.0) || !(lambda > 0.0))
      throw std::invalid_argument("DilationSpec: delta1, delta2, lambda must be > 0");
  }

  static DilationSpec parabolic(double d, double lam = 1.0) {
    return DilationSpec(DilationMode::parabolic, d, 1.0, lam);
  }
  static DilationSpec zygmund(double d1, double d2, double lam = 1.0) {
    return DilationSpec(DilationMode::zygmund, d1, d2, lam);
  }

  double u_factor() const { return delta1; }
  double v_factor() const { return mode == DilationMode::parabolic ? delta1 : delta2; }
  double t_factor() const {
    return mode == DilationMode::parabolic ? delta1 * delta1 * lambda
                                           : delta1 * delta2 * lambda;
  }
};

inline GroupPoint dilate(const DilationSpec& spec, const GroupPoint& x) {
  GroupPoint out = x;
  const double fu = spec.u_factor();
  const double fv = spec.v_factor();
  for (auto& c : out.u) c *= fu;
  for (auto& c : out.v) c *= fv;
  out.t *= spec.t_factor();
  return out;
}

}  // namespace hg

#endif
