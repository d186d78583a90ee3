#ifndef HG_NUMERICS_HPP
#define HG_NUMERICS_HPP

#include <algorithm>
#include <cmath>
#include <span>

namespace hg {

// Norm below which a kernel argument counts as sitting on a singular set.
// Denormal guard rather than an exact-zero test.
inline constexpr double kSingularGuard = 1e-300;

// Power with a strictly positive base; no complex branch can arise.
inline double pospow(double base, double expo) {
  return std::exp(expo * std::log(base));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(std::span<const double> a) { return dot(a, a); }

inline double norm(std::span<const double> a) { return std::sqrt(norm_sq(a)); }

// |x - y| / max(1, |x|, |y|); tolerance checks on quantities that may be
// legitimately zero (group identities) as well as O(1) values.
inline double rel_err(double x, double y) {
  const double scale = std::max({1.0, std::abs(x), std::abs(y)});
  return std::abs(x - y) / scale;
}

inline bool finite_all(std::span<const double> a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace hg

#endif
