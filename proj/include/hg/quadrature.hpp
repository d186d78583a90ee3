#ifndef HG_QUADRATURE_HPP
#define HG_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hg/grid.hpp"
#include "hg/group.hpp"
#include "hg/kernels.hpp"
#include "hg/numerics.hpp"
#include "hg/reduce.hpp"
#include "hg/test_function.hpp"

namespace hg {

// ---------------------------------------------------------------------------
// Operator application by product quadrature. All operators are computed in
// the change-of-variables form
//   out(u,v,t) = sum_j f(xi_j, eta_j, tau_j + mu*(u.eta_j - v.xi_j))
//                * K(u - xi_j, v - eta_j, t - tau_j) * h^{2n+1}
// over the unstaggered input grid, so the twisted argument is evaluated
// exactly on the closed-form f and the kernel sees plain differences.
// Every output value is a pairwise reduction over flat input index order;
// results are bit-identical for any worker count.
// ---------------------------------------------------------------------------

namespace detail {

inline void validate_kernel_for_apply(const KernelSpec& k) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, VParams>) {
          const double n1 = p.n + 1.0;
          if (!(p.alpha1 + p.beta > 0.0 && p.alpha1 + p.beta < n1 &&
                p.alpha2 + p.beta > 0.0 && p.alpha2 + p.beta < n1))
            throw std::invalid_argument(
                "apply_fractional: V kernel needs 0 < alpha_i + beta < n+1 "
                "(non-integrable otherwise)");
        }
        // OmegaAParams, OmegaABParams, SeparableParams enforce their
        // integrable ranges at construction.
      },
      k);
}

// Distance from x to the nearest node of the axis.
inline double axis_min_distance(const Axis& ax, double x) {
  const double h = ax.step();
  const double pos = (x - ax.coord(0)) / h;
  double best = std::numeric_limits<double>::infinity();
  const long j0 = std::lround(pos);
  for (long j = j0 - 1; j <= j0 + 1; ++j) {
    const long jc = std::clamp<long>(j, 0, ax.count - 1);
    best = std::min(best, std::abs(x - ax.coord(static_cast<int>(jc))));
  }
  return best;
}

// Rejects output points whose kernel arguments can touch the singular set of
// the kernel somewhere on the input grid.
inline void check_out_node(const KernelSpec& k, const GridSpec& in_spec,
                           const GroupPoint& x) {
  const int n = in_spec.n;
  double su = 0.0, sv = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = axis_min_distance(in_spec.axes[i], x.u[i]);
    su += d * d;
  }
  for (int i = 0; i < n; ++i) {
    const double d = axis_min_distance(in_spec.axes[n + i], x.v[i]);
    sv += d * d;
  }
  const double dt = axis_min_distance(in_spec.axes[2 * n], x.t);
  const bool bad = std::visit(
      [&](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, OmegaAParams>)
          return su + sv + dt < kSingularGuard;
        else if constexpr (std::is_same_v<T, OmegaABParams>)
          return su + sv < kSingularGuard;
        else
          return std::sqrt(su) < kSingularGuard || std::sqrt(sv) < kSingularGuard ||
                 dt < kSingularGuard;
      },
      k);
  if (bad)
    throw std::domain_error("apply_fractional: output node collides with the kernel singular set");
}

}  // namespace detail

// General path: arbitrary output points, any n.
inline std::vector<double> apply_fractional(const KernelSpec& kernel,
                                            const GroupContext& ctx,
                                            const TestFunction& f,
                                            const GridSpec& in_spec,
                                            const std::vector<GroupPoint>& out_nodes) {
  detail::validate_kernel_for_apply(kernel);
  const int n = ctx.n;
  if (in_spec.n != n) throw std::invalid_argument("apply_fractional: grid/context n mismatch");
  if (kernel_n(kernel) != n) throw std::invalid_argument("apply_fractional: kernel/context n mismatch");
  if (f.dims() != in_spec.dims())
    throw std::invalid_argument("apply_fractional: function/grid dimension mismatch");
  if (in_spec.staggered())
    throw std::invalid_argument("apply_fractional: input grid must be unstaggered");
  for (const auto& x : out_nodes) {
    detail::check_dims(ctx, x, "apply_fractional");
    detail::check_out_node(kernel, in_spec, x);
  }

  const int dims = in_spec.dims();
  const int N = in_spec.nodes_per_axis();
  const std::size_t spatial = in_spec.size() / static_cast<std::size_t>(N);
  const double vol = in_spec.cell_volume();
  const Axis& tau_axis = in_spec.axes[2 * n];

  std::vector<double> out(out_nodes.size(), 0.0);
  parallel_for(out_nodes.size(), [&](std::size_t oi) {
    const GroupPoint& y = out_nodes[oi];
    std::vector<double> terms(in_spec.size());
    std::vector<double> coords(dims), fx(dims);
    GroupPoint d = origin(n);
    std::size_t flat = 0;
    for (std::size_t js = 0; js < spatial; ++js) {
      in_spec.coords_of(js * static_cast<std::size_t>(N), coords);
      double tw = 0.0;
      for (int i = 0; i < n; ++i) tw += y.u[i] * coords[n + i];
      for (int i = 0; i < n; ++i) tw -= y.v[i] * coords[i];
      const double shift = ctx.mu * tw;
      for (int i = 0; i < n; ++i) {
        d.u[i] = y.u[i] - coords[i];
        d.v[i] = y.v[i] - coords[n + i];
        fx[i] = coords[i];
        fx[n + i] = coords[n + i];
      }
      for (int jt = 0; jt < N; ++jt, ++flat) {
        const double tau = tau_axis.coord(jt);
        d.t = y.t - tau;
        fx[2 * n] = tau + shift;
        terms[flat] = f(std::span<const double>(fx)) * eval_kernel(kernel, d);
      }
    }
    out[oi] = pairwise_sum(terms) * vol;
  });
  return out;
}

// Full staggered-grid output, specialized table-driven path for n = 1.
// The input and output grids must share axes (output staggered by half a
// cell), so kernel arguments live on the (2N-1)^3 difference lattice and the
// kernel is evaluated once per lattice point instead of once per node pair.
inline GridFunction apply_fractional_grid(const KernelSpec& kernel,
                                          const GroupContext& ctx,
                                          const TestFunction& f,
                                          const GridSpec& in_spec,
                                          const GridSpec& out_spec) {
  detail::validate_kernel_for_apply(kernel);
  const int n = ctx.n;
  if (in_spec.n != n || out_spec.n != n)
    throw std::invalid_argument("apply_fractional_grid: grid/context n mismatch");
  if (in_spec.staggered() || !out_spec.staggered())
    throw std::invalid_argument("apply_fractional_grid: input unstaggered, output staggered");
  if (!(out_spec == in_spec.with_staggered(true)))
    throw std::invalid_argument("apply_fractional_grid: output grid must be the staggered "
                                "counterpart of the input grid");
  if (f.dims() != in_spec.dims())
    throw std::invalid_argument("apply_fractional_grid: function/grid dimension mismatch");

  if (n != 1) {  // table path below is written for n = 1 (desk scale)
    const std::size_t count = out_spec.size();
    std::vector<GroupPoint> nodes;
    nodes.reserve(count);
    std::vector<double> c(out_spec.dims());
    for (std::size_t j = 0; j < count; ++j) {
      out_spec.coords_of(j, c);
      nodes.emplace_back(std::vector<double>(c.begin(), c.begin() + n),
                         std::vector<double>(c.begin() + n, c.begin() + 2 * n), c[2 * n]);
    }
    return GridFunction(out_spec, apply_fractional(kernel, ctx, f, in_spec, nodes));
  }

  const int N = in_spec.nodes_per_axis();
  const int D = 2 * N - 1;
  const double hu = in_spec.axes[0].step();
  const double hv = in_spec.axes[1].step();
  const double ht = in_spec.axes[2].step();
  const double vol = in_spec.cell_volume();

  // Kernel on the difference lattice d_axis = (i - j + 1/2) h_axis.
  std::vector<double> ktab(static_cast<std::size_t>(D) * D * D);
  {
    std::vector<double> du(D), dv(D), dt(D);
    for (int k = 0; k < D; ++k) {
      const double off = k - (N - 1) + 0.5;
      du[k] = off * hu;
      dv[k] = off * hv;
      dt[k] = off * ht;
    }
    parallel_for(static_cast<std::size_t>(D), [&](std::size_t ku) {
      GroupPoint d(du[ku], 0.0, 0.0);
      std::size_t idx = ku * D * D;
      for (int kv = 0; kv < D; ++kv) {
        d.v[0] = dv[kv];
        for (int kt = 0; kt < D; ++kt, ++idx) {
          d.t = dt[kt];
          ktab[idx] = eval_kernel(kernel, d);
        }
      }
    });
  }

  // Per-term profile values on the input spatial axes.
  const auto& terms = f.terms();
  const std::size_t T = terms.size();
  std::vector<std::vector<double>> f1(T, std::vector<double>(N)), f2(T, std::vector<double>(N));
  for (std::size_t k = 0; k < T; ++k)
    for (int j = 0; j < N; ++j) {
      f1[k][j] = eval_profile(terms[k].axes[0], in_spec.axes[0].coord(j));
      f2[k][j] = eval_profile(terms[k].axes[1], in_spec.axes[1].coord(j));
    }

  GridFunction out(out_spec);
  const std::size_t NN = static_cast<std::size_t>(N);
  const std::size_t in_size = NN * NN * NN;
  parallel_for(NN * NN, [&](std::size_t os) {
    const int iu = static_cast<int>(os / NN);
    const int iv = static_cast<int>(os % NN);
    const double uo = out_spec.axes[0].coord(iu);
    const double vo = out_spec.axes[1].coord(iv);
    std::vector<double> buf(NN * in_size);
    std::vector<double> phi(N);
    for (int ju = 0; ju < N; ++ju) {
      const double xi = in_spec.axes[0].coord(ju);
      const std::size_t ku = static_cast<std::size_t>(iu - ju + N - 1);
      for (int jv = 0; jv < N; ++jv) {
        const double eta = in_spec.axes[1].coord(jv);
        const std::size_t kv = static_cast<std::size_t>(iv - jv + N - 1);
        const double shift = ctx.mu * (uo * eta - vo * xi);
        const double* krow = ktab.data() + (ku * D + kv) * D;
        for (int jt = 0; jt < N; ++jt) {
          const double arg = in_spec.axes[2].coord(jt) + shift;
          double s = 0.0;
          for (std::size_t k = 0; k < T; ++k)
            s += terms[k].weight * f1[k][ju] * f2[k][jv] *
                 eval_profile(terms[k].axes[2], arg);
          phi[jt] = s;
        }
        const std::size_t base = (static_cast<std::size_t>(ju) * NN + jv) * NN;
        for (int it = 0; it < N; ++it) {
          double* slot = buf.data() + static_cast<std::size_t>(it) * in_size + base;
          const double* kslot = krow + (it + N - 1);
          for (int jt = 0; jt < N; ++jt) slot[jt] = phi[jt] * kslot[-jt];
        }
      }
    }
    for (int it = 0; it < N; ++it) {
      const std::span<const double> row(buf.data() + static_cast<std::size_t>(it) * in_size,
                                        in_size);
      out.values[os * NN + it] = pairwise_sum(row) * vol;
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Classical fractional integration on R^dim, the one-block building block:
//   out(x) = sum_y f(y) |x - y|^{a - dim} h^dim
// with y on the unstaggered counterpart of the output axis.
// ---------------------------------------------------------------------------

inline GridFunction apply_classical_hls(double a, int dim, const TestFunction& f,
                                        const Axis& out_axis);

// out_spec carries the N_dim output axes directly (all equal, staggered).
inline GridFunction apply_classical_hls(double a, const TestFunction& f,
                                        const GridSpec& out_spec) {
  if (out_spec.n != 0)
    throw std::invalid_argument("apply_classical_hls: expects a plain box grid");
  for (const auto& ax : out_spec.axes)
    if (ax.half_width != out_spec.axes.front().half_width)
      throw std::invalid_argument("apply_classical_hls: axes must be identical");
  return apply_classical_hls(a, out_spec.dims(), f, out_spec.axes.front());
}

inline GridFunction apply_classical_hls(double a, int dim, const TestFunction& f,
                                        const Axis& out_axis) {
  if (dim < 1) throw std::invalid_argument("apply_classical_hls: dim must be >= 1");
  if (!(a > 0.0 && a < static_cast<double>(dim)))
    throw std::invalid_argument("apply_classical_hls: requires 0 < a < dim");
  if (f.dims() != dim)
    throw std::invalid_argument("apply_classical_hls: function dimension mismatch");
  if (!out_axis.staggered)
    throw std::invalid_argument("apply_classical_hls: output axis must be staggered");
  const Axis in_axis = out_axis.with_staggered(false);
  GridSpec out_spec(0, std::vector<Axis>(dim, out_axis));
  GridSpec in_spec(0, std::vector<Axis>(dim, in_axis));
  const double expo = a - dim;
  const double vol = in_spec.cell_volume();

  GridFunction out(out_spec);
  parallel_for(out.values.size(), [&](std::size_t oi) {
    std::vector<double> x(dim), y(dim), terms(in_spec.size());
    out_spec.coords_of(oi, x);
    for (std::size_t j = 0; j < terms.size(); ++j) {
      in_spec.coords_of(j, y);
      double r2 = 0.0;
      for (int k = 0; k < dim; ++k) r2 += (x[k] - y[k]) * (x[k] - y[k]);
      const double r = std::sqrt(r2);
      if (r < kSingularGuard)
        throw std::domain_error("apply_classical_hls: output node hits an input node");
      terms[j] = f(std::span<const double>(y)) * pospow(r, expo);
    }
    out.values[oi] = pairwise_sum(terms) * vol;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Twisted one-dimensional profile: the first reduction stage of the
// sufficiency chain,
//   F(xi,eta,u,v,t) = sum_tau f(xi, eta, tau + mu*(u.eta - v.xi))
//                     |t - tau|^{s/(n+1) - 1} h_t.
// ---------------------------------------------------------------------------

inline double twisted_profile_F(const GroupContext& ctx, const TestFunction& f, double s,
                                std::span<const double> xi, std::span<const double> eta,
                                std::span<const double> u, std::span<const double> v,
                                double t, const Axis& tau_axis) {
  const int n = ctx.n;
  if (!(s > 0.0 && s < n + 1.0))
    throw std::invalid_argument("twisted_profile_F: requires 0 < s < n+1");
  if (f.dims() != 2 * n + 1)
    throw std::invalid_argument("twisted_profile_F: function must have 2n+1 axes");
  if (static_cast<int>(xi.size()) != n || static_cast<int>(eta.size()) != n ||
      static_cast<int>(u.size()) != n || static_cast<int>(v.size()) != n)
    throw std::invalid_argument("twisted_profile_F: block dimension mismatch");
  if (detail::axis_min_distance(tau_axis, t) < kSingularGuard)
    throw std::domain_error("twisted_profile_F: t collides with the tau grid");

  const double shift = ctx.mu * (dot(u, eta) - dot(v, xi));
  const double expo = s / (n + 1.0) - 1.0;
  std::vector<double> fx(2 * n + 1);
  for (int i = 0; i < n; ++i) {
    fx[i] = xi[i];
    fx[n + i] = eta[i];
  }
  std::vector<double> terms(tau_axis.count);
  for (int j = 0; j < tau_axis.count; ++j) {
    const double tau = tau_axis.coord(j);
    fx[2 * n] = tau + shift;
    terms[j] = f(std::span<const double>(fx)) * pospow(std::abs(t - tau), expo);
  }
  return pairwise_sum(terms) * tau_axis.step();
}

}  // namespace hg

#endif
