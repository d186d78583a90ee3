#ifndef HG_VERIFY_HPP
#define HG_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hg/grid.hpp"
#include "hg/kernels.hpp"
#include "hg/quadrature.hpp"

namespace hg {

struct ExponentPair {
  double p = 2.0;
  double q = 8.0;

  ExponentPair(double p_, double q_) : p(p_), q(q_) {
    if (!(p > 1.0 && q > p && std::isfinite(q)))
      throw std::invalid_argument("ExponentPair: requires 1 < p < q < inf");
  }

  double gap() const { return 1.0 / p - 1.0 / q; }
};

// q on the admissible line (s/(n+1) = 1/p - 1/q) for given p; throws when no
// finite q > p exists.
inline double admissible_q(int n, double s, double p) {
  if (n < 1) throw std::invalid_argument("admissible_q: n must be >= 1");
  if (!(p > 1.0)) throw std::invalid_argument("admissible_q: requires p > 1");
  if (!(s > 0.0)) throw std::domain_error("admissible_q: s <= 0 forces q <= p");
  const double inv_q = 1.0 / p - s / (n + 1.0);
  if (!(inv_q > 0.0))
    throw std::domain_error("admissible_q: 1/p <= s/(n+1) forces q = inf or negative");
  return 1.0 / inv_q;
}

// ---------------------------------------------------------------------------
// Constraint arithmetic
// ---------------------------------------------------------------------------

struct ConstraintReport {
  bool homogeneity_ok = true;  // (alpha+beta)/(n+1) = 1/p - 1/q  (both alphas)
  bool theta_ok = true;        // theta >= |alpha - n beta|/(n+1)
  bool band_ok = true;         // beta - theta <= 1/p - 1/q <= beta + theta
  bool ab_b_ok = true;         // b <= 1/p - 1/q
  bool ab_anb_ok = true;       // a >= n b
  double tolerance = 1e-12;

  bool all() const { return homogeneity_ok && theta_ok && band_ok && ab_b_ok && ab_anb_ok; }
};

inline ConstraintReport constraint_report(const VParams& p, const ExponentPair& pq,
                                          double tol = 1e-12) {
  ConstraintReport r;
  r.tolerance = tol;
  const double d = pq.gap();
  const double n1 = p.n + 1.0;
  r.homogeneity_ok = std::abs((p.alpha1 + p.beta) / n1 - d) <= tol &&
                     std::abs((p.alpha2 + p.beta) / n1 - d) <= tol;
  const double need = std::max(std::abs(p.alpha1 - p.n * p.beta),
                               std::abs(p.alpha2 - p.n * p.beta)) / n1;
  r.theta_ok = p.theta >= need - tol;
  r.band_ok = (p.beta - p.theta) - d <= tol && d - (p.beta + p.theta) <= tol;
  return r;
}

inline ConstraintReport constraint_report(const OmegaABParams& p, const ExponentPair& pq,
                                          double tol = 1e-12) {
  ConstraintReport r;
  r.tolerance = tol;
  const double d = pq.gap();
  r.homogeneity_ok = std::abs((p.a + p.b) / (p.n + 1.0) - d) <= tol;
  r.ab_b_ok = p.b - d <= tol;
  r.ab_anb_ok = p.a >= p.n * p.b - tol;
  return r;
}

// ---------------------------------------------------------------------------
// Dilation-family experiments. The family is the two-parameter dilation with
// equal factors (delta, delta) and lambda = 1; input and output boxes are the
// exact images of the base boxes, so discretization error is delta-free and
// the measured ratio isolates the scaling exponent.
// ---------------------------------------------------------------------------

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
  double predicted_slope = 0.0;
};

struct RatioRow {
  double delta = 1.0;
  double op_norm = 0.0;  // ||T f_delta||_q
  double f_norm = 0.0;   // ||f_delta||_p
  double ratio = 0.0;
};

struct DilationRun {
  double delta = 1.0;
  GridFunction out;
  GridFunction in_sampled;
};

inline double predicted_scaling_slope(const KernelSpec& k, const ExponentPair& pq) {
  const int n = kernel_n(k);
  return 2.0 * (kernel_order(k) - (n + 1.0) * pq.gap());
}

inline std::vector<DilationRun> run_dilation_family(const KernelSpec& kernel,
                                                    const GroupContext& ctx,
                                                    const TestFunction& f,
                                                    const std::vector<double>& deltas,
                                                    const GridSpec& base_in) {
  if (base_in.staggered())
    throw std::invalid_argument("run_dilation_family: base grid must be unstaggered");
  std::vector<DilationRun> runs;
  runs.reserve(deltas.size());
  for (double d : deltas) {
    if (!(d >= 1.0)) throw std::invalid_argument("run_dilation_family: deltas must be >= 1");
    const DilationSpec dil = DilationSpec::zygmund(d, d, 1.0);
    const GridSpec in = base_in.dilated(dil);
    const GridSpec out = in.with_staggered(true);
    const TestFunction fd = f.dilated(dil, ctx.n);
    DilationRun run;
    run.delta = d;
    run.out = apply_fractional_grid(kernel, ctx, fd, in, out);
    run.in_sampled = sample(fd, in);
    runs.push_back(std::move(run));
  }
  return runs;
}

inline std::vector<RatioRow> dilation_ratio_rows(const std::vector<DilationRun>& runs,
                                                 const ExponentPair& pq) {
  std::vector<RatioRow> rows;
  rows.reserve(runs.size());
  for (const auto& run : runs) {
    RatioRow r;
    r.delta = run.delta;
    r.op_norm = lp_norm(run.out, pq.q);
    r.f_norm = lp_norm(run.in_sampled, pq.p);
    if (!(r.f_norm > 0.0))
      throw std::domain_error("dilation_ratio_rows: input function has zero norm");
    r.ratio = r.op_norm / r.f_norm;
    rows.push_back(r);
  }
  return rows;
}

inline FitResult fit_log_ratios(const std::vector<RatioRow>& rows, double predicted) {
  const std::size_t m = rows.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double x = std::log(r.delta);
    const double y = std::log(r.ratio);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0)
    throw std::invalid_argument("fit_log_ratios: deltas must not be all equal");
  FitResult fit;
  fit.predicted_slope = predicted;
  fit.slope = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / m;
  for (const auto& r : rows) {
    const double resid = std::log(r.ratio) - (fit.intercept + fit.slope * std::log(r.delta));
    fit.max_residual = std::max(fit.max_residual, std::abs(resid));
  }
  return fit;
}

inline FitResult dilation_exponent_fit(const KernelSpec& kernel, const GroupContext& ctx,
                                       const TestFunction& f, const ExponentPair& pq,
                                       const std::vector<double>& deltas,
                                       const GridSpec& base_in) {
  if (deltas.size() < 3)
    throw std::invalid_argument("dilation_exponent_fit: need at least 3 deltas");
  if (std::holds_alternative<SeparableParams>(kernel))
    throw std::invalid_argument("dilation_exponent_fit: kernel must be of V or Omega type");
  const auto runs = run_dilation_family(kernel, ctx, f, deltas, base_in);
  return fit_log_ratios(dilation_ratio_rows(runs, pq), predicted_scaling_slope(kernel, pq));
}

// ---------------------------------------------------------------------------
// Operator-norm probing: ratios over a family of inputs; the largest ratio is
// a certified lower bound on the discrete operator norm, the spread is the
// boundedness heuristic.
// ---------------------------------------------------------------------------

struct ProbeMember {
  std::string label;
  TestFunction f;
  // Unstaggered input grid for this member. Grids track the member's widths
  // (same N, per-axis half-widths scaled with the function) so every member
  // is resolved equally and ratios compare operators, not grid artifacts.
  GridSpec grid;
};

struct ProbeRow {
  std::string label;
  double op_norm = 0.0;
  double f_norm = 0.0;
  double ratio = 0.0;
};

struct ProbeResult {
  std::vector<ProbeRow> rows;
  double spread = 1.0;  // max ratio / min ratio
};

inline std::vector<ProbeResult> norm_probe_multi(const KernelSpec& kernel,
                                                 const GroupContext& ctx,
                                                 const std::vector<ProbeMember>& family,
                                                 const std::vector<ExponentPair>& pairs) {
  if (family.empty()) throw std::invalid_argument("norm_probe: family must be nonempty");
  std::vector<GridFunction> outs, ins;
  outs.reserve(family.size());
  ins.reserve(family.size());
  for (const auto& m : family) {
    if (m.grid.staggered())
      throw std::invalid_argument("norm_probe: member grids must be unstaggered");
    outs.push_back(apply_fractional_grid(kernel, ctx, m.f, m.grid, m.grid.with_staggered(true)));
    ins.push_back(sample(m.f, m.grid));
  }
  std::vector<ProbeResult> results;
  for (const auto& pq : pairs) {
    ProbeResult res;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
      ProbeRow row;
      row.label = family[i].label;
      row.op_norm = lp_norm(outs[i], pq.q);
      row.f_norm = lp_norm(ins[i], pq.p);
      if (!(row.f_norm > 0.0))
        throw std::domain_error("norm_probe: zero function in family");
      row.ratio = row.op_norm / row.f_norm;
      lo = std::min(lo, row.ratio);
      hi = std::max(hi, row.ratio);
      res.rows.push_back(std::move(row));
    }
    res.spread = hi / lo;
    results.push_back(std::move(res));
  }
  return results;
}

inline ProbeResult norm_probe(const KernelSpec& kernel, const GroupContext& ctx,
                              const std::vector<ProbeMember>& family,
                              const ExponentPair& pq) {
  return norm_probe_multi(kernel, ctx, family, {pq}).front();
}

// ---------------------------------------------------------------------------
// Necessity scan: classify (p,q) pairs by fitted scaling exponent. Operator
// outputs are shared across pairs since only the norms depend on (p,q).
// ---------------------------------------------------------------------------

struct NecessityRow {
  double p = 0.0;
  double q = 0.0;
  double slope = 0.0;
  double predicted = 0.0;
  bool admissible_fit = false;  // |slope| <= threshold
  bool on_line = false;         // s/(n+1) == 1/p - 1/q
};

inline std::vector<NecessityRow> necessity_scan(const KernelSpec& kernel,
                                                const GroupContext& ctx,
                                                const TestFunction& f,
                                                const std::vector<ExponentPair>& pairs,
                                                const std::vector<double>& deltas,
                                                const GridSpec& base_in,
                                                double slope_threshold = 0.1) {
  if (deltas.size() < 3)
    throw std::invalid_argument("necessity_scan: need at least 3 deltas");
  if (std::holds_alternative<SeparableParams>(kernel))
    throw std::invalid_argument("necessity_scan: kernel must be of V or Omega type");
  const auto runs = run_dilation_family(kernel, ctx, f, deltas, base_in);
  const double s = kernel_order(kernel);
  const int n = kernel_n(kernel);
  std::vector<NecessityRow> rows;
  for (const auto& pq : pairs) {
    const auto fit = fit_log_ratios(dilation_ratio_rows(runs, pq),
                                    predicted_scaling_slope(kernel, pq));
    NecessityRow row;
    row.p = pq.p;
    row.q = pq.q;
    row.slope = fit.slope;
    row.predicted = fit.predicted_slope;
    row.admissible_fit = std::abs(fit.slope) <= slope_threshold;
    row.on_line = std::abs(s / (n + 1.0) - pq.gap()) <= 1e-9;
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Sufficiency chain, probed numerically:
//  (i)  pointwise domination of the V-operator by the separable one,
//  (ii) the Minkowski interchange on the discretized t axis,
//  (iii) the iterated (profile-first) form reassembles the separable
//        operator exactly up to floating-point reassociation.
// ---------------------------------------------------------------------------

struct ProofChainReport {
  struct NodeRow {
    GroupPoint node;
    double i_v = 0.0;
    double i_sep = 0.0;
  };
  struct MinkowskiRow {
    std::vector<double> spatial;  // (u..., v...)
    double lhs = 0.0;
    double rhs = 0.0;
  };
  std::vector<NodeRow> domination;
  std::vector<MinkowskiRow> minkowski;
  double max_rearrangement_rel = 0.0;
  double min_domination_margin = std::numeric_limits<double>::infinity();
  double min_minkowski_margin = std::numeric_limits<double>::infinity();

  bool domination_ok(double slack = 1e-12) const {
    for (const auto& r : domination)
      if (r.i_v > r.i_sep * (1.0 + slack)) return false;
    return true;
  }
  bool minkowski_ok(double slack = 1e-12) const {
    for (const auto& r : minkowski)
      if (r.lhs > r.rhs * (1.0 + slack)) return false;
    return true;
  }
  bool ok(double rearrangement_tol = 1e-9) const {
    return domination_ok() && minkowski_ok() && max_rearrangement_rel <= rearrangement_tol;
  }
};

inline ProofChainReport proof_chain_check(const GroupContext& ctx, const TestFunction& f,
                                          const VParams& vp, const ExponentPair& pq,
                                          const GridSpec& in_spec, int probes_per_axis = 5) {
  const int n = ctx.n;
  if (vp.n != n || in_spec.n != n)
    throw std::invalid_argument("proof_chain_check: n mismatch");
  if (!vp.symmetric_exponents())
    throw std::invalid_argument("proof_chain_check: V kernel must be symmetric");
  if (std::abs(vp.theta - VParams::default_theta(n, vp.alpha1, vp.beta)) > 1e-12)
    throw std::invalid_argument("proof_chain_check: V kernel must carry the default theta");
  const double s = vp.alpha1 + vp.beta;
  const SeparableParams sep(n, s);  // validates 0 < s < n+1
  if (std::abs(s / (n + 1.0) - pq.gap()) > 1e-9)
    throw std::invalid_argument("proof_chain_check: (p,q) must sit on the admissible line");
  if (in_spec.staggered())
    throw std::invalid_argument("proof_chain_check: input grid must be unstaggered");
  if (probes_per_axis < 2 || probes_per_axis > in_spec.nodes_per_axis())
    throw std::invalid_argument("proof_chain_check: bad probes_per_axis");

  const GridSpec out_spec = in_spec.with_staggered(true);
  const int N = in_spec.nodes_per_axis();
  const int P = probes_per_axis;
  std::vector<int> pidx(P);
  for (int k = 0; k < P; ++k) pidx[k] = k * (N - 1) / (P - 1);

  // Probe nodes: the P^{2n+1} staggered sub-lattice.
  const int sdims = 2 * n;
  std::size_t spatial_probes = 1;
  for (int k = 0; k < sdims; ++k) spatial_probes *= static_cast<std::size_t>(P);
  std::vector<GroupPoint> nodes;
  std::vector<std::vector<double>> probe_spatial(spatial_probes, std::vector<double>(sdims));
  const Axis t_out = out_spec.axes[2 * n];
  for (std::size_t sp = 0; sp < spatial_probes; ++sp) {
    std::size_t rem = sp;
    std::vector<int> idx(sdims);
    for (int k = sdims - 1; k >= 0; --k) {
      idx[k] = pidx[rem % P];
      rem /= P;
    }
    for (int k = 0; k < sdims; ++k)
      probe_spatial[sp][k] = out_spec.axes[k].coord(idx[k]);
    for (int k = 0; k < P; ++k) {
      GroupPoint g = origin(n);
      for (int i = 0; i < n; ++i) g.u[i] = probe_spatial[sp][i];
      for (int i = 0; i < n; ++i) g.v[i] = probe_spatial[sp][n + i];
      g.t = t_out.coord(pidx[k]);
      nodes.push_back(std::move(g));
    }
  }

  // (i) direct applications at the probe nodes.
  const auto iv = apply_fractional(KernelSpec(vp), ctx, f, in_spec, nodes);
  const auto isep = apply_fractional(KernelSpec(sep), ctx, f, in_spec, nodes);

  ProofChainReport rep;
  rep.domination.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    rep.domination[i] = {nodes[i], iv[i], isep[i]};
    rep.min_domination_margin = std::min(rep.min_domination_margin, isep[i] - iv[i]);
  }

  // Shared tables for (ii)/(iii).
  const Axis tau_axis = in_spec.axes[2 * n];
  const double ht = tau_axis.step();
  const double e_t = sep.t_exponent();
  const double e_uv = sep.uv_exponent();
  std::vector<double> kt(static_cast<std::size_t>(N) * N);  // kt[it][jt]
  for (int it = 0; it < N; ++it)
    for (int jt = 0; jt < N; ++jt)
      kt[static_cast<std::size_t>(it) * N + jt] =
          pospow(std::abs(t_out.coord(it) - tau_axis.coord(jt)), e_t);

  std::size_t spatial_grid = 1;
  for (int k = 0; k < sdims; ++k) spatial_grid *= static_cast<std::size_t>(N);
  double h_spatial = 1.0;
  for (int k = 0; k < sdims; ++k) h_spatial *= in_spec.axes[k].step();

  rep.minkowski.resize(spatial_probes);
  std::vector<double> rearr_err(spatial_probes, 0.0);
  parallel_for(spatial_probes, [&](std::size_t sp) {
    const auto& uv = probe_spatial[sp];
    const std::span<const double> u(uv.data(), static_cast<std::size_t>(n));
    const std::span<const double> v(uv.data() + n, static_cast<std::size_t>(n));
    std::vector<double> coords(2 * n + 1), fx(2 * n + 1);
    std::vector<double> F(spatial_grid * static_cast<std::size_t>(N));
    std::vector<double> kuv(spatial_grid);
    for (std::size_t js = 0; js < spatial_grid; ++js) {
      in_spec.coords_of(js * static_cast<std::size_t>(N), coords);
      double tw = 0.0, ru2 = 0.0, rv2 = 0.0;
      for (int i = 0; i < n; ++i) {
        tw += u[i] * coords[n + i] - v[i] * coords[i];
        ru2 += (u[i] - coords[i]) * (u[i] - coords[i]);
        rv2 += (v[i] - coords[n + i]) * (v[i] - coords[n + i]);
      }
      kuv[js] = pospow(std::sqrt(ru2), e_uv) * pospow(std::sqrt(rv2), e_uv);
      const double shift = ctx.mu * tw;
      for (int i = 0; i < 2 * n; ++i) fx[i] = coords[i];
      std::vector<double> fvals(N);
      for (int jt = 0; jt < N; ++jt) {
        fx[2 * n] = tau_axis.coord(jt) + shift;
        fvals[jt] = f(std::span<const double>(fx));
      }
      for (int it = 0; it < N; ++it) {
        double acc = 0.0;
        const double* krow = kt.data() + static_cast<std::size_t>(it) * N;
        for (int jt = 0; jt < N; ++jt) acc += fvals[jt] * krow[jt];
        F[js * N + it] = acc * ht;
      }
    }
    // G(t) = iterated separable operator at (u, v, t).
    std::vector<double> G(N, 0.0);
    double rhs = 0.0;
    for (std::size_t js = 0; js < spatial_grid; ++js) {
      double qsum = 0.0;
      for (int it = 0; it < N; ++it) {
        G[it] += kuv[js] * F[js * N + it] * h_spatial;
        const double a = F[js * N + it];
        qsum += a == 0.0 ? 0.0 : pospow(a, pq.q);
      }
      rhs += kuv[js] * std::pow(qsum * ht, 1.0 / pq.q) * h_spatial;
    }
    double lq = 0.0;
    for (int it = 0; it < N; ++it) lq += G[it] == 0.0 ? 0.0 : pospow(G[it], pq.q);
    const double lhs = std::pow(lq * ht, 1.0 / pq.q);
    rep.minkowski[sp] = {uv, lhs, rhs};
    // (iii) same nodes as the direct separable application.
    double worst = 0.0;
    for (int k = 0; k < P; ++k) {
      const double direct = isep[sp * P + k];
      const double iterated = G[pidx[k]];
      const double scale = std::max({1e-300, std::abs(direct), std::abs(iterated)});
      worst = std::max(worst, std::abs(direct - iterated) / scale);
    }
    rearr_err[sp] = worst;
  });
  for (std::size_t sp = 0; sp < spatial_probes; ++sp) {
    rep.max_rearrangement_rel = std::max(rep.max_rearrangement_rel, rearr_err[sp]);
    rep.min_minkowski_margin =
        std::min(rep.min_minkowski_margin, rep.minkowski[sp].rhs - rep.minkowski[sp].lhs);
  }
  return rep;
}

}  // namespace hg

#endif
