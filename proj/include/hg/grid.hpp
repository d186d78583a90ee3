#ifndef HG_GRID_HPP
#define HG_GRID_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hg/numerics.hpp"
#include "hg/reduce.hpp"
#include "hg/test_function.hpp"

namespace hg {

// Uniform axis over [-L, L) with N nodes. Unstaggered node i sits at
// -L + i*h; staggered node i at -L + (i + 1/2)*h, h = 2L/N. Output grids are
// staggered relative to input grids so kernel arguments never hit zero.
struct Axis {
  double half_width = 1.0;
  int count = 2;
  bool staggered = false;

  Axis() = default;
  Axis(double L, int N, bool stag) : half_width(L), count(N), staggered(stag) {
    if (!(half_width > 0.0)) throw std::invalid_argument("Axis: half_width must be > 0");
    if (count < 2) throw std::invalid_argument("Axis: need at least 2 nodes");
  }

  double step() const { return 2.0 * half_width / count; }
  double coord(int i) const {
    return -half_width + (staggered ? (i + 0.5) : static_cast<double>(i)) * step();
  }
  std::vector<double> nodes() const {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = coord(i);
    return out;
  }
  Axis with_staggered(bool s) const { return Axis(half_width, count, s); }
  Axis scaled(double c) const { return Axis(half_width * c, count, staggered); }
};

// Grid over a truncated box. Group-shaped grids have 2n+1 axes in
// (u..., v..., t) order; per-axis half-widths admit dilated boxes while the
// node count N is shared by every axis.
struct GridSpec {
  int n = 0;  // block dimension; 0 for plain boxes
  std::vector<Axis> axes;

  GridSpec() = default;
  GridSpec(int n_, std::vector<Axis> axes_) : n(n_), axes(std::move(axes_)) {
    if (axes.empty()) throw std::invalid_argument("GridSpec: needs at least one axis");
    for (const auto& a : axes)
      if (a.count != axes.front().count)
        throw std::invalid_argument("GridSpec: all axes share one node count");
    if (n > 0 && static_cast<int>(axes.size()) != 2 * n + 1)
      throw std::invalid_argument("GridSpec: group shape needs 2n+1 axes");
  }

  static GridSpec group(int n, double L, int N, bool staggered) {
    if (n < 1) throw std::invalid_argument("GridSpec: group shape needs n >= 1");
    return GridSpec(n, std::vector<Axis>(2 * n + 1, Axis(L, N, staggered)));
  }

  static GridSpec group_widths(int n, double Lu, double Lv, double Lt, int N, bool staggered) {
    if (n < 1) throw std::invalid_argument("GridSpec: group shape needs n >= 1");
    std::vector<Axis> axes;
    for (int k = 0; k < n; ++k) axes.emplace_back(Lu, N, staggered);
    for (int k = 0; k < n; ++k) axes.emplace_back(Lv, N, staggered);
    axes.emplace_back(Lt, N, staggered);
    return GridSpec(n, std::move(axes));
  }

  static GridSpec box(int dims, double L, int N, bool staggered) {
    return GridSpec(0, std::vector<Axis>(dims, Axis(L, N, staggered)));
  }

  int dims() const { return static_cast<int>(axes.size()); }
  int nodes_per_axis() const { return axes.front().count; }
  bool staggered() const { return axes.front().staggered; }

  bool isotropic() const {
    for (const auto& a : axes)
      if (a.half_width != axes.front().half_width) return false;
    return true;
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (const auto& a : axes) s *= static_cast<std::size_t>(a.count);
    return s;
  }

  double cell_volume() const {
    double v = 1.0;
    for (const auto& a : axes) v *= a.step();
    return v;
  }

  GridSpec with_staggered(bool s) const {
    GridSpec out = *this;
    for (auto& a : out.axes) a = a.with_staggered(s);
    return out;
  }

  // Box image under the group dilation: u/v axes scale by the spatial
  // factors, the t axis by the t factor.
  GridSpec dilated(const DilationSpec& d) const {
    if (n < 1) throw std::invalid_argument("GridSpec: dilated needs group shape");
    GridSpec out = *this;
    for (int k = 0; k < n; ++k) out.axes[k] = out.axes[k].scaled(d.u_factor());
    for (int k = n; k < 2 * n; ++k) out.axes[k] = out.axes[k].scaled(d.v_factor());
    out.axes[2 * n] = out.axes[2 * n].scaled(d.t_factor());
    return out;
  }

  // Row-major flat index over (u axes, v axes, t axis).
  std::size_t flat_index(std::span<const int> idx) const {
    std::size_t f = 0;
    for (int k = 0; k < dims(); ++k)
      f = f * static_cast<std::size_t>(axes[k].count) + static_cast<std::size_t>(idx[k]);
    return f;
  }

  void coords_of(std::size_t flat, std::span<double> out) const {
    for (int k = dims() - 1; k >= 0; --k) {
      const auto nk = static_cast<std::size_t>(axes[k].count);
      out[k] = axes[k].coord(static_cast<int>(flat % nk));
      flat /= nk;
    }
  }

  bool operator==(const GridSpec& o) const {
    if (n != o.n || axes.size() != o.axes.size()) return false;
    for (std::size_t k = 0; k < axes.size(); ++k)
      if (axes[k].half_width != o.axes[k].half_width || axes[k].count != o.axes[k].count ||
          axes[k].staggered != o.axes[k].staggered)
        return false;
    return true;
  }
};

struct GridFunction {
  GridSpec spec;
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(GridSpec s) : spec(std::move(s)), values(spec.size(), 0.0) {}
  GridFunction(GridSpec s, std::vector<double> v) : spec(std::move(s)), values(std::move(v)) {
    if (values.size() != spec.size())
      throw std::invalid_argument("GridFunction: value count does not match spec");
  }
};

inline GridFunction sample(const TestFunction& f, const GridSpec& spec) {
  if (f.dims() != spec.dims())
    throw std::invalid_argument("sample: function/grid dimension mismatch");
  GridFunction out(spec);
  std::vector<double> x(spec.dims());
  for (std::size_t j = 0; j < out.values.size(); ++j) {
    spec.coords_of(j, x);
    out.values[j] = f(std::span<const double>(x));
  }
  return out;
}

// (sum |v|^p h^dims)^{1/p} with pairwise reduction in flat index order.
inline double lp_norm(const GridFunction& g, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: requires p >= 1");
  std::vector<double> terms(g.values.size());
  for (std::size_t j = 0; j < g.values.size(); ++j) {
    const double a = std::abs(g.values[j]);
    terms[j] = a == 0.0 ? 0.0 : pospow(a, p);
  }
  const double total = pairwise_sum(terms) * g.spec.cell_volume();
  return std::pow(total, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Serialization: one JSON header line {n, L, N, staggered} followed by the
// values as little-endian 8-byte reals in layout order. L is a number for
// isotropic boxes, otherwise the per-axis list.
// ---------------------------------------------------------------------------

inline void write_grid_function(std::ostream& os, const GridFunction& g) {
  nlohmann::ordered_json header;
  header["n"] = g.spec.n;
  if (g.spec.isotropic()) {
    header["L"] = g.spec.axes.front().half_width;
  } else {
    std::vector<double> ls;
    for (const auto& a : g.spec.axes) ls.push_back(a.half_width);
    header["L"] = ls;
  }
  header["N"] = g.spec.nodes_per_axis();
  header["staggered"] = g.spec.staggered();
  if (g.spec.n == 0) header["dims"] = g.spec.dims();
  os << header.dump() << '\n';
  static_assert(sizeof(double) == 8);
  std::vector<char> buf(g.values.size() * 8);
  std::memcpy(buf.data(), g.values.data(), buf.size());
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t j = 0; j < buf.size(); j += 8)
      std::reverse(buf.begin() + j, buf.begin() + j + 8);
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

inline void write_grid_function(const std::string& path, const GridFunction& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_grid_function: cannot open " + path);
  write_grid_function(os, g);
  if (!os) throw std::runtime_error("write_grid_function: write failed for " + path);
}

inline GridFunction read_grid_function(std::istream& is) {
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("read_grid_function: missing header line");
  const auto header = nlohmann::json::parse(line);
  const int n = header.at("n").get<int>();
  const int N = header.at("N").get<int>();
  const bool stag = header.at("staggered").get<bool>();
  std::vector<Axis> axes;
  const int dims = n > 0 ? 2 * n + 1 : header.at("dims").get<int>();
  if (header.at("L").is_array()) {
    for (const auto& l : header.at("L")) axes.emplace_back(l.get<double>(), N, stag);
    if (static_cast<int>(axes.size()) != dims)
      throw std::runtime_error("read_grid_function: axis count mismatch");
  } else {
    axes.assign(dims, Axis(header.at("L").get<double>(), N, stag));
  }
  GridSpec spec(n, std::move(axes));
  std::vector<double> values(spec.size());
  std::vector<char> buf(values.size() * 8);
  is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (is.gcount() != static_cast<std::streamsize>(buf.size()))
    throw std::runtime_error("read_grid_function: truncated payload");
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t j = 0; j < buf.size(); j += 8)
      std::reverse(buf.begin() + j, buf.begin() + j + 8);
  std::memcpy(values.data(), buf.data(), buf.size());
  return GridFunction(std::move(spec), std::move(values));
}

inline GridFunction read_grid_function(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_grid_function: cannot open " + path);
  return read_grid_function(is);
}

}  // namespace hg

#endif
