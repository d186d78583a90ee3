#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <sstream>

#include "hg/grid.hpp"
#include "hg/rng.hpp"

using namespace hg;
using Catch::Approx;

TEST_CASE("axis node placement") {
  const Axis plain(2.0, 4, false);
  CHECK(plain.step() == 1.0);
  CHECK(plain.coord(0) == -2.0);
  CHECK(plain.coord(3) == 1.0);
  const Axis stag(2.0, 4, true);
  CHECK(stag.coord(0) == -1.5);
  CHECK(stag.coord(3) == 1.5);
  CHECK_THROWS_AS(Axis(0.0, 4, false), std::invalid_argument);
  CHECK_THROWS_AS(Axis(1.0, 1, false), std::invalid_argument);
}

TEST_CASE("grid spec shapes and layout") {
  const GridSpec g = GridSpec::group(1, 6.0, 17, false);
  CHECK(g.dims() == 3);
  CHECK(g.size() == 17u * 17u * 17u);
  CHECK(g.cell_volume() == Approx(std::pow(12.0 / 17.0, 3)).epsilon(1e-15));

  std::vector<double> c(3);
  const int idx[3] = {1, 2, 3};
  const std::size_t flat = g.flat_index(std::span<const int>(idx, 3));
  CHECK(flat == (1u * 17u + 2u) * 17u + 3u);
  g.coords_of(flat, c);
  CHECK(c[0] == g.axes[0].coord(1));
  CHECK(c[1] == g.axes[1].coord(2));
  CHECK(c[2] == g.axes[2].coord(3));

  const GridSpec dil = g.dilated(DilationSpec::zygmund(2.0, 2.0));
  CHECK(dil.axes[0].half_width == 12.0);
  CHECK(dil.axes[1].half_width == 12.0);
  CHECK(dil.axes[2].half_width == 24.0);
  CHECK_FALSE(dil.isotropic());
}

TEST_CASE("sampling closed-form inputs") {
  const GridSpec g = GridSpec::group(1, 2.0, 4, false);
  const GridFunction zero = sample(TestFunction::zero(3), g);
  for (double v : zero.values) CHECK(v == 0.0);

  // box covering the whole grid: all ones
  const GridFunction ones =
      sample(TestFunction::box(GroupPoint(-2, -2, -2), {4.1, 4.1, 4.1}), g);
  for (double v : ones.values) CHECK(v == 1.0);

  // gaussian centered at the origin evaluates to exp(0) = 1 at the origin node
  const GridSpec stag = GridSpec::group(1, 2.0, 5, true);  // odd staggered grid hits 0
  CHECK(stag.axes[0].coord(2) == 0.0);
  const GridFunction gf = sample(TestFunction::gaussian(origin(1), 1, 1, 1), stag);
  CHECK(gf.values[(2 * 5 + 2) * 5 + 2] == 1.0);
}

TEST_CASE("lp norm oracles") {
  // all ones over a box of volume V: ||f||_p = V^{1/p}
  const GridSpec g = GridSpec::group(1, 1.0, 4, false);
  GridFunction ones(g);
  for (auto& v : ones.values) v = 1.0;
  CHECK(lp_norm(ones, 3.0) == Approx(std::pow(8.0, 1.0 / 3.0)).epsilon(1e-14));

  // two cells of volume 0.5 with values (1, 1): l2 norm 1
  GridFunction two(GridSpec(0, {Axis(0.5, 2, false)}));
  two.values = {1.0, 1.0};
  CHECK(two.spec.cell_volume() == 0.5);
  CHECK(lp_norm(two, 2.0) == Approx(1.0).epsilon(1e-15));

  // gaussian exp(-pi |x|^2) on R^3: ||f||_2 = 2^{-3/4}
  const GridSpec fine = GridSpec::group(1, 6.0, 64, false);
  const GridFunction gf = sample(TestFunction::gaussian(origin(1), 1, 1, 1), fine);
  CHECK(lp_norm(gf, 2.0) == Approx(0.5946035575013605).margin(1e-4));

  CHECK_THROWS_AS(lp_norm(ones, 0.5), std::invalid_argument);
}

TEST_CASE("nonnegative combination keeps sampling linear") {
  const GridSpec g = GridSpec::group(1, 3.0, 6, false);
  const TestFunction f = TestFunction::gaussian(origin(1), 1, 2, 1);
  const TestFunction h = TestFunction::box(GroupPoint(-1, -1, -1), {2, 2, 2});
  const TestFunction sum = TestFunction::weighted_sum(2.0, f, 3.0, h);
  const GridFunction sf = sample(f, g), sh = sample(h, g), ss = sample(sum, g);
  for (std::size_t i = 0; i < ss.values.size(); ++i)
    CHECK(ss.values[i] == Approx(2.0 * sf.values[i] + 3.0 * sh.values[i]).margin(1e-15));
}

TEST_CASE("serialization round trip") {
  CounterRng rng(11);
  GridFunction g(GridSpec::group(1, 6.0, 5, true));
  for (auto& v : g.values) v = rng.uniform(-10.0, 10.0);

  std::stringstream ss;
  write_grid_function(ss, g);
  const std::string blob = ss.str();
  // header is a single JSON line; payload is 8 bytes per node
  const auto nl = blob.find('\n');
  REQUIRE(nl != std::string::npos);
  CHECK(blob.size() - nl - 1 == g.values.size() * 8);
  CHECK(nlohmann::json::parse(blob.substr(0, nl)).at("N").get<int>() == 5);

  std::stringstream in(blob);
  const GridFunction back = read_grid_function(in);
  CHECK(back.spec == g.spec);
  CHECK(back.values == g.values);

  // anisotropic boxes carry per-axis half-widths
  GridFunction ga(GridSpec::group_widths(1, 6.0, 6.0, 24.0, 4, false));
  for (auto& v : ga.values) v = rng.uniform(-1.0, 1.0);
  std::stringstream sa;
  write_grid_function(sa, ga);
  const GridFunction backa = read_grid_function(sa);
  CHECK(backa.spec == ga.spec);
  CHECK(backa.values == ga.values);
}

TEST_CASE("serialization rejects truncated payloads") {
  GridFunction g(GridSpec::group(1, 1.0, 2, false));
  std::stringstream ss;
  write_grid_function(ss, g);
  std::string blob = ss.str();
  blob.resize(blob.size() - 4);
  std::stringstream in(blob);
  CHECK_THROWS_AS(read_grid_function(in), std::runtime_error);
}
