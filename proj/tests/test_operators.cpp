#include <doctest.h>

#include <cmath>

#include "calgraph/operators.hpp"
#include "test_helpers.hpp"

using namespace calgraph;

TEST_SUITE_BEGIN("operators");

TEST_CASE("nabla: constants, coordinate, antisymmetry") {
  auto w = testutil::make_window("z1", 3);
  auto c = VertexFunction(w, 5.0);
  auto x = VertexFunction::from_coords(
      w, [](std::span<const int> co) { return double(co[0]); });
  VertexId v0 = pack_coords(std::vector<int>{0});
  VertexId v1 = pack_coords(std::vector<int>{1});
  CHECK(nabla(c, v0, v1) == 0.0);
  CHECK(nabla(x, v0, v1) == 1.0);
  CHECK(nabla(x, v1, v0) == -1.0);
}

TEST_CASE("product rule holds to 1e-12 on random functions") {
  auto w = testutil::make_window("z2", 3);
  std::mt19937_64 eng(7);
  auto f = testutil::random_function(w, eng);
  auto g = testutil::random_function(w, eng);
  for (int x = 0; x < w->size(); ++x) {
    for (const auto& e : w->neighbors_of(x)) {
      VertexFunction fg(w);
      for (int i = 0; i < w->size(); ++i) fg.set(i, f[i] * g[i]);
      const double lhs = nabla_idx(fg, x, e.idx);
      const double rhs = f[x] * nabla_idx(g, x, e.idx) +
                         g[e.idx] * nabla_idx(f, x, e.idx);
      CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
  }
}

TEST_CASE("laplacian: constants and x^2 on the line") {
  auto w = testutil::make_window("z1", 4);
  auto c = VertexFunction(w, 3.0);
  auto lc = laplacian_apply(c);
  for (int i = 0; i < w->size(); ++i)
    if (w->is_interior(i)) CHECK(lc[i] == 0.0);

  auto x2 = VertexFunction::from_coords(
      w, [](std::span<const int> co) { return double(co[0] * co[0]); });
  auto lx2 = laplacian_apply(x2);
  for (int i = 0; i < w->size(); ++i)
    if (w->is_interior(i)) CHECK(lx2[i] == 2.0);

  CHECK_THROWS_AS((void)lx2[w->index_of(pack_coords(std::vector<int>{5}))],
                  DomainError);
}

TEST_CASE("laplacian on z2 monomials matches a direct stencil oracle") {
  auto w = testutil::make_window("z2", 3);
  auto check_harmonic = [&](auto&& fn) {
    auto f = VertexFunction::from_coords(w, fn);
    // oracle: evaluate the 5-point stencil straight from the lambda
    for (int i = 0; i < w->size(); ++i) {
      if (!w->is_interior(i)) continue;
      auto c = w->coords_of(i);
      const int a = c[0], b = c[1];
      const double oracle =
          fn(std::vector<int>{a + 1, b}) + fn(std::vector<int>{a - 1, b}) +
          fn(std::vector<int>{a, b + 1}) + fn(std::vector<int>{a, b - 1}) -
          4.0 * fn(std::vector<int>{a, b});
      CHECK(laplacian_at(f, i) == doctest::Approx(oracle).epsilon(1e-14));
      CHECK(std::abs(oracle) <= 1e-12);  // harmonic input
    }
  };
  check_harmonic(
      [](std::span<const int> c) { return double(c[0]) * double(c[1]); });
  check_harmonic([](std::span<const int> c) {
    return double(c[0]) * c[0] - double(c[1]) * c[1];
  });
}

TEST_CASE("gamma: constants, slope one, and 2*Gamma = Lap(f^2) - 2 f Lap f") {
  auto w = testutil::make_window("z1", 4);
  auto c = VertexFunction(w, 2.0);
  auto gc = gamma(c);
  for (int i = 0; i < w->size(); ++i)
    if (w->is_interior(i)) CHECK(gc[i] == 0.0);

  auto x = VertexFunction::from_coords(
      w, [](std::span<const int> co) { return double(co[0]); });
  auto gx = gamma(x);
  for (int i = 0; i < w->size(); ++i)
    if (w->is_interior(i)) CHECK(gx[i] == 1.0);

  auto w2 = testutil::make_window("z2n", 3);
  std::mt19937_64 eng(11);
  auto f = testutil::random_function(w2, eng);
  VertexFunction f2(w2);
  for (int i = 0; i < w2->size(); ++i) f2.set(i, f[i] * f[i]);
  for (int i = 0; i < w2->size(); ++i) {
    if (!w2->is_interior(i)) continue;
    const double lhs = 2.0 * gamma_at(f, i);
    const double rhs = laplacian_at(f2, i) - 2.0 * f[i] * laplacian_at(f, i);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("gamma is nonnegative and vanishes only on locally constant data") {
  auto w = testutil::make_window("z2", 3);
  std::mt19937_64 eng(3);
  auto f = testutil::random_function(w, eng);
  for (int i = 0; i < w->size(); ++i)
    if (w->is_interior(i)) CHECK(gamma_at(f, i) >= 0.0);
}

TEST_CASE("green: indicator on the line gives LHS = RHS = 2") {
  auto w = testutil::make_window("z1", 3);
  VertexFunction g(w);
  g.set(w->base_index(), 1.0);
  g.mark_finite_support();
  CHECK(green_identity_residual(g, g) <= 1e-15);

  // both sides are 2: two incident unit edges, Lap 1_0(0) = -2
  double lhs = 0.0;
  for (int x = 0; x < w->size(); ++x)
    for (const auto& e : w->neighbors_of(x))
      lhs += e.weight * (g[e.idx] - g[x]) * (g[e.idx] - g[x]);
  CHECK(lhs * 0.5 == 2.0);
}

TEST_CASE("green: constant f gives zero on both sides") {
  auto w = testutil::make_window("z1", 3);
  auto f = VertexFunction(w, 4.0);
  std::mt19937_64 eng(5);
  auto g = testutil::random_supported(w, w->hops(), eng);
  g.mark_finite_support();
  CHECK(green_identity_residual(f, g) <= 1e-14);
}

TEST_CASE("green residual stays below 1e-10 relative on random input") {
  std::mt19937_64 eng(17);
  for (const char* fam : {"z1", "z2", "z2n", "wline2", "star4"}) {
    auto w = testutil::make_window(fam, 4);
    for (int rep = 0; rep < 5; ++rep) {
      auto f = testutil::random_function(w, eng);
      auto g = testutil::random_supported(w, w->hops(), eng);
      g.mark_finite_support();
      CHECK(green_identity_residual(f, g) <= 1e-10);
    }
  }
}

TEST_CASE("green rejects boundary-supported g") {
  auto w = testutil::make_window("z1", 2);
  VertexFunction g(w);
  for (int i = 0; i < w->size(); ++i)
    if (!w->is_interior(i)) g.set(i, 1.0);
  CHECK_THROWS_AS(g.mark_finite_support(), DomainError);
}

TEST_CASE("divergence: sum of Lap f m vanishes for buffered support") {
  auto w = testutil::make_window("z2", 4);
  std::mt19937_64 eng(23);
  auto f = testutil::random_supported(w, w->hops() - 1, eng);
  double sum = 0.0;
  for (int i = 0; i < w->size(); ++i)
    if (w->is_interior(i)) sum += laplacian_at(f, i) * w->measure_of(i);
  CHECK(std::abs(sum) <= 1e-12);
}

TEST_CASE("time differences: D_t, the square identity, telescoping") {
  auto lin = TimeSeries::from_fn(-10, 0, [](int t) { return double(t); });
  for (int t = -9; t <= 0; ++t) CHECK(dt_difference(lin, t) == 1.0);

  auto cst = TimeSeries::from_fn(-5, 0, [](int) { return 3.0; });
  for (int t = -4; t <= 0; ++t) {
    CHECK(dt_square_defect(cst, t) == 0.0);
    CHECK(dt_difference(cst, t) == 0.0);
  }

  // g = t^2: D_t(g^2) - 2 g D_t g = -(2t-1)^2, and the full defect is 0
  auto sq = TimeSeries::from_fn(-8, 0, [](int t) { return double(t) * t; });
  auto sq2 = TimeSeries::from_fn(-8, 0,
                                 [](int t) { return double(t) * t * t * t; });
  for (int t = -7; t <= 0; ++t) {
    CHECK(dt_square_defect(sq, t) == 0.0);
    const double partial = dt_difference(sq2, t) -
                           2.0 * sq.at(t) * dt_difference(sq, t);
    CHECK(partial == -double(2 * t - 1) * (2 * t - 1));
  }

  CHECK(telescope_check(lin, -5, 0) == 0.0);
  CHECK(lin.at(0) - lin.at(-6) == 6.0);

  std::mt19937_64 eng(29);
  auto rnd = TimeSeries::from_fn(
      -40, 0, [&](int) { return double(int64_t(eng() % 2001)) - 1000.0; });
  for (int t = -39; t <= 0; ++t) CHECK(dt_square_defect(rnd, t) == 0.0);
  CHECK(telescope_check(rnd, -39, 0) == 0.0);
  CHECK(telescope_check(rnd, -7, -7) == 0.0);

  CHECK_THROWS_AS(dt_difference(lin, -10), DomainError);
}

TEST_CASE("pigeonhole index: examples and the mean property") {
  std::vector<double> a{3, 1, 2};
  CHECK(pigeonhole_index(a) == 1);
  std::vector<double> b{5};
  CHECK(pigeonhole_index(b) == 0);
  std::vector<double> c{4, 4, 4};
  CHECK(pigeonhole_index(c) == 0);
  CHECK_THROWS_AS(pigeonhole_index(std::vector<double>{}), DomainError);

  std::mt19937_64 eng(31);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> v;
    const int n = 1 + int(eng() % 20);
    for (int i = 0; i < n; ++i) v.push_back(testutil::uniform_pm1(eng) * 10);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    auto j = pigeonhole_index(v);
    CHECK(v[j] <= mean + 1e-12);
    for (size_t i = 0; i < j; ++i) CHECK(v[i] > mean - 1e-12);
  }
}

TEST_SUITE_END();
