#include <doctest.h>

#include <cmath>

#include "calgraph/metrics.hpp"
#include "test_helpers.hpp"

using namespace calgraph;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("path metric on the unit line: sigma = 1/sqrt(2), tight slack") {
  auto w = testutil::make_window("z1", 10);
  auto m = construct_path_metric(w);

  for (int i = 0; i < w->size(); ++i) {
    auto nbrs = w->neighbors_of(i);
    for (size_t k = 0; k < nbrs.size(); ++k) {
      CHECK(m.sigma_sq(i, int(k)) == 0.5);
      CHECK(m.sigma(i, int(k)) == doctest::Approx(1.0 / std::sqrt(2.0)));
    }
  }
  CHECK(m.jump_size() == doctest::Approx(1.0 / std::sqrt(2.0)));

  for (int i = 0; i < w->size(); ++i) {
    const int n = w->coords_of(i)[0];
    CHECK(m.rho(i) ==
          doctest::Approx(std::abs(n) / std::sqrt(2.0)).epsilon(1e-12));
  }

  auto slack = verify_intrinsic(m);
  CHECK(slack.admissible);
  CHECK(slack.min_slack == 0.0);  // exactly tight: 2 * (1/2) = 1 = m
}

TEST_CASE("uniform sigma = 1 on the unit line is inadmissible") {
  auto w = testutil::make_window("z1", 6);
  auto m = metric_with_uniform_sigma(w, 1.0);
  auto slack = verify_intrinsic(m);
  CHECK_FALSE(slack.admissible);
  for (int i = 0; i < w->size(); ++i)
    if (w->is_interior(i)) CHECK(slack.slack[i] == -1.0);
}

TEST_CASE("normalized z2: sigma = 1 and rho is the graph distance") {
  auto w = testutil::make_window("z2n", 6);
  auto m = construct_path_metric(w);
  CHECK(m.jump_size() == 1.0);
  for (int i = 0; i < w->size(); ++i) {
    auto c = w->coords_of(i);
    CHECK(m.rho(i) == double(std::abs(c[0]) + std::abs(c[1])));
  }
  CHECK(verify_intrinsic(m).min_slack == 0.0);
}

TEST_CASE("constructed metric is admissible on every family") {
  for (const char* fam : {"z1", "z2", "z2n", "wline1", "wline2", "star4"}) {
    auto w = testutil::make_window(fam, 6);
    auto slack = verify_intrinsic(construct_path_metric(w));
    CHECK(slack.min_slack >= -1e-12);
  }
}

TEST_CASE("weighted line: sigma shrinks along the line, slack stays >= 0") {
  auto w = testutil::make_window("wline1", 12);
  auto m = construct_path_metric(w);
  // oracle: sigma^2 on edge (n,n+1) = min over endpoints of m/D
  auto D = [](int n) {
    return (1.0 + std::abs(n - 1)) + (1.0 + std::abs(n));
  };
  for (int n = 0; n <= 8; ++n) {
    int i = *w->find(pack_coords(std::vector<int>{n}));
    auto nbrs = w->neighbors_of(i);
    for (size_t k = 0; k < nbrs.size(); ++k) {
      int y = w->coords_of(nbrs[k].idx)[0];
      double expect = std::min(1.0 / D(n), 1.0 / D(y));
      CHECK(m.sigma_sq(i, int(k)) == doctest::Approx(expect).epsilon(1e-15));
    }
  }
  // sigma decreases outward
  int i2 = *w->find(pack_coords(std::vector<int>{2}));
  int i7 = *w->find(pack_coords(std::vector<int>{7}));
  CHECK(m.sigma(i7, 0) < m.sigma(i2, 0));
  CHECK(verify_intrinsic(m).min_slack >= -1e-12);
}

TEST_CASE("balls: center, line radius 1, z2 radius 2 against a BFS count") {
  auto w = testutil::make_window("z1", 10);
  auto m = construct_path_metric(w);
  auto b0 = m.ball(0.0);
  REQUIRE(b0.size() == 1);
  CHECK(w->id_of(b0[0]) == w->base_id());

  auto b1 = m.ball(1.0);  // rho = |n|/sqrt2 <= 1  <=>  |n| <= 1.41
  CHECK(b1.size() == 3);

  auto w2 = testutil::make_window("z2n", 6);
  auto m2 = construct_path_metric(w2);
  CHECK(m2.ball(2.0).size() == 13);  // graph-distance ball, BFS oracle count

  CHECK_THROWS_AS(m2.ball(100.0), CoverageError);
}

TEST_CASE("balls nest and measures grow") {
  auto w = testutil::make_window("z2", 8);
  auto m = construct_path_metric(w);
  double prev = -1.0;
  std::vector<int> prev_ball;
  for (double R : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    auto b = m.ball(R);
    CHECK(std::includes(b.begin(), b.end(), prev_ball.begin(),
                        prev_ball.end()));
    double mb = m.ball_measure(R);
    CHECK(mb >= prev);
    prev = mb;
    prev_ball = b;
  }
}

TEST_CASE("cutoff: plateau, ramp, support, Lipschitz bound") {
  auto w = testutil::make_window("z1", 40);
  auto m = metric_with_uniform_sigma(w, 1.0);  // rho(n) = |n|
  const double R = 10.0;
  auto cut = cutoff_eta(m, R);
  CHECK(cut.eta[w->base_index()] == 1.0);
  CHECK(cut.eta[*w->find(pack_coords(std::vector<int>{10}))] == 1.0);
  CHECK(cut.eta[*w->find(pack_coords(std::vector<int>{15}))] == 0.5);
  CHECK(cut.eta[*w->find(pack_coords(std::vector<int>{20}))] == 0.0);
  CHECK(cut.eta[*w->find(pack_coords(std::vector<int>{25}))] == 0.0);
  CHECK(cut.max_lipschitz_violation <= 1e-12);
}

TEST_CASE("cutoff Lipschitz bound holds edgewise on every family") {
  for (const char* fam : {"z1", "z2", "z2n", "wline2"}) {
    auto w = testutil::make_window(fam, 12);
    auto m = construct_path_metric(w);
    const double R = m.coverage_radius() / 4.0;
    REQUIRE(R > 0.0);
    auto cut = cutoff_eta(m, R);
    CHECK(cut.max_lipschitz_violation <= 1e-12);
    for (int i = 0; i < w->size(); ++i) {
      CHECK(cut.eta[i] >= 0.0);
      CHECK(cut.eta[i] <= 1.0);
      if (m.rho(i) <= R) CHECK(cut.eta[i] == 1.0);
      if (m.rho(i) >= 2.0 * R) CHECK(cut.eta[i] == 0.0);
    }
  }
}

TEST_CASE("cutoff coverage precondition") {
  auto w = testutil::make_window("z1", 8);
  auto m = construct_path_metric(w);
  CHECK_THROWS_AS(cutoff_eta(m, m.coverage_radius()), CoverageError);
}

TEST_CASE("volume growth: line ~ R, plane ~ R^2, star saturates") {
  std::vector<double> radii{4, 8, 16, 32};

  auto wl = testutil::make_window("z1", 64);
  auto ml = construct_path_metric(wl);
  auto fl = fit_volume_exponent(ml, radii);
  // ball-count oracle: |B_R| = 2 floor(R sqrt 2) + 1
  for (size_t i = 0; i < radii.size(); ++i) {
    double expect = 2.0 * std::floor(radii[i] * std::sqrt(2.0)) + 1.0;
    CHECK(fl.measures[i] == expect);
  }
  CHECK(fl.alpha_hat > 0.8);
  CHECK(fl.alpha_hat < 1.2);

  auto wp = testutil::make_window("z2n", 40);
  auto mp = construct_path_metric(wp);
  auto fp = fit_volume_exponent(mp, radii);
  for (size_t i = 0; i < radii.size(); ++i) {
    double R = radii[i];
    CHECK(fp.measures[i] == 4.0 * (2.0 * R * R + 2.0 * R + 1.0));
  }
  CHECK(fp.alpha_hat > 1.8);
  CHECK(fp.alpha_hat < 2.2);

  auto ws = testutil::make_window("star4", 2);
  auto ms = construct_path_metric(ws);
  auto fs = fit_volume_exponent(ms, std::vector<double>{2, 4, 8, 16});
  for (double mass : fs.measures) CHECK(mass == 5.0);
  CHECK(std::abs(fs.alpha_hat) <= 1e-12);
}

TEST_SUITE_END();
