#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "test_helpers.hpp"

using namespace calgraph;

TEST_SUITE_BEGIN("graph");

TEST_CASE("z1 window: hops 2 gives {-3..3} with boundary {-3,3}") {
  auto w = testutil::make_window("z1", 2);
  REQUIRE(w->size() == 7);
  std::set<int> interior, boundary;
  for (int i = 0; i < w->size(); ++i) {
    int coord = w->coords_of(i)[0];
    (w->is_interior(i) ? interior : boundary).insert(coord);
  }
  CHECK(interior == std::set<int>{-2, -1, 0, 1, 2});
  CHECK(boundary == std::set<int>{-3, 3});
}

TEST_CASE("star window: one hop materializes the whole graph as interior") {
  auto w = testutil::make_window("star4", 1);
  CHECK(w->size() == 5);
  CHECK(w->interior_size() == 5);
}

TEST_CASE("z2 window hops 1 matches a coordinate-grid BFS oracle") {
  // oracle: enumerate |a|+|b| <= 2 directly
  std::set<std::pair<int, int>> expected, expected_interior;
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      if (std::abs(a) + std::abs(b) <= 2) expected.insert({a, b});
      if (std::abs(a) + std::abs(b) <= 1) expected_interior.insert({a, b});
    }
  }
  REQUIRE(expected.size() == 13);
  REQUIRE(expected_interior.size() == 5);

  auto w = testutil::make_window("z2", 1);
  REQUIRE(w->size() == 13);
  std::set<std::pair<int, int>> got, got_interior;
  for (int i = 0; i < w->size(); ++i) {
    auto c = w->coords_of(i);
    got.insert({c[0], c[1]});
    if (w->is_interior(i)) got_interior.insert({c[0], c[1]});
  }
  CHECK(got == expected);
  CHECK(got_interior == expected_interior);
}

TEST_CASE("validate_graph: clean window has no violations") {
  auto w = testutil::make_window("z1", 3);
  CHECK(validate_graph(*w).empty());
}

TEST_CASE("validate_graph: injected asymmetry and zero measure are reported") {
  // 3-vertex path 0-1-2 assembled by hand
  std::vector<VertexId> ids = {0, 1, 2};
  std::vector<int> depths = {1, 0, 1};
  std::vector<std::vector<std::pair<VertexId, double>>> adj = {
      {{1, 1.0}},
      {{0, 1.0}, {2, 1.0}},
      {{1, 1.0}},
  };

  SUBCASE("valid parts validate cleanly") {
    auto w = GraphWindow::from_parts(ids, {1, 1, 1}, depths, 1, adj);
    CHECK(validate_graph(*w).empty());
  }

  SUBCASE("asymmetric weight") {
    auto bad = adj;
    bad[0][0].second = 2.0;  // w_01 = 2 but w_10 = 1
    auto w = GraphWindow::from_parts(ids, {1, 1, 1}, depths, 1, bad);
    auto v = validate_graph(*w);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == "symmetry");
  }

  SUBCASE("zero measure") {
    auto w = GraphWindow::from_parts(ids, {1, 0, 1}, depths, 1, adj);
    auto v = validate_graph(*w);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == "positivity");
  }
}

TEST_CASE("build_window rejects an asymmetric provider") {
  struct Asym : GraphProvider {
    std::vector<Edge> neighbors(VertexId x) const override {
      if (x == 0) return {{1, 1.0}};
      if (x == 1) return {{0, 2.0}};
      return {};
    }
    double measure(VertexId) const override { return 1.0; }
    VertexId base() const override { return 0; }
    std::string family_id() const override { return "asym"; }
  };
  CHECK_THROWS_AS(build_window(std::make_shared<Asym>(), 0, 1),
                  StructuralError);
}

TEST_CASE("weighted degree: unit line, normalized wrap, weighted line") {
  auto z1 = testutil::make_window("z1", 4);
  CHECK(weighted_degree(*z1, 0) == 2.0);

  auto z2n = testutil::make_window("z2n", 3);
  for (int i = 0; i < z2n->size(); ++i)
    CHECK(weighted_degree(*z2n, z2n->id_of(i)) == doctest::Approx(1.0).epsilon(1e-15));

  // w_{n,n+1} = (1+|n|): direct-summation oracle, growing along |n|
  auto wl = testutil::make_window("wline1", 8);
  auto deg_oracle = [](int n) {
    auto w_edge = [](int left) { return 1.0 + std::abs(left); };
    return w_edge(n - 1) + w_edge(n);
  };
  double prev = 0.0;
  for (int n = 0; n <= 6; ++n) {
    auto idx = wl->find(pack_coords(std::vector<int>{n}));
    REQUIRE(idx.has_value());
    double deg = weighted_degree(*wl, wl->id_of(*idx));
    CHECK(deg == doctest::Approx(deg_oracle(n)).epsilon(1e-14));
    if (n >= 1) CHECK(deg > prev);
    prev = deg;
  }
  CHECK(degree_summary(*wl).max_degree > 10.0);
}

TEST_CASE("generate: lattice neighbor counts and normalized wrap") {
  auto z2 = generate(parse_family("z2"));
  CHECK(z2->neighbors(z2->base()).size() == 4);

  auto wrapped = wrap_normalized(z2);
  CHECK(wrapped->measure(wrapped->base()) == 4.0);

  // unbounded degree family
  auto wl2 = generate(parse_family("wline2"));
  auto w = build_window(wl2, wl2->base(), 20);
  double deg_far = weighted_degree(*w, pack_coords(std::vector<int>{15}));
  double deg_near = weighted_degree(*w, pack_coords(std::vector<int>{1}));
  CHECK(deg_far > 100.0);
  CHECK(deg_far > deg_near);
}

TEST_CASE("property: sampled edges are exactly symmetric in every family") {
  for (const char* fam : {"z1", "z2", "z2n", "wline2", "star4"}) {
    auto w = testutil::make_window(fam, 3);
    for (int i = 0; i < w->size(); ++i) {
      for (const auto& e : w->neighbors_of(i)) {
        bool found = false;
        for (const auto& r : w->neighbors_of(e.idx))
          if (r.idx == i && r.weight == e.weight) found = true;
        CHECK(found);
      }
    }
  }
}

TEST_CASE("property: build_window is idempotent in content") {
  auto p = generate(parse_family("z2"));
  auto a = build_window(p, p->base(), 3);
  auto b = build_window(p, p->base(), 3);
  REQUIRE(a->size() == b->size());
  for (int i = 0; i < a->size(); ++i) {
    CHECK(a->id_of(i) == b->id_of(i));
    CHECK(a->measure_of(i) == b->measure_of(i));
    CHECK(a->depth_of(i) == b->depth_of(i));
    auto na = a->neighbors_of(i);
    auto nb = b->neighbors_of(i);
    REQUIRE(na.size() == nb.size());
    for (size_t k = 0; k < na.size(); ++k) {
      CHECK(na[k].idx == nb[k].idx);
      CHECK(na[k].weight == nb[k].weight);
    }
  }
}

TEST_CASE("property: interior closure against the provider") {
  for (const char* fam : {"z1", "z2", "wline1"}) {
    auto p = generate(parse_family(fam));
    auto w = build_window(p, p->base(), 3);
    for (int i = 0; i < w->size(); ++i) {
      if (!w->is_interior(i)) continue;
      auto full = p->neighbors(w->id_of(i));
      REQUIRE(full.size() == w->neighbors_of(i).size());
      for (const auto& e : full) {
        auto j = w->find(e.to);
        REQUIRE(j.has_value());
        bool found = false;
        for (const auto& n : w->neighbors_of(i))
          if (n.idx == *j && n.weight == e.weight) found = true;
        CHECK(found);
      }
    }
  }
}

TEST_CASE("property: normalized wrap has weighted degree exactly 1") {
  for (const char* fam : {"z1n", "z2n"}) {
    auto w = testutil::make_window(fam, 3);
    for (int i = 0; i < w->size(); ++i)
      CHECK(weighted_degree(*w, w->id_of(i)) == 1.0);
  }
}

TEST_CASE("coordinate packing is injective and invertible") {
  for (int a = -5; a <= 5; ++a)
    for (int b = -5; b <= 5; ++b) {
      auto id = pack_coords(std::vector<int>{a, b});
      auto back = unpack_coords(id, 2);
      CHECK(back[0] == a);
      CHECK(back[1] == b);
    }
}

TEST_SUITE_END();
