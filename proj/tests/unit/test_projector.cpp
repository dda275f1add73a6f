#include "bt/projector.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <random>

using namespace bt;
using namespace testing_helpers;

TEST_CASE("formal projector signs") {
  Arrangement a1(make_root_system("A1"), 1);
  auto e0 = formal_projector(a1, {vertex(a1, Q(0))}, Q(0));
  REQUIRE(e0.terms.size() == 1);
  CHECK(e0.terms.begin()->second == 1);

  auto e1 = formal_projector(a1, segment(a1, Q(0), Q(1)), Q(0));
  CHECK(e1.terms.at({vertex(a1, Q(0)), Q(0), true}) == 1);
  CHECK(e1.terms.at({vertex(a1, Q(1)), Q(0), true}) == 1);
  CHECK(e1.terms.at({edge(a1, Q(0), Q(1)), Q(0), true}) == -1);

  Arrangement h(make_root_system("A1"), 2);
  auto e2 = formal_projector(h, segment(h, Q(0), Q(2)), Q(1, 2));
  int pos = 0, neg = 0;
  for (const auto& [sym, c] : e2.terms) (c > 0 ? pos : neg) += 1;
  CHECK(pos == 5);
  CHECK(neg == 4);

  CHECK_THROWS(formal_projector(a1, segment(a1, Q(0), Q(1)), Q(1, 2)));
  CHECK_THROWS(formal_projector(a1, {vertex(a1, Q(0)), vertex(a1, Q(2))}, Q(0)));
}

TEST_CASE("Euler sums") {
  Arrangement a1(make_root_system("A1"), 1);
  CHECK(euler_sum(segment(a1, Q(0), Q(2))) == 1);
  CHECK(euler_sum(interval(a1, vertex(a1, Q(2)), edge(a1, Q(1), Q(2)))) == 0);

  // Convex root boxes in A2 are contractible.
  std::mt19937_64 rng(3);
  for (int m : {1, 2}) {
    Arrangement a2(make_root_system("A2"), m);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Point> pts;
      for (int k = 0; k < 2; ++k)
        pts.push_back({Q(static_cast<long long>(rng() % 7) - 3, m), Q(static_cast<long long>(rng() % 7) - 3, m)});
      auto box = cells_in_root_box(a2, root_bounds(a2, pts));
      REQUIRE(is_convex_by_segments(a2, box));
      CHECK(euler_sum(box) == 1);
    }
  }
}

TEST_CASE("telescoping partitions on A1") {
  Arrangement a1(make_root_system("A1"), 1);
  auto t0 = telescope_partition(a1, {Q(0)}, Q(0), {vertex(a1, Q(0))}, segment(a1, Q(-2), Q(2)));
  REQUIRE(t0.ok);
  CHECK(t0.classes.size() == 4);
  for (const auto& cls : t0.classes) {
    CHECK(cls.cells.size() == 2);
    CHECK(cls.euler == 0);
    CHECK(cls.sigma_p.dim == 0);
    CHECK(cls.sigma_pp.dim == 1);
  }

  auto t1 = telescope_partition(a1, {Q(0)}, Q(1), segment(a1, Q(-1), Q(1)), segment(a1, Q(-3), Q(3)));
  REQUIRE(t1.ok);
  CHECK(t1.classes.size() == 4);
  for (const auto& cls : t1.classes) {
    CHECK(cls.euler == 0);
    // Each outer vertex is paired with the edge pointing back towards 0.
    Q v = cls.sigma_p.vertices[0][0];
    Q inward = v > Q(0) ? v - Q(1) : v + Q(1);
    CHECK(cls.sigma_pp == a1.make_cell({{std::min(v, inward)}, {std::max(v, inward)}}));
  }

  auto same = telescope_partition(a1, {Q(0)}, Q(0), segment(a1, Q(-1), Q(1)), segment(a1, Q(-1), Q(1)));
  CHECK(same.ok);
  CHECK(same.classes.empty());

  // The inner complex must hold every chamber of Upsilon.
  auto bad = telescope_partition(a1, {Q(0)}, Q(2), segment(a1, Q(-1), Q(1)), segment(a1, Q(-3), Q(3)));
  CHECK_FALSE(bad.ok);
}

TEST_CASE("reduction against a deeper subgroup") {
  Arrangement a1(make_root_system("A1"), 1);
  auto e = reduce_against(a1, formal_projector(a1, segment(a1, Q(0), Q(2)), Q(0)), {Q(0)}, Q(0), Q(0));
  REQUIRE(e.terms.size() == 1);
  CHECK(e.terms.begin()->first == SubgroupSymbol{vertex(a1, Q(0)), Q(0), true});
  CHECK(e.terms.begin()->second == 1);

  for (Q s : {Q(0), Q(1), Q(5, 2)}) {
    auto single = formal_projector(a1, {vertex(a1, Q(0))}, Q(0));
    CHECK(reduce_against(a1, single, {Q(0)}, Q(0), s) == single);
  }

  auto outer = reduce_against(a1, formal_projector(a1, segment(a1, Q(-2), Q(2)), Q(0)), {Q(0)}, Q(0), Q(1));
  auto inner = reduce_against(a1, formal_projector(a1, segment(a1, Q(-1), Q(1)), Q(0)), {Q(0)}, Q(0), Q(1));
  CHECK(outer == inner);

  // Too small an inner complex: the reductions differ.
  auto outer2 = reduce_against(a1, formal_projector(a1, segment(a1, Q(-3), Q(3)), Q(0)), {Q(0)}, Q(0), Q(2));
  auto tiny = reduce_against(a1, formal_projector(a1, {vertex(a1, Q(0))}, Q(0)), {Q(0)}, Q(0), Q(2));
  CHECK(outer2 != tiny);
}

TEST_CASE("root-wise criterion matches Gamma") {
  std::mt19937_64 rng(9);
  Arrangement a2(make_root_system("A2"), 1);
  Apartment apt(a2.spec(), 1, Window{{{Q(-2), Q(2)}, {Q(-2), Q(2)}}});
  for (int trial = 0; trial < 200; ++trial) {
    const auto& tau = apt.cells()[rng() % apt.cells().size()];
    auto fs = apt.faces(tau);
    const auto& face = fs[rng() % fs.size()];
    Point x = apt.vertices()[rng() % apt.vertices().size()].vertices[0];
    Q s(static_cast<long long>(rng() % 5), 2);
    CHECK(rootwise_criterion(a2, tau, face, x, s) == in_gamma(a2, face, x, s, tau));
  }
}
