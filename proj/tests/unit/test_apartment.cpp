#include "helpers.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace bt;
using namespace testing_helpers;

namespace {

// Independent enumerator: a cell is a sign vector, one (floor, on-wall) pair per positive root
// on the (1/m) grid. Sampling a fine lattice hits every cell when the walls have small denominators.
size_t brute_force_cells(const RootSystemSpec& spec, int m, long long lo, long long hi, long long fine) {
  std::set<std::vector<long long>> seen;
  for (long long i = lo * fine; i <= hi * fine; ++i)
    for (long long j = lo * fine; j <= hi * fine; ++j) {
      Point x = {Q(i, fine), Q(j, fine)};
      std::vector<long long> key;
      for (size_t r = 0; r < spec.roots.size(); r += 2) {
        Q v = Q(m) * (Q(spec.roots[r][0]) * x[0] + Q(spec.roots[r][1]) * x[1]);
        key.push_back(floor_q(v));
        key.push_back(is_integral(v));
      }
      seen.insert(key);
    }
  return seen.size();
}

Window square(Q lo, Q hi) { return Window{{{lo, hi}, {lo, hi}}}; }

}  // namespace

TEST_CASE("A1 cell counts on small windows") {
  Apartment a(make_root_system("A1"), 1, Window{{{Q(-2), Q(2)}}});
  CHECK(a.cells().size() == 9);
  CHECK(a.vertices().size() == 5);
  CHECK(a.chambers().size() == 4);

  Apartment b(make_root_system("A1"), 2, Window{{{Q(0), Q(1)}}});
  CHECK(b.cells().size() == 5);
  std::vector<Point> vs;
  for (const auto& v : b.vertices()) vs.push_back(v.vertices[0]);
  CHECK(vs == std::vector<Point>{{Q(0)}, {Q(1, 2)}, {Q(1)}});
}

TEST_CASE("rank two cell counts match a sign-vector enumerator") {
  // 25 vertices, 56 edges, 32 triangles for A2 on [-2,2]^2.
  Apartment a2(make_root_system("A2"), 1, square(Q(-2), Q(2)));
  CHECK(a2.cells().size() == 113);
  CHECK(a2.cells().size() == brute_force_cells(make_root_system("A2"), 1, -2, 2, 12));

  for (const std::string name : {"A2", "C2", "A1xA1"}) {
    CAPTURE(name);
    for (int m : {1, 2}) {
      CAPTURE(m);
      Apartment apt(make_root_system(name), m, square(Q(-1), Q(1)));
      CHECK(apt.cells().size() == brute_force_cells(make_root_system(name), m, -1, 1, 12 * m));
    }
  }
}

TEST_CASE("faces") {
  Arrangement a1(make_root_system("A1"), 1);
  auto f = a1.faces(edge(a1, Q(0), Q(1)));
  CHECK(f == std::vector<Polysimplex>{vertex(a1, Q(0)), edge(a1, Q(0), Q(1)), vertex(a1, Q(1))});
  CHECK(a1.faces(vertex(a1, Q(0))).size() == 1);

  Apartment a2(make_root_system("A2"), 1, square(Q(-1), Q(1)));
  for (const auto& c : a2.chambers()) {
    auto fs = a2.faces(c);
    REQUIRE(fs.size() == 7);
    int by_dim[3] = {0, 0, 0};
    for (const auto& x : fs) ++by_dim[x.dim];
    CHECK(by_dim[0] == 3);
    CHECK(by_dim[1] == 3);
    CHECK(by_dim[2] == 1);
  }
}

TEST_CASE("simple affine roots of A1 chambers") {
  Arrangement a1(make_root_system("A1"), 1);
  auto w = a1.simple_affine_roots(edge(a1, Q(0), Q(1)));
  CHECK(w == std::vector<AffineFunctional>{{{-1}, Q(1)}, {{1}, Q(0)}});

  Arrangement h(make_root_system("A1"), 2);
  auto w2 = h.simple_affine_roots(edge(h, Q(0), Q(1, 2)));
  CHECK(w2 == std::vector<AffineFunctional>{{{-1}, Q(1, 2)}, {{1}, Q(0)}});
}

TEST_CASE("simple affine roots of the A2 alcove by wall search") {
  Arrangement a2(make_root_system("A2"), 1);
  auto alcove = a2.make_cell({{Q(0), Q(0)}, {Q(1), Q(0)}, {Q(0), Q(1)}});
  REQUIRE(alcove.dim == 2);
  std::set<AffineFunctional> expected;
  Point b = alcove.barycenter();
  for (const auto& root : a2.spec().roots)
    for (long long c = -3; c <= 3; ++c) {
      AffineFunctional psi{root, Q(c)};
      int zeros = 0;
      for (const auto& v : alcove.vertices) zeros += psi(v) == Q(0);
      if (zeros == 2 && psi(b) > Q(0)) expected.insert(psi);
    }
  auto got = a2.simple_affine_roots(alcove);
  CHECK(got.size() == 3);
  CHECK(std::set<AffineFunctional>(got.begin(), got.end()) == expected);
}

TEST_CASE("partition of unity") {
  Arrangement a1(make_root_system("A1"), 1);
  auto u = a1.partition_of_unity(edge(a1, Q(0), Q(1)));
  REQUIRE(u.size() == 2);
  CHECK(u[0].second == Q(1));
  CHECK(u[1].second == Q(1));

  Arrangement h(make_root_system("A1"), 2);
  auto u2 = h.partition_of_unity(edge(h, Q(0), Q(1, 2)));
  REQUIRE(u2.size() == 2);
  CHECK(u2[0].second == Q(2));
  CHECK(u2[1].second == Q(2));

  // The sum is an affine function, so it is 1 everywhere once it is 1 at random points.
  std::mt19937_64 rng(7);
  for (const std::string name : {"A2", "C2", "G2", "A1xA1"}) {
    CAPTURE(name);
    Apartment apt(make_root_system(name), 1, square(Q(-1), Q(1)));
    for (const auto& c : apt.chambers()) {
      auto pu = apt.partition_of_unity(c);
      for (int k = 0; k < 3; ++k) {
        Point x = {Q(static_cast<long long>(rng() % 41) - 20, 7), Q(static_cast<long long>(rng() % 41) - 20, 11)};
        Q total(0);
        for (const auto& [psi, coeff] : pu) {
          CHECK(coeff > Q(0));
          total += coeff * psi(x);
        }
        CHECK(total == Q(1));
      }
    }
  }
}

TEST_CASE("locate") {
  Apartment a1(make_root_system("A1"), 1, Window{{{Q(-2), Q(2)}}});
  CHECK(a1.locate({Q(1, 3)}) == edge(a1.arrangement(), Q(0), Q(1)));
  CHECK(a1.locate({Q(1)}) == vertex(a1.arrangement(), Q(1)));
  CHECK_THROWS(a1.locate({Q(3)}));

  Apartment a2(make_root_system("A2"), 1, square(Q(-2), Q(2)));
  for (const auto& c : a2.chambers()) CHECK(a2.locate(c.barycenter()) == c);
}

TEST_CASE("BC1 uses the non-divisible progression") {
  auto bc = make_root_system("BC1", -1);
  CHECK(bc.progressions[0].offset == Q(-1, 4));
  CHECK(bc.progressions[0].step == Q(1, 2));
  CHECK(bc.progressions[2].offset == Q(0));
  CHECK_THROWS(make_root_system("BC1", 1));
  CHECK_THROWS(make_root_system("E8"));
}
