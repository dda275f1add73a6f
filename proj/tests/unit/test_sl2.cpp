#include "bt/sl2.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace bt;
using namespace bt::sl2;
using namespace testing_helpers;

namespace {

Arrangement& a1() {
  static Arrangement arr(make_root_system("A1"), 1);
  return arr;
}

int signed_sum(const PadicContext& k, const SubComplex& sigma, const Q& r, const Mat2& g, bool strict, bool& any) {
  int s = 0;
  any = false;
  for (const auto& c : sigma)
    if (member_group(k, g, cell_group(c, r, strict))) {
      s += dim_sign(c);
      any = true;
    }
  return s;
}

}  // namespace

TEST_CASE("fixed-point p-adic arithmetic") {
  PadicContext k(3);
  auto x = k.from_rational(Q(5, 9));
  CHECK(k.val(x) == -2);
  CHECK(k.mul(x, k.from_int(9)) == k.from_int(5));
  CHECK(k.mul(k.inv(k.from_int(7)), k.from_int(7)) == k.one());
  CHECK(k.val(k.zero()) >= k.precision());
  CHECK(k.add(x, k.neg(x)) == k.zero());
  CHECK_THROWS(k.from_rational(Q(1, 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3)));
}

TEST_CASE("group membership") {
  PadicContext k(3);
  Mat2 g = upper(k, k.pow_p(-1));
  CHECK_FALSE(member_group(k, g, {Q(0), Q(0), false}));
  CHECK(member_group(k, g, {Q(1), Q(0), false}));
  for (Q t : {Q(0), Q(1, 2), Q(-3, 2)})
    for (Q r : {Q(0), Q(1, 2), Q(2)})
      for (bool strict : {false, true}) CHECK(member_group(k, identity(k), {t, r, strict}));
}

TEST_CASE("Iwahori factorization") {
  PadicContext k(3);
  Padic p = k.from_int(3);
  Mat2 g{k.one(), p, p, k.add(k.one(), k.mul(p, p))};
  auto f = iwahori_factor(k, g);
  CHECK(f.m == p);
  CHECK(f.a == k.one());
  CHECK(f.n == p);
  CHECK(from_factors(k, f) == g);
  auto id = iwahori_factor(k, identity(k));
  CHECK(id.m == k.zero());
  CHECK(id.a == k.one());
  CHECK(id.n == k.zero());

  std::mt19937_64 rng(8);
  GroupSpec s{Q(1, 2), Q(0), true};
  for (int i = 0; i < 300; ++i) {
    Mat2 h = random_element(k, s, rng);
    REQUIRE(det_is_one(k, h));
    REQUIRE(member_group(k, h, s));
    auto fh = iwahori_factor(k, h);
    CHECK(k.val(fh.m) >= 1);
    CHECK(k.val(fh.n) >= 0);
    CHECK(k.val(k.sub(fh.a, k.one())) >= 1);
    CHECK(from_factors(k, fh) == h);
  }
}

TEST_CASE("class enumeration is closed under products") {
  PadicContext k(2);
  GroupSpec s{Q(0), Q(0), true};
  auto reps = enumerate_group(k, s, 3);
  CHECK(reps.size() == 64);
  CHECK(reps.size() == predicted_class_count(k, s, 3));
  std::set<std::array<long long, 3>> keys;
  for (const auto& g : reps) keys.insert(class_key(k, g, Q(0), 3));
  CHECK(keys.size() == reps.size());
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    const auto& a = reps[rng() % reps.size()];
    const auto& b = reps[rng() % reps.size()];
    CHECK(keys.count(class_key(k, mul(k, a, b), Q(0), 3)) == 1);
    CHECK(keys.count(class_key(k, inverse(k, a), Q(0), 3)) == 1);
  }
  for (long long n : {2, 3, 4}) CHECK(enumerate_group(k, {Q(0), Q(n - 1), true}, n).size() == 1);

  PadicContext k3(3);
  auto r3 = enumerate_group(k3, {Q(1, 2), Q(0), true}, 3);
  CHECK(r3.size() == predicted_class_count(k3, {Q(1, 2), Q(0), true}, 3));
}

TEST_CASE("uniform convolutions") {
  PadicContext k(3);
  GroupSpec g0{Q(0), Q(0), true};
  CHECK(same_measure(k, convolve_uniform(k, g0, g0, 3), delta(k, g0)));
  GroupSpec g1{Q(0), Q(1), true};
  CHECK(same_measure(k, convolve_uniform(k, g1, g0, 3), delta(k, g0)));
  CHECK(mass(convolve_uniform(k, g0, g1, 3)) == Q(1));

  // edge (1,2) lies in Gamma_s(vertex 2, 0) for s = 0 and s = 1, so both sides agree against G_{0,s+}.
  for (long long s : {0, 1}) {
    GroupSpec target{Q(0), Q(s), true};
    REQUIRE(in_gamma(a1(), vertex(a1(), Q(2)), {Q(0)}, Q(s), edge(a1(), Q(1), Q(2))));
    auto lhs = convolve_uniform(k, cell_group(edge(a1(), Q(1), Q(2)), Q(0)), target, 3);
    auto rhs = convolve_uniform(k, cell_group(vertex(a1(), Q(2)), Q(0)), target, 3);
    CHECK(same_measure(k, lhs, rhs));
  }
  // At s = 2 the wall 2 - t is <= 0 at vertex 2, is 2 at x and is positive on the edge, so the
  // edge leaves Gamma and the convolutions differ: the edge side has entries c of valuation 2.
  GroupSpec deep{Q(0), Q(2), true};
  CHECK_FALSE(in_gamma(a1(), vertex(a1(), Q(2)), {Q(0)}, Q(2), edge(a1(), Q(1), Q(2))));
  CHECK_FALSE(same_measure(k, convolve_uniform(k, cell_group(edge(a1(), Q(1), Q(2)), Q(0)), deep, 3),
                           convolve_uniform(k, cell_group(vertex(a1(), Q(2)), Q(0)), deep, 3)));

  // edge (2,3) is outside Gamma_0(vertex 2, 0): the convolutions differ.
  auto out = convolve_uniform(k, cell_group(edge(a1(), Q(2), Q(3)), Q(0)), g0, 3);
  auto in = convolve_uniform(k, cell_group(vertex(a1(), Q(2)), Q(0)), g0, 3);
  CHECK_FALSE(same_measure(k, out, in));

  CHECK_THROWS(convolve_uniform(k, g0, deep, 2));
}

TEST_CASE("projector fixes delta on convex complexes only") {
  PadicContext k(3);
  GroupSpec g0{Q(0), Q(0), true};
  CHECK(same_measure(k, apply_projector(k, segment(a1(), Q(0), Q(1)), Q(0), g0, 3), delta(k, g0)));
  auto single = apply_projector(k, {vertex(a1(), Q(0))}, Q(0), g0, 3);
  CHECK(same_measure(k, single, convolve_uniform(k, cell_group(vertex(a1(), Q(0)), Q(0)), g0, 3)));

  auto broken = apply_projector(k, {vertex(a1(), Q(0)), vertex(a1(), Q(2))}, Q(0), g0, 3);
  CHECK(mass(broken) == Q(2));
  CHECK_FALSE(same_measure(k, broken, delta(k, g0)));

  PadicContext k2(2);
  GroupSpec g1{Q(0), Q(1), true};
  auto outer = apply_projector(k2, segment(a1(), Q(-2), Q(2)), Q(0), g1, 4);
  auto inner = apply_projector(k2, segment(a1(), Q(-1), Q(1)), Q(0), g1, 4);
  CHECK(same_measure(k2, outer, inner));
  auto e = reduce_against(a1(), formal_projector(a1(), segment(a1(), Q(-2), Q(2)), Q(0)), {Q(0)}, Q(0), Q(1));
  CHECK(same_measure(k2, realize(k2, e, g1, 4), outer));
}

TEST_CASE("r-logarithm") {
  PadicContext k(3);
  Padic b = k.from_rational(Q(4, 3));
  auto x = rlog(k, upper(k, b));
  CHECK(x.e == b);
  CHECK(x.h == k.zero());
  CHECK(x.f == k.zero());
  auto z = rlog(k, identity(k));
  CHECK(z.e == k.zero());
  CHECK(z.h == k.zero());
  CHECK(z.f == k.zero());
  CHECK_THROWS(rlog(PadicContext(2), identity(PadicContext(2))));

  // Bijection on classes: G_{0,0+}/G_{0,3} and g_{0,0+}/g_{0,3} both have 3^6 classes.
  GroupSpec s{Q(0), Q(0), true};
  auto reps = enumerate_group(k, s, 3);
  CHECK(reps.size() == 729);
  std::set<std::array<long long, 3>> images;
  for (const auto& g : reps) {
    auto y = rlog(k, g);
    CHECK(member_lie(k, y, s));
    images.insert(lie_key(k, y, Q(0), 3));
  }
  CHECK(images.size() == 729);
}

TEST_CASE("indicator inclusion-exclusion") {
  PadicContext k(3);
  auto sigma = segment(a1(), Q(0), Q(2));
  bool any = false;
  CHECK(signed_sum(k, sigma, Q(0), weyl(k, 0), false, any) == 1);
  CHECK(signed_sum(k, sigma, Q(0), upper(k, k.pow_p(-2)), false, any) == 1);
  CHECK(signed_sum(k, sigma, Q(0), upper(k, k.pow_p(-1)), false, any) == 1);
  CHECK(signed_sum(k, sigma, Q(0), identity(k), false, any) == 1);
  CHECK(signed_sum(k, sigma, Q(0), upper(k, k.pow_p(-3)), false, any) == 0);
  CHECK_FALSE(any);

  // With the strict groups the identity fails: lower(p) lies in G_{0,0+} and G_{1/2,0+} only.
  CHECK(signed_sum(k, sigma, Q(0), lower(k, k.pow_p(1)), true, any) == 0);
  CHECK(any);

  std::mt19937_64 rng(6);
  Arrangement half(make_root_system("A1"), 2);
  for (auto [arr, r] : std::vector<std::pair<Arrangement*, Q>>{{&a1(), Q(0)}, {&a1(), Q(1)}, {&half, Q(1, 2)}}) {
    auto rep = indicator_euler_check(k, segment(*arr, Q(-1), Q(2)), r, 500, rng);
    CHECK(rep.pass);
    CHECK(rep.in_union > 0);
    CHECK(rep.in_union < rep.samples);
  }
  // Off the grid the identity fails: b of valuation 0 and c of valuation 1 lie in the edge group only.
  Mat2 g{k.one(), k.one(), k.pow_p(1), k.add(k.one(), k.pow_p(1))};
  REQUIRE(det_is_one(k, g));
  CHECK(signed_sum(k, segment(a1(), Q(0), Q(1)), Q(1, 2), g, false, any) == -1);
}
