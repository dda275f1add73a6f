#include "bt/steinberg.hpp"

#include <map>
#include <stdexcept>

namespace bt::steinberg {

namespace {

long long md(long long v, long long q) { return ((v % q) + q) % q; }

void require_prime(long long q) {
  if (q < 2) throw std::invalid_argument("q must be prime");
  for (long long d = 2; d * d <= q; ++d)
    if (q % d == 0) throw std::invalid_argument("q must be prime");
}

long long inv_mod(long long a, long long q) {
  long long r = 1, b = md(a, q), e = q - 2;
  while (e > 0) {
    if (e & 1) r = r * b % q;
    b = b * b % q;
    e >>= 1;
  }
  return r;
}

// Points of P^1: x in [0,q) is [x:1], q is [1:0].
long long act(long long q, const FMat& g, long long pt) {
  long long x = pt == q ? 1 : pt, y = pt == q ? 0 : 1;
  long long nx = md(g.a * x + g.b * y, q), ny = md(g.c * x + g.d * y, q);
  if (ny == 0) return q;
  return nx * inv_mod(ny, q) % q;
}

FMat fmul(long long q, const FMat& x, const FMat& y) {
  return {md(x.a * y.a + x.b * y.c, q), md(x.a * y.b + x.b * y.d, q), md(x.c * y.a + x.d * y.c, q),
          md(x.c * y.b + x.d * y.d, q)};
}

FMat finv(long long q, const FMat& x) { return {x.d, md(-x.b, q), md(-x.c, q), x.a}; }

long long det(long long q, const FMat& g) { return md(g.a * g.d - g.b * g.c, q); }

}  // namespace

std::vector<FMat> sl2_elements(long long q) {
  require_prime(q);
  std::vector<FMat> out;
  for (long long a = 0; a < q; ++a)
    for (long long b = 0; b < q; ++b)
      for (long long c = 0; c < q; ++c)
        for (long long d = 0; d < q; ++d)
          if (md(a * d - b * c, q) == 1) out.push_back({a, b, c, d});
  return out;
}

long long steinberg_character(long long q, const FMat& g) {
  require_prime(q);
  if (det(q, g) != 1) throw std::invalid_argument("determinant is not 1");
  long long fixed = 0;
  for (long long pt = 0; pt <= q; ++pt) fixed += act(q, g, pt) == pt ? 1 : 0;
  return fixed - 1;
}

long long unipotent_count(long long q) {
  long long n = 0;
  for (const auto& g : sl2_elements(q)) n += (g.a == 1 && g.d == 1 && g.c == 0) ? 1 : 0;
  return n;
}

CharacterReport character_checks(long long q) {
  CharacterReport rep;
  auto g = sl2_elements(q);
  rep.order = static_cast<long long>(g.size());
  rep.value_at_one = steinberg_character(q, {1, 0, 0, 1});
  if (rep.value_at_one != unipotent_count(q)) {
    rep.pass = false;
    rep.witness = "value at identity";
  }
  for (const auto& x : g) {
    long long chi = steinberg_character(q, x);
    rep.sum_of_squares += chi * chi;
    bool one = x.a == 1 && x.b == 0 && x.c == 0 && x.d == 1;
    FMat m{md(x.a - 1, q), x.b, x.c, md(x.d - 1, q)};
    FMat sq = fmul(q, m, m);
    bool unipotent = sq.a == 0 && sq.b == 0 && sq.c == 0 && sq.d == 0;
    if (unipotent && !one) {
      ++rep.unipotents_checked;
      if (chi != 0) {
        rep.pass = false;
        rep.witness = "nonzero value on a unipotent element";
      }
    }
  }
  if (rep.sum_of_squares != rep.order) {
    rep.pass = false;
    rep.witness = "sum of squares differs from the group order";
  }
  return rep;
}

HeckeReport hecke_sign_action(long long q) {
  HeckeReport rep;
  auto g = sl2_elements(q);
  std::vector<FMat> borel;
  for (const auto& x : g)
    if (x.c == 0) borel.push_back(x);
  long long npts = q + 1;
  // B-orbits on the projective line.
  std::vector<long long> orbit(static_cast<size_t>(npts), -1);
  long long norbits = 0;
  for (long long pt = 0; pt < npts; ++pt) {
    if (orbit[static_cast<size_t>(pt)] >= 0) continue;
    for (const auto& b : borel) orbit[static_cast<size_t>(act(q, b, pt))] = norbits;
    ++norbits;
  }
  // Invariant functions are constant on orbits; the sum-zero condition cuts one dimension.
  rep.invariant_dim = norbits - 1;
  if (rep.invariant_dim != 1) {
    rep.pass = false;
    rep.witness = "invariant subspace has dimension " + std::to_string(rep.invariant_dim);
    return rep;
  }
  std::vector<long long> size(static_cast<size_t>(norbits), 0);
  for (long long pt = 0; pt < npts; ++pt) ++size[static_cast<size_t>(orbit[static_cast<size_t>(pt)])];
  // v = |O1| on O0 and -|O0| on O1 sums to zero.
  std::vector<Q> v(static_cast<size_t>(npts));
  for (long long pt = 0; pt < npts; ++pt)
    v[static_cast<size_t>(pt)] = orbit[static_cast<size_t>(pt)] == 0 ? Q(size[1]) : Q(-size[0]);

  auto hecke = [&](bool reflection) {
    std::vector<Q> out(static_cast<size_t>(npts), Q(0));
    long long count = 0;
    for (const auto& x : g) {
      bool in_b = x.c == 0;
      if (in_b == reflection) continue;
      ++count;
      FMat xi = finv(q, x);
      for (long long pt = 0; pt < npts; ++pt) out[static_cast<size_t>(pt)] += v[static_cast<size_t>(act(q, xi, pt))];
    }
    for (auto& c : out) c /= Q(static_cast<long long>(borel.size()));
    return std::make_pair(out, count);
  };
  auto eigen = [&](const std::vector<Q>& w, Q& lambda) {
    lambda = w[0] / v[0];
    for (size_t i = 0; i < w.size(); ++i)
      if (w[i] != lambda * v[i]) return false;
    return true;
  };
  auto [h1, n1] = hecke(false);
  auto [hs, ns] = hecke(true);
  rep.reflection_cosets = ns / static_cast<long long>(borel.size());
  if (!eigen(h1, rep.eigen_identity) || !eigen(hs, rep.eigen_reflection)) {
    rep.pass = false;
    rep.witness = "invariant vector is not an eigenvector";
    return rep;
  }
  rep.pass = rep.eigen_identity == Q(1) && rep.eigen_reflection == Q(-1) && rep.reflection_cosets == q &&
             n1 == static_cast<long long>(borel.size());
  if (!rep.pass) rep.witness = "unexpected Hecke eigenvalues";
  return rep;
}

IndexReport unipotent_index_identity(long long p, long long n, const Polysimplex& cell) {
  sl2::PadicContext k(p);
  sl2::GroupSpec iplus{Q(1, 2), Q(0), true};
  IndexReport rep;
  rep.index = sl2::subgroup_index(k, iplus, sl2::cell_group(cell, Q(0), true), n);
  // The reductive quotient is SL2(F_p) at a vertex and the torus on a chamber.
  rep.expected = cell.dim == 0 ? unipotent_count(p) : 1;
  rep.pass = rep.index == rep.expected;
  return rep;
}

DepthZeroReport depth_zero_comparison(long long p, long long n, const ClassFunction& f, const SubComplex& sigma) {
  sl2::PadicContext k(p);
  sl2::GroupSpec iplus{Q(1, 2), Q(0), true};
  sl2::GroupSpec kernel{Q(1, 2), Q(n), false};
  for (const auto& g : f.reps)
    if (!sl2::member_group(k, g, iplus)) throw std::invalid_argument("test function not supported in I+");
  DepthZeroReport rep;
  long long iplus_index = sl2::subgroup_index(k, iplus, kernel, n);
  for (const auto& c : sigma) {
    auto gs = sl2::cell_group(c, Q(0), true);
    // Both sides need K inside G_{c,0+}.
    if (!sl2::contains_level(gs, kernel.t, n)) throw std::invalid_argument("cell too far from the base chamber");
    long long cell_index = sl2::subgroup_index(k, gs, kernel, n + 1);
    long long u = c.dim == 0 ? unipotent_count(p) : 1;
    Q hit(0);
    for (size_t j = 0; j < f.reps.size(); ++j)
      if (sl2::member_group(k, f.reps[j], gs)) hit += Q(f.weights[j]);
    rep.projector_side += Q(dim_sign(c)) * hit / Q(cell_index);
    rep.unipotent_side += Q(dim_sign(c) * u) * hit / Q(iplus_index);
  }
  rep.pass = rep.projector_side == rep.unipotent_side;
  return rep;
}

std::vector<ClassFunction> sample_class_functions(long long p, long long n, int count, std::mt19937_64& rng) {
  sl2::PadicContext k(p);
  sl2::GroupSpec iplus{Q(1, 2), Q(0), true};
  std::vector<ClassFunction> out;
  out.push_back({});
  ClassFunction all;
  for (const auto& g : sl2::enumerate_group(k, iplus, n)) {
    all.reps.push_back(g);
    all.weights.push_back(1);
  }
  out.push_back(all);
  out.push_back({{sl2::identity(k)}, {1}});
  std::uniform_int_distribution<long long> w(-3, 3), len(1, 4);
  while (static_cast<int>(out.size()) < count) {
    ClassFunction f;
    for (long long i = len(rng); i > 0; --i) {
      f.reps.push_back(sl2::random_element(k, iplus, rng));
      f.weights.push_back(w(rng));
    }
    out.push_back(f);
  }
  return out;
}

}  // namespace bt::steinberg
