#include "bt/projector.hpp"

#include <stdexcept>

namespace bt {

void FormalSignedSum::add(const SubgroupSymbol& sym, long long coeff) {
  if (coeff == 0) return;
  auto& c = terms[sym];
  c += coeff;
  if (c == 0) terms.erase(sym);
}

std::string to_string(const FormalSignedSum& e) {
  std::string s;
  for (const auto& [sym, c] : e.terms) {
    if (!s.empty()) s += " ";
    s += (c > 0 ? "+" : "") + std::to_string(c) + "*G[" + to_string(sym.cell) + "," + to_string(sym.depth) +
         (sym.strict ? "+" : "") + "]";
  }
  return s.empty() ? "0" : s;
}

FormalSignedSum formal_projector(const Arrangement& arr, const SubComplex& sigma, const Q& r) {
  if (r < Q(0) || !is_integral(r * Q(arr.level())))
    throw std::invalid_argument("depth " + to_string(r) + " is not in (1/m)Z>=0");
  if (sigma.empty()) throw std::invalid_argument("empty subcomplex");
  if (!is_convex(arr, sigma)) throw std::invalid_argument("subcomplex is not convex");
  FormalSignedSum e;
  for (const auto& c : sigma) e.add({c, r, true}, dim_sign(c));
  return e;
}

long long euler_sum(const std::vector<Polysimplex>& cells) {
  long long s = 0;
  for (const auto& c : cells) s += dim_sign(c);
  return s;
}

TelescopeResult telescope_partition(const Arrangement& arr, const Point& x, const Q& s,
                                    const SubComplex& sigma_prime, const SubComplex& sigma) {
  if (!arr.is_vertex(x)) return {false, "x is not a vertex", {}};
  Retraction ret(arr, x, s);
  return telescope_partition(arr, ret, sigma_prime, sigma);
}

TelescopeResult telescope_partition(const Arrangement& arr, Retraction& ret, const SubComplex& sigma_prime,
                                    const SubComplex& sigma) {
  const Point& x = ret.x();
  const Q& s = ret.s();
  TelescopeResult res;
  auto fail = [&](std::string why) {
    res.ok = false;
    res.failure = std::move(why);
    return res;
  };
  if (!arr.is_vertex(x)) return fail("x is not a vertex");
  if (!contains(sigma_prime, arr.cell_at(x))) return fail("x not in inner complex");
  for (const auto& c : sigma_prime)
    if (!contains(sigma, c)) return fail("inner complex not contained in outer: " + to_string(c));
  if (!is_convex(arr, sigma_prime)) return fail("inner complex not convex");
  if (!is_convex(arr, sigma)) return fail("outer complex not convex");
  for (const auto& c : upsilon(arr, x, s))
    if (!contains(sigma_prime, c)) return fail("upsilon chamber outside inner complex: " + to_string(c));

  std::map<Polysimplex, SubComplex> fibres;
  for (const auto& c : sigma)
    if (!contains(sigma_prime, c)) fibres[ret(c)].push_back(c);
  res.ok = true;
  for (auto& [lo, cells] : fibres) {
    TelescopeClass cls;
    cls.sigma_p = lo;
    cls.cells = normalize(cells);
    cls.euler = euler_sum(cls.cells);
    try {
      cls.sigma_pp = max_polysimplex(arr, x, s, lo);
      cls.is_interval = interval(arr, lo, cls.sigma_pp) == cls.cells;
    } catch (const std::exception& e) {
      res.classes.push_back(cls);
      return fail(std::string("no maximal cell: ") + e.what());
    }
    res.classes.push_back(cls);
    if (!cls.is_interval) return fail("fibre over " + to_string(lo) + " is not an interval");
    if (cls.sigma_pp == lo) return fail("degenerate interval at " + to_string(lo));
    if (cls.euler != 0) return fail("nonzero Euler sum over " + to_string(lo));
  }
  return res;
}

FormalSignedSum reduce_against(const Arrangement& arr, const FormalSignedSum& e, const Point& x, const Q& r,
                               const Q& s) {
  if (s < Q(0)) throw std::invalid_argument("s must be nonnegative");
  FormalSignedSum out;
  for (const auto& [sym, c] : e.terms) {
    if (sym.depth != r) throw std::invalid_argument("symbol depth differs from r");
    out.add({min_face(arr, x, s, sym.cell), sym.depth, sym.strict}, c);
  }
  return out;
}

FormalSignedSum reduce_against(Retraction& ret, const FormalSignedSum& e, const Q& r) {
  FormalSignedSum out;
  for (const auto& [sym, c] : e.terms) {
    if (sym.depth != r) throw std::invalid_argument("symbol depth differs from r");
    out.add({ret(sym.cell), sym.depth, sym.strict}, c);
  }
  return out;
}

bool rootwise_criterion(const Arrangement& arr, const Polysimplex& tau, const Polysimplex& tau_p, const Point& x,
                        const Q& s) {
  Point bt = tau.barycenter(), bp = tau_p.barycenter();
  for (size_t r : arr.spec().cell_roots) {
    auto prog = arr.refined(r);
    // Constants with psi(tau) > 0 and psi(tau_p) <= 0 form a finite window.
    Q lo = -arr.root_value(r, bt), hi = -arr.root_value(r, bp);
    for (Q c = prog.least_above(lo); c <= hi; c += prog.step)
      if (arr.root_value(r, x) + c <= s) return false;
  }
  return true;
}

}  // namespace bt
