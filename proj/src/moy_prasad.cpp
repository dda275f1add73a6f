#include "bt/moy_prasad.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace bt {

namespace {

Q root_at(const std::vector<int>& a, const Point& x) {
  Q v(0);
  for (size_t i = 0; i < a.size(); ++i) v += Q(a[i]) * x.at(i);
  return v;
}

}  // namespace

FiltrationSpec lattice_spec(const RootSystemSpec& spec, const Point& x, const Q& r, bool strict) {
  if (static_cast<int>(x.size()) != spec.rank) throw std::invalid_argument("point has wrong dimension");
  FiltrationSpec f;
  f.torus = strict ? floor_q(r) + 1 : ceil_q(r);
  for (size_t i = 0; i < spec.roots.size(); ++i) {
    Q bound = r - root_at(spec.roots[i], x);
    const auto& p = spec.progressions[i];
    f.per_root.push_back(strict ? p.least_above(bound) : p.least_at_least(bound));
  }
  return f;
}

FiltrationSpec dual_spec(const RootSystemSpec& spec, const Point& x, const Q& r) {
  auto f = lattice_spec(spec, x, r, true);
  f.torus = 1 - f.torus;
  for (auto& c : f.per_root) c = Q(1) - c;
  return f;
}

bool member(const FiltrationSpec& f, const ValuationVector& v) {
  if (v.per_root.size() != f.per_root.size()) throw std::invalid_argument("valuation vector has wrong length");
  if (v.torus && Q(*v.torus) < Q(f.torus)) return false;
  for (size_t i = 0; i < f.per_root.size(); ++i)
    if (v.per_root[i] && Q(*v.per_root[i]) < f.per_root[i]) return false;
  return true;
}

SubComplex region(const Apartment& apt, const ValuationVector& v, const Q& r, RegionKind kind) {
  const auto& spec = apt.arrangement().spec();
  SubComplex out;
  for (const auto& c : apt.cells()) {
    Point b = c.barycenter();
    auto f = kind == RegionKind::lattice ? lattice_spec(spec, b, r, false) : dual_spec(spec, b, r);
    if (member(f, v)) out.push_back(c);
  }
  return out;
}

std::vector<Q> jump_radii(const RootSystemSpec& spec, const Point& x) {
  std::set<Q> out = {Q(0)};
  for (size_t i = 0; i < spec.roots.size(); ++i) {
    const auto& p = spec.progressions[i];
    // c_i(r) jumps where r - alpha(x) crosses the progression.
    Progression shifted{p.offset + root_at(spec.roots[i], x), p.step};
    for (Q t = shifted.least_at_least(Q(0)); t < Q(1); t += shifted.step) out.insert(t);
  }
  return {out.begin(), out.end()};
}

std::string to_json_string(const FiltrationSpec& f, const RootSystemSpec& spec) {
  std::string s = "{\"torus\": " + std::to_string(f.torus) + ", \"roots\": {";
  for (size_t i = 0; i < f.per_root.size(); ++i) {
    std::string name;
    for (size_t k = 0; k < spec.roots[i].size(); ++k) name += (k ? "," : "") + std::to_string(spec.roots[i][k]);
    s += (i ? ", " : "") + std::string("\"(") + name + ")\": \"" + to_string(f.per_root[i]) + "\"";
  }
  return s + "}}";
}

Su3Thresholds su3_thresholds(const Q& x, const Q& r, int delta) {
  if (delta != 0 && delta != -1) throw std::invalid_argument("delta must be 0 or -1");
  Su3Thresholds t;
  Progression even{Q(delta), Q(2)}, odd{Q(delta + 1), Q(2)};
  t.alpha_raw = Q(2) * r - Q(2) * x;
  t.alpha = even.least_at_least(t.alpha_raw);
  t.double_raw = r - Q(2) * x;
  t.double_root = odd.least_at_least(t.double_raw);
  t.pair_a = r - x - Q(delta, 2);
  t.pair_b = r - Q(2) * x;
  return t;
}

}  // namespace bt
