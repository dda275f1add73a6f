#include "bt/sl2.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bt::sl2 {

namespace {

using i128 = __int128;

long long mod_pos(i128 v, long long m) {
  i128 r = v % m;
  if (r < 0) r += m;
  return static_cast<long long>(r);
}

bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

long long primitive_root(long long p) {
  if (p == 2) return 1;
  for (long long g = 2; g < p; ++g) {
    long long x = 1;
    bool ok = true;
    for (long long e = 1; e < p - 1; ++e) {
      x = x * g % p;
      if (x == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root");
}

std::uniform_int_distribution<long long> upto(long long n) { return std::uniform_int_distribution<long long>(0, n - 1); }

}  // namespace

PadicContext::PadicContext(long long p, int shift) : p_(p), S_(shift) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  pows_.push_back(1);
  const long long cap = 1LL << 62;
  while (static_cast<i128>(pows_.back()) * p < cap) pows_.push_back(pows_.back() * p);
  L_ = static_cast<int>(pows_.size()) - 1;
  mod_ = pows_[L_];
  if (L_ <= S_ + 4) throw std::invalid_argument("prime too large for the fixed-point ring");
}

Padic PadicContext::from_int(long long v) const { return {mod_pos(static_cast<i128>(v) * pows_[S_], mod_)}; }

long long PadicContext::inverse_mod(long long a, int k) const {
  i128 m = pows_.at(k);
  i128 old_r = mod_pos(a, pows_[k]), r = m, old_s = 1, s = 0;
  while (r != 0) {
    i128 q = old_r / r;
    i128 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw std::invalid_argument("not a unit");
  return mod_pos(old_s, pows_[k]);
}

Padic PadicContext::from_rational(const Q& q) const {
  long long num = q.numerator(), den = q.denominator();
  int e = 0;
  while (den % p_ == 0) {
    den /= p_;
    ++e;
  }
  if (e > S_) throw std::invalid_argument("valuation below the fixed-point floor");
  i128 v = static_cast<i128>(mod_pos(num, mod_)) * pows_[S_ - e] % mod_;
  v = v * inverse_mod(den, L_) % mod_;
  return {static_cast<long long>(v)};
}

Padic PadicContext::pow_p(int k) const {
  if (k < -S_) throw std::invalid_argument("valuation below the fixed-point floor");
  if (k + S_ >= L_) return zero();
  return {pows_[k + S_]};
}

Padic PadicContext::add(Padic x, Padic y) const { return {(x.n + y.n) % mod_}; }
Padic PadicContext::sub(Padic x, Padic y) const { return {mod_pos(static_cast<i128>(x.n) - y.n, mod_)}; }
Padic PadicContext::neg(Padic x) const { return {x.n == 0 ? 0 : mod_ - x.n}; }

Padic PadicContext::mul(Padic x, Padic y) const {
  i128 prod = static_cast<i128>(x.n) * y.n;
  if (prod % pows_[S_] != 0) throw std::range_error("product valuation below the fixed-point floor");
  return {static_cast<long long>((prod / pows_[S_]) % mod_)};
}

Padic PadicContext::inv(Padic x) const {
  int v = val(x);
  if (v == kInf) throw std::domain_error("inverse of zero");
  if (v > S_) throw std::range_error("inverse valuation below the fixed-point floor");
  long long u = x.n / pows_[v + S_];
  i128 r = static_cast<i128>(pows_[S_ - v]) * inverse_mod(u, L_) % mod_;
  return {static_cast<long long>(r)};
}

int PadicContext::val(Padic x) const {
  if (x.n == 0) return kInf;
  int v = 0;
  long long n = x.n;
  while (n % p_ == 0) {
    n /= p_;
    ++v;
  }
  return v - S_;
}

long long PadicContext::residue(Padic x, int k) const {
  int e = k + S_;
  if (e <= 0) return 0;
  if (e > L_) throw std::range_error("residue beyond working precision");
  return x.n % pows_[e];
}

std::string PadicContext::to_string(Padic x) const {
  if (x.n == 0) return "0";
  int v = val(x);
  int drop = std::min(S_, v + S_);
  long long num = x.n / pows_[drop];
  long long den = pows_[S_ - drop];
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Mat2 identity(const PadicContext& k) { return {k.one(), k.zero(), k.zero(), k.one()}; }

Mat2 mul(const PadicContext& k, const Mat2& x, const Mat2& y) {
  return {k.add(k.mul(x.a, y.a), k.mul(x.b, y.c)), k.add(k.mul(x.a, y.b), k.mul(x.b, y.d)),
          k.add(k.mul(x.c, y.a), k.mul(x.d, y.c)), k.add(k.mul(x.c, y.b), k.mul(x.d, y.d))};
}

Mat2 inverse(const PadicContext& k, const Mat2& x) { return {x.d, k.neg(x.b), k.neg(x.c), x.a}; }

Padic det(const PadicContext& k, const Mat2& x) { return k.sub(k.mul(x.a, x.d), k.mul(x.b, x.c)); }

bool det_is_one(const PadicContext& k, const Mat2& x) {
  return k.val(k.sub(det(k, x), k.one())) >= k.precision() / 2;
}

Mat2 upper(const PadicContext& k, Padic x) { return {k.one(), x, k.zero(), k.one()}; }
Mat2 lower(const PadicContext& k, Padic x) { return {k.one(), k.zero(), x, k.one()}; }
Mat2 diag(const PadicContext& k, Padic x) { return {x, k.zero(), k.zero(), k.inv(x)}; }
Mat2 weyl(const PadicContext& k, int t) { return {k.zero(), k.pow_p(-t), k.neg(k.pow_p(t)), k.zero()}; }

std::string to_string(const PadicContext& k, const Mat2& g) {
  return "[[" + k.to_string(g.a) + "," + k.to_string(g.b) + "],[" + k.to_string(g.c) + "," + k.to_string(g.d) + "]]";
}

std::string to_string(const GroupSpec& s) {
  return "G(" + to_string(s.t) + "," + to_string(s.r) + (s.strict ? "+" : "") + ")";
}

bool member_group(const PadicContext& k, const Mat2& g, const GroupSpec& s) {
  long long bt = s.b_th(), ct = s.c_th(), tt = s.torus_th();
  if (std::max({bt, ct, tt}) >= k.precision()) throw std::range_error("threshold beyond working precision");
  if (k.val(g.b) < bt || k.val(g.c) < ct) return false;
  if (tt <= 0) return k.val(g.a) >= 0 && k.val(g.d) >= 0;
  return k.val(k.sub(g.a, k.one())) >= tt && k.val(k.sub(g.d, k.one())) >= tt;
}

bool contains_level(const GroupSpec& s, const Q& t, long long level) {
  return ceil_q(Q(level) - t) >= s.b_th() && ceil_q(Q(level) + t) >= s.c_th() && level >= s.torus_th();
}

IwahoriFactors iwahori_factor(const PadicContext& k, const Mat2& g) {
  if (k.val(g.a) != 0) throw std::invalid_argument("upper-left entry is not a unit: " + to_string(k, g));
  Padic ai = k.inv(g.a);
  return {k.mul(g.c, ai), g.a, k.mul(g.b, ai)};
}

Mat2 from_factors(const PadicContext& k, const IwahoriFactors& f) {
  return mul(k, mul(k, lower(k, f.m), diag(k, f.a)), upper(k, f.n));
}

std::vector<Mat2> generators(const PadicContext& k, const GroupSpec& s) {
  std::vector<Mat2> g;
  g.push_back(upper(k, k.pow_p(static_cast<int>(s.b_th()))));
  g.push_back(lower(k, k.pow_p(static_cast<int>(s.c_th()))));
  long long tt = s.torus_th();
  if (tt >= 1) {
    g.push_back(diag(k, k.add(k.one(), k.pow_p(static_cast<int>(tt)))));
    if (k.p() == 2 && tt == 1) g.push_back(diag(k, k.from_int(-1)));
  } else {
    if (k.p() > 2) g.push_back(diag(k, k.from_int(primitive_root(k.p()))));
    g.push_back(diag(k, k.from_int(1 + k.p())));
    g.push_back(diag(k, k.from_int(-1)));
  }
  return g;
}

Mat2 random_element(const PadicContext& k, const GroupSpec& s, std::mt19937_64& rng) {
  const long long span = k.pow(6);
  auto draw = upto(span);
  Padic m = k.mul(k.pow_p(static_cast<int>(s.c_th())), k.from_int(draw(rng)));
  Padic n = k.mul(k.pow_p(static_cast<int>(s.b_th())), k.from_int(draw(rng)));
  long long tt = s.torus_th();
  Padic a;
  if (tt >= 1) {
    a = k.add(k.one(), k.mul(k.pow_p(static_cast<int>(tt)), k.from_int(draw(rng))));
    if (k.p() == 2 && tt == 1 && (rng() & 1)) a = k.neg(a);
  } else {
    long long u;
    do u = draw(rng);
    while (u % k.p() == 0);
    a = k.from_int(u);
  }
  Mat2 g = from_factors(k, {m, a, n});
  // Vertex parahorics also contain the affine reflection through t.
  if (tt <= 0 && is_integral(s.t) && (rng() & 1)) g = mul(k, g, weyl(k, static_cast<int>(s.t.numerator())));
  return g;
}

std::array<long long, 3> class_key(const PadicContext& k, const Mat2& g, const Q& t, long long level) {
  auto f = iwahori_factor(k, g);
  int cl = static_cast<int>(ceil_q(Q(level) + t)), bl = static_cast<int>(ceil_q(Q(level) - t));
  return {k.residue(f.m, cl), k.residue(f.a, static_cast<int>(level)), k.residue(f.n, bl)};
}

size_t predicted_class_count(const PadicContext& k, const GroupSpec& s, long long level) {
  long long cl = ceil_q(Q(level) + s.t), bl = ceil_q(Q(level) - s.t);
  long long e = std::max(0LL, cl - s.c_th()) + std::max(0LL, bl - s.b_th()) + std::max(0LL, level - s.torus_th());
  size_t n = 1;
  for (long long i = 0; i < e; ++i) {
    if (n > (size_t(1) << 40)) return n;
    n *= static_cast<size_t>(k.p());
  }
  return n;
}

std::vector<Mat2> enumerate_group(const PadicContext& k, const GroupSpec& s, long long level, size_t budget) {
  long long tt = s.torus_th();
  if (tt < 1) throw std::invalid_argument("depth-zero parahorics are not enumerated: " + to_string(s));
  size_t count = predicted_class_count(k, s, level);
  if (count > budget) throw BudgetExceeded("enumeration of " + to_string(s) + " needs " + std::to_string(count));
  long long cl = ceil_q(Q(level) + s.t), bl = ceil_q(Q(level) - s.t);
  auto range = [&](long long th, long long lim) { return th >= lim ? 1LL : k.pow(static_cast<int>(lim - th)); };
  long long nm = range(s.c_th(), cl), nn = range(s.b_th(), bl), na = range(tt, level);
  Padic pm = k.pow_p(static_cast<int>(s.c_th())), pn = k.pow_p(static_cast<int>(s.b_th()));
  Padic pa = k.pow_p(static_cast<int>(tt));
  std::vector<Mat2> out;
  out.reserve(count);
  for (long long i = 0; i < nm; ++i)
    for (long long j = 0; j < na; ++j)
      for (long long l = 0; l < nn; ++l)
        out.push_back(from_factors(
            k, {k.mul(pm, k.from_int(i)), k.add(k.one(), k.mul(pa, k.from_int(j))), k.mul(pn, k.from_int(l))}));
  return out;
}

long long subgroup_index(const PadicContext& k, const GroupSpec& big, const GroupSpec& small, long long level) {
  if (!contains_level(small, big.t, level)) throw std::invalid_argument("level too coarse for the smaller group");
  auto reps = enumerate_group(k, big, level);
  long long inside = 0;
  for (const auto& g : reps) inside += member_group(k, g, small) ? 1 : 0;
  if (inside == 0 || static_cast<long long>(reps.size()) % inside != 0)
    throw std::logic_error("class count is not a multiple of the subgroup count");
  return static_cast<long long>(reps.size()) / inside;
}

bool same_coset(const PadicContext& k, const GroupSpec& right, const Mat2& g, const Mat2& h) {
  return member_group(k, mul(k, inverse(k, g), h), right);
}

TruncatedMeasure delta(const PadicContext& k, const GroupSpec& b) { return {b, {identity(k)}, {Q(1)}}; }

void check_faithful(const GroupSpec& b, long long n) {
  if (!contains_level(b, Q(0), n))
    throw std::invalid_argument("precision N=" + std::to_string(n) + " too small for " + to_string(b));
}

TruncatedMeasure convolve_uniform(const PadicContext& k, const GroupSpec& a, const GroupSpec& b, long long n,
                                  size_t budget) {
  check_faithful(b, n);
  auto gens = generators(k, a);
  std::vector<Mat2> orbit = {identity(k)};
  for (size_t i = 0; i < orbit.size(); ++i) {
    for (const auto& s : gens) {
      Mat2 h = mul(k, s, orbit[i]);
      bool seen = false;
      for (const auto& o : orbit)
        if (same_coset(k, b, o, h)) {
          seen = true;
          break;
        }
      if (!seen) {
        orbit.push_back(h);
        if (orbit.size() > budget) throw BudgetExceeded("orbit of " + to_string(b) + " under " + to_string(a));
      }
    }
  }
  Q w(1, static_cast<long long>(orbit.size()));
  return {b, orbit, std::vector<Q>(orbit.size(), w)};
}

TruncatedMeasure combine(const PadicContext& k, const GroupSpec& right,
                         const std::vector<std::pair<long long, TruncatedMeasure>>& terms) {
  TruncatedMeasure out{right, {}, {}};
  for (const auto& [coeff, m] : terms) {
    if (!(m.right == right)) throw std::invalid_argument("measures with different right groups");
    for (size_t i = 0; i < m.reps.size(); ++i) {
      bool merged = false;
      for (size_t j = 0; j < out.reps.size(); ++j)
        if (same_coset(k, right, out.reps[j], m.reps[i])) {
          out.weights[j] += Q(coeff) * m.weights[i];
          merged = true;
          break;
        }
      if (!merged) {
        out.reps.push_back(m.reps[i]);
        out.weights.push_back(Q(coeff) * m.weights[i]);
      }
    }
  }
  TruncatedMeasure pruned{right, {}, {}};
  for (size_t j = 0; j < out.reps.size(); ++j)
    if (out.weights[j] != Q(0)) {
      pruned.reps.push_back(out.reps[j]);
      pruned.weights.push_back(out.weights[j]);
    }
  return pruned;
}

bool same_measure(const PadicContext& k, const TruncatedMeasure& x, const TruncatedMeasure& y) {
  if (!(x.right == y.right)) return false;
  return combine(k, x.right, {{1, x}, {-1, y}}).reps.empty();
}

Q mass(const TruncatedMeasure& m) {
  Q s(0);
  for (const auto& w : m.weights) s += w;
  return s;
}

Q measure_of_coset(const PadicContext& k, const TruncatedMeasure& m, const Mat2& g) {
  Q s(0);
  for (size_t i = 0; i < m.reps.size(); ++i)
    if (same_coset(k, m.right, m.reps[i], g)) s += m.weights[i];
  return s;
}

GroupSpec cell_group(const Polysimplex& cell, const Q& r, bool strict) {
  if (cell.vertices.empty() || cell.vertices[0].size() != 1) throw std::invalid_argument("not a cell of the SL2 apartment");
  return {cell.barycenter()[0], r, strict};
}

TruncatedMeasure apply_projector(const PadicContext& k, const SubComplex& sigma, const Q& r, const GroupSpec& target,
                                 long long n) {
  std::vector<std::pair<long long, TruncatedMeasure>> terms;
  for (const auto& c : sigma) terms.emplace_back(dim_sign(c), convolve_uniform(k, cell_group(c, r), target, n));
  return combine(k, target, terms);
}

TruncatedMeasure realize(const PadicContext& k, const FormalSignedSum& e, const GroupSpec& target, long long n) {
  std::vector<std::pair<long long, TruncatedMeasure>> terms;
  for (const auto& [sym, c] : e.terms)
    terms.emplace_back(c, convolve_uniform(k, cell_group(sym.cell, sym.depth, sym.strict), target, n));
  return combine(k, target, terms);
}

LieElt rlog(const PadicContext& k, const Mat2& g) {
  if (k.p() == 2) throw std::invalid_argument("rlog needs p != 2");
  Padic half = k.inv(k.from_int(2));
  return {g.b, k.mul(k.sub(g.a, g.d), half), g.c};
}

bool member_lie(const PadicContext& k, const LieElt& x, const GroupSpec& s) {
  return k.val(x.e) >= s.b_th() && k.val(x.f) >= s.c_th() && k.val(x.h) >= std::max(0LL, s.torus_th());
}

std::array<long long, 3> lie_key(const PadicContext& k, const LieElt& x, const Q& t, long long level) {
  int cl = static_cast<int>(ceil_q(Q(level) + t)), bl = static_cast<int>(ceil_q(Q(level) - t));
  return {k.residue(x.f, cl), k.residue(x.h, static_cast<int>(level)), k.residue(x.e, bl)};
}

LieElt conjugate(const PadicContext& k, const Mat2& h, const LieElt& x) {
  Mat2 m{x.h, x.e, x.f, k.neg(x.h)};
  Mat2 c = mul(k, mul(k, h, m), inverse(k, h));
  return {c.b, c.a, c.c};
}

CheckResult rlog_check(const PadicContext& k, const GroupSpec& s, long long level, const std::vector<GroupSpec>& others,
                       std::mt19937_64& rng) {
  CheckResult res;
  auto fail = [&](std::string why) {
    res.pass = false;
    res.detail = std::move(why);
    return res;
  };
  auto reps = enumerate_group(k, s, level);
  res.count = static_cast<long long>(reps.size());
  std::set<std::array<long long, 3>> keys;
  std::vector<LieElt> logs;
  for (const auto& g : reps) {
    LieElt x = rlog(k, g);
    if (!member_lie(k, x, s)) return fail("image leaves the lattice: " + to_string(k, g));
    if (!keys.insert(lie_key(k, x, s.t, level)).second) return fail("two classes collide: " + to_string(k, g));
    logs.push_back(x);
  }
  if (keys.size() != predicted_class_count(k, s, level)) return fail("image is not the whole lattice quotient");
  GroupSpec kernel{s.t, Q(level), false};
  auto pick = upto(static_cast<long long>(reps.size()));
  for (int i = 0; i < 20; ++i) {
    size_t j = static_cast<size_t>(pick(rng));
    Mat2 g2 = mul(k, reps[j], random_element(k, kernel, rng));
    if (lie_key(k, rlog(k, g2), s.t, level) != lie_key(k, logs[j], s.t, level))
      return fail("not constant on classes at " + to_string(k, reps[j]));
  }
  for (const auto& o : others) {
    if (!contains_level(o, s.t, level)) continue;
    for (size_t j = 0; j < reps.size(); ++j)
      if (member_group(k, reps[j], o) != member_lie(k, logs[j], o))
        return fail("membership differs for " + to_string(o) + " at " + to_string(k, reps[j]));
  }
  GroupSpec conj{Q(0), Q(0), false};
  for (int i = 0; i < 20; ++i) {
    size_t j = static_cast<size_t>(pick(rng));
    Mat2 h = random_element(k, conj, rng);
    LieElt lhs = rlog(k, mul(k, mul(k, h, reps[j]), inverse(k, h)));
    LieElt rhs = conjugate(k, h, logs[j]);
    int tol = k.precision() / 2;
    if (k.val(k.sub(lhs.e, rhs.e)) < tol || k.val(k.sub(lhs.h, rhs.h)) < tol || k.val(k.sub(lhs.f, rhs.f)) < tol)
      return fail("not equivariant at " + to_string(k, reps[j]));
  }
  return res;
}

Mat2 random_envelope_element(const PadicContext& k, const SubComplex& sigma, const Q& r, std::mt19937_64& rng) {
  auto pick_cell = [&]() { return sigma[static_cast<size_t>(upto(static_cast<long long>(sigma.size()))(rng))]; };
  switch (upto(5)(rng)) {
    case 0:
      return random_element(k, cell_group(pick_cell(), r, false), rng);
    case 1:
      return mul(k, random_element(k, cell_group(pick_cell(), r, false), rng),
                 random_element(k, cell_group(pick_cell(), r, false), rng));
    case 2: {
      // A larger group around a nearby point.
      Q t = pick_cell().barycenter()[0] + Q(upto(5)(rng) - 2, 2);
      return random_element(k, {t, r > Q(0) ? r - Q(1) : Q(0), false}, rng);
    }
    case 3: {
      GroupSpec s = cell_group(pick_cell(), r, false);
      int shift = static_cast<int>(upto(3)(rng)) - 1;
      Padic e = k.pow_p(static_cast<int>(s.b_th()) + shift);
      Padic f = k.pow_p(static_cast<int>(s.c_th()) + static_cast<int>(upto(3)(rng)) - 1);
      return mul(k, upper(k, e), lower(k, f));
    }
    default: {
      int t = static_cast<int>(upto(5)(rng)) - 2;
      return mul(k, weyl(k, t), random_element(k, cell_group(pick_cell(), r, false), rng));
    }
  }
}

namespace {

int signed_indicator(const PadicContext& k, const SubComplex& sigma, const Q& r, const Mat2& g, bool& any) {
  int s = 0;
  any = false;
  for (const auto& c : sigma)
    if (member_group(k, g, cell_group(c, r, false))) {
      s += dim_sign(c);
      any = true;
    }
  return s;
}

}  // namespace

IndicatorReport indicator_euler_check(const PadicContext& k, const SubComplex& sigma, const Q& r, long long samples,
                                      std::mt19937_64& rng) {
  IndicatorReport rep;
  for (long long i = 0; i < samples; ++i) {
    Mat2 g = random_envelope_element(k, sigma, r, rng);
    bool any = false;
    int s = signed_indicator(k, sigma, r, g, any);
    ++rep.samples;
    rep.in_union += any ? 1 : 0;
    if ((s != 0 && s != 1) || (s == 1) != any) {
      rep.pass = false;
      rep.witness = to_string(k, g) + " signed sum " + std::to_string(s);
      return rep;
    }
  }
  return rep;
}

IndicatorReport stabilization_check(const PadicContext& k, const Q& x, const SubComplex& sigma,
                                    const SubComplex& sigma_prime, const Q& r, long long samples,
                                    std::mt19937_64& rng) {
  IndicatorReport rep;
  GroupSpec gx{x, Q(0), false};
  for (long long i = 0; i < samples; ++i) {
    Mat2 g;
    if (i % 2 == 0) {
      g = random_element(k, gx, rng);
    } else {
      g = random_envelope_element(k, sigma, r, rng);
      if (!member_group(k, g, gx)) g = random_element(k, gx, rng);
    }
    bool a = false, b = false;
    signed_indicator(k, sigma, r, g, a);
    signed_indicator(k, sigma_prime, r, g, b);
    ++rep.samples;
    rep.in_union += a ? 1 : 0;
    if (a != b) {
      rep.pass = false;
      rep.witness = to_string(k, g);
      return rep;
    }
  }
  return rep;
}

}  // namespace bt::sl2
