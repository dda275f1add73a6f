#include "bt/lie_fourier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bt::lie {

namespace {

const RootSystemSpec& a1() {
  static const RootSystemSpec s = make_root_system("A1");
  return s;
}

void add_measure(std::map<size_t, Q>& acc, const std::map<size_t, Q>& m, long long sign) {
  for (const auto& [k, w] : m) {
    auto& v = acc[k];
    v += Q(sign) * w;
    if (v == Q(0)) acc.erase(k);
  }
}

std::vector<cplx> to_vector(const FiniteLieModel& m, const std::map<size_t, Q>& meas) {
  std::vector<cplx> v(m.size(), cplx(0, 0));
  for (const auto& [k, w] : meas)
    v[k] = cplx(static_cast<double>(w.numerator()) / static_cast<double>(w.denominator()), 0);
  return v;
}

std::array<Q, 3> dual_thresholds(const Polysimplex& cell, const Q& r) {
  return primal_thresholds(dual_spec(a1(), cell.barycenter(), r));
}

std::array<Q, 3> cell_thresholds(const Polysimplex& cell, const Q& r) {
  return primal_thresholds(lattice_spec(a1(), cell.barycenter(), r, true));
}

std::string point_string(const FiniteLieModel& m, size_t idx) {
  auto c = m.coords(idx);
  return "(" + std::to_string(c[0]) + "," + std::to_string(c[1]) + "," + std::to_string(c[2]) + ")";
}

bool in_dual_union(const FiniteLieModel& m, size_t idx, const SubComplex& sigma, const Q& r) {
  for (const auto& c : sigma)
    if (in_dual_lattice(m, idx, dual_thresholds(c, r))) return true;
  return false;
}

std::map<size_t, Q> projector_measure(const FiniteLieModel& m, const SubComplex& sigma, const Q& r) {
  std::map<size_t, Q> acc;
  for (const auto& c : sigma) add_measure(acc, lattice_measure(m, cell_thresholds(c, r)), dim_sign(c));
  return acc;
}

void require_grid(const Q& r, int grid) {
  if (grid < 1 || !is_integral(r * Q(grid))) throw std::invalid_argument("depth " + to_string(r) + " is off the grid");
}

}  // namespace

FiniteLieModel::FiniteLieModel(long long p, int a, int b) : p_(p), a_(a), b_(b) {
  if (a < 0 || b < 1) throw std::invalid_argument("model needs A >= 0 and B >= 1");
  n_ = 1;
  for (int i = 0; i < a + b; ++i) n_ *= p;
  if (n_ > 128) throw std::invalid_argument("model too large");
  for (long long k = 0; k < n_; ++k)
    roots_.push_back(std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_)));
}

size_t FiniteLieModel::index(long long e, long long h, long long f) const {
  auto md = [&](long long v) { return ((v % n_) + n_) % n_; };
  return static_cast<size_t>((md(e) * n_ + md(h)) * n_ + md(f));
}

std::array<long long, 3> FiniteLieModel::coords(size_t idx) const {
  long long i = static_cast<long long>(idx);
  return {i / (n_ * n_), (i / n_) % n_, i % n_};
}

int FiniteLieModel::primal_val(long long c) const {
  if (c % n_ == 0) return kInf;
  int v = 0;
  while (c % p_ == 0) {
    c /= p_;
    ++v;
  }
  return v - a_;
}

int FiniteLieModel::dual_val(long long c) const {
  if (c % n_ == 0) return kInf;
  int v = 0;
  while (c % p_ == 0) {
    c /= p_;
    ++v;
  }
  return v - (b_ - 1);
}

cplx FiniteLieModel::psi(long long u, int k) const {
  long long mod = 1;
  for (int i = 0; i <= k; ++i) mod *= p_;
  u = ((u % mod) + mod) % mod;
  return std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(u) / static_cast<double>(mod));
}

cplx FiniteLieModel::psi_pairing(size_t primal, size_t dual) const {
  auto a = coords(primal), b = coords(dual);
  long long s = 0;
  for (int j = 0; j < 3; ++j) s = (s + a[j] * b[j]) % n_;
  return roots_[static_cast<size_t>(s)];
}

std::vector<cplx> FiniteLieModel::fourier(const std::vector<cplx>& h) const {
  if (h.size() != size()) throw std::invalid_argument("function has wrong size");
  std::vector<cplx> cur = h, line(static_cast<size_t>(n_));
  const size_t n = static_cast<size_t>(n_);
  const size_t strides[3] = {n * n, n, 1};
  for (int axis = 0; axis < 3; ++axis) {
    size_t st = strides[axis];
    for (size_t base = 0; base < size(); ++base) {
      if ((base / st) % n != 0) continue;
      for (size_t y = 0; y < n; ++y) {
        cplx acc(0, 0);
        for (size_t x = 0; x < n; ++x) acc += roots_[(x * y) % n] * cur[base + x * st];
        line[y] = acc;
      }
      for (size_t y = 0; y < n; ++y) cur[base + y * st] = line[y];
    }
  }
  return cur;
}

size_t FiniteLieModel::scale(size_t idx, int k) const {
  long long f = 1;
  for (int i = 0; i < k; ++i) f = f * p_ % n_;
  auto c = coords(idx);
  return index(c[0] * f, c[1] * f, c[2] * f);
}

size_t FiniteLieModel::negate(size_t idx) const {
  auto c = coords(idx);
  return index(-c[0], -c[1], -c[2]);
}

std::array<Q, 3> primal_thresholds(const FiltrationSpec& f) {
  if (f.per_root.size() != 2) throw std::invalid_argument("expected the A1 root system");
  return {f.per_root[0], Q(f.torus), f.per_root[1]};
}

bool in_primal_lattice(const FiniteLieModel& m, size_t idx, const std::array<Q, 3>& th) {
  auto c = m.coords(idx);
  for (int j = 0; j < 3; ++j)
    if (Q(m.primal_val(c[j])) < th[j]) return false;
  return true;
}

bool in_dual_lattice(const FiniteLieModel& m, size_t idx, const std::array<Q, 3>& th) {
  auto c = m.coords(idx);
  for (int j = 0; j < 3; ++j)
    if (Q(m.dual_val(c[j])) < th[j]) return false;
  return true;
}

std::map<size_t, Q> lattice_measure(const FiniteLieModel& m, const std::array<Q, 3>& th) {
  std::vector<size_t> pts;
  for (size_t i = 0; i < m.size(); ++i)
    if (in_primal_lattice(m, i, th)) pts.push_back(i);
  std::map<size_t, Q> out;
  for (size_t i : pts) out[i] = Q(1, static_cast<long long>(pts.size()));
  return out;
}

FourierReport verify_prop_lie(const FiniteLieModel& m, const Polysimplex& cell, const Q& r) {
  FourierReport rep;
  auto f = m.fourier(to_vector(m, lattice_measure(m, cell_thresholds(cell, r))));
  auto dual = dual_thresholds(cell, r);
  for (size_t i = 0; i < m.size(); ++i) {
    double want = in_dual_lattice(m, i, dual) ? 1.0 : 0.0;
    double err = std::abs(f[i] - cplx(want, 0));
    if (err > rep.max_error) {
      rep.max_error = err;
      rep.witness = point_string(m, i);
    }
  }
  rep.pass = rep.max_error <= 1e-9;
  if (rep.pass) rep.witness.clear();
  return rep;
}

FourierReport verify_lemma_ep(const FiniteLieModel& m, const SubComplex& sigma, const Q& r, int grid) {
  require_grid(r, grid);
  FourierReport rep;
  rep.exact = true;
  std::vector<std::array<Q, 3>> th;
  for (const auto& c : sigma) th.push_back(dual_thresholds(c, r));
  for (size_t i = 0; i < m.size(); ++i) {
    long long s = 0;
    bool any = false;
    for (size_t j = 0; j < sigma.size(); ++j)
      if (in_dual_lattice(m, i, th[j])) {
        s += dim_sign(sigma[j]);
        any = true;
      }
    if (s != (any ? 1 : 0)) {
      rep.pass = false;
      rep.witness = point_string(m, i) + " signed sum " + std::to_string(s);
      return rep;
    }
  }
  return rep;
}

FourierReport verify_projector_fourier(const FiniteLieModel& m, const SubComplex& sigma, const Q& r, int grid) {
  require_grid(r, grid);
  FourierReport rep;
  auto f = m.fourier(to_vector(m, projector_measure(m, sigma, r)));
  for (size_t i = 0; i < m.size(); ++i) {
    double want = in_dual_union(m, i, sigma, r) ? 1.0 : 0.0;
    double err = std::abs(f[i] - cplx(want, 0));
    if (err > rep.max_error) {
      rep.max_error = err;
      rep.witness = point_string(m, i);
    }
  }
  rep.pass = rep.max_error <= 1e-9;
  if (rep.pass) rep.witness.clear();
  return rep;
}

FourierReport verify_homothety(const FiniteLieModel& m, const SubComplex& sigma, long long r) {
  if (r < 0) throw std::invalid_argument("homothety needs r >= 0");
  for (const auto& c : sigma) {
    auto lo = cell_thresholds(c, Q(0)), hi = cell_thresholds(c, Q(r));
    for (int j = 0; j < 3; ++j)
      if (lo[j] < Q(-m.low()) || hi[j] > Q(m.high()))
        throw std::invalid_argument("model too small for the homothety at " + to_string(c));
  }
  FourierReport rep;
  rep.exact = true;
  auto e0 = projector_measure(m, sigma, Q(0));
  auto er = projector_measure(m, sigma, Q(r));
  std::map<size_t, Q> pushed;
  for (const auto& [k, w] : e0) add_measure(pushed, {{m.scale(k, static_cast<int>(r)), w}}, 1);
  if (pushed != er) {
    rep.pass = false;
    rep.witness = "pushed measure differs";
    return rep;
  }
  for (size_t i = 0; i < m.size(); ++i)
    if (in_dual_union(m, i, sigma, Q(r)) != in_dual_union(m, m.scale(i, static_cast<int>(r)), sigma, Q(0))) {
      rep.pass = false;
      rep.witness = "dual indicator differs at " + point_string(m, i);
      return rep;
    }
  auto f0 = m.fourier(to_vector(m, e0));
  auto fr = m.fourier(to_vector(m, er));
  for (size_t i = 0; i < m.size(); ++i)
    rep.max_error = std::max(rep.max_error, std::abs(fr[i] - f0[m.scale(i, static_cast<int>(r))]));
  rep.pass = rep.max_error <= 1e-9;
  if (!rep.pass) rep.witness = "Fourier sides differ";
  return rep;
}

FourierReport pushforward_compare(const SubComplex& sigma, const Q& r, long long p, long long n) {
  if (p == 2) throw std::invalid_argument("pushforward needs p != 2");
  sl2::PadicContext k(p);
  FiniteLieModel m(p, 0, static_cast<int>(n));
  std::map<size_t, Q> pushed;
  for (const auto& c : sigma) {
    Q y = c.barycenter()[0];
    sl2::GroupSpec g{y, r, true};
    long long level = n + ceil_q(y < Q(0) ? -y : y);
    auto reps = sl2::enumerate_group(k, g, level);
    Q w(dim_sign(c), static_cast<long long>(reps.size()));
    std::map<size_t, Q> local;
    for (const auto& rep : reps) {
      auto x = sl2::rlog(k, rep);
      std::array<long long, 3> v;
      int j = 0;
      for (auto comp : {x.e, x.h, x.f}) {
        if (k.val(comp) < 0) throw std::invalid_argument("model too small: negative valuation at " + to_string(c));
        v[j++] = k.residue(comp, static_cast<int>(n)) / k.pow(k.shift());
      }
      local[m.index(v[0], v[1], v[2])] += w;
    }
    add_measure(pushed, local, 1);
  }
  FourierReport rep;
  rep.exact = true;
  if (pushed != projector_measure(m, sigma, r)) {
    rep.pass = false;
    rep.witness = "pushforward differs from the lattice sum";
  }
  return rep;
}

bool character_ok(const FiniteLieModel& m) {
  int k = m.low() + m.high() - 1;
  if (std::abs(m.psi(0, k) - cplx(1, 0)) > 1e-12) return false;
  long long pk = 1;
  for (int i = 0; i < k; ++i) pk *= m.p();
  // p Z_p is stored as multiples of p^(K+1): trivial. Z_p contains p^K: nontrivial.
  if (std::abs(m.psi(pk * m.p() * 7, k) - cplx(1, 0)) > 1e-12) return false;
  if (std::abs(m.psi(pk, k) - cplx(1, 0)) < 1e-6) return false;
  for (long long u = 0; u < pk * m.p(); ++u)
    for (long long v = 0; v < pk * m.p(); v += 1 + u % 3)
      if (std::abs(m.psi(u + v, k) - m.psi(u, k) * m.psi(v, k)) > 1e-9) return false;
  for (size_t i = 0; i < m.size(); i += 1 + m.size() / 97)
    for (size_t j = 0; j < m.size(); j += 1 + m.size() / 89) {
      auto a = m.coords(i), b = m.coords(j);
      long long s = 0;
      for (int t = 0; t < 3; ++t) s += a[t] * b[t];
      if (std::abs(m.psi_pairing(i, j) - m.psi(s, k)) > 1e-9) return false;
    }
  return true;
}

}  // namespace bt::lie
