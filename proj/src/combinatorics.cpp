#include "bt/combinatorics.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace bt {

namespace {

void require_vertex(const Arrangement& arr, const Point& x) {
  if (!arr.is_vertex(x)) throw std::invalid_argument("not a vertex of the refined complex: " + to_string(x));
}

Q pow2_inv(int k) { return Q(1, 1LL << k); }

Polysimplex cut(const Arrangement& arr, const Point& x, const Q& s, const Polysimplex& sigma,
                const Polysimplex& chamber) {
  auto walls = arr.simple_affine_roots(chamber);
  Point b = sigma.barycenter();
  std::vector<AffineFunctional> z;
  for (const auto& psi : walls)
    if (psi(b) == Q(0) || psi(x) > s) z.push_back(psi);
  std::vector<Point> verts;
  for (const auto& v : sigma.vertices) {
    bool keep = true;
    for (const auto& psi : z) keep = keep && psi(v) == Q(0);
    if (keep) verts.push_back(v);
  }
  if (verts.empty()) throw std::logic_error("empty cut of " + to_string(sigma));
  if (!arr.is_cell(verts)) throw std::logic_error("cut is not a face of " + to_string(sigma));
  return arr.make_cell(std::move(verts));
}

}  // namespace

SubComplex normalize(SubComplex cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

bool contains(const SubComplex& s, const Polysimplex& c) { return std::binary_search(s.begin(), s.end(), c); }

bool in_gamma(const Arrangement& arr, const Polysimplex& sigma_p, const Point& x, const Q& s,
              const Polysimplex& sigma) {
  Point bp = sigma_p.barycenter();
  Point b = sigma.barycenter();
  for (size_t r : arr.spec().cell_roots) {
    Q bound = std::min(-arr.root_value(r, bp), s - arr.root_value(r, x));
    Q c = arr.refined(r).greatest_at_most(bound);
    if (arr.root_value(r, b) + c > Q(0)) return false;
  }
  return true;
}

SubComplex gamma(const Arrangement& arr, const Polysimplex& sigma_p, const Point& x, const Q& s) {
  require_vertex(arr, x);
  if (s < Q(0)) throw std::invalid_argument("s must be nonnegative");
  auto pts = sigma_p.vertices;
  pts.push_back(x);
  SubComplex out;
  for (auto& c : arr.cells_in_box(arr.grid_hull(pts, 1)))
    if (in_gamma(arr, sigma_p, x, s, c)) out.push_back(std::move(c));
  return out;
}

SubComplex upsilon(const Arrangement& arr, const Point& x, const Q& s, int pad) {
  require_vertex(arr, x);
  if (s < Q(0)) throw std::invalid_argument("s must be nonnegative");
  int h = *std::max_element(arr.spec().coxeter.begin(), arr.spec().coxeter.end());
  Q radius = s * Q(h - 1);
  Window w = box_around(x, radius);
  std::vector<Point> corners(2);
  for (const auto& b : w.bounds) {
    corners[0].push_back(b.first);
    corners[1].push_back(b.second);
  }
  SubComplex out;
  for (auto& c : arr.cells_in_box(arr.grid_hull(corners, 1 + pad))) {
    if (c.dim != arr.rank()) continue;
    bool ok = true;
    for (const auto& psi : arr.simple_affine_roots(c)) ok = ok && psi(x) <= s;
    if (ok) out.push_back(std::move(c));
  }
  return out;
}

Polysimplex min_face(const Arrangement& arr, const Point& x, const Q& s, const Polysimplex& sigma) {
  require_vertex(arr, x);
  if (sigma.vertices.size() == 1 && sigma.vertices[0] == x) return sigma;
  Point y = sigma.barycenter();
  Polysimplex tau;
  bool found = false;
  for (int k = 1; k < 48 && !found; ++k) {
    tau = arr.cell_at(y + pow2_inv(k) * (x - y));
    found = tau.has_face(sigma);
  }
  if (!found) throw std::logic_error("no cell between " + to_string(sigma) + " and x");
  Polysimplex out;
  if (tau.dim == arr.rank()) {
    out = cut(arr, x, s, sigma, tau);
  } else {
    std::vector<Polysimplex> ch;
    for (auto& c : arr.star(tau))
      if (c.dim == arr.rank()) ch.push_back(std::move(c));
    if (ch.empty()) throw std::logic_error("no chamber over " + to_string(tau));
    out = cut(arr, x, s, sigma, ch[0]);
    if (ch.size() > 1 && cut(arr, x, s, sigma, ch[1]) != out)
      throw std::logic_error("chamber choice changes the minimal face of " + to_string(sigma));
  }
  if (!in_gamma(arr, out, x, s, sigma))
    throw std::logic_error(to_string(sigma) + " not in Gamma of its minimal face");
  for (const auto& f : arr.faces(out))
    if (f != out && in_gamma(arr, f, x, s, sigma))
      throw std::logic_error("minimal face of " + to_string(sigma) + " is not minimal");
  return out;
}

const Polysimplex& Retraction::operator()(const Polysimplex& sigma) {
  auto it = memo_.find(sigma);
  if (it == memo_.end()) it = memo_.emplace(sigma, min_face(arr_, x_, s_, sigma)).first;
  return it->second;
}

Polysimplex max_polysimplex(const Arrangement& arr, const Point& x, const Q& s, const Polysimplex& sigma_p) {
  if (min_face(arr, x, s, sigma_p) != sigma_p)
    throw std::invalid_argument("not fixed by the retraction: " + to_string(sigma_p));
  std::vector<Polysimplex> cand;
  for (auto& c : arr.star(sigma_p))
    if (in_gamma(arr, sigma_p, x, s, c)) cand.push_back(std::move(c));
  std::vector<Polysimplex> maximal;
  for (const auto& c : cand) {
    bool top = true;
    for (const auto& d : cand) top = top && (d == c || !d.has_face(c));
    if (top) maximal.push_back(c);
  }
  if (maximal.size() != 1) throw std::logic_error("no unique maximal cell over " + to_string(sigma_p));
  return maximal[0];
}

SubComplex interval(const Arrangement& arr, const Polysimplex& lo, const Polysimplex& hi) {
  if (!hi.has_face(lo)) throw std::invalid_argument(to_string(lo) + " is not a face of " + to_string(hi));
  SubComplex out;
  for (auto& f : arr.faces(hi))
    if (f.has_face(lo)) out.push_back(std::move(f));
  return out;
}

bool is_closed(const Arrangement& arr, const SubComplex& s) {
  for (const auto& c : s)
    for (const auto& f : arr.faces(c))
      if (!contains(s, f)) return false;
  return true;
}

std::vector<Q> root_bounds(const Arrangement& arr, const std::vector<Point>& pts) {
  std::vector<Q> upper;
  for (size_t r : arr.spec().cell_roots) {
    Q hi = arr.root_value(r, pts.at(0));
    for (const auto& v : pts) hi = std::max(hi, arr.root_value(r, v));
    // Walls of this family sit at the negated constants.
    Progression walls{-arr.refined(r).offset, arr.refined(r).step};
    upper.push_back(walls.least_at_least(hi));
  }
  return upper;
}

SubComplex cells_in_root_box(const Arrangement& arr, const std::vector<Q>& upper) {
  const auto& spec = arr.spec();
  Window box;
  for (int i = 0; i < arr.rank(); ++i) {
    std::pair<Q, Q> b;
    int found = 0;
    for (size_t k = 0; k < spec.cell_roots.size(); ++k) {
      const auto& a = spec.roots[spec.cell_roots[k]];
      bool pos = true, neg = true;
      for (int j = 0; j < arr.rank(); ++j) {
        pos = pos && a[j] == (j == i ? 1 : 0);
        neg = neg && a[j] == (j == i ? -1 : 0);
      }
      if (pos) b.second = upper[k], found |= 1;
      if (neg) b.first = -upper[k], found |= 2;
    }
    if (found != 3) throw std::logic_error("coordinate roots missing");
    if (b.first > b.second) return {};
    // Widen so that a single vertex still gives a proper box; the filter below trims.
    Q step = arr.coordinate_grid(i).step;
    box.bounds.emplace_back(b.first - step, b.second + step);
  }
  SubComplex out;
  for (auto& c : arr.cells_in_box(box)) {
    bool inside = true;
    for (size_t k = 0; k < spec.cell_roots.size() && inside; ++k)
      for (const auto& v : c.vertices)
        if (arr.root_value(spec.cell_roots[k], v) > upper[k]) {
          inside = false;
          break;
        }
    if (inside) out.push_back(std::move(c));
  }
  return out;
}

bool is_convex(const Arrangement& arr, const SubComplex& s) {
  if (s.empty()) return true;
  if (!is_closed(arr, s)) return false;
  std::vector<Point> verts;
  for (const auto& c : s)
    if (c.dim == 0) verts.push_back(c.vertices[0]);
  auto hull = cells_in_root_box(arr, root_bounds(arr, verts));
  if (hull.size() != s.size()) return false;
  for (const auto& c : hull)
    if (!contains(s, c)) return false;
  return true;
}

bool is_convex_by_segments(const Arrangement& arr, const SubComplex& s) {
  if (!is_closed(arr, s)) return false;
  std::vector<Point> pts;
  for (const auto& c : s) pts.push_back(c.barycenter());
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t j = i + 1; j < pts.size(); ++j) {
      Point d = pts[j] - pts[i];
      std::set<Q> ts = {Q(0), Q(1)};
      for (size_t r : arr.spec().cell_roots) {
        Q a0 = arr.root_value(r, pts[i]);
        Q da = arr.root_value(r, d);
        if (da == Q(0)) continue;
        Progression walls{-arr.refined(r).offset, arr.refined(r).step};
        Q lo = std::min(a0, a0 + da), hi = std::max(a0, a0 + da);
        for (Q w = walls.least_at_least(lo); w <= hi; w += walls.step) ts.insert((w - a0) / da);
      }
      std::vector<Q> tv(ts.begin(), ts.end());
      for (size_t k = 0; k < tv.size(); ++k) {
        if (!contains(s, arr.cell_at(pts[i] + tv[k] * d))) return false;
        if (k + 1 < tv.size() && !contains(s, arr.cell_at(pts[i] + Q(1, 2) * (tv[k] + tv[k + 1]) * d)))
          return false;
      }
    }
  }
  return true;
}

}  // namespace bt
