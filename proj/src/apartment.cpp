#include "bt/apartment.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace bt {

namespace {

std::vector<Q> killing_form(const std::vector<std::vector<int>>& roots, int rank) {
  std::vector<std::vector<Q>> b(rank, std::vector<Q>(rank, Q(0)));
  for (const auto& a : roots)
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j) b[i][j] += Q(a[i] * a[j], 2);
  std::vector<Q> flat;
  for (auto& row : b)
    for (auto& v : row) flat.push_back(v);
  return flat;
}

RootSystemSpec from_positive(std::string name, int rank, const std::vector<std::vector<int>>& pos,
                             std::vector<std::vector<int>> comps, std::vector<int> cox) {
  RootSystemSpec s;
  s.name = std::move(name);
  s.rank = rank;
  for (const auto& a : pos) {
    s.roots.push_back(a);
    std::vector<int> neg(a.size());
    for (size_t i = 0; i < a.size(); ++i) neg[i] = -a[i];
    s.roots.push_back(neg);
  }
  s.progressions.assign(s.roots.size(), Progression{Q(0), Q(1)});
  for (size_t i = 0; i < s.roots.size(); ++i) s.cell_roots.push_back(i);
  auto flat = killing_form(s.roots, rank);
  s.inner_product.assign(rank, std::vector<Q>(rank));
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) s.inner_product[i][j] = flat[i * rank + j];
  s.components = std::move(comps);
  s.coxeter = std::move(cox);
  return s;
}

bool parallel(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() == 1) return true;
  return a[0] * b[1] - a[1] * b[0] == 0;
}

}  // namespace

std::vector<std::string> supported_root_systems() { return {"A1", "A2", "C2", "G2", "A1xA1", "BC1"}; }

RootSystemSpec make_root_system(const std::string& name, int delta) {
  if (name == "A1") return from_positive(name, 1, {{1}}, {{0}}, {2});
  if (name == "A2") return from_positive(name, 2, {{1, 0}, {0, 1}, {1, 1}}, {{0, 1}}, {3});
  if (name == "C2") return from_positive(name, 2, {{1, 0}, {0, 1}, {1, 1}, {2, 1}}, {{0, 1}}, {4});
  if (name == "G2")
    return from_positive(name, 2, {{1, 0}, {0, 1}, {1, 1}, {2, 1}, {3, 1}, {3, 2}}, {{0, 1}}, {6});
  if (name == "A1xA1") return from_positive(name, 2, {{1, 0}, {0, 1}}, {{0}, {1}}, {2, 2});
  if (name == "BC1") {
    if (delta != 0 && delta != -1) throw std::invalid_argument("delta must be 0 or -1");
    auto s = from_positive(name, 1, {{1}, {2}}, {{0}}, {2});
    s.delta = delta;
    s.progressions[0] = s.progressions[1] = Progression{Q(delta, 4), Q(1, 2)};
    s.progressions[2] = s.progressions[3] = Progression{Q(delta + 1, 2), Q(1)};
    s.cell_roots = {0, 1};
    return s;
  }
  throw std::invalid_argument("unsupported root system: " + name);
}

Q AffineFunctional::operator()(const Point& x) const {
  Q v = constant;
  for (size_t i = 0; i < root.size(); ++i) v += Q(root[i]) * x[i];
  return v;
}

std::string to_string(const AffineFunctional& f) {
  std::string s = "(";
  for (size_t i = 0; i < f.root.size(); ++i) s += (i ? "," : "") + std::to_string(f.root[i]);
  return s + ")+" + to_string(f.constant);
}

bool Polysimplex::has_face(const Polysimplex& tau) const {
  return std::includes(vertices.begin(), vertices.end(), tau.vertices.begin(), tau.vertices.end());
}

std::string to_string(const Polysimplex& s) {
  std::string r = "{";
  for (size_t i = 0; i < s.vertices.size(); ++i) r += (i ? "," : "") + to_string(s.vertices[i]);
  return r + "}";
}

bool Window::contains(const Point& x) const {
  if (x.size() != bounds.size()) return false;
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] < bounds[i].first || x[i] > bounds[i].second) return false;
  return true;
}

Window Window::padded(const Q& pad) const {
  Window w = *this;
  for (auto& b : w.bounds) {
    b.first -= pad;
    b.second += pad;
  }
  return w;
}

Window box_around(const Point& x, const Q& radius) {
  Window w;
  for (const auto& c : x) w.bounds.emplace_back(c - radius, c + radius);
  return w;
}

Arrangement::Arrangement(RootSystemSpec spec, int m) : spec_(std::move(spec)), m_(m) {
  if (m_ < 1) throw std::invalid_argument("level m must be positive");
  if (spec_.rank < 1 || spec_.rank > 2) throw std::invalid_argument("rank must be 1 or 2");
  for (const auto& p : spec_.progressions) refined_.push_back(p.refined(m_));
  for (int i = 0; i < spec_.rank; ++i) coordinate_grid(i);
  if (spec_.rank == 2) {
    for (int i = 0; i < 2; ++i) {
      auto g = coordinate_grid(i);
      if (g.offset != Q(0) || g.step != Q(1, m_))
        throw std::invalid_argument("rank-two systems need coordinate walls on (1/m)Z");
    }
    base_vertices_ = vertices_in_unit_box();
  }
}

Q Arrangement::root_value(size_t i, const Point& x) const {
  // One normalization instead of one per term.
  const auto& a = spec_.roots[i];
  long long den = 1;
  for (size_t k = 0; k < a.size(); ++k)
    if (a[k] != 0) den = std::lcm(den, x[k].denominator());
  long long num = 0;
  for (size_t k = 0; k < a.size(); ++k)
    if (a[k] != 0) num += a[k] * x[k].numerator() * (den / x[k].denominator());
  return Q(num, den);
}

Progression Arrangement::coordinate_grid(int i) const {
  for (size_t r : spec_.cell_roots) {
    const auto& a = spec_.roots[r];
    bool unit = true;
    for (int k = 0; k < spec_.rank; ++k) unit = unit && a[k] == (k == i ? 1 : 0);
    if (unit) {
      auto p = refined(r);
      return {-p.offset, p.step};
    }
  }
  throw std::invalid_argument("coordinate " + std::to_string(i) + " is not a root");
}

std::vector<long long> Arrangement::key(const Point& x) const {
  std::vector<long long> k;
  k.reserve(spec_.cell_roots.size());
  for (size_t r : spec_.cell_roots) {
    const auto& p = refined_[r];
    // u = (root value + offset) / step as num/den, without intermediate normalization.
    Q v = root_value(r, x);
    long long num = (v.numerator() * p.offset.denominator() + p.offset.numerator() * v.denominator()) *
                    p.step.denominator();
    long long den = v.denominator() * p.offset.denominator() * p.step.numerator();
    long long q = num / den, rem = num % den;
    if (rem != 0 && ((rem < 0) != (den < 0))) --q;
    k.push_back(rem == 0 ? 2 * q : 2 * q + 1);
  }
  return k;
}

int Arrangement::affine_dim(const std::vector<Point>& pts) const {
  if (pts.size() <= 1) return 0;
  if (spec_.rank == 1) return 1;
  const Point& o = pts[0];
  Point d1;
  for (size_t i = 1; i < pts.size(); ++i) {
    Point d = pts[i] - o;
    if (d1.empty()) {
      if (d[0] != Q(0) || d[1] != Q(0)) d1 = d;
    } else if (d1[0] * d[1] - d1[1] * d[0] != Q(0)) {
      return 2;
    }
  }
  return d1.empty() ? 0 : 1;
}

Polysimplex Arrangement::make_cell(std::vector<Point> vertices) const {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  Polysimplex c;
  c.level = m_;
  c.dim = affine_dim(vertices);
  c.vertices = std::move(vertices);
  return c;
}

std::vector<Point> Arrangement::vertices_in_unit_box() const {
  Q h(1, m_);
  std::vector<Point> corners = {{Q(0), Q(0)}, {h, Q(0)}, {Q(0), h}, {h, h}};
  std::set<Point> out;
  const auto& cr = spec_.cell_roots;
  for (size_t a = 0; a < cr.size(); ++a) {
    for (size_t b = a + 1; b < cr.size(); ++b) {
      const auto& ra = spec_.roots[cr[a]];
      const auto& rb = spec_.roots[cr[b]];
      if (parallel(ra, rb)) continue;
      auto range = [&](size_t r) {
        Q lo = root_value(r, corners[0]), hi = lo;
        for (const auto& c : corners) {
          lo = std::min(lo, root_value(r, c));
          hi = std::max(hi, root_value(r, c));
        }
        return std::make_pair(lo, hi);
      };
      auto [la, ha] = range(cr[a]);
      auto [lb, hb] = range(cr[b]);
      auto pa = refined(cr[a]);
      auto pb = refined(cr[b]);
      Progression ga{-pa.offset, pa.step}, gb{-pb.offset, pb.step};
      Q det = Q(ra[0] * rb[1] - ra[1] * rb[0]);
      for (Q va = ga.least_at_least(la); va <= ha; va += ga.step) {
        for (Q vb = gb.least_at_least(lb); vb <= hb; vb += gb.step) {
          Point x = {(va * Q(rb[1]) - Q(ra[1]) * vb) / det, (Q(ra[0]) * vb - va * Q(rb[0])) / det};
          if (x[0] >= Q(0) && x[0] <= h && x[1] >= Q(0) && x[1] <= h) out.insert(x);
        }
      }
    }
  }
  return {out.begin(), out.end()};
}

Polysimplex Arrangement::cell_at(const Point& x) const {
  if (static_cast<int>(x.size()) != spec_.rank) throw std::invalid_argument("point has wrong dimension");
  if (spec_.rank == 1) {
    auto g = coordinate_grid(0);
    Q u = g.index_of(x[0]);
    if (is_integral(u)) return make_cell({x});
    long long k = floor_q(u);
    return make_cell({{g.at(k)}, {g.at(k + 1)}});
  }
  Q h(1, m_);
  Point shift = {h * Q(floor_q(x[0] * Q(m_))), h * Q(floor_q(x[1] * Q(m_)))};
  Point q = x - shift;
  auto kq = key(q);
  std::vector<Point> verts;
  for (const auto& w : base_vertices_) {
    auto kw = key(w);
    bool ok = true;
    for (size_t i = 0; i < kq.size() && ok; ++i) {
      if (kq[i] % 2 == 0)
        ok = kw[i] == kq[i];
      else
        ok = kw[i] >= kq[i] - 1 && kw[i] <= kq[i] + 1;
    }
    if (ok) verts.push_back(w + shift);
  }
  return make_cell(std::move(verts));
}

bool Arrangement::is_vertex(const Point& x) const { return cell_at(x).dim == 0; }

bool Arrangement::is_cell(const std::vector<Point>& sorted_vertices) const {
  if (sorted_vertices.empty()) return false;
  return cell_at(bt::barycenter(sorted_vertices)).vertices == sorted_vertices;
}

std::vector<Polysimplex> Arrangement::faces(const Polysimplex& s) const {
  std::vector<Polysimplex> out;
  size_t n = s.vertices.size();
  for (size_t mask = 1; mask < (size_t(1) << n); ++mask) {
    std::vector<Point> sub;
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t(1) << i)) sub.push_back(s.vertices[i]);
    if (is_cell(sub)) out.push_back(make_cell(sub));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Window Arrangement::grid_hull(const std::vector<Point>& pts, int extra_steps) const {
  Window w;
  for (int i = 0; i < spec_.rank; ++i) {
    auto g = coordinate_grid(i);
    Q lo = pts.at(0)[i], hi = lo;
    for (const auto& p : pts) {
      lo = std::min(lo, p[i]);
      hi = std::max(hi, p[i]);
    }
    Q l = g.greatest_at_most(lo) - g.step * Q(extra_steps);
    Q u = g.least_at_least(hi) + g.step * Q(extra_steps);
    w.bounds.emplace_back(l, u);
  }
  return w;
}

std::vector<Polysimplex> Arrangement::star(const Polysimplex& s) const {
  std::vector<Polysimplex> out;
  for (auto& c : cells_in_box(grid_hull(s.vertices, 1)))
    if (c.has_face(s)) out.push_back(std::move(c));
  return out;
}

std::vector<Polysimplex> Arrangement::cells_in_box(const Window& box) const {
  if (static_cast<int>(box.bounds.size()) != spec_.rank) throw std::invalid_argument("window has wrong dimension");
  for (const auto& b : box.bounds)
    if (!(b.first < b.second)) throw std::invalid_argument("degenerate window");
  std::set<Polysimplex> cells;
  if (spec_.rank == 1) {
    auto g = coordinate_grid(0);
    std::vector<Point> verts;
    for (Q t = g.least_at_least(box.bounds[0].first); t <= box.bounds[0].second; t += g.step) verts.push_back({t});
    for (size_t i = 0; i < verts.size(); ++i) {
      cells.insert(make_cell({verts[i]}));
      if (i + 1 < verts.size()) cells.insert(make_cell({verts[i], verts[i + 1]}));
    }
    return {cells.begin(), cells.end()};
  }
  Q h(1, m_);
  long long i0 = floor_q(box.bounds[0].first * Q(m_)), i1 = ceil_q(box.bounds[0].second * Q(m_));
  long long j0 = floor_q(box.bounds[1].first * Q(m_)), j1 = ceil_q(box.bounds[1].second * Q(m_));
  std::set<std::vector<long long>> seen;
  auto consider = [&](const Point& p) {
    if (!seen.insert(key(p)).second) return;
    auto c = cell_at(p);
    for (const auto& v : c.vertices)
      if (!box.contains(v)) return;
    cells.insert(std::move(c));
  };
  for (long long i = i0; i < i1; ++i) {
    for (long long j = j0; j < j1; ++j) {
      Point shift = {h * Q(i), h * Q(j)};
      std::vector<Point> vs;
      for (const auto& w : base_vertices_) vs.push_back(w + shift);
      size_t n = vs.size();
      for (size_t a = 0; a < n; ++a) {
        consider(vs[a]);
        for (size_t b = a + 1; b < n; ++b) {
          consider(bt::barycenter({vs[a], vs[b]}));
          for (size_t c = b + 1; c < n; ++c) consider(bt::barycenter({vs[a], vs[b], vs[c]}));
        }
      }
    }
  }
  return {cells.begin(), cells.end()};
}

std::vector<AffineFunctional> Arrangement::simple_affine_roots(const Polysimplex& chamber) const {
  if (chamber.dim != spec_.rank) throw std::invalid_argument("not a chamber: " + to_string(chamber));
  Point b = chamber.barycenter();
  std::set<AffineFunctional> out;
  for (const auto& f : faces(chamber)) {
    if (f.dim != spec_.rank - 1) continue;
    for (size_t r : spec_.cell_roots) {
      Q v = root_value(r, f.vertices[0]);
      bool constant = true;
      for (const auto& w : f.vertices) constant = constant && root_value(r, w) == v;
      if (!constant) continue;
      AffineFunctional psi{spec_.roots[r], -v};
      if (psi(b) <= Q(0)) continue;
      if (!refined(r).contains(-v)) throw std::logic_error("wall constant outside the refined progression");
      out.insert(psi);
      break;
    }
  }
  return {out.begin(), out.end()};
}

std::vector<std::pair<AffineFunctional, Q>> Arrangement::partition_of_unity(const Polysimplex& chamber) const {
  auto walls = simple_affine_roots(chamber);
  std::vector<std::pair<AffineFunctional, Q>> out;
  Q share(1, static_cast<long long>(spec_.components.size()));
  for (const auto& comp : spec_.components) {
    std::vector<AffineFunctional> w;
    for (const auto& psi : walls) {
      bool inside = false, outside = false;
      for (int i = 0; i < spec_.rank; ++i) {
        if (psi.root[i] == 0) continue;
        (std::find(comp.begin(), comp.end(), i) != comp.end() ? inside : outside) = true;
      }
      if (inside && !outside) w.push_back(psi);
    }
    size_t n = w.size(), rows = comp.size() + 1;
    if (n != rows) throw std::logic_error("wall count does not match a simplex factor");
    std::vector<std::vector<Q>> a(rows, std::vector<Q>(n + 1, Q(0)));
    for (size_t j = 0; j < n; ++j) {
      for (size_t i = 0; i < comp.size(); ++i) a[i][j] = Q(w[j].root[comp[i]]);
      a[comp.size()][j] = w[j].constant;
    }
    a[comp.size()][n] = Q(1);
    for (size_t col = 0; col < n; ++col) {
      size_t piv = col;
      while (piv < rows && a[piv][col] == Q(0)) ++piv;
      if (piv == rows) throw std::logic_error("singular partition-of-unity system");
      std::swap(a[piv], a[col]);
      for (size_t r = 0; r < rows; ++r) {
        if (r == col || a[r][col] == Q(0)) continue;
        Q f = a[r][col] / a[col][col];
        for (size_t k = col; k <= n; ++k) a[r][k] -= f * a[col][k];
      }
    }
    for (size_t j = 0; j < n; ++j) {
      Q c = a[j][n] / a[j][j];
      if (c <= Q(0)) throw std::logic_error("non-positive partition-of-unity coefficient");
      out.emplace_back(w[j], c * share);
    }
  }
  for (const auto& v : chamber.vertices) {
    Q total(0);
    for (const auto& [psi, c] : out) total += c * psi(v);
    if (total != Q(1)) throw std::logic_error("partition of unity does not sum to one");
  }
  std::sort(out.begin(), out.end());
  return out;
}

Apartment::Apartment(const RootSystemSpec& spec, int m, Window window)
    : Apartment(std::make_shared<const Arrangement>(spec, m), std::move(window)) {}

Apartment::Apartment(std::shared_ptr<const Arrangement> arr, Window window)
    : arr_(std::move(arr)), window_(std::move(window)) {
  build();
}

void Apartment::build() {
  cells_ = arr_->cells_in_box(window_);
  for (size_t i = 0; i < cells_.size(); ++i) index_[cells_[i].vertices] = i;
  face_ids_.resize(cells_.size());
  for (size_t i = 0; i < cells_.size(); ++i) {
    for (const auto& f : arr_->faces(cells_[i])) {
      auto it = index_.find(f.vertices);
      if (it == index_.end()) throw std::logic_error("cell list not closed under faces");
      face_ids_[i].push_back(it->second);
    }
  }
}

std::optional<size_t> Apartment::index_of(const Polysimplex& s) const {
  auto it = index_.find(s.vertices);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Polysimplex> Apartment::chambers() const {
  std::vector<Polysimplex> out;
  for (const auto& c : cells_)
    if (c.dim == arr_->rank()) out.push_back(c);
  return out;
}

std::vector<Polysimplex> Apartment::vertices() const {
  std::vector<Polysimplex> out;
  for (const auto& c : cells_)
    if (c.dim == 0) out.push_back(c);
  return out;
}

std::vector<Polysimplex> Apartment::faces(const Polysimplex& s) const {
  auto id = index_of(s);
  if (!id) throw std::invalid_argument("cell not in apartment: " + to_string(s));
  std::vector<Polysimplex> out;
  for (size_t f : face_ids_[*id]) out.push_back(cells_[f]);
  return out;
}

std::vector<AffineFunctional> Apartment::simple_affine_roots(const Polysimplex& chamber) const {
  return arr_->simple_affine_roots(chamber);
}

std::vector<std::pair<AffineFunctional, Q>> Apartment::partition_of_unity(const Polysimplex& chamber) const {
  return arr_->partition_of_unity(chamber);
}

Polysimplex Apartment::locate(const Point& x) const {
  if (!window_.contains(x)) throw std::invalid_argument("point outside window");
  return arr_->cell_at(x);
}

}  // namespace bt
