#include "bt/runner.hpp"

#include "bt/lie_fourier.hpp"
#include "bt/moy_prasad.hpp"
#include "bt/projector.hpp"
#include "bt/sl2.hpp"
#include "bt/steinberg.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

namespace bt::runner {

namespace {

// FNV-1a, so seeds do not depend on the standard library's hash.
std::uint64_t fnv(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

long long pick(std::mt19937_64& rng, long long n) { return std::uniform_int_distribution<long long>(0, n - 1)(rng); }

template <class T>
const T& pick_from(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[static_cast<size_t>(pick(rng, static_cast<long long>(v.size())))];
}

std::string pad3(long long i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03lld", i);
  return buf;
}

CheckReport pass() { return {}; }

CheckReport fail(std::string witness, json detail = json::object()) {
  CheckReport r;
  r.verdict = Verdict::fail;
  r.witness = std::move(witness);
  r.detail = std::move(detail);
  return r;
}

CheckReport skip(std::string why) {
  CheckReport r;
  r.verdict = Verdict::skipped;
  r.witness = std::move(why);
  return r;
}

json q_list(const std::vector<Q>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

std::vector<Q> grid_depths(const std::vector<Q>& r, int m) {
  std::vector<Q> out;
  for (const auto& q : r)
    if (q >= Q(0) && is_integral(q * Q(m))) out.push_back(q);
  return out;
}

Window centered(int rank, const Q& w) {
  Window out;
  for (int i = 0; i < rank; ++i) out.bounds.push_back({-w, w});
  return out;
}

// Shared, read-only data per (root system, m).
struct Context {
  std::shared_ptr<const Arrangement> arr;
  std::vector<Point> vertices;
};

std::shared_ptr<Context> make_context(const std::string& name, int m, const Q& w) {
  auto ctx = std::make_shared<Context>();
  ctx->arr = std::make_shared<Arrangement>(make_root_system(name), m);
  for (const auto& c : ctx->arr->cells_in_box(centered(ctx->arr->rank(), w)))
    if (c.dim == 0) ctx->vertices.push_back(c.vertices[0]);
  return ctx;
}

std::string sys_tag(const std::string& name, int m) { return name + " m=" + std::to_string(m); }

// Convex complex of all cells inside the root box of pts, each upper bound pushed out by grow[i] steps.
SubComplex root_box(const Arrangement& arr, const std::vector<Point>& pts, const std::vector<int>& grow) {
  auto ub = root_bounds(arr, pts);
  for (size_t i = 0; i < ub.size(); ++i) ub[i] += Q(grow[i]) * arr.refined(arr.spec().cell_roots[i]).step;
  return cells_in_root_box(arr, ub);
}

std::vector<int> random_growth(std::mt19937_64& rng, size_t n, int max) {
  std::vector<int> g(n);
  for (auto& x : g) x = static_cast<int>(pick(rng, max + 1));
  return g;
}

SubComplex segment(const Arrangement& arr, const Q& lo, const Q& hi) {
  if (lo == hi) return {arr.cell_at({lo})};
  return normalize(arr.cells_in_box(Window{{{lo, hi}}}));
}

// --- affine apartment -------------------------------------------------------

std::vector<Job> unity_jobs(const RunConfig& c) {
  std::vector<Job> jobs;
  for (const auto& name : c.root_systems)
    for (int m : c.m) {
      jobs.push_back({"unity", sys_tag(name, m), [name, m, w = c.window](std::mt19937_64&) {
                        Apartment apt(make_root_system(name), m, centered(make_root_system(name).rank, w));
                        long long n = 0;
                        for (const auto& ch : apt.chambers()) {
                          ++n;
                          auto pu = apt.partition_of_unity(ch);
                          std::vector<Q> lin(static_cast<size_t>(apt.arrangement().rank()), Q(0));
                          Q constant(0);
                          for (const auto& [f, coeff] : pu) {
                            if (coeff <= Q(0)) return fail("nonpositive coefficient at " + to_string(ch));
                            for (size_t i = 0; i < lin.size(); ++i) lin[i] += coeff * Q(f.root[i]);
                            constant += coeff * f.constant;
                          }
                          for (const auto& x : lin)
                            if (x != Q(0)) return fail("linear part does not cancel at " + to_string(ch));
                          if (constant != Q(1)) return fail("constant is " + to_string(constant) + " at " + to_string(ch));
                        }
                        auto r = pass();
                        r.detail["chambers"] = n;
                        return r;
                      }});
    }
  return jobs;
}

std::vector<Job> finite_jobs(const RunConfig& c) {
  std::vector<Job> jobs;
  long long count = c.samples / 4 > 0 ? c.samples / 4 : 1;
  std::vector<Q> pos;
  for (const auto& s : c.s)
    if (s > Q(0)) pos.push_back(s);
  std::map<std::pair<std::string, int>, std::shared_ptr<Context>> contexts;
  for (long long i = 0; i < count; ++i) {
    const std::string& name = c.root_systems[static_cast<size_t>(i) % c.root_systems.size()];
    int m = c.m[static_cast<size_t>(i / static_cast<long long>(c.root_systems.size())) % c.m.size()];
    auto& ctx = contexts[{name, m}];
    if (!ctx) ctx = make_context(name, m, c.window);
    jobs.push_back({"finite", sys_tag(name, m) + " #" + pad3(i), [ctx, pos](std::mt19937_64& rng) {
                      const Point& x = pick_from(rng, ctx->vertices);
                      json d;
                      d["x"] = q_list(x);
                      auto empty = upsilon(*ctx->arr, x, Q(0));
                      if (!empty.empty()) return fail("nonempty at s=0, x=" + to_string(x), d);
                      if (pos.empty()) return pass();
                      Q s = pick_from(rng, pos);
                      size_t a = upsilon(*ctx->arr, x, s, 0).size(), b = upsilon(*ctx->arr, x, s, 1).size();
                      d["s"] = to_string(s);
                      d["size"] = a;
                      if (a != b)
                        return fail("padding changes the count " + std::to_string(a) + " vs " + std::to_string(b), d);
                      auto r = pass();
                      r.detail = d;
                      return r;
                    }});
  }
  return jobs;
}

// --- stabilization ---------------------------------------------------------

std::vector<Job> stab_jobs(const RunConfig& c) {
  std::vector<Job> jobs;
  for (const auto& name : c.root_systems)
    for (int m : c.m) {
      auto depths = grid_depths(c.r, m);
      if (depths.empty()) continue;
      auto ctx = make_context(name, m, c.window);
      for (long long i = 0; i < c.samples; ++i) {
        jobs.push_back({"stab", sys_tag(name, m) + " #" + pad3(i), [ctx, depths, s_grid = c.s](std::mt19937_64& rng) {
                          const auto& arr = *ctx->arr;
                          Point x = pick_from(rng, ctx->vertices);
                          Q s = pick_from(rng, s_grid), r = pick_from(rng, depths);
                          std::vector<Point> pts = {x};
                          for (const auto& ch : upsilon(arr, x, s))
                            for (const auto& v : ch.vertices) pts.push_back(v);
                          auto g1 = random_growth(rng, arr.spec().cell_roots.size(), 1);
                          auto g2 = g1;
                          for (auto& g : g2) g += static_cast<int>(pick(rng, 3));
                          auto inner = root_box(arr, pts, g1), outer = root_box(arr, pts, g2);
                          json d;
                          d["x"] = q_list(x);
                          d["s"] = to_string(s);
                          d["r"] = to_string(r);
                          d["inner"] = inner.size();
                          d["outer"] = outer.size();
                          Retraction ret(arr, x, s);
                          auto res = telescope_partition(arr, ret, inner, outer);
                          if (!res.ok) return fail(res.failure, d);
                          d["classes"] = res.classes.size();
                          auto a = reduce_against(ret, formal_projector(arr, outer, r), r);
                          auto b = reduce_against(ret, formal_projector(arr, inner, r), r);
                          if (a != b) return fail("reductions differ: " + to_string(a) + " vs " + to_string(b), d);
                          auto rep = pass();
                          rep.detail = d;
                          return rep;
                        }});
      }
    }
  return jobs;
}

std::vector<Job> euler_jobs(const RunConfig& c) {
  std::vector<Job> jobs;
  for (const auto& name : c.root_systems)
    for (int m : c.m) {
      auto ctx = make_context(name, m, c.window);
      long long count = c.samples / 4 > 0 ? c.samples / 4 : 1;
      for (long long i = 0; i < count; ++i)
        jobs.push_back({"euler", sys_tag(name, m) + " #" + pad3(i), [ctx](std::mt19937_64& rng) {
                          const auto& arr = *ctx->arr;
                          std::vector<Point> pts = {pick_from(rng, ctx->vertices), pick_from(rng, ctx->vertices)};
                          auto cx = root_box(arr, pts, random_growth(rng, arr.spec().cell_roots.size(), 1));
                          json d;
                          d["cells"] = cx.size();
                          if (!is_convex(arr, cx)) return fail("root box not convex", d);
                          long long e = euler_sum(cx);
                          if (e != 1) return fail("Euler sum " + std::to_string(e), d);
                          auto r = pass();
                          r.detail = d;
                          return r;
                        }});
    }
  return jobs;
}

// --- convexity of Moy-Prasad regions ----------------------------------------

std::vector<Job> convex_jobs(const RunConfig& c) {
  std::vector<Job> jobs;
  const long long chunk = 50;
  for (const auto& name : c.root_systems)
    for (int m : c.m)
      for (auto kind : {RegionKind::lattice, RegionKind::dual}) {
        std::string tag = sys_tag(name, m) + (kind == RegionKind::lattice ? " lattice" : " dual");
        // Off-grid depths do not give subcomplexes.
        auto depths = grid_depths(c.r, m);
        if (depths.empty()) continue;
        for (long long start = 0; start < c.samples; start += chunk) {
          long long len = std::min(chunk, c.samples - start);
          jobs.push_back({"convex", tag + " #" + pad3(start / chunk), [name, m, kind, len, w = c.window,
                                                                          depths](std::mt19937_64& rng) {
                            auto spec = make_root_system(name);
                            Apartment apt(spec, m, centered(spec.rank, w));
                            std::uniform_int_distribution<int> val(-3, 3);
                            long long nonempty = 0;
                            for (long long i = 0; i < len; ++i) {
                              ValuationVector v;
                              if (pick(rng, 4) != 0) v.torus = pick(rng, 3);
                              for (size_t j = 0; j < spec.roots.size(); ++j)
                                v.per_root.push_back(pick(rng, 5) == 0 ? std::nullopt : std::optional<long long>(val(rng)));
                              Q r = pick_from(rng, depths);
                              auto reg = region(apt, v, r, kind);
                              nonempty += reg.empty() ? 0 : 1;
                              if (!is_convex(apt.arrangement(), reg)) {
                                json d;
                                d["r"] = to_string(r);
                                std::string vs;
                                for (const auto& x : v.per_root) vs += (x ? std::to_string(*x) : "inf") + " ";
                                d["per_root"] = vs;
                                return fail("region not convex", d);
                              }
                            }
                            auto rep = pass();
                            rep.detail["vectors"] = len;
                            rep.detail["nonempty"] = nonempty;
                            return rep;
                          }});
        }
      }
  return jobs;
}

// --- p-adic SL2 -------------------------------------------------------------

std::vector<Job> projector_jobs(const RunConfig& c) {
  std::vector<Job> jobs;
  long long w = floor_q(c.window);
  for (long long p : c.p)
    for (long long n : c.n)
      for (int m : c.m)
        for (const auto& r : grid_depths(c.r, m)) {
          // Depths on a coarser grid are covered at that grid.
          bool coarser = false;
          for (int m2 : c.m)
            if (m2 < m && m % m2 == 0 && is_integral(r * Q(m2))) coarser = true;
          if (coarser) continue;
          for (long long lo = -w; lo <= w; ++lo)
            for (long long hi = lo; hi <= w && hi - lo <= 4; ++hi) {
              std::string inst = "p=" + std::to_string(p) + " N=" + std::to_string(n) + " m=" + std::to_string(m) +
                                 " r=" + to_string(r) + " [" + std::to_string(lo) + "," + std::to_string(hi) + "]";
              jobs.push_back({"projector", inst, [p, n, m, r, lo, hi, budget = c.max_enumeration](std::mt19937_64&) {
                                sl2::PadicContext k(p);
                                Arrangement arr(make_root_system("A1"), m);
                                auto sigma = segment(arr, Q(lo), Q(hi));
                                long long checked = 0, skipped = 0;
                                for (const auto& cell : sigma) {
                                  auto target = sl2::cell_group(cell, r, true);
                                  try {
                                    sl2::check_faithful(target, n);
                                  } catch (const std::invalid_argument&) {
                                    ++skipped;
                                    continue;
                                  }
                                  std::vector<std::pair<long long, sl2::TruncatedMeasure>> terms;
                                  for (const auto& c2 : sigma)
                                    terms.emplace_back(dim_sign(c2), sl2::convolve_uniform(k, sl2::cell_group(c2, r), target, n,
                                                                                           static_cast<size_t>(budget)));
                                  auto lhs = sl2::combine(k, target, terms);
                                  ++checked;
                                  if (!sl2::same_measure(k, lhs, sl2::delta(k, target)))
                                    return fail("projector moves delta at " + to_string(cell));
                                }
                                if (checked == 0) {
                                  auto rep = skip("precision N too small for every cell");
                                  rep.detail["skipped_precision"] = skipped;
                                  return rep;
                                }
                                auto rep = pass();
                                rep.detail["checked"] = checked;
                                rep.detail["skipped_precision"] = skipped;
                                return rep;
                              }});
            }
        }
  return jobs;
}

long long minimal_level(const sl2::GroupSpec& b, long long cap) {
  for (long long n = 1; n <= cap; ++n)
    if (sl2::contains_level(b, Q(0), n)) return n;
  throw std::invalid_argument("no admissible precision");
}

std::vector<Job> equal_jobs(const RunConfig& c) {
  std::vector<Job> jobs;
  long long per = c.samples / 4 > 0 ? c.samples / 4 : 1;
  for (bool control : {false, true})
    for (long long i = 0; i < per; ++i) {
      int m = c.m[static_cast<size_t>(i) % c.m.size()];
      long long p = c.p[static_cast<size_t>(i / static_cast<long long>(c.m.size())) % c.p.size()];
      auto depths = grid_depths(c.r, m);
      if (depths.empty()) continue;
      std::string inst = std::string(control ? "control" : "gamma") + " m=" + std::to_string(m) + " p=" +
                         std::to_string(p) + " #" + pad3(i);
      jobs.push_back({"equal", inst, [control, m, p, depths, s_grid = c.s, budget = c.max_enumeration](
                                         std::mt19937_64& rng) {
                        Arrangement arr(make_root_system("A1"), m);
                        // Only proper faces: sigma_p = sigma is a tautology.
                        std::vector<Polysimplex> cells;
                        for (auto& cell : arr.cells_in_box(Window{{{Q(-2), Q(2)}}}))
                          if (cell.dim > 0) cells.push_back(std::move(cell));
                        std::vector<Q> points;
                        for (long long k = -4 * m; k <= 4 * m; ++k) points.push_back(Q(k, 2 * m));
                        for (int attempt = 0; attempt < 10000; ++attempt) {
                          const auto& sigma = pick_from(rng, cells);
                          std::vector<Polysimplex> faces;
                          for (auto& f : arr.faces(sigma))
                            if (f != sigma) faces.push_back(std::move(f));
                          const auto& sigma_p = pick_from(rng, faces);
                          Point x = {pick_from(rng, points)};
                          Q s = pick_from(rng, s_grid), r = pick_from(rng, depths);
                          bool in = in_gamma(arr, sigma_p, x, s, sigma);
                          json d;
                          d["sigma"] = to_string(sigma);
                          d["face"] = to_string(sigma_p);
                          d["x"] = to_string(x[0]);
                          d["s"] = to_string(s);
                          d["r"] = to_string(r);
                          auto convolutions_equal = [&]() {
                            sl2::PadicContext k(p);
                            sl2::GroupSpec b{x[0], r + s, true};
                            long long n = minimal_level(b, k.precision() - 2);
                            auto bud = static_cast<size_t>(budget);
                            auto lhs = sl2::convolve_uniform(k, sl2::cell_group(sigma, r), b, n, bud);
                            auto rhs = sl2::convolve_uniform(k, sl2::cell_group(sigma_p, r), b, n, bud);
                            d["N"] = n;
                            d["cosets"] = lhs.reps.size();
                            return sl2::same_measure(k, lhs, rhs);
                          };
                          if (!control) {
                            if (!in) continue;
                            if (!rootwise_criterion(arr, sigma, sigma_p, x, s))
                              return fail("root-wise criterion fails inside Gamma", d);
                            if (!convolutions_equal()) return fail("convolutions differ", d);
                            auto rep = pass();
                            rep.detail = d;
                            return rep;
                          }
                          if (in || rootwise_criterion(arr, sigma, sigma_p, x, s)) continue;
                          // Recorded, not asserted: the lemma says nothing here.
                          d["observed_equal"] = convolutions_equal();
                          auto rep = pass();
                          d["applicable"] = false;
                          rep.detail = d;
                          return rep;
                        }
                        return skip("no instance found in 10000 draws");
                      }});
    }
  return jobs;
}

std::vector<Job> rlog_jobs(const RunConfig& c) {
  std::vector<Job> jobs;
  for (long long p : c.p) {
    if (p == 2) continue;
    for (long long n : c.n) {
      std::vector<sl2::GroupSpec> specs;
      for (const auto& r : c.r)
        if (is_integral(r) && r >= Q(0))
          for (long long t2 = -4; t2 <= 4; ++t2) specs.push_back({Q(t2, 2), r, true});
      for (const auto& s : specs) {
        std::string inst = "p=" + std::to_string(p) + " N=" + std::to_string(n) + " " + sl2::to_string(s);
        jobs.push_back({"rlog", inst, [p, n, s, specs](std::mt19937_64& rng) {
                          sl2::PadicContext k(p);
                          auto res = sl2::rlog_check(k, s, n, specs, rng);
                          if (!res.pass) return fail(res.detail);
                          auto rep = pass();
                          rep.detail["classes"] = res.count;
                          return rep;
                        }});
      }
      Arrangement arr(make_root_system("A1"), 1);
      for (const auto& r : c.r) {
        if (!is_integral(r) || r < Q(0)) continue;
        for (int which = 0; which < 2; ++which) {
          SubComplex sigma = which == 0 ? SubComplex{arr.cell_at({Q(0)})} : segment(arr, Q(0), Q(1));
          std::string inst = "push p=" + std::to_string(p) + " N=" + std::to_string(n) + " r=" + to_string(r) +
                             (which == 0 ? " {0}" : " [0,1]");
          jobs.push_back({"rlog", inst, [sigma, r, p, n](std::mt19937_64&) {
                            auto rep = lie::pushforward_compare(sigma, r, p, n);
                            return rep.pass ? pass() : fail(rep.witness);
                          }});
        }
      }
    }
  }
  return jobs;
}

std::vector<Job> indicator_jobs(const RunConfig& c) {
  std::vector<Job> jobs;
  const long long samples = 1000;
  for (long long p : c.p)
    for (int m : c.m)
      for (const auto& r : grid_depths(c.r, m))
        for (auto [lo, hi] : std::vector<std::pair<long long, long long>>{{0, 0}, {0, 1}, {-1, 1}, {-2, 2}, {0, 3}}) {
          std::string inst = "p=" + std::to_string(p) + " m=" + std::to_string(m) + " r=" + to_string(r) + " [" +
                             std::to_string(lo) + "," + std::to_string(hi) + "]";
          jobs.push_back({"indicator", inst, [p, m, r, lo, hi](std::mt19937_64& rng) {
                            sl2::PadicContext k(p);
                            Arrangement arr(make_root_system("A1"), m);
                            auto rep = sl2::indicator_euler_check(k, segment(arr, Q(lo), Q(hi)), r, samples, rng);
                            if (!rep.pass) return fail(rep.witness);
                            auto out = pass();
                            out.detail["samples"] = rep.samples;
                            out.detail["in_union"] = rep.in_union;
                            return out;
                          }});
        }
  // Stabilization of G_x meeting the union once the complex holds Upsilon_{x,r}.
  for (long long p : c.p)
    for (int m : c.m)
      for (const auto& r : grid_depths(c.r, m))
        for (long long xi : {0LL, 1LL}) {
          std::string inst = "stable p=" + std::to_string(p) + " m=" + std::to_string(m) + " r=" + to_string(r) +
                             " x=" + std::to_string(xi);
          jobs.push_back({"indicator", inst, [p, m, r, xi](std::mt19937_64& rng) {
                            sl2::PadicContext k(p);
                            Arrangement arr(make_root_system("A1"), m);
                            Point x = {Q(xi)};
                            std::vector<Point> pts = {x};
                            for (const auto& ch : upsilon(arr, x, r))
                              for (const auto& v : ch.vertices) pts.push_back(v);
                            auto inner = root_box(arr, pts, {0, 0});
                            auto outer = root_box(arr, pts, {2 * m, m});
                            auto rep = sl2::stabilization_check(k, Q(xi), outer, inner, r, samples, rng);
                            if (!rep.pass) return fail(rep.witness);
                            auto out = pass();
                            out.detail["samples"] = rep.samples;
                            out.detail["inner"] = inner.size();
                            out.detail["outer"] = outer.size();
                            return out;
                          }});
        }
  return jobs;
}

// --- Lie algebra and Fourier ------------------------------------------------

CheckReport fourier_report(const lie::FourierReport& f) {
  CheckReport r = f.pass ? pass() : fail(f.witness);
  if (f.exact)
    r.detail["exact"] = true;
  else
    r.detail["max_error"] = format_error(f.max_error);
  return r;
}

std::vector<Job> fourier_jobs(const RunConfig& c) {
  std::vector<Job> jobs;
  const long long p = 3;
  const int a = 1, b = 2;
  for (int m : c.m) {
    Arrangement arr(make_root_system("A1"), m);
    auto sigma = segment(arr, Q(-1), Q(1));
    for (const auto& r : c.r) {
      if (r < Q(0)) continue;
      std::string tag = "m=" + std::to_string(m) + " r=" + to_string(r);
      for (const auto& cell : sigma)
        jobs.push_back({"fourier", "cell " + tag + " " + to_string(cell), [cell, r](std::mt19937_64&) {
                          return fourier_report(lie::verify_prop_lie(lie::FiniteLieModel(p, a, b), cell, r));
                        }});
      // The signed dual-indicator identity needs r on the 1/m grid.
      if (!is_integral(r * Q(m))) continue;
      jobs.push_back({"fourier", "ep " + tag + " [-1,1]", [sigma, r, m](std::mt19937_64&) {
                        return fourier_report(lie::verify_lemma_ep(lie::FiniteLieModel(p, a, b), sigma, r, m));
                      }});
      jobs.push_back({"fourier", "projector " + tag + " [-1,1]", [sigma, r, m](std::mt19937_64&) {
                        return fourier_report(lie::verify_projector_fourier(lie::FiniteLieModel(p, a, b), sigma, r, m));
                      }});
    }
  }
  Arrangement a1(make_root_system("A1"), 1);
  jobs.push_back({"fourier", "homothety p=3 r=1 [0,1]", [s = segment(a1, Q(0), Q(1))](std::mt19937_64&) {
                    return fourier_report(lie::verify_homothety(lie::FiniteLieModel(3, 1, 3), s, 1));
                  }});
  jobs.push_back({"fourier", "homothety p=2 r=2 [-2,2]", [s = segment(a1, Q(-2), Q(2))](std::mt19937_64&) {
                    return fourier_report(lie::verify_homothety(lie::FiniteLieModel(2, 1, 5), s, 2));
                  }});
  return jobs;
}

// --- finite Steinberg -------------------------------------------------------

std::vector<Job> steinberg_jobs(const RunConfig& c) {
  std::vector<Job> jobs;
  for (long long q : c.q) {
    jobs.push_back({"steinberg", "character q=" + std::to_string(q), [q](std::mt19937_64&) {
                      auto r = steinberg::character_checks(q);
                      if (!r.pass) return fail(r.witness);
                      auto out = pass();
                      out.detail["order"] = r.order;
                      out.detail["sum_of_squares"] = r.sum_of_squares;
                      out.detail["at_one"] = r.value_at_one;
                      return out;
                    }});
    jobs.push_back({"steinberg", "hecke q=" + std::to_string(q), [q](std::mt19937_64&) {
                      auto r = steinberg::hecke_sign_action(q);
                      if (!r.pass) return fail(r.witness);
                      auto out = pass();
                      out.detail["eigenvalues"] = {to_string(r.eigen_identity), to_string(r.eigen_reflection)};
                      return out;
                    }});
    jobs.push_back({"steinberg", "index p=" + std::to_string(q), [q](std::mt19937_64&) {
                      Arrangement arr(make_root_system("A1"), 1);
                      json d = json::object();
                      for (const auto& cell : segment(arr, Q(0), Q(1))) {
                        auto r = steinberg::unipotent_index_identity(q, 3, cell);
                        d[to_string(cell)] = r.index;
                        if (!r.pass)
                          return fail("index " + std::to_string(r.index) + " vs " + std::to_string(r.expected) + " at " +
                                      to_string(cell));
                      }
                      auto out = pass();
                      out.detail = d;
                      return out;
                    }});
  }
  const long long p = 3, n = 3;
  const int count = 20;
  for (int i = 0; i < count; ++i)
    jobs.push_back({"steinberg", "depth-zero p=3 #" + pad3(i), [i, seed = c.seed](std::mt19937_64&) {
                      // Every job draws the same family and takes its own member.
                      std::mt19937_64 rng(seed);
                      auto fs = steinberg::sample_class_functions(p, n, count, rng);
                      Arrangement arr(make_root_system("A1"), 1);
                      auto r = steinberg::depth_zero_comparison(p, n, fs[static_cast<size_t>(i)], segment(arr, Q(0), Q(1)));
                      json d;
                      d["projector"] = to_string(r.projector_side);
                      d["unipotent"] = to_string(r.unipotent_side);
                      if (!r.pass) return fail("sides differ", d);
                      auto out = pass();
                      out.detail = d;
                      return out;
                    }});
  return jobs;
}

template <class T>
std::vector<T> read_list(const json& j, const std::string& key, const std::function<T(const json&)>& conv) {
  if (!j.is_array()) throw ConfigError("config key '" + key + "' must be a list");
  std::vector<T> out;
  for (const auto& e : j) {
    try {
      out.push_back(conv(e));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "' has a malformed entry");
    }
  }
  return out;
}

Q read_q(const json& e) {
  if (e.is_number_integer()) return Q(e.get<long long>());
  if (e.is_string()) return parse_q(e.get<std::string>());
  throw std::invalid_argument("not a rational");
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    default:
      return "skipped-budget";
  }
}

RunConfig default_config() { return {}; }

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  auto ints = [](const json& e) {
    if (!e.is_number_integer()) throw std::invalid_argument("not an integer");
    return e.get<long long>();
  };
  auto positive = [](const std::string& key, long long v) {
    if (v <= 0) throw ConfigError("config key '" + key + "' must be positive");
    return v;
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    if (key == "root_systems") {
      c.root_systems = read_list<std::string>(v, key, [](const json& e) { return e.get<std::string>(); });
      auto ok = supported_root_systems();
      for (const auto& n : c.root_systems)
        if (std::find(ok.begin(), ok.end(), n) == ok.end()) throw ConfigError("config key 'root_systems': unknown " + n);
    } else if (key == "m") {
      c.m.clear();
      for (long long x : read_list<long long>(v, key, ints)) c.m.push_back(static_cast<int>(positive(key, x)));
    } else if (key == "window") {
      try {
        c.window = read_q(v);
      } catch (const std::exception&) {
        throw ConfigError("config key 'window' is not a rational");
      }
      if (c.window <= Q(0)) throw ConfigError("config key 'window' must be positive");
    } else if (key == "p" || key == "q") {
      auto ps = read_list<long long>(v, key, ints);
      for (long long x : ps) {
        bool prime = x >= 2;
        for (long long d = 2; d * d <= x; ++d) prime = prime && x % d != 0;
        if (!prime) throw ConfigError("config key '" + key + "' needs primes");
      }
      (key == "p" ? c.p : c.q) = ps;
    } else if (key == "N") {
      c.n = read_list<long long>(v, key, ints);
      for (long long x : c.n) positive(key, x);
    } else if (key == "r" || key == "s") {
      auto qs = read_list<Q>(v, key, read_q);
      for (const auto& x : qs)
        if (x < Q(0)) throw ConfigError("config key '" + key + "' needs nonnegative entries");
      (key == "r" ? c.r : c.s) = qs;
    } else if (key == "seed") {
      if (!v.is_number_unsigned() && !v.is_number_integer()) throw ConfigError("config key 'seed' must be an integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "max_enumeration" || key == "max_ms" || key == "workers" || key == "samples") {
      long long x;
      try {
        x = ints(v);
      } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' must be an integer");
      }
      positive(key, x);
      if (key == "max_enumeration") c.max_enumeration = x;
      if (key == "max_ms") c.max_ms = x;
      if (key == "workers") c.workers = static_cast<int>(x);
      if (key == "samples") c.samples = static_cast<int>(x);
    } else if (key == "checks") {
      c.checks = read_list<std::string>(v, key, [](const json& e) { return e.get<std::string>(); });
      for (const auto& id : c.checks) find_check(id);
      c.checks_given = true;
    } else if (key == "timing") {
      if (!v.is_boolean()) throw ConfigError("config key 'timing' must be a boolean");
      c.timing = v.get<bool>();
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  if (c.root_systems.empty() || c.m.empty() || c.p.empty() || c.n.empty() || c.r.empty() || c.s.empty() ||
      c.q.empty())
    throw ConfigError("config lists must be nonempty");
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["root_systems"] = c.root_systems;
  j["m"] = c.m;
  j["window"] = to_string(c.window);
  j["p"] = c.p;
  j["q"] = c.q;
  j["N"] = c.n;
  j["r"] = q_list(c.r);
  j["s"] = q_list(c.s);
  j["seed"] = c.seed;
  j["max_enumeration"] = c.max_enumeration;
  j["max_ms"] = c.max_ms;
  j["workers"] = c.workers;
  j["samples"] = c.samples;
  if (c.checks_given) j["checks"] = c.checks;
  j["timing"] = c.timing;
  return j;
}

const std::vector<CheckInfo>& registry() {
  static const std::vector<CheckInfo> r = {
      {"unity", "partition of unity on every chamber", unity_jobs},
      {"finite", "Upsilon empty at s=0 and stable under padding", finite_jobs},
      {"stab", "telescoping certificate and reduction agreement", stab_jobs},
      {"euler", "Euler sum 1 on convex root boxes", euler_jobs},
      {"convex", "Moy-Prasad regions are convex", convex_jobs},
      {"projector", "projector fixes delta of each cell group", projector_jobs},
      {"equal", "convolution equality on Gamma triples", equal_jobs},
      {"rlog", "r-logarithm bijection and pushforward", rlog_jobs},
      {"indicator", "signed indicator sums and stabilization", indicator_jobs},
      {"fourier", "Fourier identities on the finite Lie model", fourier_jobs},
      {"steinberg", "finite Steinberg suite", steinberg_jobs},
  };
  return r;
}

const CheckInfo& find_check(const std::string& id) {
  for (const auto& c : registry())
    if (c.id == id) return c;
  throw ConfigError("unknown check '" + id + "'");
}

std::vector<std::string> all_check_ids() {
  std::vector<std::string> out;
  for (const auto& c : registry()) out.push_back(c.id);
  return out;
}

std::vector<CheckReport> run_jobs(const RunConfig& c, std::vector<Job> jobs) {
  std::vector<CheckReport> out(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      const auto& job = jobs[i];
      std::seed_seq seq{static_cast<std::uint32_t>(c.seed), static_cast<std::uint32_t>(c.seed >> 32),
                        static_cast<std::uint32_t>(fnv(job.check + "|" + job.instance)),
                        static_cast<std::uint32_t>(fnv(job.check + "|" + job.instance) >> 32)};
      std::mt19937_64 rng(seq);
      auto t0 = std::chrono::steady_clock::now();
      CheckReport rep;
      try {
        rep = job.run(rng);
      } catch (const sl2::BudgetExceeded& e) {
        rep = skip(std::string("enumeration budget: ") + e.what());
      } catch (const std::exception& e) {
        rep = fail(std::string("exception: ") + e.what());
      }
      rep.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      rep.check = job.check;
      rep.instance = job.instance;
      if (rep.verdict == Verdict::pass && rep.ms > static_cast<double>(c.max_ms)) {
        rep.verdict = Verdict::skipped;
        rep.witness = "wall time above max_ms";
      }
      out[i] = std::move(rep);
    }
  };
  int nw = std::max(1, std::min<int>(c.workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < nw; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::sort(out.begin(), out.end(), [](const CheckReport& a, const CheckReport& b) {
    return a.check != b.check ? a.check < b.check : a.instance < b.instance;
  });
  return out;
}

std::vector<CheckReport> run_suite(const RunConfig& c) {
  std::vector<Job> jobs;
  auto ids = c.checks_given ? c.checks : all_check_ids();
  for (const auto& id : ids) {
    auto more = find_check(id).jobs(c);
    jobs.insert(jobs.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  }
  return run_jobs(c, std::move(jobs));
}

int exit_code(const std::vector<CheckReport>& reports, bool strict) {
  for (const auto& r : reports)
    if (r.verdict == Verdict::fail || (strict && r.verdict == Verdict::skipped)) return 1;
  return 0;
}

std::string format_error(double e) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", e);
  return buf;
}

std::string emit_json(const std::vector<CheckReport>& reports, bool timing) {
  json a = json::array();
  for (const auto& r : reports) {
    json o;
    o["check"] = r.check;
    o["instance"] = r.instance;
    o["verdict"] = to_string(r.verdict);
    o["ms"] = timing ? static_cast<long long>(r.ms) : 0;
    o["witness"] = r.witness;
    o["detail"] = r.detail;
    a.push_back(o);
  }
  return a.dump(2) + "\n";
}

std::string emit_csv(const std::vector<CheckReport>& reports, bool timing) {
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
      if (ch == '"') out += '"';
      out += ch == '\n' ? ' ' : ch;
    }
    return out + "\"";
  };
  std::ostringstream os;
  os << "check,instance,verdict,ms,witness\n";
  for (const auto& r : reports)
    os << field(r.check) << ',' << field(r.instance) << ',' << to_string(r.verdict) << ','
       << (timing ? static_cast<long long>(r.ms) : 0) << ',' << field(r.witness) << '\n';
  return os.str();
}

}  // namespace bt::runner
