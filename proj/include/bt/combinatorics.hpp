#pragma once

#include "bt/apartment.hpp"

#include <map>
#include <vector>

namespace bt {

// Sorted, duplicate-free list of cells.
using SubComplex = std::vector<Polysimplex>;

SubComplex normalize(SubComplex cells);
bool contains(const SubComplex& s, const Polysimplex& c);

// sigma lies in Gamma_s(sigma_p, x): no refined affine root that is <= 0 on sigma_p
// and <= s at x is positive on sigma. Checked root by root with the largest such constant.
bool in_gamma(const Arrangement& arr, const Polysimplex& sigma_p, const Point& x, const Q& s,
              const Polysimplex& sigma);
SubComplex gamma(const Arrangement& arr, const Polysimplex& sigma_p, const Point& x, const Q& s);

// Chambers whose simple affine roots are all <= s at x. Search box is the
// s*(h-1) neighbourhood of x plus pad extra grid steps.
SubComplex upsilon(const Arrangement& arr, const Point& x, const Q& s, int pad = 0);

Polysimplex min_face(const Arrangement& arr, const Point& x, const Q& s, const Polysimplex& sigma);
// min_face for fixed (x, s), memoized. Not thread-safe.
class Retraction {
 public:
  Retraction(const Arrangement& arr, Point x, Q s) : arr_(arr), x_(std::move(x)), s_(std::move(s)) {}
  const Polysimplex& operator()(const Polysimplex& sigma);
  const Point& x() const { return x_; }
  const Q& s() const { return s_; }

 private:
  const Arrangement& arr_;
  Point x_;
  Q s_;
  std::map<Polysimplex, Polysimplex> memo_;
};

Polysimplex max_polysimplex(const Arrangement& arr, const Point& x, const Q& s, const Polysimplex& sigma_p);
SubComplex interval(const Arrangement& arr, const Polysimplex& lo, const Polysimplex& hi);

// Upper bounds a_r(v) <= u_r, one per cell root; lower bounds come from the negated root.
std::vector<Q> root_bounds(const Arrangement& arr, const std::vector<Point>& pts);
SubComplex cells_in_root_box(const Arrangement& arr, const std::vector<Q>& upper);

bool is_closed(const Arrangement& arr, const SubComplex& s);
// Compares s with the intersection of all wall half-spaces containing it.
bool is_convex(const Arrangement& arr, const SubComplex& s);
// Segment-trace test between all pairs of cell barycenters. Slow; used as a cross-check.
bool is_convex_by_segments(const Arrangement& arr, const SubComplex& s);

}  // namespace bt
