#pragma once

#include "bt/combinatorics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bt {

// Thresholds of g_{x,r} (or g_{x,r+}): torus valuations >= torus, the root-i
// component has valuation >= per_root[i]. Dual specs store 1 - c instead.
struct FiltrationSpec {
  long long torus = 0;
  std::vector<Q> per_root;

  bool operator==(const FiltrationSpec& o) const { return torus == o.torus && per_root == o.per_root; }
  bool operator!=(const FiltrationSpec& o) const { return !(*this == o); }
};

// nullopt encodes a zero component (valuation infinity).
struct ValuationVector {
  std::optional<long long> torus;
  std::vector<std::optional<long long>> per_root;
};

enum class RegionKind { lattice, dual };

FiltrationSpec lattice_spec(const RootSystemSpec& spec, const Point& x, const Q& r, bool strict);
FiltrationSpec dual_spec(const RootSystemSpec& spec, const Point& x, const Q& r);
bool member(const FiltrationSpec& f, const ValuationVector& v);
SubComplex region(const Apartment& apt, const ValuationVector& v, const Q& r, RegionKind kind);
std::vector<Q> jump_radii(const RootSystemSpec& spec, const Point& x);

std::string to_json_string(const FiltrationSpec& f, const RootSystemSpec& spec);

struct Su3Thresholds {
  Q alpha_raw, alpha;          // b-valuation bound for U_{alpha,x,r}, raw and rounded into 2Z+delta
  Q double_raw, double_root;   // b-valuation bound for U_{2alpha,x,r}, raw and rounded into 2Z+delta+1
  Q pair_a, pair_b;            // (a, b) bounds for U_{(alpha),x,r}
};

Su3Thresholds su3_thresholds(const Q& x, const Q& r, int delta);

}  // namespace bt
