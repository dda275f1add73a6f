#pragma once

#include "bt/combinatorics.hpp"

#include <map>
#include <string>
#include <vector>

namespace bt {

// Stands for the Haar probability measure on G_{cell,depth} (or G_{cell,depth+} when strict).
struct SubgroupSymbol {
  Polysimplex cell;
  Q depth{0};
  bool strict = true;

  bool operator<(const SubgroupSymbol& o) const {
    if (cell != o.cell) return cell < o.cell;
    if (depth != o.depth) return depth < o.depth;
    return strict < o.strict;
  }
  bool operator==(const SubgroupSymbol& o) const {
    return cell == o.cell && depth == o.depth && strict == o.strict;
  }
};

struct FormalSignedSum {
  std::map<SubgroupSymbol, long long> terms;

  void add(const SubgroupSymbol& sym, long long coeff);
  bool operator==(const FormalSignedSum& o) const { return terms == o.terms; }
  bool operator!=(const FormalSignedSum& o) const { return !(*this == o); }
};

std::string to_string(const FormalSignedSum& e);

inline int dim_sign(const Polysimplex& c) { return c.dim % 2 == 0 ? 1 : -1; }

FormalSignedSum formal_projector(const Arrangement& arr, const SubComplex& sigma, const Q& r);
long long euler_sum(const std::vector<Polysimplex>& cells);

struct TelescopeClass {
  Polysimplex sigma_p;
  Polysimplex sigma_pp;
  SubComplex cells;
  long long euler = 0;
  bool is_interval = false;
};

struct TelescopeResult {
  bool ok = false;
  std::string failure;
  std::vector<TelescopeClass> classes;
};

// Splits sigma minus sigma_prime into fibres of the retraction and certifies each one.
TelescopeResult telescope_partition(const Arrangement& arr, const Point& x, const Q& s,
                                    const SubComplex& sigma_prime, const SubComplex& sigma);
TelescopeResult telescope_partition(const Arrangement& arr, Retraction& ret, const SubComplex& sigma_prime,
                                    const SubComplex& sigma);

// Replaces every symbol by the one on its minimal face; models convolution with G_{x,(r+s)+}.
FormalSignedSum reduce_against(const Arrangement& arr, const FormalSignedSum& e, const Point& x, const Q& r,
                               const Q& s);
FormalSignedSum reduce_against(Retraction& ret, const FormalSignedSum& e, const Q& r);

// Every refined affine root positive on tau is positive on tau_p or exceeds s at x.
bool rootwise_criterion(const Arrangement& arr, const Polysimplex& tau, const Polysimplex& tau_p, const Point& x,
                        const Q& s);

}  // namespace bt
