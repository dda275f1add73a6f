#pragma once

#include "bt/projector.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace bt::sl2 {

using bt::to_string;

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// x = n * p^-S, n taken mod p^L. Absolute precision is p^(L-S), lowest valuation -S.
struct Padic {
  long long n = 0;
  bool operator==(const Padic& o) const { return n == o.n; }
};

class PadicContext {
 public:
  static constexpr int kInf = 1 << 20;

  explicit PadicContext(long long p, int shift = 10);

  long long p() const { return p_; }
  int shift() const { return S_; }
  int digits() const { return L_; }
  // Valuations at or above this are indistinguishable from zero.
  int precision() const { return L_ - S_; }

  Padic zero() const { return {0}; }
  Padic one() const { return from_int(1); }
  Padic from_int(long long v) const;
  Padic from_rational(const Q& q) const;
  Padic pow_p(int k) const;

  Padic add(Padic x, Padic y) const;
  Padic sub(Padic x, Padic y) const;
  Padic neg(Padic x) const;
  Padic mul(Padic x, Padic y) const;
  Padic inv(Padic x) const;

  int val(Padic x) const;
  // Class of x modulo p^k, as an integer in [0, p^(k+S)).
  long long residue(Padic x, int k) const;
  std::string to_string(Padic x) const;

  long long pow(int k) const { return pows_.at(k); }

 private:
  long long inverse_mod(long long a, int k) const;

  long long p_;
  int S_;
  int L_;
  long long mod_;
  std::vector<long long> pows_;
};

struct Mat2 {
  Padic a, b, c, d;
  bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

Mat2 identity(const PadicContext& k);
Mat2 mul(const PadicContext& k, const Mat2& x, const Mat2& y);
// Adjugate; equals the inverse when det = 1.
Mat2 inverse(const PadicContext& k, const Mat2& x);
Padic det(const PadicContext& k, const Mat2& x);
bool det_is_one(const PadicContext& k, const Mat2& x);
Mat2 upper(const PadicContext& k, Padic x);
Mat2 lower(const PadicContext& k, Padic x);
Mat2 diag(const PadicContext& k, Padic x);
// [[0, p^-t], [-p^t, 0]]
Mat2 weyl(const PadicContext& k, int t);
std::string to_string(const PadicContext& k, const Mat2& g);

// G_{t,r} (G_{t,r+} when strict) on the standard apartment.
struct GroupSpec {
  Q t{0};
  Q r{0};
  bool strict = false;

  long long b_th() const { return strict ? floor_q(r - t) + 1 : ceil_q(r - t); }
  long long c_th() const { return strict ? floor_q(r + t) + 1 : ceil_q(r + t); }
  long long torus_th() const { return strict ? floor_q(r) + 1 : ceil_q(r); }
  bool operator==(const GroupSpec& o) const { return t == o.t && r == o.r && strict == o.strict; }
};

std::string to_string(const GroupSpec& s);

bool member_group(const PadicContext& k, const Mat2& g, const GroupSpec& s);
// G_{t,N} is contained in s.
bool contains_level(const GroupSpec& s, const Q& t, long long level);

struct IwahoriFactors {
  Padic m, a, n;  // g = lower(m) * diag(a) * upper(n)
};
IwahoriFactors iwahori_factor(const PadicContext& k, const Mat2& g);
Mat2 from_factors(const PadicContext& k, const IwahoriFactors& f);

std::vector<Mat2> generators(const PadicContext& k, const GroupSpec& s);
Mat2 random_element(const PadicContext& k, const GroupSpec& s, std::mt19937_64& rng);

// Class of g in G_{t,*}/G_{t,level}, read off the Iwahori factors.
std::array<long long, 3> class_key(const PadicContext& k, const Mat2& g, const Q& t, long long level);
// One representative per class of G_s / G_{s.t, level}.
std::vector<Mat2> enumerate_group(const PadicContext& k, const GroupSpec& s, long long level,
                                  size_t budget = 2000000);
size_t predicted_class_count(const PadicContext& k, const GroupSpec& s, long long level);
// [big : small] by counting classes of big modulo G_{big.t, level}.
long long subgroup_index(const PadicContext& k, const GroupSpec& big, const GroupSpec& small, long long level);

// Right-invariant measure sum_i w_i * (Haar probability on reps_i * right).
struct TruncatedMeasure {
  GroupSpec right;
  std::vector<Mat2> reps;
  std::vector<Q> weights;
};

bool same_coset(const PadicContext& k, const GroupSpec& right, const Mat2& g, const Mat2& h);
TruncatedMeasure delta(const PadicContext& k, const GroupSpec& b);
// Throws unless G_{0,N} lies in b.
void check_faithful(const GroupSpec& b, long long n);
TruncatedMeasure convolve_uniform(const PadicContext& k, const GroupSpec& a, const GroupSpec& b, long long n,
                                  size_t budget = 200000);
// Merges equal cosets and drops zero weights.
TruncatedMeasure combine(const PadicContext& k, const GroupSpec& right,
                         const std::vector<std::pair<long long, TruncatedMeasure>>& terms);
bool same_measure(const PadicContext& k, const TruncatedMeasure& x, const TruncatedMeasure& y);
Q mass(const TruncatedMeasure& m);
Q measure_of_coset(const PadicContext& k, const TruncatedMeasure& m, const Mat2& g);

GroupSpec cell_group(const Polysimplex& cell, const Q& r, bool strict = true);
TruncatedMeasure apply_projector(const PadicContext& k, const SubComplex& sigma, const Q& r, const GroupSpec& target,
                                 long long n);
// Same measure built from the reduced symbolic sum.
TruncatedMeasure realize(const PadicContext& k, const FormalSignedSum& e, const GroupSpec& target, long long n);

struct LieElt {
  Padic e, h, f;  // [[h, e], [f, -h]]
};
LieElt rlog(const PadicContext& k, const Mat2& g);
// Lattice g_{t,r}: same thresholds as the group, torus part on h.
bool member_lie(const PadicContext& k, const LieElt& x, const GroupSpec& s);
std::array<long long, 3> lie_key(const PadicContext& k, const LieElt& x, const Q& t, long long level);
LieElt conjugate(const PadicContext& k, const Mat2& h, const LieElt& x);

struct CheckResult {
  bool pass = true;
  std::string detail;
  long long count = 0;
};

CheckResult rlog_check(const PadicContext& k, const GroupSpec& s, long long level, const std::vector<GroupSpec>& others,
                       std::mt19937_64& rng);

struct IndicatorReport {
  bool pass = true;
  long long samples = 0;
  long long in_union = 0;
  std::string witness;
};

// Signed indicator sum over sigma against the union indicator on sampled matrices.
IndicatorReport indicator_euler_check(const PadicContext& k, const SubComplex& sigma, const Q& r, long long samples,
                                      std::mt19937_64& rng);
// G_x meets the union over sigma and over sigma_prime in the same set, on samples from G_{x,0}.
IndicatorReport stabilization_check(const PadicContext& k, const Q& x, const SubComplex& sigma,
                                    const SubComplex& sigma_prime, const Q& r, long long samples,
                                    std::mt19937_64& rng);
Mat2 random_envelope_element(const PadicContext& k, const SubComplex& sigma, const Q& r, std::mt19937_64& rng);

}  // namespace bt::sl2
