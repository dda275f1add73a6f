#pragma once

#include "bt/moy_prasad.hpp"
#include "bt/sl2.hpp"

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace bt::lie {

using cplx = std::complex<double>;

// sl2 coordinates (e, h, f), each in p^-A Z / p^B Z, stored as p^A * x in Z/p^(A+B).
// The dual has shape p^-(B-1) Z / p^(A+1) Z, stored as p^(B-1) * b, so both sides
// are (Z/n)^3 with n = p^(A+B) and psi(<b,a>) = exp(2 pi i sum beta_j alpha_j / n).
class FiniteLieModel {
 public:
  FiniteLieModel(long long p, int a, int b);

  long long p() const { return p_; }
  int low() const { return a_; }
  int high() const { return b_; }
  long long n() const { return n_; }
  size_t size() const { return static_cast<size_t>(n_ * n_ * n_); }

  size_t index(long long e, long long h, long long f) const;
  std::array<long long, 3> coords(size_t idx) const;

  // Valuation of a stored coordinate, kInf for zero.
  int primal_val(long long c) const;
  int dual_val(long long c) const;
  cplx psi_pairing(size_t primal, size_t dual) const;
  // The character on p^-K Z / p Z, argument stored as p^K x mod p^(K+1).
  cplx psi(long long u, int k) const;

  std::vector<cplx> fourier(const std::vector<cplx>& h) const;
  // Multiplication by p^k on either side.
  size_t scale(size_t idx, int k) const;
  size_t negate(size_t idx) const;

  static constexpr int kInf = 1 << 20;

 private:
  long long p_;
  int a_, b_;
  long long n_;
  std::vector<cplx> roots_;
};

// Thresholds as (e, h, f) = (root alpha, torus, root -alpha).
std::array<Q, 3> primal_thresholds(const FiltrationSpec& f);
bool in_primal_lattice(const FiniteLieModel& m, size_t idx, const std::array<Q, 3>& th);
bool in_dual_lattice(const FiniteLieModel& m, size_t idx, const std::array<Q, 3>& th);
// Exact uniform probability measure on the image of the lattice.
std::map<size_t, Q> lattice_measure(const FiniteLieModel& m, const std::array<Q, 3>& th);

struct FourierReport {
  bool pass = true;
  bool exact = false;
  double max_error = 0;
  std::string witness;
};

FourierReport verify_prop_lie(const FiniteLieModel& m, const Polysimplex& cell, const Q& r);
// Both need r in (1/grid)Z and throw otherwise.
FourierReport verify_lemma_ep(const FiniteLieModel& m, const SubComplex& sigma, const Q& r, int grid);
FourierReport verify_projector_fourier(const FiniteLieModel& m, const SubComplex& sigma, const Q& r, int grid);
FourierReport verify_homothety(const FiniteLieModel& m, const SubComplex& sigma, long long r);
FourierReport pushforward_compare(const SubComplex& sigma, const Q& r, long long p, long long n);

// Character sanity: descends to the quotient, trivial on pZ_p, nontrivial on Z_p.
bool character_ok(const FiniteLieModel& m);

}  // namespace bt::lie
