#pragma once

#include "bt/sl2.hpp"

#include <random>
#include <string>
#include <vector>

namespace bt::steinberg {

// Matrix over F_q, q prime, entries in [0, q).
struct FMat {
  long long a, b, c, d;
};

std::vector<FMat> sl2_elements(long long q);
long long steinberg_character(long long q, const FMat& g);
// Upper unitriangular elements of SL2(F_q).
long long unipotent_count(long long q);

struct CharacterReport {
  bool pass = true;
  long long order = 0;
  long long value_at_one = 0;
  long long sum_of_squares = 0;
  long long unipotents_checked = 0;
  std::string witness;
};
CharacterReport character_checks(long long q);

struct HeckeReport {
  bool pass = true;
  long long invariant_dim = 0;
  Q eigen_identity{0};
  Q eigen_reflection{0};
  long long reflection_cosets = 0;
  std::string witness;
};
HeckeReport hecke_sign_action(long long q);

struct IndexReport {
  bool pass = true;
  long long index = 0;
  long long expected = 0;
};
// [I+ : G_{cell,0+}] against |U| of the reductive quotient at the cell.
IndexReport unipotent_index_identity(long long p, long long n, const Polysimplex& cell);

// A function on I+ constant on cosets of K = G_{1/2,N}: weight per coset representative.
struct ClassFunction {
  std::vector<sl2::Mat2> reps;
  std::vector<long long> weights;
};

struct DepthZeroReport {
  bool pass = true;
  Q projector_side{0};
  Q unipotent_side{0};
};
DepthZeroReport depth_zero_comparison(long long p, long long n, const ClassFunction& f, const SubComplex& sigma);
std::vector<ClassFunction> sample_class_functions(long long p, long long n, int count, std::mt19937_64& rng);

}  // namespace bt::steinberg
