#pragma once

#include "bt/apartment.hpp"
#include "bt/combinatorics.hpp"

#include <vector>

namespace testing_helpers {

inline bt::Polysimplex vertex(const bt::Arrangement& arr, bt::Q t) { return arr.make_cell({{t}}); }
inline bt::Polysimplex edge(const bt::Arrangement& arr, bt::Q a, bt::Q b) { return arr.make_cell({{a}, {b}}); }

// All cells of the A1 segment [lo, hi].
inline bt::SubComplex segment(const bt::Arrangement& arr, bt::Q lo, bt::Q hi) {
  if (lo == hi) return {vertex(arr, lo)};
  return arr.cells_in_box(bt::Window{{{lo, hi}}});
}

}  // namespace testing_helpers
