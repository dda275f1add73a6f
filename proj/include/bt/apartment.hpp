#pragma once

#include "bt/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bt {

// Roots are integer linear forms in simple-root coordinates: x_i = alpha_i(x).
struct RootSystemSpec {
  std::string name;
  int rank = 0;
  std::vector<std::vector<int>> roots;
  std::vector<std::vector<Q>> inner_product;
  std::vector<Progression> progressions;
  std::vector<size_t> cell_roots;
  std::vector<std::vector<int>> components;
  std::vector<int> coxeter;
  int delta = 0;
};

RootSystemSpec make_root_system(const std::string& name, int delta = 0);
std::vector<std::string> supported_root_systems();

struct AffineFunctional {
  std::vector<int> root;
  Q constant{0};

  Q operator()(const Point& x) const;
  bool operator==(const AffineFunctional& o) const { return root == o.root && constant == o.constant; }
  bool operator<(const AffineFunctional& o) const {
    return root != o.root ? root < o.root : constant < o.constant;
  }
};

std::string to_string(const AffineFunctional& f);

struct Polysimplex {
  int level = 1;
  std::vector<Point> vertices;
  int dim = 0;

  bool operator==(const Polysimplex& o) const { return vertices == o.vertices; }
  bool operator!=(const Polysimplex& o) const { return !(*this == o); }
  bool operator<(const Polysimplex& o) const { return vertices < o.vertices; }
  Point barycenter() const { return bt::barycenter(vertices); }
  // tau is a face of *this.
  bool has_face(const Polysimplex& tau) const;
};

std::string to_string(const Polysimplex& s);

struct Window {
  std::vector<std::pair<Q, Q>> bounds;

  bool contains(const Point& x) const;
  Window padded(const Q& pad) const;
};

Window box_around(const Point& x, const Q& radius);

class Arrangement {
 public:
  Arrangement(RootSystemSpec spec, int m);

  const RootSystemSpec& spec() const { return spec_; }
  int level() const { return m_; }
  int rank() const { return spec_.rank; }

  Q root_value(size_t i, const Point& x) const;
  const Progression& refined(size_t i) const { return refined_[i]; }
  // Zero loci of coordinate i lie on this grid.
  Progression coordinate_grid(int i) const;

  // Sign-vector key: 2k on the k-th wall, 2k+1 strictly between walls k and k+1.
  std::vector<long long> key(const Point& x) const;

  Polysimplex cell_at(const Point& x) const;
  Polysimplex make_cell(std::vector<Point> vertices) const;
  bool is_vertex(const Point& x) const;
  bool is_cell(const std::vector<Point>& sorted_vertices) const;

  std::vector<Polysimplex> faces(const Polysimplex& s) const;
  std::vector<Polysimplex> star(const Polysimplex& s) const;
  // All cells whose closure lies in the box.
  std::vector<Polysimplex> cells_in_box(const Window& box) const;
  Window grid_hull(const std::vector<Point>& pts, int extra_steps = 0) const;

  std::vector<AffineFunctional> simple_affine_roots(const Polysimplex& chamber) const;
  std::vector<std::pair<AffineFunctional, Q>> partition_of_unity(const Polysimplex& chamber) const;

  // All refined affine roots with vector part root i, as a progression of constants.
  AffineFunctional functional(size_t i, const Q& c) const { return {spec_.roots[i], c}; }

 private:
  int affine_dim(const std::vector<Point>& pts) const;
  std::vector<Point> vertices_in_unit_box() const;

  RootSystemSpec spec_;
  int m_;
  std::vector<Progression> refined_;
  std::vector<Point> base_vertices_;
};

class Apartment {
 public:
  Apartment(const RootSystemSpec& spec, int m, Window window);
  Apartment(std::shared_ptr<const Arrangement> arr, Window window);

  const Arrangement& arrangement() const { return *arr_; }
  std::shared_ptr<const Arrangement> arrangement_ptr() const { return arr_; }
  const Window& window() const { return window_; }
  const std::vector<Polysimplex>& cells() const { return cells_; }
  std::optional<size_t> index_of(const Polysimplex& s) const;
  bool contains(const Polysimplex& s) const { return index_of(s).has_value(); }

  std::vector<Polysimplex> chambers() const;
  std::vector<Polysimplex> vertices() const;
  std::vector<Polysimplex> faces(const Polysimplex& s) const;
  const std::vector<size_t>& face_ids(size_t id) const { return face_ids_[id]; }
  std::vector<AffineFunctional> simple_affine_roots(const Polysimplex& chamber) const;
  std::vector<std::pair<AffineFunctional, Q>> partition_of_unity(const Polysimplex& chamber) const;
  Polysimplex locate(const Point& x) const;

 private:
  void build();

  std::shared_ptr<const Arrangement> arr_;
  Window window_;
  std::vector<Polysimplex> cells_;
  std::map<std::vector<Point>, size_t> index_;
  std::vector<std::vector<size_t>> face_ids_;
};

}  // namespace bt
