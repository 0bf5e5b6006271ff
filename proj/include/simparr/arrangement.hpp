#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "simparr/projective.hpp"

namespace simparr {

template <class S>
struct Arrangement {
  std::vector<ProjLine<S>> lines;
};

// Optional symbolic coincidence oracle for vertex merging: returns a canonical
// key for the intersection point of lines (i, j); two pairs map to the same
// vertex iff their keys are equal. Supplied by generators whose coincidences
// are known in closed form (interval arithmetic alone can refute coincidence
// but can never certify it).
using MeetOracle = std::function<std::uint64_t(std::size_t, std::size_t)>;

// Combinatorics of an arrangement: all indices, no coordinates. Vertex ids,
// edge ids and face ids are deterministic functions of the input line order.
struct IncidenceStructure {
  struct Vertex {
    std::vector<std::size_t> lines;  // ascending incident line ids
    unsigned order() const { return static_cast<unsigned>(lines.size()); }
  };
  struct Edge {
    std::size_t line;
    std::size_t v0, v1;  // endpoints in cyclic orientation of the line
  };
  // A face boundary step: edge id + orientation (true = traversed v0 -> v1).
  struct Step {
    std::size_t edge;
    bool forward;
  };

  std::size_t n_lines = 0;
  std::vector<Vertex> vertices;
  std::vector<std::vector<std::size_t>> line_cycles;  // per line: vertex ids in cyclic order
  std::vector<Edge> edges;                            // grouped by line
  std::vector<std::vector<Step>> faces;               // boundary cycles

  std::size_t V() const { return vertices.size(); }
  std::size_t E() const { return edges.size(); }
  std::size_t F() const { return faces.size(); }
  long euler() const { return long(V()) - long(E()) + long(F()); }

  // order k -> number of vertices of that order
  std::map<unsigned, std::size_t> v_histogram() const;
  // edge ids incident to each vertex
  std::vector<std::vector<std::size_t>> vertex_edges() const;
  // face ids incident to each vertex
  std::vector<std::vector<std::size_t>> vertex_faces() const;
  // vertex ids around a face (parallel to faces[f])
  std::vector<std::size_t> face_vertices(std::size_t f) const;
};

// Builds vertices, per-line cyclic vertex orders, edges and faces. Faces are
// traced on the spherical double cover (each line lifted to a great circle,
// each vertex to an antipodal pair) and identified under the antipodal map;
// the Euler characteristics upstairs (2) and downstairs (1) are verified
// internally. Throws DuplicateLine, UndecidedCoincidence.
template <class S>
IncidenceStructure build_incidence(const Arrangement<S>& arr, const MeetOracle& oracle = {});

// True iff every face has exactly three boundary edges.
bool is_simplicial(const IncidenceStructure& s);

// Sum of v_k * (k - 3) over the vertex-order histogram (equals -3 for every
// simplicial arrangement; a discrete Gauss-Bonnet identity).
long gauss_bonnet_sum(const IncidenceStructure& s);

struct DoublePointStats {
  std::size_t count = 0;            // number of order-2 vertices
  bool has_adjacent_pair = false;   // some edge joins two order-2 vertices
};
DoublePointStats double_point_stats(const IncidenceStructure& s);

// The union of all triangles incident to a vertex of a simplicial,
// non-near-pencil arrangement, summarized by its boundary ("link") data.
struct StarReport {
  std::size_t center = 0;
  unsigned k = 0;                        // order of the center
  std::size_t exterior_vertices = 0;     // distinct link vertices
  std::size_t exterior_double_points = 0;
  std::size_t exterior_lines = 0;        // lines supporting link edges
  // Every line supporting two link edges does so at a shared exterior
  // double point, and no line supports more than two.
  bool link_line_sharing_consistent = false;
};
StarReport star(const IncidenceStructure& s, std::size_t vertex_id);

struct FamilyClass {
  enum class Kind { R0, R1, R2, Unknown } kind = Kind::Unknown;
  unsigned param = 0;  // R0: number of concurrent lines; R1/R2: m
  friend bool operator==(const FamilyClass&, const FamilyClass&) = default;
};
std::string to_string(const FamilyClass& f);

// Incidence-structure isomorphism: a line bijection inducing a vertex
// bijection that preserves incidences and per-line cyclic orders (up to
// rotation and reflection).
bool incidence_isomorphic(const IncidenceStructure& a, const IncidenceStructure& b);

}  // namespace simparr
