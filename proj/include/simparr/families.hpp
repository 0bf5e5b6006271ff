#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "simparr/arrangement.hpp"
#include "simparr/interval.hpp"
#include "simparr/projective.hpp"
#include "simparr/rng.hpp"
#include "simparr/scalar.hpp"
#include "simparr/trigring.hpp"

namespace simparr {

class SplitMix64;

// ---------------------------------------------------------------------------
// Near-pencils: k concurrent lines plus one line avoiding the common point.
// Realized as the lines y = i*x (i = 0..k-1) through the origin together with
// the line z = 0. Requires k >= 2 (k+1 lines total).
// ---------------------------------------------------------------------------
Arrangement<Rational> gen_near_pencil(unsigned k);

// ---------------------------------------------------------------------------
// Regular simplicial families. The lines are the m tangents of the unit
// circle at the m-th roots of unity (ids 0..m-1, tangent j touching at angle
// 2*pi*j/m), the m mirror axes of the regular m-gon through the origin (ids
// m..2m-1, axis i normal to angle pi*i/m + pi/2), and optionally the line at
// infinity (id 2m, only meaningful when m is even: for odd m the line at
// infinity carries no triple point of the tangent/axis arrangement).
//
// All coordinates are rational combinations of cos/sin of multiples of
// pi/(2m) and therefore live in one cyclotomic field; the family exposes both
// exact symbolic coefficients (TrigVec3 over its ring) and certified interval
// coordinates, plus a closed-form coincidence oracle that names each vertex
// of the arrangement by a symbolic key, so incidence structures can be built
// without any numeric vertex merging.
// ---------------------------------------------------------------------------

// Symbolic vertex keys produced by the coincidence oracle. Encoded in a
// uint64 as kind*2^32 + payload so they can flow through MeetOracle.
namespace regular_key {
constexpr std::uint64_t kFiniteVertex = 1;  // payload d*2^16 + s: the vertex at
                                            // distance class d (1 <= 2d < m)
                                            // and direction angle s*pi/m
constexpr std::uint64_t kTangencyPoint = 2;  // payload j: tangent j touches the
                                             // circle (double point)
constexpr std::uint64_t kInfiniteVertex = 3;  // payload t: direction t*pi/m at
                                              // infinity (opposite tangents,
                                              // m even)
constexpr std::uint64_t kCenter = 4;          // all axes concur at the origin
constexpr std::uint64_t kAxisAtInfinity = 5;  // payload i: axis i meets the
                                              // line at infinity alone

inline std::uint64_t make(std::uint64_t kind, std::uint64_t a = 0, std::uint64_t b = 0) {
  return (kind << 32) | (a << 16) | b;
}
inline std::uint64_t kind(std::uint64_t key) { return key >> 32; }
inline std::uint64_t payload_a(std::uint64_t key) { return (key >> 16) & 0xFFFF; }
inline std::uint64_t payload_b(std::uint64_t key) { return key & 0xFFFF; }
}  // namespace regular_key

class RegularFamily {
 public:
  // m >= 3; with_line_at_infinity requires m even.
  RegularFamily(unsigned m, bool with_line_at_infinity);

  unsigned m() const { return m_; }
  bool with_line_at_infinity() const { return inf_; }
  std::size_t n_lines() const { return 2 * std::size_t(m_) + (inf_ ? 1 : 0); }
  const TrigRing& ring() const { return *ring_; }

  // Exact symbolic coefficients of line `id` (valid while the family lives).
  TrigVec3 line_coeffs(std::size_t id) const;
  // Exact homogeneous coordinates of the vertex named by an oracle key.
  TrigVec3 key_point(std::uint64_t key) const;
  // Symbolic key of the intersection of two distinct lines.
  std::uint64_t meet_key(std::size_t i, std::size_t j) const;

  // Certified interval realization and the matching coincidence oracle.
  Arrangement<Interval> arrangement() const;
  MeetOracle oracle() const;
  IncidenceStructure incidence() const;

  // Same, restricted to a subset of the family's lines (ids into this
  // family); the oracle is re-indexed to subset positions.
  Arrangement<Interval> sub_arrangement(const std::vector<std::size_t>& ids) const;
  MeetOracle sub_oracle(std::vector<std::size_t> ids) const;

  // The m circle tangents alone (the edge-line arrangement of the m-gon).
  Arrangement<Interval> tangent_arrangement() const;
  MeetOracle tangent_oracle() const;

 private:
  unsigned m_;
  bool inf_;
  std::shared_ptr<const TrigRing> ring_;
};

inline RegularFamily regular_family(unsigned m, bool with_line_at_infinity) {
  return RegularFamily(m, with_line_at_infinity);
}

struct RegularSpec {
  unsigned m = 3;
  bool with_line_at_infinity = false;
};

inline IncidenceStructure gen_regular(const RegularSpec& spec) {
  return RegularFamily(spec.m, spec.with_line_at_infinity).incidence();
}

// ---------------------------------------------------------------------------
// Vertex geometry of the regular family. Tangents j and l (j != l mod m)
// meet, when the cyclic distance d = dist(j, l) satisfies 2d != m, at the
// point with polar angle (j+l)*pi/m and radius 1/cos(d*pi/m); when 2d = m
// they are parallel and meet at infinity in direction (j+l)*pi/m.
// ---------------------------------------------------------------------------
struct RegularVertexCoord {
  unsigned m = 0;
  unsigned j = 0, l = 0;           // residues mod m, j != l
  unsigned distance = 0;           // cyclic distance, 1..floor(m/2)
  bool infinite = false;           // 2*distance == m
  Interval modulus;                // 1/cos(distance*pi/m); zero when infinite
  Rational argument_over_pi;       // polar angle as a multiple of pi: (j+l)/m
  ProjPoint<Interval> point;       // homogeneous coordinates ([cos:sin:0] at infinity)
};

RegularVertexCoord regular_vertex(unsigned m, long j, long l);

// ---------------------------------------------------------------------------
// Triple-point alignment test. For tangents at cyclic distance >= 4 (m >= 8)
// the triple point N(j,l) = T_j /\ T_l is tested against its two shifted
// companions:
//   pattern A:  N(j, l), N(j+1, l-2), N(j-1, l+2)
//   pattern B:  N(j, l), N(j+2, l-1), N(j-2, l+1)
// Determinants are evaluated exactly in Q(zeta_4m), so the result is never
// heuristic: returns the sign of the pattern-A determinant once both patterns
// are certified nonzero (the three points are not collinear in either
// pattern), and Zero if either determinant vanishes exactly. The Zero case is
// not hypothetical: it occurs for every pair of opposite tangents (2|l-j| = m,
// m even), whose meet is the common direction at infinity of two parallel
// tangents — the outer points of each pattern are then mirror images under
// the reflection fixing that direction, and their chord passes through it.
// ---------------------------------------------------------------------------
Sign check_alignment(unsigned m, long j, long l);

// ---------------------------------------------------------------------------
// Exhaustive scan for the forbidden transversal pattern. A candidate
// transversal is the join of two triple points of the regular arrangement
// A(2m) (tangents + axes) that is not itself a line of the arrangement, does
// not pass through the center, and is not the line at infinity. Along each
// candidate the intersections with all 2m lines are grouped exactly (in the
// cyclotomic ring), classified as triple points (three lines), edge-interior
// points (one line), or other, ordered cyclically along the transversal, and
// every window of five consecutive intersection groups is tested for the
// pattern triple / interior / triple / interior / triple. Returns all
// violating windows.
//
// The scan is empty for odd m and for m in {4, 6}, but NOT for even m >= 8:
// for each pair of opposite (parallel) tangents, the two chords joining the
// adjacent polygon corners on either side are perpendicular to the mirror
// axis between them, hence parallel to the tangent pair; each such chord
// carries the pattern corner / tangent crossing / common direction at
// infinity / tangent crossing / corner, where the infinite point is a genuine
// triple point (two tangents plus one axis). These 2*(m/2) = m windows wrap
// through the candidate's own point at infinity and are reported faithfully.
// ---------------------------------------------------------------------------
struct ForbiddenConfiguration {
  std::uint64_t lambda_a = 0, lambda_b = 0;  // keys of the joined triple points
  std::array<std::uint64_t, 3> triples{};    // keys of the window's triple points
};

std::vector<ForbiddenConfiguration> forbidden_configuration_scan(unsigned m);

// Classified intersection profile of an arbitrary exact line against the
// family's lines: groups of line ids meeting the given line at a common
// point, in cyclic order along it (lines projectively equal to it are
// skipped). Used by the scan and by its inversion sanity checks.
std::vector<std::vector<std::size_t>> line_profile(const RegularFamily& fam,
                                                   const TrigVec3& lam);

// ---------------------------------------------------------------------------
// Quadrilateral census along a transversal of the tangent polygon. In the
// arrangement of the m tangents plus one mirror axis Lambda, counts the cells
// of the tangents-only arrangement that the axis crosses corner-to-corner,
// i.e. the Lambda-edges whose endpoints are both vertices of the tangent
// arrangement and whose two adjacent faces reunite to a quadrilateral
// (|f1| + |f2| - 2 = 4 with no new corner). The three geometric situations:
//   ThroughOppositeCorners   m even, axis through two opposite polygon corners
//   ThroughTriangleInteriors m even, axis through two opposite tangency points
//   OddAxis                  m odd, axis through one corner and one tangency
// ---------------------------------------------------------------------------
enum class LambdaKind { ThroughOppositeCorners, ThroughTriangleInteriors, OddAxis };

unsigned count_crossed_quadrilaterals(unsigned m, LambdaKind kind);

// ---------------------------------------------------------------------------
// Triangulated convex polygon counting bound. Given a convex polygon P, a
// family F of lines crossing the interior of P that pairwise intersect
// strictly outside the closed polygon, and a further family G of lines
// crossing the interior: if the lines of F and G together cut P into
// triangles, then |G| >= |F| - 1. cpinter_check decides, exactly over the
// rationals, whether the instance triangulates P and whether the bound holds
// (an instance that does not triangulate P satisfies the claim vacuously).
// ---------------------------------------------------------------------------
struct CPInterInstance {
  std::vector<ProjPoint<Rational>> polygon;  // convex, in circular order, affine
  std::vector<ProjLine<Rational>> f_lines;
  std::vector<ProjLine<Rational>> g_lines;
};

struct CPInterResult {
  bool triangulates = false;
  bool holds = false;
};

CPInterResult cpinter_check(const CPInterInstance& inst);

// Seeded random instance: a convex polygon with rational vertices on a
// circle, F-lines through pairs of interior points accepted only when they
// meet every earlier F-line outside the closed polygon, G-lines through
// pairs of interior points. Drawing F first biases the corpus toward
// instances where the bound is tight.
CPInterInstance random_cpinter_instance(SplitMix64& rng);

// ---------------------------------------------------------------------------
// Classification of a simplicial incidence structure against the known
// families: near-pencils (a vertex of order n-1), the even regular family
// (n = 2m tangents+axes), and the odd regular family (n = 2m+1 with the line
// at infinity, m even). Throws NotSimplicial for non-simplicial input.
// ---------------------------------------------------------------------------
FamilyClass classify_family(const IncidenceStructure& s);

}  // namespace simparr
