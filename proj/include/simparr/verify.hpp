#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "simparr/scalar.hpp"

namespace simparr {

// ---------------------------------------------------------------------------
// Named verification suites. Each suite runs a fixed, seeded case list and
// reports the failures in case order; cases fan out across threads but the
// assembled report is deterministic. A case that cannot be decided at the
// precision cap is reported as a failure prefixed "undecided:". Suites:
//
//   gauss-bonnet     Sum v_k (k - 3) = -3 over the generated family corpus.
//   tangent-polygon  Face count and face-size census of the m tangent lines.
//   star             Link counts around every vertex of the non-trivial
//                    corpus: 2k exterior vertices, d <= k exterior double
//                    points, 2k - d exterior lines, consistent line sharing.
//   adjacency        Adjacent double-point pair <=> near-pencil, both ways.
//   cpinter          Triangulating F/G instances satisfy |G| >= |F| - 1.
//   alignment        Shifted triple-point patterns certified non-collinear
//                    for all tangent pairs at cyclic distance >= 4.
//   forbidden        Exhaustive transversal scan finds no five-point
//                    triple/edge/triple/edge/triple window.
//   quadrilaterals   Crossed-quadrilateral counts along the three axis kinds.
//   coset            Duals of an order-n cyclic set on a cubic: all n lines
//                    tangent, the tangency bound fails, and the built
//                    incidence structure is certified non-simplicial.
//   group-law        Chord-tangent identities: neutral element, inverses,
//                    commutativity, sampled associativity, 2-torsion.
//   conic            Five-point conic classification and the regular-polygon
//                    corner alignment conditions.
// ---------------------------------------------------------------------------

struct SuiteResult {
  std::string suite;
  std::size_t cases = 0;
  std::vector<std::string> failures;  // ordered by case index

  bool ok() const { return failures.empty(); }
};

// JSON object {"suite": ..., "cases": N, "failures": [...]} (insertion order).
std::string to_json(const SuiteResult& r);
// JSON array of suite objects.
std::string to_json(const std::vector<SuiteResult>& rs);

struct VerifyOptions {
  std::uint64_t seed = 20260814;  // cpinter instances + group-law sampling
  std::size_t cpinter_count = 10000;
  std::size_t associativity_count = 1000;
  unsigned near_pencil_min = 2, near_pencil_max = 20;     // R0 corpus
  unsigned regular_min_m = 3, regular_max_m = 12;         // R1 corpus (R2: even m >= 4)
  unsigned tangent_polygon_min_m = 3, tangent_polygon_max_m = 10;
  unsigned alignment_min_m = 8, alignment_max_m = 40;
  unsigned forbidden_min_m = 4, forbidden_max_m = 10;
  unsigned quadrilateral_min_m = 5, quadrilateral_max_m = 12;
  std::vector<unsigned> coset_orders{24, 30, 36};
  Rational coset_a{-1}, coset_b{1};  // y^2 = x^3 - x + 1
};

const std::vector<std::string>& suite_names();
SuiteResult run_suite(const std::string& name, const VerifyOptions& opt = {});
std::vector<SuiteResult> run_all_suites(const VerifyOptions& opt = {});

}  // namespace simparr
