#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "simparr/families.hpp"
#include "simparr/parallel.hpp"

using namespace simparr;

namespace {

// Frozen count oracle for the regular families, derived independently of the
// builder from the vertex census: one center (order m), one vertex per
// tangent pair grouped on concentric circles (m per distance class d with
// 2d < m, order 3), m/2 infinite vertices for even m (order 3, or 4 with the
// line at infinity), m tangency double points, and for the extended family
// the line at infinity adds one order-2 vertex per axis of the off parity.
struct RegularCounts {
  std::size_t V, E, F;
  std::map<unsigned, std::size_t> hist;
};

RegularCounts expected_regular_counts(unsigned m, bool with_inf) {
  std::map<unsigned, std::size_t> h;
  auto add = [&](unsigned order, std::size_t count) {
    if (count) h[order] += count;
  };
  std::size_t finite_classes = (m - 1) / 2;  // d = 1 .. ceil(m/2)-1
  add(3, m * finite_classes);                // one circle of m triple points per class
  add(2, m);                                 // tangency points
  if (m % 2 == 0) add(with_inf ? 4 : 3, m / 2);  // opposite-tangent directions
  if (with_inf) add(2, m / 2);               // axes whose direction is no tangent meet
  add(m, 1);                                 // the center (the infinity line misses it)
  RegularCounts out;
  out.V = 0;
  out.E = 0;
  for (auto [k, c] : h) {
    out.V += c;
    out.E += std::size_t(k) * c;
  }
  out.F = 1 + out.E - out.V;
  out.hist = std::move(h);
  return out;
}

bool cyclic_sizes_equal(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) return false;
  std::vector<std::size_t> r(b.rbegin(), b.rend());
  for (std::size_t s = 0; s < a.size(); ++s) {
    std::rotate(a.begin(), a.begin() + 1, a.end());
    if (a == b || a == r) return true;
  }
  return false;
}

ProjPoint<Rational> pt(long x, long y) { return {Rational(x), Rational(y), Rational(1)}; }

}  // namespace

TEST_SUITE("families") {

TEST_CASE("near-pencil generator matches the frozen counts") {
  CHECK_THROWS_AS(gen_near_pencil(1), DomainError);
  for (unsigned k : {2u, 3u, 7u}) {
    IncidenceStructure s = build_incidence(gen_near_pencil(k));
    CHECK(s.V() == k + 1);
    CHECK(s.E() == 3 * std::size_t(k));
    CHECK(s.F() == 2 * std::size_t(k));
    CHECK(is_simplicial(s));
    CHECK(gauss_bonnet_sum(s) == -3);
  }
}

TEST_CASE("even regular family: frozen census for small m") {
  for (unsigned m = 3; m <= 8; ++m) {
    CAPTURE(m);
    IncidenceStructure s = RegularFamily(m, false).incidence();
    RegularCounts want = expected_regular_counts(m, false);
    CHECK(s.V() == want.V);
    CHECK(s.E() == want.E);
    CHECK(s.F() == want.F);
    CHECK(s.v_histogram() == want.hist);
    CHECK(is_simplicial(s));
    CHECK(gauss_bonnet_sum(s) == -3);
    DoublePointStats d = double_point_stats(s);
    CHECK(d.count == m);
    CHECK_FALSE(d.has_adjacent_pair);
  }
  // Spot values pinned by hand: m = 3 is the arrangement of 6 lines with
  // 7 vertices, 18 edges, 12 triangles; m = 4 has 11/30/20.
  IncidenceStructure a6 = RegularFamily(3, false).incidence();
  CHECK(a6.V() == 7);
  CHECK(a6.E() == 18);
  CHECK(a6.F() == 12);
  IncidenceStructure a8 = RegularFamily(4, false).incidence();
  CHECK(a8.V() == 11);
  CHECK(a8.E() == 30);
  CHECK(a8.F() == 20);
}

TEST_CASE("odd regular family: line at infinity for even m") {
  CHECK_THROWS_AS(RegularFamily(5, true), DomainError);
  CHECK_THROWS_AS(RegularFamily(2, false), DomainError);
  for (unsigned m : {4u, 6u, 8u}) {
    CAPTURE(m);
    IncidenceStructure s = RegularFamily(m, true).incidence();
    RegularCounts want = expected_regular_counts(m, true);
    CHECK(s.V() == want.V);
    CHECK(s.E() == want.E);
    CHECK(s.F() == want.F);
    CHECK(s.v_histogram() == want.hist);
    CHECK(is_simplicial(s));
    CHECK(gauss_bonnet_sum(s) == -3);
  }
  IncidenceStructure a9 = RegularFamily(4, true).incidence();
  CHECK(a9.V() == 13);
  CHECK(a9.E() == 36);
  CHECK(a9.F() == 24);
}

TEST_CASE("coincidence oracle agrees with exact ring geometry") {
  for (unsigned m = 3; m <= 12; ++m) {
    for (bool with_inf : {false, true}) {
      if (with_inf && m % 2 != 0) continue;
      CAPTURE(m);
      CAPTURE(with_inf);
      RegularFamily fam(m, with_inf);
      std::size_t n = fam.n_lines();
      std::vector<TrigVec3> lines;
      for (std::size_t i = 0; i < n; ++i) lines.push_back(fam.line_coeffs(i));

      auto ring_equal = [](const TrigVec3& p, const TrigVec3& q) {
        return (p.y * q.z - p.z * q.y).is_zero() && (p.z * q.x - p.x * q.z).is_zero() &&
               (p.x * q.y - p.y * q.x).is_zero();
      };

      // Every pairwise meet coincides with the exact point its key names.
      std::set<std::uint64_t> keys;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          std::uint64_t key = fam.meet_key(i, j);
          keys.insert(key);
          TrigVec3 x = cross(lines[i], lines[j]);
          TrigVec3 named = fam.key_point(key);
          REQUIRE(ring_equal(x, named));
          REQUIRE(dot(lines[i], named).is_zero());
          REQUIRE(dot(lines[j], named).is_zero());
        }
      }

      // Distinct keys name distinct points, so the oracle's merging is exact.
      std::vector<std::uint64_t> key_list(keys.begin(), keys.end());
      std::vector<TrigVec3> pts;
      for (std::uint64_t k : key_list) pts.push_back(fam.key_point(k));
      std::vector<char> separated(key_list.size(), 0);
      par::for_indexed(key_list.size(), [&](std::size_t a) {
        for (std::size_t b = a + 1; b < key_list.size(); ++b)
          if (ring_equal(pts[a], pts[b])) return;
        separated[a] = 1;
      });
      for (std::size_t a = 0; a + 1 < key_list.size(); ++a) {
        CAPTURE(a);
        REQUIRE(separated[a] == 1);
      }

      // Concentric-circle census: each distance class d carries exactly m
      // vertices, and even m has m/2 opposite-tangent directions.
      std::map<unsigned, std::size_t> per_class;
      std::size_t at_infinity = 0;
      for (std::uint64_t k : key_list) {
        if (regular_key::kind(k) == regular_key::kFiniteVertex)
          ++per_class[unsigned(regular_key::payload_a(k))];
        if (regular_key::kind(k) == regular_key::kInfiniteVertex) ++at_infinity;
      }
      for (unsigned d = 1; 2 * d < m; ++d) CHECK(per_class[d] == m);
      CHECK(at_infinity == (m % 2 == 0 ? m / 2 : 0));
    }
  }
}

TEST_CASE("tangent polygon arrangement: census of the m-gon subdivision") {
  for (unsigned m = 3; m <= 10; ++m) {
    CAPTURE(m);
    RegularFamily fam(m, false);
    IncidenceStructure s = build_incidence(fam.tangent_arrangement(), fam.tangent_oracle());
    std::size_t mm = m;
    CHECK(s.V() == mm * (mm - 1) / 2);
    CHECK(s.E() == mm * (mm - 1));
    CHECK(s.F() == 1 + mm * (mm - 1) / 2);
    // Every vertex is a double point.
    auto h = s.v_histogram();
    CHECK(h.size() == 1);
    CHECK(h[2] == s.V());
    // Faces: the central m-gon, m triangles, and m(m-3)/2 quadrilaterals.
    std::map<std::size_t, std::size_t> fh;
    for (const auto& f : s.faces) ++fh[f.size()];
    std::map<std::size_t, std::size_t> want;
    want[3] += mm;
    if (mm > 3) want[4] += mm * (mm - 3) / 2;
    want[mm] += 1;
    CHECK(fh == want);
  }
  RegularFamily f5(5, false);
  IncidenceStructure s5 = build_incidence(f5.tangent_arrangement(), f5.tangent_oracle());
  CHECK(s5.V() == 10);
  CHECK(s5.E() == 20);
  CHECK(s5.F() == 11);
  CHECK_FALSE(is_simplicial(s5));
  CHECK(gauss_bonnet_sum(s5) == -10);
}

TEST_CASE("star reports around centers and corners") {
  // Center of the m = 3 family: a 6-vertex link with 3 tangency double
  // points, whose 6 exterior edges lie on the 3 tangents (two runs each).
  IncidenceStructure s = RegularFamily(3, false).incidence();
  std::size_t center = s.V();
  for (std::size_t v = 0; v < s.V(); ++v) {
    bool all_axes = true;
    for (std::size_t l : s.vertices[v].lines) all_axes &= l >= 3;
    if (all_axes) center = v;
  }
  REQUIRE(center < s.V());
  StarReport rep = star(s, center);
  CHECK(rep.k == 3);
  CHECK(rep.exterior_vertices == 6);
  CHECK(rep.exterior_double_points == 3);
  CHECK(rep.exterior_lines == 3);
  CHECK(rep.link_line_sharing_consistent);

  // Center of the m = 5 family.
  IncidenceStructure s10 = RegularFamily(5, false).incidence();
  std::size_t c10 = s10.V();
  for (std::size_t v = 0; v < s10.V(); ++v)
    if (s10.vertices[v].order() == 5) c10 = v;
  REQUIRE(c10 < s10.V());
  StarReport rep10 = star(s10, c10);
  CHECK(rep10.k == 5);
  CHECK(rep10.exterior_vertices == 10);
  CHECK(rep10.exterior_double_points == 5);
  CHECK(rep10.exterior_lines == 5);
  CHECK(rep10.link_line_sharing_consistent);

  // A polygon corner (two tangents and an axis): 2k = 6 exterior vertices,
  // at most k = 3 of them double, hence at least 3 exterior lines.
  std::size_t corner = s.V();
  for (std::size_t v = 0; v < s.V(); ++v) {
    const auto& ls = s.vertices[v].lines;
    if (ls.size() == 3 && ls[0] < 3 && ls[1] < 3 && ls[2] >= 3) corner = v;
  }
  REQUIRE(corner < s.V());
  StarReport repc = star(s, corner);
  CHECK(repc.k == 3);
  CHECK(repc.exterior_vertices == 6);
  CHECK(repc.exterior_double_points <= 3);
  CHECK(repc.exterior_lines >= 3);
  CHECK(repc.exterior_lines == 6 - repc.exterior_double_points);
  CHECK(repc.link_line_sharing_consistent);
}

TEST_CASE("simplicial non-near-pencils never repeat a vertex pair across edges") {
  auto pair_multiset = [](const IncidenceStructure& s) {
    std::map<std::pair<std::size_t, std::size_t>, int> mult;
    for (const auto& e : s.edges)
      ++mult[{std::min(e.v0, e.v1), std::max(e.v0, e.v1)}];
    return mult;
  };
  for (unsigned m : {3u, 4u, 5u, 6u}) {
    IncidenceStructure s = RegularFamily(m, false).incidence();
    for (const auto& [vp, c] : pair_multiset(s)) CHECK(c == 1);
  }
  IncidenceStructure s9 = RegularFamily(4, true).incidence();
  for (const auto& [vp, c] : pair_multiset(s9)) CHECK(c == 1);
  // Near-pencils do repeat pairs: both arcs of a pencil line join the apex to
  // the same crossing with the far line.
  IncidenceStructure np = build_incidence(gen_near_pencil(4));
  bool repeated = false;
  for (const auto& [vp, c] : pair_multiset(np)) repeated |= c > 1;
  CHECK(repeated);
}

TEST_CASE("vertex coordinates of tangent meets") {
  // m = 4: tangents at angles 0 and 90 degrees are x = 1 and y = 1; they
  // meet at (1, 1), at distance sqrt(2) and polar angle pi/4.
  RegularVertexCoord v = regular_vertex(4, 0, 1);
  CHECK(v.distance == 1);
  CHECK_FALSE(v.infinite);
  CHECK(v.argument_over_pi == Rational(1, 4));
  Interval two = v.modulus * v.modulus - Interval::from_rational(Rational(2));
  CHECK(two.contains_zero());
  CHECK(two.refined(80).magnitude_within(40));

  RegularFamily f4(4, false);
  TrigVec3 named = f4.key_point(f4.meet_key(0, 1));
  TrigVec3 one_one{f4.ring().one(), f4.ring().one(), f4.ring().one()};
  CHECK((named.x * one_one.y - named.y * one_one.x).is_zero());
  CHECK((named.x * one_one.z - named.z * one_one.x).is_zero());
  CHECK((named.y * one_one.z - named.z * one_one.y).is_zero());

  // m = 12, tangents 1 and 3: distance 2, radius 1/cos(pi/6) = 2/sqrt(3),
  // polar angle pi/3.
  RegularVertexCoord w = regular_vertex(12, 1, 3);
  CHECK(w.distance == 2);
  CHECK(w.argument_over_pi == Rational(1, 3));
  Interval r2 = w.modulus * w.modulus - Interval::from_rational(Rational(4, 3));
  CHECK(r2.contains_zero());
  CHECK(r2.refined(80).magnitude_within(40));

  // m = 6: opposite tangents are parallel.
  RegularVertexCoord inf = regular_vertex(6, 0, 3);
  CHECK(inf.infinite);
  CHECK(inf.argument_over_pi == Rational(1, 2));
  CHECK(inf.point.z.contains_zero());
  CHECK(inf.point.z.refined(80).magnitude_within(40));

  CHECK_THROWS_AS(regular_vertex(6, 2, 8), DomainError);   // same tangent mod m
  CHECK_THROWS_AS(regular_vertex(2, 0, 1), DomainError);
}

TEST_CASE("alignment of shifted triple points: exact signs") {
  CHECK_THROWS_AS(check_alignment(7, 0, 4), DomainError);
  CHECK_THROWS_AS(check_alignment(12, 0, 3), DomainError);

  // Non-opposite pairs are certified non-collinear; opposite pairs (2D = m)
  // are exactly collinear: their meet is the direction at infinity shared by
  // two parallel tangents, and both shifted companions straddle it on a chord
  // parallel to them.
  for (unsigned m = 8; m <= 14; ++m) {
    for (long j = 0; j < long(m); ++j) {
      for (long l = j + 4; l <= j + long(m) - 4; ++l) {
        CAPTURE(m);
        CAPTURE(j);
        CAPTURE(l);
        Sign s = check_alignment(m, j, l);
        if (2 * (l - j) == long(m))
          REQUIRE(s == Sign::Zero);
        else
          REQUIRE((s == Sign::Positive || s == Sign::Negative));
      }
    }
  }

  // The m = 8 collinear triple in explicit coordinates: the corners
  // (sqrt(2)-1, +/-1) and the vertical direction at infinity lie on the
  // vertical chord x = sqrt(2)-1.
  {
    using namespace regular_key;
    RegularFamily fam(8, false);
    TrigVec3 a = fam.key_point(make(kFiniteVertex, 1, 3));
    TrigVec3 b = fam.key_point(make(kInfiniteVertex, 4));
    TrigVec3 c = fam.key_point(make(kFiniteVertex, 1, 13));
    CHECK(det3(a, b, c).is_zero());
  }
}

TEST_CASE("intersection profile of a known transversal") {
  // m = 6, the line joining the two triple points at polar angles pi/6 and
  // 5*pi/6 on the first circle: the horizontal line y = 1/sqrt(3). It meets
  // the 12 lines in 8 groups: two triple points, five single crossings, and
  // one single crossing at infinity (the horizontal axis).
  RegularFamily fam(6, false);
  TrigVec3 a = fam.key_point(fam.meet_key(0, 1));
  TrigVec3 b = fam.key_point(fam.meet_key(2, 3));
  TrigVec3 lam = cross(a, b);
  auto cycle = line_profile(fam, lam);
  REQUIRE(cycle.size() == 8);
  std::vector<std::size_t> sizes;
  for (const auto& g : cycle) sizes.push_back(g.size());
  CHECK(cyclic_sizes_equal(sizes, {3, 1, 1, 1, 3, 1, 1, 1}));
  for (const auto& g : cycle) {
    if (g.size() == 3) {
      bool first = g == std::vector<std::size_t>{0, 1, 7};
      bool second = g == std::vector<std::size_t>{2, 3, 11};
      CHECK((first || second));
    }
  }

  // Axes carry collinear triple points but no single crossings, so the
  // forbidden window can never sit on an axis: every group on an axis other
  // than the center is a tangent pair.
  RegularFamily f8(8, false);
  auto axis_cycle = line_profile(f8, f8.line_coeffs(8 + 1));
  std::size_t centers = 0, tangent_pairs = 0, singles = 0;
  for (const auto& g : axis_cycle) {
    if (g.size() == 7) ++centers;           // the seven other axes
    if (g.size() == 1) ++singles;
    if (g.size() == 2 && g[0] < 8 && g[1] < 8) ++tangent_pairs;
  }
  CHECK(centers == 1);
  CHECK(singles == 0);
  CHECK(tangent_pairs == 4);
}

TEST_CASE("forbidden transversal pattern: absent except at opposite-tangent chords") {
  for (unsigned m : {4u, 5u, 6u, 7u, 9u}) {
    CAPTURE(m);
    CHECK(forbidden_configuration_scan(m).empty());
  }

  // For even m >= 8 the two chords flanking each pair of parallel tangents
  // join first-circle corners and are parallel to the pair, so they carry the
  // window corner / tangent crossing / shared direction at infinity / tangent
  // crossing / corner. (For m = 6 those chords degenerate to axes and are
  // excluded; the middle triple point is genuinely infinite, which is why the
  // window only closes around the projective wrap of the transversal.)
  auto v8 = forbidden_configuration_scan(8);
  REQUIRE(v8.size() == 8);
  for (const auto& viol : v8) {
    using namespace regular_key;
    CHECK(kind(viol.triples[0]) == kFiniteVertex);
    CHECK(kind(viol.triples[1]) == kInfiniteVertex);
    CHECK(kind(viol.triples[2]) == kFiniteVertex);
    CHECK(payload_a(viol.triples[0]) == 1);
    CHECK(payload_a(viol.triples[2]) == 1);
  }
  CHECK(forbidden_configuration_scan(10).size() == 10);
}

TEST_CASE("quadrilaterals crossed corner-to-corner by an axis") {
  CHECK_THROWS_AS(count_crossed_quadrilaterals(7, LambdaKind::ThroughOppositeCorners), DomainError);
  CHECK_THROWS_AS(count_crossed_quadrilaterals(6, LambdaKind::OddAxis), DomainError);
  CHECK(count_crossed_quadrilaterals(6, LambdaKind::ThroughOppositeCorners) == 2);
  CHECK(count_crossed_quadrilaterals(6, LambdaKind::ThroughTriangleInteriors) == 1);
  CHECK(count_crossed_quadrilaterals(8, LambdaKind::ThroughOppositeCorners) == 3);
  CHECK(count_crossed_quadrilaterals(8, LambdaKind::ThroughTriangleInteriors) == 2);
  CHECK(count_crossed_quadrilaterals(5, LambdaKind::OddAxis) == 1);
  CHECK(count_crossed_quadrilaterals(7, LambdaKind::OddAxis) == 2);
  CHECK(count_crossed_quadrilaterals(9, LambdaKind::OddAxis) == 3);
}

TEST_CASE("triangulated polygon bound on hand-built instances") {
  std::vector<ProjPoint<Rational>> square{pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)};

  // One diagonal in G: two triangles, bound 1 >= -1.
  CPInterInstance diag;
  diag.polygon = square;
  diag.g_lines = {ProjLine<Rational>{Rational(1), Rational(-1), Rational(0)}};
  CPInterResult r = cpinter_check(diag);
  CHECK(r.triangulates);
  CHECK(r.holds);

  // The same diagonal declared as the only F-line: 0 >= 0.
  CPInterInstance fdiag;
  fdiag.polygon = square;
  fdiag.f_lines = {ProjLine<Rational>{Rational(1), Rational(-1), Rational(0)}};
  r = cpinter_check(fdiag);
  CHECK(r.triangulates);
  CHECK(r.holds);

  // Both diagonals as F: they cross in the middle, violating the hypothesis,
  // and indeed the conclusion fails (four triangles, |G| = 0 < |F| - 1).
  CPInterInstance cross_inside;
  cross_inside.polygon = square;
  cross_inside.f_lines = {ProjLine<Rational>{Rational(1), Rational(-1), Rational(0)},
                          ProjLine<Rational>{Rational(1), Rational(1), Rational(-1)}};
  r = cpinter_check(cross_inside);
  CHECK(r.triangulates);
  CHECK_FALSE(r.holds);

  // A vertical chord: two quadrilaterals, so the claim holds vacuously.
  CPInterInstance chord;
  chord.polygon = square;
  chord.f_lines = {ProjLine<Rational>{Rational(2), Rational(0), Rational(-1)}};
  r = cpinter_check(chord);
  CHECK_FALSE(r.triangulates);
  CHECK(r.holds);

  // A bare triangle is a triangulation of itself.
  CPInterInstance bare;
  bare.polygon = {pt(0, 0), pt(2, 0), pt(0, 2)};
  r = cpinter_check(bare);
  CHECK(r.triangulates);
  CHECK(r.holds);
}

TEST_CASE("triangulated polygon bound on a seeded corpus") {
  SplitMix64 rng(0x5117c0de2026ull);
  std::size_t triangulating = 0;
  for (int i = 0; i < 200; ++i) {
    CPInterInstance inst = random_cpinter_instance(rng);
    // The generator enforces the hypothesis, so the bound must hold.
    CPInterResult r = cpinter_check(inst);
    CHECK(r.holds);
    triangulating += r.triangulates ? 1 : 0;
  }
  // The corpus is not all vacuous: bare triangles and fan-free splits occur.
  CHECK(triangulating > 0);
}

TEST_CASE("classification recognizes the canonical families") {
  CHECK(classify_family(build_incidence(gen_near_pencil(2))) ==
        FamilyClass{FamilyClass::Kind::R0, 2});
  CHECK(classify_family(build_incidence(gen_near_pencil(5))) ==
        FamilyClass{FamilyClass::Kind::R0, 5});
  CHECK(classify_family(RegularFamily(3, false).incidence()) ==
        FamilyClass{FamilyClass::Kind::R1, 3});
  CHECK(classify_family(RegularFamily(4, false).incidence()) ==
        FamilyClass{FamilyClass::Kind::R1, 4});
  CHECK(classify_family(RegularFamily(5, false).incidence()) ==
        FamilyClass{FamilyClass::Kind::R1, 5});
  CHECK(classify_family(RegularFamily(4, true).incidence()) ==
        FamilyClass{FamilyClass::Kind::R2, 4});
  CHECK(classify_family(RegularFamily(6, true).incidence()) ==
        FamilyClass{FamilyClass::Kind::R2, 6});
  CHECK(to_string(FamilyClass{FamilyClass::Kind::R2, 4}) == "R2(4)");

  Arrangement<Rational> generic;
  generic.lines = {{Rational(1), Rational(0), Rational(0)},
                   {Rational(0), Rational(1), Rational(0)},
                   {Rational(1), Rational(1), Rational(-1)},
                   {Rational(1), Rational(-1), Rational(-3)},
                   {Rational(2), Rational(1), Rational(-7)}};
  CHECK_THROWS_AS(classify_family(build_incidence(generic)), NotSimplicial);
}

}  // TEST_SUITE
