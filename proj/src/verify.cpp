#include "simparr/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <sstream>

#include "simparr/arrangement.hpp"
#include "simparr/cubics.hpp"
#include "simparr/families.hpp"
#include "simparr/parallel.hpp"
#include "simparr/rng.hpp"
#include "simparr/trigring.hpp"

namespace simparr {

namespace {

// ---------------------------------------------------------------------------
// Case fan-out. Each case writes only its own failure slot; the assembled
// report concatenates slots in case order, so the parallel and serial paths
// produce identical bytes. Exceptions become "undecided:"/"error:" failures
// instead of aborting the whole suite.
// ---------------------------------------------------------------------------
template <class Fn>
std::vector<std::string> run_cases(std::size_t n, const Fn& fn) {
  std::vector<std::vector<std::string>> slots(n);
  par::for_indexed(n, [&](std::size_t i) {
    try {
      fn(i, slots[i]);
    } catch (const UndecidedCoincidence& e) {
      slots[i].push_back("undecided: " + std::string(e.what()));
    } catch (const UndecidedEquality& e) {
      slots[i].push_back("undecided: " + std::string(e.what()));
    } catch (const MaxPrecisionExceeded& e) {
      slots[i].push_back("undecided: " + std::string(e.what()));
    } catch (const ConvergenceFailure& e) {
      slots[i].push_back("undecided: " + std::string(e.what()));
    } catch (const std::exception& e) {
      slots[i].push_back("error: " + std::string(e.what()));
    }
  });
  std::vector<std::string> out;
  for (const auto& s : slots) out.insert(out.end(), s.begin(), s.end());
  return out;
}

// ---------------------------------------------------------------------------
// The generated family corpus: near-pencils R0(k), the even regular family
// R1(m) = 2m lines, and the odd regular family R2(m) = 2m + 1 lines (m even).
// ---------------------------------------------------------------------------
struct CorpusEntry {
  std::string label;
  FamilyClass::Kind kind;
  unsigned param;
};

std::vector<CorpusEntry> corpus_entries(const VerifyOptions& opt, bool include_r0) {
  std::vector<CorpusEntry> out;
  if (include_r0)
    for (unsigned k = opt.near_pencil_min; k <= opt.near_pencil_max; ++k)
      out.push_back({"R0(" + std::to_string(k) + ")", FamilyClass::Kind::R0, k});
  for (unsigned m = opt.regular_min_m; m <= opt.regular_max_m; ++m)
    out.push_back({"R1(" + std::to_string(m) + ")", FamilyClass::Kind::R1, m});
  for (unsigned m = std::max(4u, opt.regular_min_m + (opt.regular_min_m & 1u));
       m <= opt.regular_max_m; m += 2)
    out.push_back({"R2(" + std::to_string(m) + ")", FamilyClass::Kind::R2, m});
  return out;
}

IncidenceStructure build_corpus_entry(const CorpusEntry& e) {
  switch (e.kind) {
    case FamilyClass::Kind::R0: return build_incidence(gen_near_pencil(e.param));
    case FamilyClass::Kind::R1: return RegularFamily(e.param, false).incidence();
    default: return RegularFamily(e.param, true).incidence();
  }
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

SuiteResult suite_gauss_bonnet(const VerifyOptions& opt) {
  std::vector<CorpusEntry> entries = corpus_entries(opt, true);
  SuiteResult r{"gauss-bonnet", entries.size(), {}};
  r.failures = run_cases(entries.size(), [&](std::size_t i, std::vector<std::string>& fail) {
    IncidenceStructure s = build_corpus_entry(entries[i]);
    long g = gauss_bonnet_sum(s);
    if (g != -3)
      fail.push_back(entries[i].label + ": sum v_k(k-3) = " + std::to_string(g) + ", expected -3");
    if (s.euler() != 1)
      fail.push_back(entries[i].label + ": Euler characteristic " + std::to_string(s.euler()) +
                     ", expected 1");
  });
  return r;
}

SuiteResult suite_tangent_polygon(const VerifyOptions& opt) {
  std::vector<unsigned> ms;
  for (unsigned m = opt.tangent_polygon_min_m; m <= opt.tangent_polygon_max_m; ++m)
    ms.push_back(m);
  SuiteResult r{"tangent-polygon", ms.size(), {}};
  r.failures = run_cases(ms.size(), [&](std::size_t i, std::vector<std::string>& fail) {
    unsigned m = ms[i];
    std::string label = "m=" + std::to_string(m);
    RegularFamily fam(m, false);
    IncidenceStructure s = build_incidence(fam.tangent_arrangement(), fam.tangent_oracle());
    std::size_t expected_f = 1 + std::size_t(m) + std::size_t(m) * (m - 3) / 2;
    if (s.F() != expected_f)
      fail.push_back(label + ": " + std::to_string(s.F()) + " faces, expected " +
                     std::to_string(expected_f));
    // Face-size census: the central m-gon, m triangles, m(m-3)/2
    // quadrilaterals.
    std::map<std::size_t, std::size_t> hist, expect;
    for (std::size_t f = 0; f < s.F(); ++f) ++hist[s.faces[f].size()];
    expect[m] += 1;
    expect[3] += m;
    if (m >= 4) expect[4] += std::size_t(m) * (m - 3) / 2;
    if (hist != expect) {
      std::ostringstream os;
      os << label << ": face-size census {";
      for (auto& [k, c] : hist) os << ' ' << k << ":" << c;
      os << " }, expected {";
      for (auto& [k, c] : expect) os << ' ' << k << ":" << c;
      os << " }";
      fail.push_back(os.str());
    }
  });
  return r;
}

SuiteResult suite_star(const VerifyOptions& opt) {
  std::vector<CorpusEntry> entries = corpus_entries(opt, false);
  SuiteResult r{"star", entries.size(), {}};
  r.failures = run_cases(entries.size(), [&](std::size_t i, std::vector<std::string>& fail) {
    IncidenceStructure s = build_corpus_entry(entries[i]);
    for (std::size_t v = 0; v < s.V(); ++v) {
      StarReport rep = star(s, v);
      std::string label =
          entries[i].label + " vertex " + std::to_string(v) + " (k=" + std::to_string(rep.k) + ")";
      if (rep.exterior_vertices != 2 * std::size_t(rep.k))
        fail.push_back(label + ": " + std::to_string(rep.exterior_vertices) +
                       " exterior vertices, expected " + std::to_string(2 * rep.k));
      if (rep.exterior_double_points > rep.k)
        fail.push_back(label + ": " + std::to_string(rep.exterior_double_points) +
                       " exterior double points exceed k");
      if (rep.exterior_lines != 2 * std::size_t(rep.k) - rep.exterior_double_points)
        fail.push_back(label + ": " + std::to_string(rep.exterior_lines) +
                       " exterior lines, expected 2k - d = " +
                       std::to_string(2 * rep.k - rep.exterior_double_points));
      if (!rep.link_line_sharing_consistent)
        fail.push_back(label + ": a link line shares edges away from a double point");
    }
  });
  return r;
}

SuiteResult suite_adjacency(const VerifyOptions& opt) {
  std::vector<CorpusEntry> entries = corpus_entries(opt, true);
  SuiteResult r{"adjacency", entries.size(), {}};
  r.failures = run_cases(entries.size(), [&](std::size_t i, std::vector<std::string>& fail) {
    IncidenceStructure s = build_corpus_entry(entries[i]);
    bool adjacent = double_point_stats(s).has_adjacent_pair;
    bool near_pencil = classify_family(s).kind == FamilyClass::Kind::R0;
    if (adjacent != near_pencil)
      fail.push_back(entries[i].label + ": adjacent double-point pair " +
                     (adjacent ? "present" : "absent") + " but family " +
                     (near_pencil ? "is" : "is not") + " a near-pencil");
  });
  return r;
}

SuiteResult suite_cpinter(const VerifyOptions& opt) {
  // Instances are drawn sequentially so the corpus depends only on the seed;
  // the exact checks then fan out.
  std::vector<CPInterInstance> instances;
  instances.reserve(opt.cpinter_count);
  SplitMix64 rng(opt.seed);
  for (std::size_t i = 0; i < opt.cpinter_count; ++i)
    instances.push_back(random_cpinter_instance(rng));
  SuiteResult r{"cpinter", instances.size(), {}};
  r.failures = run_cases(instances.size(), [&](std::size_t i, std::vector<std::string>& fail) {
    const CPInterInstance& inst = instances[i];
    CPInterResult res = cpinter_check(inst);
    if (!res.holds)
      fail.push_back("instance " + std::to_string(i) + ": triangulating with |F|=" +
                     std::to_string(inst.f_lines.size()) + ", |G|=" +
                     std::to_string(inst.g_lines.size()) + " violates |G| >= |F| - 1");
  });
  return r;
}

SuiteResult suite_alignment(const VerifyOptions& opt) {
  // All tangent pairs at cyclic distance >= 4, flattened across m for load
  // balance. By rotational symmetry only the distance matters, but the claim
  // quantifies over every pair, so every pair is checked.
  struct Case {
    unsigned m;
    unsigned j, l;
  };
  std::vector<Case> cases;
  for (unsigned m = std::max(8u, opt.alignment_min_m); m <= opt.alignment_max_m; ++m)
    for (unsigned j = 0; j < m; ++j)
      for (unsigned l = j + 1; l < m; ++l) {
        unsigned d = std::min(l - j, m - (l - j));
        if (d >= 4) cases.push_back({m, j, l});
      }
  SuiteResult r{"alignment", cases.size(), {}};
  r.failures = run_cases(cases.size(), [&](std::size_t i, std::vector<std::string>& fail) {
    const Case& c = cases[i];
    Sign s = check_alignment(c.m, c.j, c.l);
    if (s == Sign::Zero)
      fail.push_back("m=" + std::to_string(c.m) + " j=" + std::to_string(c.j) +
                     " l=" + std::to_string(c.l) +
                     ": shifted triple points are exactly collinear");
    else if (s == Sign::Undecided)
      fail.push_back("undecided: m=" + std::to_string(c.m) + " j=" + std::to_string(c.j) +
                     " l=" + std::to_string(c.l));
  });
  return r;
}

SuiteResult suite_forbidden(const VerifyOptions& opt) {
  std::vector<unsigned> ms;
  for (unsigned m = opt.forbidden_min_m; m <= opt.forbidden_max_m; ++m) ms.push_back(m);
  SuiteResult r{"forbidden", ms.size(), {}};
  r.failures = run_cases(ms.size(), [&](std::size_t i, std::vector<std::string>& fail) {
    unsigned m = ms[i];
    std::vector<ForbiddenConfiguration> found = forbidden_configuration_scan(m);
    if (!found.empty())
      fail.push_back("m=" + std::to_string(m) + ": " + std::to_string(found.size()) +
                     " transversal windows carry the triple/edge/triple/edge/triple pattern");
  });
  return r;
}

SuiteResult suite_quadrilaterals(const VerifyOptions& opt) {
  struct Case {
    unsigned m;
    LambdaKind kind;
    unsigned expected;
    const char* name;
  };
  std::vector<Case> cases;
  for (unsigned m = opt.quadrilateral_min_m; m <= opt.quadrilateral_max_m; ++m) {
    if (m % 2 == 0) {
      cases.push_back({m, LambdaKind::ThroughOppositeCorners, (m - 2) / 2, "opposite-corners"});
      cases.push_back(
          {m, LambdaKind::ThroughTriangleInteriors, (m - 4) / 2, "triangle-interiors"});
    } else {
      cases.push_back({m, LambdaKind::OddAxis, (m - 3) / 2, "odd-axis"});
    }
  }
  SuiteResult r{"quadrilaterals", cases.size(), {}};
  r.failures = run_cases(cases.size(), [&](std::size_t i, std::vector<std::string>& fail) {
    const Case& c = cases[i];
    unsigned got = count_crossed_quadrilaterals(c.m, c.kind);
    if (got != c.expected)
      fail.push_back("m=" + std::to_string(c.m) + " " + c.name + ": " + std::to_string(got) +
                     " crossed quadrilaterals, expected " + std::to_string(c.expected));
  });
  return r;
}

SuiteResult suite_coset(const VerifyOptions& opt) {
  WeierstrassCubic<Rational> curve{opt.coset_a, opt.coset_b};
  SuiteResult r{"coset", opt.coset_orders.size(), {}};
  r.failures =
      run_cases(opt.coset_orders.size(), [&](std::size_t i, std::vector<std::string>& fail) {
        unsigned n = opt.coset_orders[i];
        std::string label = "n=" + std::to_string(n);
        Arrangement<Interval> arr = gen_coset_dual_arrangement(curve, n);
        TangencyReport census = count_tangent_lines(arr, curve);
        if (census.tangent != n || census.undecided != 0)
          fail.push_back(label + ": tangency census " + std::to_string(census.tangent) + "/" +
                         std::to_string(n) + " with " + std::to_string(census.undecided) +
                         " undecided, expected all tangent");
        if (census.bound_holds)
          fail.push_back(label + ": 7n >= 8k - 21 unexpectedly holds for k = n");
        IncidenceStructure s = build_incidence(arr);
        if (is_simplicial(s)) {
          fail.push_back(label + ": incidence structure is simplicial");
          return;
        }
        std::size_t big = 0;
        for (const auto& f : s.faces) big = std::max(big, f.size());
        if (big < 4)
          fail.push_back(label + ": no face with >= 4 edges despite non-simplicial verdict");
      });
  return r;
}

// Exact equality of chord-tangent points (rational backend).
bool same_point(const CubicPoint<Rational>& p, const CubicPoint<Rational>& q) {
  if (p.infinity || q.infinity) return p.infinity == q.infinity;
  return p.x == q.x && p.y == q.y;
}

std::string point_str(const CubicPoint<Rational>& p) {
  if (p.infinity) return "O";
  return "(" + p.x.str() + ", " + p.y.str() + ")";
}

SuiteResult suite_group_law(const VerifyOptions& opt) {
  // Case 0: neutral element, inverses, commutativity, small-multiple table
  // on y^2 = x^3 - x + 1. Case 1: 2-torsion arithmetic on y^2 = x^3 - x.
  // Cases 2..: sampled associativity triples on two curves of positive rank.
  struct Triple {
    int curve;
    long a, b, c;
    long t0, t1, t2;  // torsion summand index (curve 1 only)
  };
  std::vector<Triple> triples;
  SplitMix64 rng(opt.seed ^ 0x9E3779B97F4A7C15ull);
  for (std::size_t i = 0; i < opt.associativity_count; ++i) {
    Triple t{};
    t.curve = int(i % 2);
    t.a = rng.range(-8, 8);
    t.b = rng.range(-8, 8);
    t.c = rng.range(-8, 8);
    t.t0 = rng.range(0, 3);
    t.t1 = rng.range(0, 3);
    t.t2 = rng.range(0, 3);
    triples.push_back(t);
  }

  WeierstrassCubic<Rational> c1{Rational(-1), Rational(1)};
  CubicPoint<Rational> p1 = CubicPoint<Rational>::affine(Rational(1), Rational(1));
  WeierstrassCubic<Rational> c2{Rational(-25), Rational(0)};
  CubicPoint<Rational> p2 = CubicPoint<Rational>::affine(Rational(-4), Rational(6));
  std::vector<CubicPoint<Rational>> torsion2 = {
      CubicPoint<Rational>::at_infinity(), CubicPoint<Rational>::affine(Rational(0), Rational(0)),
      CubicPoint<Rational>::affine(Rational(5), Rational(0)),
      CubicPoint<Rational>::affine(Rational(-5), Rational(0))};

  SuiteResult r{"group-law", 2 + triples.size(), {}};
  r.failures = run_cases(2 + triples.size(), [&](std::size_t i, std::vector<std::string>& fail) {
    if (i == 0) {
      CubicPoint<Rational> o = CubicPoint<Rational>::at_infinity();
      if (!same_point(cubic_add(c1, p1, o), p1) || !same_point(cubic_add(c1, o, p1), p1))
        fail.push_back("identity: P + O != P");
      if (!same_point(cubic_add(c1, p1, cubic_negate(p1)), o))
        fail.push_back("inverse: P + (-P) != O");
      for (long a = -5; a <= 5; ++a)
        for (long b = -5; b <= 5; ++b) {
          CubicPoint<Rational> pa = scalar_mul(c1, a, p1), pb = scalar_mul(c1, b, p1);
          if (!same_point(cubic_add(c1, pa, pb), cubic_add(c1, pb, pa)))
            fail.push_back("commutativity fails at a=" + std::to_string(a) +
                           " b=" + std::to_string(b));
          if (!same_point(cubic_add(c1, pa, pb), scalar_mul(c1, a + b, p1)))
            fail.push_back("aP + bP != (a+b)P at a=" + std::to_string(a) +
                           " b=" + std::to_string(b));
        }
      return;
    }
    if (i == 1) {
      WeierstrassCubic<Rational> ct{Rational(-1), Rational(0)};
      std::vector<CubicPoint<Rational>> t2 = {
          CubicPoint<Rational>::affine(Rational(0), Rational(0)),
          CubicPoint<Rational>::affine(Rational(1), Rational(0)),
          CubicPoint<Rational>::affine(Rational(-1), Rational(0))};
      for (const auto& t : t2)
        if (!cubic_double(ct, t).infinity)
          fail.push_back("2-torsion: 2*" + point_str(t) + " != O on y^2 = x^3 - x");
      if (!same_point(cubic_add(ct, t2[0], t2[1]), t2[2]))
        fail.push_back("2-torsion: (0,0) + (1,0) != (-1,0)");
      return;
    }
    const Triple& t = triples[i - 2];
    CubicPoint<Rational> A, B, C;
    const WeierstrassCubic<Rational>& c = t.curve == 0 ? c1 : c2;
    if (t.curve == 0) {
      A = scalar_mul(c1, t.a, p1);
      B = scalar_mul(c1, t.b, p1);
      C = scalar_mul(c1, t.c, p1);
    } else {
      A = cubic_add(c2, scalar_mul(c2, t.a % 6, p2), torsion2[t.t0]);
      B = cubic_add(c2, scalar_mul(c2, t.b % 6, p2), torsion2[t.t1]);
      C = cubic_add(c2, scalar_mul(c2, t.c % 6, p2), torsion2[t.t2]);
    }
    CubicPoint<Rational> lhs = cubic_add(c, cubic_add(c, A, B), C);
    CubicPoint<Rational> rhs = cubic_add(c, A, cubic_add(c, B, C));
    if (!same_point(lhs, rhs))
      fail.push_back("associativity fails: (" + point_str(A) + " + " + point_str(B) + ") + " +
                     point_str(C) + " = " + point_str(lhs) + " but right association gives " +
                     point_str(rhs));
  });
  return r;
}

SuiteResult suite_conic(const VerifyOptions&) {
  using P = ProjPoint<Rational>;
  auto pt = [](long xn, long xd, long yn, long yd) {
    return P{Rational(xn, xd), Rational(yn, yd), Rational(1)};
  };
  SuiteResult r{"conic", 4 + 6 + 1, {}};
  r.failures = run_cases(r.cases, [&](std::size_t i, std::vector<std::string>& fail) {
    if (i == 0) {
      // x^2/4 + y^2 = 1
      std::array<P, 5> pts = {pt(2, 1, 0, 1), pt(-2, 1, 0, 1), pt(0, 1, 1, 1), pt(0, 1, -1, 1),
                              pt(6, 5, 4, 5)};
      if (conic_through_five(pts).cls != ConicClass::Ellipse)
        fail.push_back("five points of x^2/4 + y^2 = 1 did not classify as an ellipse");
    } else if (i == 1) {
      // x y = 1
      std::array<P, 5> pts = {pt(1, 1, 1, 1), pt(2, 1, 1, 2), pt(-1, 1, -1, 1), pt(3, 1, 1, 3),
                              pt(-2, 1, -1, 2)};
      if (conic_through_five(pts).cls != ConicClass::Hyperbola)
        fail.push_back("five points of x y = 1 did not classify as a hyperbola");
    } else if (i == 2) {
      // y = x^2
      std::array<P, 5> pts = {pt(0, 1, 0, 1), pt(1, 1, 1, 1), pt(-1, 1, 1, 1), pt(2, 1, 4, 1),
                              pt(-2, 1, 4, 1)};
      if (conic_through_five(pts).cls != ConicClass::Parabola)
        fail.push_back("five points of y = x^2 did not classify as a parabola");
    } else if (i == 3) {
      // Two lines (x y = 0) and a rank-deficient configuration.
      std::array<P, 5> pts = {pt(0, 1, 0, 1), pt(1, 1, 0, 1), pt(2, 1, 0, 1), pt(0, 1, 1, 1),
                              pt(0, 1, 2, 1)};
      if (conic_through_five(pts).cls != ConicClass::Degenerate)
        fail.push_back("points on two lines did not classify as degenerate");
      std::array<P, 5> coll = {pt(0, 1, 0, 1), pt(1, 1, 0, 1), pt(2, 1, 0, 1), pt(3, 1, 0, 1),
                               pt(0, 1, 1, 1)};
      try {
        (void)conic_through_five(coll);
        fail.push_back("four collinear points produced a unique conic");
      } catch (const RankDeficient&) {
      }
    } else if (i < 10) {
      unsigned m = unsigned(i) + 1;  // m = 5..10
      if (!regular_polygon_alignment_conditions(m))
        fail.push_back("regular " + std::to_string(m) +
                       "-gon fails the corner alignment conditions");
    } else {
      // A hexagon with one corner pushed off the circle must fail.
      TrigRing ring(6);
      std::vector<TrigVec3> corners;
      for (long j = 0; j < 6; ++j)
        corners.push_back({ring.cos_u(4 * j), ring.sin_u(4 * j), ring.one()});
      TrigValue stretch = ring.from_rational(Rational(11, 10));
      corners[0].x = stretch * corners[0].x;
      corners[0].y = stretch * corners[0].y;
      if (polygon_alignment_conditions({ring.zero(), ring.zero(), ring.one()}, corners))
        fail.push_back("perturbed hexagon unexpectedly satisfies the alignment conditions");
    }
  });
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "gauss-bonnet", "tangent-polygon", "star",           "adjacency",
      "cpinter",      "alignment",       "forbidden",      "quadrilaterals",
      "coset",        "group-law",       "conic"};
  return names;
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& opt) {
  if (name == "gauss-bonnet") return suite_gauss_bonnet(opt);
  if (name == "tangent-polygon") return suite_tangent_polygon(opt);
  if (name == "star") return suite_star(opt);
  if (name == "adjacency") return suite_adjacency(opt);
  if (name == "cpinter") return suite_cpinter(opt);
  if (name == "alignment") return suite_alignment(opt);
  if (name == "forbidden") return suite_forbidden(opt);
  if (name == "quadrilaterals") return suite_quadrilaterals(opt);
  if (name == "coset") return suite_coset(opt);
  if (name == "group-law") return suite_group_law(opt);
  if (name == "conic") return suite_conic(opt);
  throw DomainError("unknown verification suite '" + name + "'");
}

std::vector<SuiteResult> run_all_suites(const VerifyOptions& opt) {
  std::vector<SuiteResult> out;
  for (const std::string& name : suite_names()) out.push_back(run_suite(name, opt));
  return out;
}

namespace {

nlohmann::ordered_json suite_json(const SuiteResult& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["cases"] = r.cases;
  j["failures"] = r.failures;
  return j;
}

}  // namespace

std::string to_json(const SuiteResult& r) { return suite_json(r).dump(); }

std::string to_json(const std::vector<SuiteResult>& rs) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SuiteResult& r : rs) arr.push_back(suite_json(r));
  return arr.dump();
}

}  // namespace simparr
