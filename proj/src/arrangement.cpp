#include "simparr/arrangement.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <array>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "simparr/parallel.hpp"

namespace simparr {

namespace {

template <class S>
using Tri = std::array<S, 3>;

template <class S>
Tri<S> tri(const ProjPoint<S>& p) {
  return {p.x, p.y, p.z};
}
template <class S>
Tri<S> tri(const ProjLine<S>& l) {
  return {l.a, l.b, l.c};
}

template <class S>
S detv(const Tri<S>& a, const Tri<S>& b, const Tri<S>& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

template <class S>
Tri<S> crossv(const Tri<S>& a, const Tri<S>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class S>
Tri<S> negv(const Tri<S>& a) {
  return {-a[0], -a[1], -a[2]};
}

// Exact backend: rescale a triple to coprime integers by a positive factor.
// Every predicate downstream is a homogeneous determinant sign, so the
// rescaling cannot change the combinatorics; it keeps the operands of the
// rational arithmetic (whose every multiply pays for gcd canonicalization)
// small through the chained cross products and determinants.
template <class S>
Tri<S> reduced_triple(Tri<S> t) {
  if constexpr (ScalarTraits<S>::exact) {
    mpz_class l(1);
    for (const S& c : t) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
    std::array<mpz_class, 3> z;
    mpz_class g(0);
    for (int i = 0; i < 3; ++i) {
      z[i] = t[i].num() * mpz_class(l / t[i].den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z[i].get_mpz_t());
    }
    if (sgn(g) != 0)
      for (int i = 0; i < 3; ++i) t[i] = S(mpq_class(z[i] / g));
  }
  return t;
}

// Outward-rounded double interval arithmetic for the vertex-distinctness
// prefilter. Every endpoint is pushed one ulp outward, so the result interval
// always contains the true value; any NaN (inf * 0) widens to the full line.
struct DIv {
  double lo, hi;
};
inline double step_down(double x) {
  return std::nextafter(x, -std::numeric_limits<double>::infinity());
}
inline double step_up(double x) {
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}
inline DIv dmul(DIv a, DIv b) {
  const double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  for (double v : c)
    if (std::isnan(v))
      return {-std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity()};
  return {step_down(std::min({c[0], c[1], c[2], c[3]})),
          step_up(std::max({c[0], c[1], c[2], c[3]}))};
}
inline DIv dsub(DIv a, DIv b) { return {step_down(a.lo - b.hi), step_up(a.hi - b.lo)}; }

// Sign that must be strictly positive or negative; Zero means two objects
// that should have been merged were not (or a degenerate frame), Undecided
// means the backend ran out of precision. Both abort the build.
template <class S>
bool certified_positive(const S& x, const char* ctx) {
  Sign s = sign_of(x);
  if (s == Sign::Positive) return true;
  if (s == Sign::Negative) return false;
  throw UndecidedCoincidence(ctx);
}

template <class S>
ProjPoint<S> checked_meet(const ProjLine<S>& a, const ProjLine<S>& b) {
  try {
    return meet(a, b);
  } catch (const UndecidedEquality&) {
    throw UndecidedCoincidence("distinctness of two input lines could not be certified");
  }
}

// Canonical exact key for vertex merging on the rational backend: scale the
// triple so its first nonzero coordinate is 1.
std::string canonical_key(const ProjPoint<Rational>& p) {
  const Rational* first = nullptr;
  for (const Rational* c : {&p.x, &p.y, &p.z})
    if (!c->is_zero()) {
      first = c;
      break;
    }
  if (!first) throw std::logic_error("zero vector is not a projective point");
  return (p.x / *first).str() + "|" + (p.y / *first).str() + "|" + (p.z / *first).str();
}

template <class S>
struct LineData {
  std::vector<std::size_t> verts;                  // vertex ids on this line
  std::vector<std::pair<std::size_t, int>> lifts;  // (vertex, +-1), cyclic on the circle
  std::vector<Tri<S>> dir;      // tangent direction of the circle at each lift
  std::size_t edge_offset = 0;  // first downstairs edge id of this line
  std::size_t arc_offset = 0;   // first upstairs arc id of this line
  // vertex id -> (lift position of +X, lift position of -X)
  std::unordered_map<std::size_t, std::pair<std::size_t, std::size_t>> lift_pos;
};

template <class S>
struct Builder {
  const Arrangement<S>& arr;
  const MeetOracle& oracle;
  std::size_t n;

  std::vector<Tri<S>> line_tri;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<ProjPoint<S>> meets;

  std::vector<ProjPoint<S>> vrep;               // representative coordinates per vertex
  std::vector<std::vector<std::size_t>> vlines; // ascending line ids per vertex
  std::vector<LineData<S>> ld;

  IncidenceStructure out;

  explicit Builder(const Arrangement<S>& a, const MeetOracle& o) : arr(a), oracle(o), n(a.lines.size()) {}

  void run() {
    if (n < 3) throw DomainError("arrangement needs at least 3 lines");
    line_tri.reserve(n);
    for (const auto& l : arr.lines) line_tri.push_back(reduced_triple(tri(l)));
    compute_meets();
    merge_vertices();
    out.n_lines = n;
    for (auto& v : vlines) out.vertices.push_back({std::move(v)});
    sort_lines();
    make_edges();
    trace_faces();
  }

  void compute_meets() {
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    meets.resize(pairs.size());
    par::for_indexed(pairs.size(), [&](std::size_t p) {
      const Tri<S>& a = line_tri[pairs[p].first];
      const Tri<S>& b = line_tri[pairs[p].second];
      ProjPoint<S> m = checked_meet(ProjLine<S>{a[0], a[1], a[2]}, ProjLine<S>{b[0], b[1], b[2]});
      Tri<S> r = reduced_triple(Tri<S>{m.x, m.y, m.z});
      meets[p] = ProjPoint<S>{r[0], r[1], r[2]};
    });
  }

  void add_to_group(std::vector<std::vector<std::size_t>>& groups, std::size_t g, std::size_t p) {
    if (g == groups.size()) groups.emplace_back();
    groups[g].push_back(p);
  }

  // Vertex identification. Exact backend: canonical coordinate key. Interval
  // with oracle: group by symbolic key. Interval without oracle: certify all
  // pairwise meets distinct (a coincidence can never be certified from
  // enclosures alone, so any undecided separation aborts).
  void merge_vertices() {
    std::vector<std::vector<std::size_t>> groups;  // pair indices per vertex
    if (oracle) {
      std::unordered_map<std::uint64_t, std::size_t> by_key;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        std::uint64_t key = oracle(pairs[p].first, pairs[p].second);
        auto [it, fresh] = by_key.emplace(key, groups.size());
        add_to_group(groups, it->second, p);
      }
    } else if constexpr (ScalarTraits<S>::exact) {
      std::unordered_map<std::string, std::size_t> by_key;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        auto [it, fresh] = by_key.emplace(canonical_key(meets[p]), groups.size());
        add_to_group(groups, it->second, p);
      }
    } else {
      // Prefilter with rigorous double enclosure boxes (one extraction per
      // meet): a pair is certified distinct as soon as a component of the
      // cross product excludes zero in outward-rounded double arithmetic.
      // Only pairs the filter cannot separate fall back to the certified
      // equality predicate on the exact enclosures.
      // Construction-time enclosures can be arbitrarily loose (cancellation
      // in deep expression trees whose condition number grows with the
      // generator's arithmetic), so refine each coordinate until its box is
      // relatively tight before extracting double endpoints; those saturate
      // near 2^-52 relative width, separating everything except genuine
      // near-coincidences. A coordinate that stays loose keeps its wide box
      // and its pairs simply fall back to the certified predicate.
      constexpr double kRelTight = 9.1e-13;  // ~2^-40
      auto tight = [](const DIv& b) {
        if (b.lo == b.hi) return true;
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi)) return false;
        return b.hi - b.lo <= kRelTight * std::max(std::fabs(b.lo), std::fabs(b.hi));
      };
      std::vector<std::array<DIv, 3>> box(meets.size());
      par::for_indexed(meets.size(), [&](std::size_t p) {
        const Tri<S> t = tri(meets[p]);
        for (int i = 0; i < 3; ++i) {
          DIv b{t[i].lo_double(), t[i].hi_double()};
          for (unsigned bits : {256u, 512u, 1024u}) {
            if (tight(b)) break;
            const auto r = t[i].refined(bits);
            b = {r.lo_double(), r.hi_double()};
          }
          box[p][i] = b;
        }
      });
      auto surely_distinct = [&](std::size_t p, std::size_t q) {
        const auto& a = box[p];
        const auto& b = box[q];
        for (int i = 0; i < 3; ++i) {
          const int j = (i + 1) % 3, k = (i + 2) % 3;
          DIv d = dsub(dmul(a[j], b[k]), dmul(a[k], b[j]));
          if (d.lo > 0.0 || d.hi < 0.0) return true;
        }
        return false;
      };
      std::vector<std::pair<std::size_t, std::size_t>> checks;
      checks.reserve(pairs.size() * (pairs.size() - 1) / 2);
      for (std::size_t p = 0; p < pairs.size(); ++p)
        for (std::size_t q = p + 1; q < pairs.size(); ++q) checks.emplace_back(p, q);
      std::atomic<std::size_t> fallback{0};
      par::for_indexed(checks.size(), [&](std::size_t c) {
        if (surely_distinct(checks[c].first, checks[c].second)) return;
        fallback.fetch_add(1, std::memory_order_relaxed);
        if (equal(meets[checks[c].first], meets[checks[c].second]) != Sign::Positive)
          throw UndecidedCoincidence(
              "two intersection points could not be certified distinct");
      });
      if (std::getenv("SIMPARR_PROFILE")) {
        std::fprintf(stderr, "merge: %zu/%zu pairs fell back\n", fallback.load(),
                     checks.size());
        for (std::size_t p = 0; p < std::min<std::size_t>(3, box.size()); ++p)
          std::fprintf(stderr, "  box[%zu]: [%g,%g] [%g,%g] [%g,%g]\n", p, box[p][0].lo,
                       box[p][0].hi, box[p][1].lo, box[p][1].hi, box[p][2].lo, box[p][2].hi);
      }
      for (std::size_t p = 0; p < pairs.size(); ++p) add_to_group(groups, p, p);
    }

    vrep.reserve(groups.size());
    vlines.resize(groups.size());
    for (std::size_t v = 0; v < groups.size(); ++v) {
      vrep.push_back(meets[groups[v].front()]);
      auto& ls = vlines[v];
      for (std::size_t p : groups[v]) {
        ls.push_back(pairs[p].first);
        ls.push_back(pairs[p].second);
      }
      std::sort(ls.begin(), ls.end());
      ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
      if (ls.size() < 2) throw std::logic_error("vertex with fewer than two lines");
    }
  }

  // Cyclic order of the 2k lifts of the k vertices on each line's great
  // circle. Frame: U = first vertex, V = N x U; the circle is traversed by
  // the angle of s*X in the (U, V) frame, decided by certified determinant
  // signs. The first k lifts list every vertex exactly once and form the
  // downstairs cyclic order.
  void sort_lines() {
    ld.resize(n);
    for (std::size_t v = 0; v < vlines.size(); ++v)
      for (std::size_t c : out.vertices[v].lines) ld[c].verts.push_back(v);
    par::for_indexed(n, [&](std::size_t c) { sort_one_line(c); });
    std::size_t edge_off = 0, arc_off = 0;
    for (std::size_t c = 0; c < n; ++c) {
      ld[c].edge_offset = edge_off;
      ld[c].arc_offset = arc_off;
      edge_off += ld[c].verts.size();
      arc_off += ld[c].lifts.size();
      out.line_cycles.push_back({});
      auto& cyc = out.line_cycles.back();
      for (std::size_t i = 0; i < ld[c].verts.size(); ++i) cyc.push_back(ld[c].lifts[i].first);
    }
  }

  void sort_one_line(std::size_t c) {
    LineData<S>& L = ld[c];
    if (L.verts.empty()) throw std::logic_error("line without vertices");
    const Tri<S>& N = line_tri[c];
    const std::size_t u = L.verts.front();
    const Tri<S> U = tri(vrep[u]);
    // Rescaling V only moves each dir within its forward tangent half-plane
    // at the lift (det(X, dir, N) stays positive), which is all the vertex
    // rotation determinants below can see.
    const Tri<S> V = reduced_triple(crossv(N, U));

    // split non-frame vertices by the half-plane of their + lift
    std::vector<std::pair<std::size_t, int>> upper, lower;
    for (std::size_t idx = 1; idx < L.verts.size(); ++idx) {
      std::size_t w = L.verts[idx];
      bool pos = certified_positive(detv(U, tri(vrep[w]), N),
                                    "cyclic order: vertex against line frame");
      if (pos)
        upper.emplace_back(w, +1), lower.emplace_back(w, -1);
      else
        lower.emplace_back(w, +1), upper.emplace_back(w, -1);
    }
    auto angle_less = [&](const std::pair<std::size_t, int>& a,
                          const std::pair<std::size_t, int>& b) {
      if (a == b) return false;
      S d = detv(tri(vrep[a.first]), tri(vrep[b.first]), N);
      bool pos = certified_positive(d, "cyclic order: two vertices on a line");
      return (a.second * b.second > 0) ? pos : !pos;
    };
    std::sort(upper.begin(), upper.end(), angle_less);
    std::sort(lower.begin(), lower.end(), angle_less);

    L.lifts.emplace_back(u, +1);
    for (auto& e : upper) L.lifts.push_back(e);
    L.lifts.emplace_back(u, -1);
    for (auto& e : lower) L.lifts.push_back(e);
    const std::size_t k = L.verts.size();
    if (L.lifts.size() != 2 * k) throw std::logic_error("lift count mismatch");
    for (std::size_t i = 0; i < k; ++i) {
      if (L.lifts[i + k].first != L.lifts[i].first ||
          L.lifts[i + k].second != -L.lifts[i].second)
        throw std::logic_error("lifts are not antipodally paired");
    }
    // downstairs cycle uses the first k lifts; remember positions of both lifts
    for (std::size_t i = 0; i < 2 * k; ++i) {
      auto [w, s] = L.lifts[i];
      auto& pp = L.lift_pos[w];
      (s > 0 ? pp.first : pp.second) = i;
    }
    // tangent direction of increasing angle at each lift: -beta*U + alpha*V
    // (alpha, beta) = coordinates of the lift in the (U, V) frame
    L.dir.reserve(2 * k);
    for (std::size_t i = 0; i < 2 * k; ++i) {
      auto [w, s] = L.lifts[i];
      const Tri<S> X = tri(vrep[w]);
      S alpha = detv(X, V, N);
      S beta = detv(U, X, N);
      S sa = s > 0 ? alpha : -alpha;
      S sb = s > 0 ? beta : -beta;
      L.dir.push_back(reduced_triple(
          Tri<S>{-sb * U[0] + sa * V[0], -sb * U[1] + sa * V[1], -sb * U[2] + sa * V[2]}));
    }
  }

  void make_edges() {
    for (std::size_t c = 0; c < n; ++c) {
      const auto& cyc = out.line_cycles[c];
      const std::size_t k = cyc.size();
      for (std::size_t e = 0; e < k; ++e)
        out.edges.push_back({c, cyc[e], cyc[(e + 1) % k]});
    }
  }

  std::size_t sphere_vertex(std::size_t v, int s) const { return 2 * v + (s > 0 ? 0 : 1); }

  std::size_t arc_tail_sv(std::size_t c, std::size_t e) const {
    auto [w, s] = ld[c].lifts[e];
    return sphere_vertex(w, s);
  }
  std::size_t arc_head_sv(std::size_t c, std::size_t e) const {
    auto [w, s] = ld[c].lifts[(e + 1) % ld[c].lifts.size()];
    return sphere_vertex(w, s);
  }

  void trace_faces() {
    // global arcs and half-edges
    std::size_t total_arcs = 0;
    for (auto& L : ld) total_arcs += L.lifts.size();
    std::vector<std::size_t> arc_line(total_arcs), arc_pos(total_arcs);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t e = 0; e < ld[c].lifts.size(); ++e) {
        arc_line[ld[c].arc_offset + e] = c;
        arc_pos[ld[c].arc_offset + e] = e;
      }
    const std::size_t n_half = 2 * total_arcs;
    auto tail_of = [&](std::size_t h) {
      std::size_t a = h / 2, c = arc_line[a], e = arc_pos[a];
      return (h & 1) == 0 ? arc_tail_sv(c, e) : arc_head_sv(c, e);
    };
    // rotation order of outgoing half-edges around each sphere vertex
    const std::size_t n_sv = 2 * vrep.size();
    std::vector<std::vector<std::size_t>> rot(n_sv);
    std::vector<std::size_t> pos_in_rot(n_half);
    par::for_indexed(n_sv, [&](std::size_t sv) {
      const std::size_t v = sv / 2;
      const int s = (sv % 2 == 0) ? +1 : -1;
      const Tri<S> X = tri(vrep[v]);
      struct End {
        std::size_t half;
        Tri<S> d;
        std::size_t line;
      };
      std::vector<End> ends;
      for (std::size_t c : out.vertices[v].lines) {
        const auto& pp = ld[c].lift_pos.at(v);
        const std::size_t p = (s > 0) ? pp.first : pp.second;
        const std::size_t k2 = ld[c].lifts.size();
        std::size_t out_half = 2 * (ld[c].arc_offset + p);
        std::size_t in_half = 2 * (ld[c].arc_offset + (p + k2 - 1) % k2) + 1;
        ends.push_back({out_half, ld[c].dir[p], c});
        ends.push_back({in_half, negv(ld[c].dir[p]), c});
      }
      // frame: A = first end's direction; its same-line partner is at angle pi
      const Tri<S> A = ends.front().d;
      const std::size_t frame_line = ends.front().line;
      std::vector<std::size_t> upper, lower;
      std::size_t opposite = ends.size();
      for (std::size_t i = 1; i < ends.size(); ++i) {
        if (ends[i].line == frame_line) {
          opposite = i;
          continue;
        }
        S d = detv(A, ends[i].d, X);
        bool pos = certified_positive(s > 0 ? d : -d, "vertex rotation: half-plane");
        (pos ? upper : lower).push_back(i);
      }
      if (opposite == ends.size()) throw std::logic_error("missing opposite end");
      auto angle_less = [&](std::size_t i, std::size_t j) {
        if (i == j) return false;
        S d = detv(ends[i].d, ends[j].d, X);
        return certified_positive(s > 0 ? d : -d, "vertex rotation: two directions");
      };
      std::sort(upper.begin(), upper.end(), angle_less);
      std::sort(lower.begin(), lower.end(), angle_less);
      auto& r = rot[sv];
      r.push_back(ends.front().half);
      for (std::size_t i : upper) r.push_back(ends[i].half);
      r.push_back(ends[opposite].half);
      for (std::size_t i : lower) r.push_back(ends[i].half);
      for (std::size_t i = 0; i < r.size(); ++i) pos_in_rot[r[i]] = i;
    });

    // trace faces on the sphere: next = rotation successor of the twin
    std::vector<std::size_t> face_of(n_half, SIZE_MAX);
    std::vector<std::vector<std::size_t>> sphere_faces;
    for (std::size_t h0 = 0; h0 < n_half; ++h0) {
      if (face_of[h0] != SIZE_MAX) continue;
      std::vector<std::size_t> cyc;
      std::size_t h = h0;
      do {
        face_of[h] = sphere_faces.size();
        cyc.push_back(h);
        std::size_t twin = h ^ 1;
        const auto& r = rot[tail_of(twin)];
        h = r[(pos_in_rot[twin] + 1) % r.size()];
      } while (h != h0);
      sphere_faces.push_back(std::move(cyc));
    }
    const long euler_up = long(n_sv) - long(total_arcs) + long(sphere_faces.size());
    if (euler_up != 2) throw std::logic_error("sphere Euler characteristic is not 2");

    // Quotient by the antipodal map: arc (c, e) <-> arc (c, e + k). The
    // antipodal map reverses the sphere's orientation, so the image of a
    // face's boundary halfedge has the paired face on its other side: the
    // pairing goes through the twin.
    auto antipodal_half = [&](std::size_t h) {
      std::size_t a = h / 2, c = arc_line[a], e = arc_pos[a];
      const std::size_t k2 = ld[c].lifts.size();
      return 2 * (ld[c].arc_offset + (e + k2 / 2) % k2) + (h & 1);
    };
    std::vector<std::size_t> paired(sphere_faces.size(), SIZE_MAX);
    for (std::size_t f = 0; f < sphere_faces.size(); ++f) {
      std::size_t g = face_of[antipodal_half(sphere_faces[f].front()) ^ 1];
      for (std::size_t h : sphere_faces[f])
        if (face_of[antipodal_half(h) ^ 1] != g)
          throw std::logic_error("antipodal image of a face is not a face");
      paired[f] = g;
      if (g == f) throw std::logic_error("face fixed by the antipodal map");
    }
    for (std::size_t f = 0; f < sphere_faces.size(); ++f)
      if (paired[paired[f]] != f) throw std::logic_error("antipodal pairing is not involutive");

    for (std::size_t f = 0; f < sphere_faces.size(); ++f) {
      if (paired[f] < f) continue;  // keep one representative per pair
      std::vector<IncidenceStructure::Step> steps;
      for (std::size_t h : sphere_faces[f]) {
        std::size_t a = h / 2, c = arc_line[a], e = arc_pos[a];
        const std::size_t k = ld[c].verts.size();
        steps.push_back({ld[c].edge_offset + (e % k), (h & 1) == 0});
      }
      out.faces.push_back(std::move(steps));
    }

    if (out.euler() != 1) throw std::logic_error("projective Euler characteristic is not 1");
    std::size_t boundary_sum = 0;
    for (auto& f : out.faces) boundary_sum += f.size();
    if (boundary_sum != 2 * out.E()) throw std::logic_error("face boundaries do not cover edges twice");
  }
};

}  // namespace

template <class S>
IncidenceStructure build_incidence(const Arrangement<S>& arr, const MeetOracle& oracle) {
  Builder<S> b(arr, oracle);
  b.run();
  return std::move(b.out);
}

template IncidenceStructure build_incidence<Rational>(const Arrangement<Rational>&,
                                                      const MeetOracle&);
template IncidenceStructure build_incidence<Interval>(const Arrangement<Interval>&,
                                                      const MeetOracle&);

std::map<unsigned, std::size_t> IncidenceStructure::v_histogram() const {
  std::map<unsigned, std::size_t> h;
  for (const auto& v : vertices) ++h[v.order()];
  return h;
}

std::vector<std::vector<std::size_t>> IncidenceStructure::vertex_edges() const {
  std::vector<std::vector<std::size_t>> ve(V());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    ve[edges[e].v0].push_back(e);
    if (edges[e].v1 != edges[e].v0) ve[edges[e].v1].push_back(e);
  }
  return ve;
}

std::vector<std::vector<std::size_t>> IncidenceStructure::vertex_faces() const {
  std::vector<std::vector<std::size_t>> vf(V());
  for (std::size_t f = 0; f < faces.size(); ++f)
    for (std::size_t v : face_vertices(f)) vf[v].push_back(f);
  return vf;
}

std::vector<std::size_t> IncidenceStructure::face_vertices(std::size_t f) const {
  std::vector<std::size_t> vs;
  for (const Step& s : faces[f]) vs.push_back(s.forward ? edges[s.edge].v0 : edges[s.edge].v1);
  return vs;
}

bool is_simplicial(const IncidenceStructure& s) {
  for (const auto& f : s.faces)
    if (f.size() != 3) return false;
  return true;
}

long gauss_bonnet_sum(const IncidenceStructure& s) {
  long sum = 0;
  for (const auto& [k, count] : s.v_histogram()) sum += long(count) * (long(k) - 3);
  return sum;
}

DoublePointStats double_point_stats(const IncidenceStructure& s) {
  DoublePointStats st;
  for (const auto& v : s.vertices)
    if (v.order() == 2) ++st.count;
  for (const auto& e : s.edges)
    if (s.vertices[e.v0].order() == 2 && s.vertices[e.v1].order() == 2) {
      st.has_adjacent_pair = true;
      break;
    }
  return st;
}

StarReport star(const IncidenceStructure& s, std::size_t vertex_id) {
  if (!is_simplicial(s)) throw NotSimplicial("star requires a simplicial arrangement");
  for (const auto& v : s.vertices)
    if (v.order() + 1 == s.n_lines) throw IsNearPencil("star is undefined for near-pencils");

  StarReport r;
  r.center = vertex_id;
  r.k = s.vertices[vertex_id].order();

  auto vf = s.vertex_faces();
  std::vector<std::size_t> link_edges;
  for (std::size_t f : vf[vertex_id]) {
    for (const auto& st : s.faces[f]) {
      const auto& e = s.edges[st.edge];
      if (e.v0 != vertex_id && e.v1 != vertex_id) link_edges.push_back(st.edge);
    }
  }
  std::sort(link_edges.begin(), link_edges.end());
  link_edges.erase(std::unique(link_edges.begin(), link_edges.end()), link_edges.end());

  std::vector<std::size_t> ext_vertices;
  for (std::size_t e : link_edges) {
    ext_vertices.push_back(s.edges[e].v0);
    ext_vertices.push_back(s.edges[e].v1);
  }
  std::sort(ext_vertices.begin(), ext_vertices.end());
  ext_vertices.erase(std::unique(ext_vertices.begin(), ext_vertices.end()), ext_vertices.end());
  r.exterior_vertices = ext_vertices.size();
  for (std::size_t v : ext_vertices)
    if (s.vertices[v].order() == 2) ++r.exterior_double_points;

  std::map<std::size_t, std::vector<std::size_t>> by_line;
  for (std::size_t e : link_edges) by_line[s.edges[e].line].push_back(e);
  r.exterior_lines = by_line.size();
  r.link_line_sharing_consistent = true;
  for (const auto& [line, es] : by_line) {
    if (es.size() == 1) continue;
    if (es.size() > 2) {
      r.link_line_sharing_consistent = false;
      continue;
    }
    // two link edges on one line must share a double-point endpoint
    const auto& e0 = s.edges[es[0]];
    const auto& e1 = s.edges[es[1]];
    std::size_t shared = SIZE_MAX;
    for (std::size_t a : {e0.v0, e0.v1})
      for (std::size_t b : {e1.v0, e1.v1})
        if (a == b) shared = a;
    if (shared == SIZE_MAX || s.vertices[shared].order() != 2)
      r.link_line_sharing_consistent = false;
  }
  return r;
}

std::string to_string(const FamilyClass& f) {
  switch (f.kind) {
    case FamilyClass::Kind::R0: return "R0(" + std::to_string(f.param) + ")";
    case FamilyClass::Kind::R1: return "R1(" + std::to_string(f.param) + ")";
    case FamilyClass::Kind::R2: return "R2(" + std::to_string(f.param) + ")";
    default: return "Unknown";
  }
}

namespace {

// line signature: sorted vertex-order multiset along the line
std::vector<unsigned> line_signature(const IncidenceStructure& s, std::size_t c) {
  std::vector<unsigned> sig;
  for (std::size_t v : s.line_cycles[c]) sig.push_back(s.vertices[v].order());
  std::sort(sig.begin(), sig.end());
  return sig;
}

bool cyclic_equal(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  const std::size_t k = a.size();
  if (b.size() != k) return false;
  for (std::size_t r = 0; r < k; ++r) {
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) ok = a[i] == b[(r + i) % k];
    if (ok) return true;
    ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) ok = a[i] == b[(r + k - i) % k];
    if (ok) return true;
  }
  return false;
}

struct IsoSearch {
  const IncidenceStructure& a;
  const IncidenceStructure& b;
  std::vector<std::vector<unsigned>> sig_a, sig_b;
  std::map<std::vector<std::size_t>, std::size_t> b_vertex_by_lines;

  bool verify(const std::vector<std::size_t>& pi) const {
    // vertex sets must map to vertex sets
    std::vector<std::size_t> vmap(a.V(), SIZE_MAX);
    for (std::size_t v = 0; v < a.V(); ++v) {
      std::vector<std::size_t> mapped;
      for (std::size_t c : a.vertices[v].lines) mapped.push_back(pi[c]);
      std::sort(mapped.begin(), mapped.end());
      auto it = b_vertex_by_lines.find(mapped);
      if (it == b_vertex_by_lines.end()) return false;
      if (a.vertices[v].lines.size() != b.vertices[it->second].lines.size()) return false;
      vmap[v] = it->second;
    }
    // per-line cyclic orders must agree up to rotation/reflection
    for (std::size_t c = 0; c < a.n_lines; ++c) {
      std::vector<std::size_t> mapped;
      for (std::size_t v : a.line_cycles[c]) mapped.push_back(vmap[v]);
      if (!cyclic_equal(mapped, b.line_cycles[pi[c]])) return false;
    }
    return true;
  }

  // assign images for the lines through vertex index vi of the base cycle
  bool assign(std::size_t vi, const std::vector<std::size_t>& cyc_a,
              const std::vector<std::size_t>& cyc_b, std::vector<std::size_t>& pi,
              std::vector<bool>& used) {
    if (vi == cyc_a.size()) return verify(pi);
    std::size_t va = cyc_a[vi], vb = cyc_b[vi];
    std::vector<std::size_t> la, lb;
    for (std::size_t c : a.vertices[va].lines)
      if (pi[c] == SIZE_MAX) la.push_back(c);
    for (std::size_t c : b.vertices[vb].lines)
      if (!used[c]) lb.push_back(c);
    if (la.size() != lb.size()) return false;
    // try all bijections la -> lb with matching line signatures
    std::vector<std::size_t> perm(lb);
    std::sort(perm.begin(), perm.end());
    do {
      bool sig_ok = true;
      for (std::size_t i = 0; i < la.size() && sig_ok; ++i)
        sig_ok = sig_a[la[i]] == sig_b[perm[i]];
      if (!sig_ok) continue;
      for (std::size_t i = 0; i < la.size(); ++i) {
        pi[la[i]] = perm[i];
        used[perm[i]] = true;
      }
      if (assign(vi + 1, cyc_a, cyc_b, pi, used)) return true;
      for (std::size_t i = 0; i < la.size(); ++i) {
        used[perm[i]] = false;
        pi[la[i]] = SIZE_MAX;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
  }
};

}  // namespace

bool incidence_isomorphic(const IncidenceStructure& a, const IncidenceStructure& b) {
  if (a.n_lines != b.n_lines || a.V() != b.V() || a.E() != b.E() || a.F() != b.F()) return false;
  if (a.v_histogram() != b.v_histogram()) return false;
  auto face_hist = [](const IncidenceStructure& s) {
    std::map<std::size_t, std::size_t> h;
    for (const auto& f : s.faces) ++h[f.size()];
    return h;
  };
  if (face_hist(a) != face_hist(b)) return false;

  IsoSearch is{a, b, {}, {}, {}};
  for (std::size_t c = 0; c < a.n_lines; ++c) {
    is.sig_a.push_back(line_signature(a, c));
    is.sig_b.push_back(line_signature(b, c));
  }
  {
    auto sa = is.sig_a;
    auto sb = is.sig_b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  for (std::size_t v = 0; v < b.V(); ++v)
    is.b_vertex_by_lines.emplace(b.vertices[v].lines, v);

  // base line: cheapest branching product over its vertex orders
  std::size_t a0 = 0;
  double best = 1e300;
  for (std::size_t c = 0; c < a.n_lines; ++c) {
    double cost = 0;
    for (std::size_t v : a.line_cycles[c]) {
      double f = 1;
      for (unsigned t = 2; t < a.vertices[v].order(); ++t) f *= t;
      cost += std::max(0.0, f);
    }
    if (cost < best) {
      best = cost;
      a0 = c;
    }
  }

  const auto& cyc_a = a.line_cycles[a0];
  const std::size_t k = cyc_a.size();
  for (std::size_t b0 = 0; b0 < b.n_lines; ++b0) {
    if (is.sig_a[a0] != is.sig_b[b0]) continue;
    const auto& cyc_b0 = b.line_cycles[b0];
    for (std::size_t rot = 0; rot < k; ++rot) {
      for (int refl = 0; refl < 2; ++refl) {
        std::vector<std::size_t> cyc_b(k);
        for (std::size_t i = 0; i < k; ++i)
          cyc_b[i] = refl ? cyc_b0[(rot + k - i) % k] : cyc_b0[(rot + i) % k];
        bool orders_ok = true;
        for (std::size_t i = 0; i < k && orders_ok; ++i)
          orders_ok = a.vertices[cyc_a[i]].order() == b.vertices[cyc_b[i]].order();
        if (!orders_ok) continue;
        std::vector<std::size_t> pi(a.n_lines, SIZE_MAX);
        std::vector<bool> used(b.n_lines, false);
        pi[a0] = b0;
        used[b0] = true;
        if (is.assign(0, cyc_a, cyc_b, pi, used)) return true;
      }
    }
  }
  return false;
}

}  // namespace simparr
