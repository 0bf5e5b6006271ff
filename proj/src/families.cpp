#include "simparr/families.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <utility>

#include "simparr/parallel.hpp"

namespace simparr {

namespace {

long md(long x, long n) {
  long r = x % n;
  return r < 0 ? r + n : r;
}

bool ring_zero_triple(const TrigVec3& v) {
  return v.x.is_zero() && v.y.is_zero() && v.z.is_zero();
}

// Projective equality over the ring: all three 2x2 minors vanish.
bool ring_equal(const TrigVec3& p, const TrigVec3& q) {
  return (p.y * q.z - p.z * q.y).is_zero() && (p.z * q.x - p.x * q.z).is_zero() &&
         (p.x * q.y - p.y * q.x).is_zero();
}

// Certified strict sign of an exact ring value that must not vanish.
bool certified_ring_positive(const TrigValue& v, const char* what) {
  switch (v.sign()) {
    case Sign::Positive:
      return true;
    case Sign::Negative:
      return false;
    case Sign::Zero:
      throw std::logic_error(std::string(what) + ": unexpected exact zero");
    default:
      throw UndecidedCoincidence(std::string(what) + ": sign undecided at the precision cap");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Near-pencils
// ---------------------------------------------------------------------------

Arrangement<Rational> gen_near_pencil(unsigned k) {
  if (k < 2) throw DomainError("near-pencil requires at least two concurrent lines");
  Arrangement<Rational> arr;
  arr.lines.reserve(k + 1);
  for (unsigned i = 0; i < k; ++i)
    arr.lines.push_back({Rational(long(i)), Rational(-1), Rational(0)});  // y = i*x
  arr.lines.push_back({Rational(0), Rational(0), Rational(1)});  // avoids the origin pencil
  return arr;
}

// ---------------------------------------------------------------------------
// RegularFamily
// ---------------------------------------------------------------------------

RegularFamily::RegularFamily(unsigned m, bool with_line_at_infinity)
    : m_(m), inf_(with_line_at_infinity) {
  if (m < 3) throw DomainError("regular family requires m >= 3");
  if (inf_ && m % 2 != 0)
    throw DomainError("the line at infinity extends the regular family only for even m");
  ring_ = std::make_shared<TrigRing>(m);
}

TrigVec3 RegularFamily::line_coeffs(std::size_t id) const {
  const TrigRing& R = *ring_;
  long j = long(id);
  if (id < m_) return {R.cos_u(4 * j), R.sin_u(4 * j), R.from_rational(Rational(-1))};
  if (id < 2 * std::size_t(m_)) {
    long a = j - long(m_);
    return {-R.sin_u(2 * a), R.cos_u(2 * a), R.zero()};
  }
  if (inf_ && id == 2 * std::size_t(m_)) return {R.zero(), R.zero(), R.one()};
  throw DomainError("line id out of range");
}

TrigVec3 RegularFamily::key_point(std::uint64_t key) const {
  const TrigRing& R = *ring_;
  long a = long(regular_key::payload_a(key));
  long b = long(regular_key::payload_b(key));
  switch (regular_key::kind(key)) {
    case regular_key::kFiniteVertex:
      return {R.cos_u(2 * b), R.sin_u(2 * b), R.cos_u(2 * a)};
    case regular_key::kTangencyPoint:
      return {R.cos_u(4 * a), R.sin_u(4 * a), R.one()};
    case regular_key::kInfiniteVertex:
    case regular_key::kAxisAtInfinity:
      return {R.cos_u(2 * a), R.sin_u(2 * a), R.zero()};
    case regular_key::kCenter:
      return {R.zero(), R.zero(), R.one()};
    default:
      throw DomainError("unknown vertex key");
  }
}

namespace {

// Key of the meet of tangents j and l (distinct mod m). Tangents at cyclic
// distance d < m/2 meet at polar angle (j+l)*pi/m and radius 1/cos(d*pi/m);
// opposite tangents (2d = m) meet at infinity. The angle index must be formed
// from the same representative as d: with d = (l-j) mod m the consistent index
// is s0 = j + (j+d) = 2j+d, not j+l, which disagrees with it whenever l-j
// wraps (z = cos(d*pi/m) is unchanged by d -> d+m while cos/sin of the angle
// flip sign). The canonical finite key uses d < m/2; folding d -> m-d shifts
// the angle index by m, which flips all three homogeneous coordinates and so
// names the same point.
std::uint64_t tangent_pair_key(long j, long l, long m) {
  using namespace regular_key;
  long D = md(l - j, m);
  long s0 = md(2 * j + D, 2 * m);
  if (2 * D == m) return make(kInfiniteVertex, std::uint64_t(md(j + l, m)));
  if (2 * D < m) return make(kFiniteVertex, std::uint64_t(D), std::uint64_t(s0));
  return make(kFiniteVertex, std::uint64_t(m - D), std::uint64_t(md(s0 + m, 2 * m)));
}

}  // namespace

std::uint64_t RegularFamily::meet_key(std::size_t i, std::size_t j) const {
  using namespace regular_key;
  if (i > j) std::swap(i, j);
  if (i == j || j >= n_lines()) throw DomainError("meet_key: invalid line pair");
  long m = long(m_);
  bool j_is_inf = inf_ && j == 2 * std::size_t(m_);
  if (j_is_inf) {
    if (i < m_) return make(kInfiniteVertex, std::uint64_t(md(2 * long(i) + m / 2, m)));
    long a = long(i) - m;
    // The direction of axis a is at infinity; it is a vertex of the tangent
    // sub-arrangement exactly when some tangent pair is parallel to the axis,
    // which happens when a has the parity of m/2.
    if (md(a, 2) == md(m / 2, 2)) return make(kInfiniteVertex, std::uint64_t(a));
    return make(kAxisAtInfinity, std::uint64_t(a));
  }
  bool i_tan = i < m_, j_tan = j < m_;
  if (i_tan && j_tan) return tangent_pair_key(long(i), long(j), m);
  if (!i_tan && !j_tan) return make(kCenter);
  long t = long(i);          // tangent index (i < m <= j)
  long a = long(j) - m;      // axis index
  if (md(a - 2 * t, m) == 0) return make(kTangencyPoint, std::uint64_t(t));
  // Axis a passes through every vertex whose polar angle index is a mod m;
  // among the vertices on tangent t that is the meet with tangent a - t.
  return tangent_pair_key(t, md(a - t, m), m);
}

Arrangement<Interval> RegularFamily::arrangement() const {
  Arrangement<Interval> arr;
  arr.lines.reserve(n_lines());
  long m = long(m_);
  for (long j = 0; j < m; ++j)
    arr.lines.push_back({Interval::cos_pi(Rational(2 * j, m)), Interval::sin_pi(Rational(2 * j, m)),
                         Interval::from_rational(Rational(-1))});
  for (long a = 0; a < m; ++a)
    arr.lines.push_back({-Interval::sin_pi(Rational(a, m)), Interval::cos_pi(Rational(a, m)),
                         Interval::from_rational(Rational(0))});
  if (inf_)
    arr.lines.push_back({Interval::from_rational(Rational(0)), Interval::from_rational(Rational(0)),
                         Interval::from_rational(Rational(1))});
  return arr;
}

MeetOracle RegularFamily::oracle() const {
  RegularFamily fam = *this;
  return [fam](std::size_t i, std::size_t j) { return fam.meet_key(i, j); };
}

IncidenceStructure RegularFamily::incidence() const { return build_incidence(arrangement(), oracle()); }

Arrangement<Interval> RegularFamily::sub_arrangement(const std::vector<std::size_t>& ids) const {
  Arrangement<Interval> full = arrangement();
  Arrangement<Interval> sub;
  sub.lines.reserve(ids.size());
  for (std::size_t id : ids) {
    if (id >= n_lines()) throw DomainError("sub_arrangement: line id out of range");
    sub.lines.push_back(full.lines[id]);
  }
  return sub;
}

MeetOracle RegularFamily::sub_oracle(std::vector<std::size_t> ids) const {
  RegularFamily fam = *this;
  return [fam, ids = std::move(ids)](std::size_t p, std::size_t q) {
    return fam.meet_key(ids.at(p), ids.at(q));
  };
}

Arrangement<Interval> RegularFamily::tangent_arrangement() const {
  std::vector<std::size_t> ids(m_);
  for (std::size_t j = 0; j < m_; ++j) ids[j] = j;
  return sub_arrangement(ids);
}

MeetOracle RegularFamily::tangent_oracle() const {
  std::vector<std::size_t> ids(m_);
  for (std::size_t j = 0; j < m_; ++j) ids[j] = j;
  return sub_oracle(std::move(ids));
}

// ---------------------------------------------------------------------------
// Vertex geometry
// ---------------------------------------------------------------------------

RegularVertexCoord regular_vertex(unsigned m, long j, long l) {
  if (m < 3) throw DomainError("regular_vertex requires m >= 3");
  long mm = long(m);
  long jm = md(j, mm), lm = md(l, mm);
  if (jm == lm) throw DomainError("regular_vertex: tangents coincide");
  long D = md(lm - jm, mm);
  long dist = std::min(D, mm - D);

  RegularVertexCoord out;
  out.m = m;
  out.j = unsigned(jm);
  out.l = unsigned(lm);
  out.distance = unsigned(dist);
  out.infinite = (2 * dist == mm);

  Rational angle(md(jm + lm, 2 * mm), mm);  // polar angle over pi, in [0, 2)
  out.argument_over_pi = angle;
  Interval c = Interval::cos_pi(angle), s = Interval::sin_pi(angle);
  if (out.infinite) {
    out.modulus = Interval::from_rational(Rational(0));
    out.point = {std::move(c), std::move(s), Interval::from_rational(Rational(0))};
  } else {
    out.modulus = Interval::from_rational(Rational(1)) / Interval::cos_pi(Rational(dist, mm));
    // The z-coordinate uses the unfolded difference: folding d -> m-d flips
    // all three coordinates simultaneously, so the point is well defined.
    out.point = {std::move(c), std::move(s), Interval::cos_pi(Rational(D, mm))};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Alignment of shifted triple points
// ---------------------------------------------------------------------------

namespace {

// Exact coordinates of the meet of tangents a and b in Q(zeta_4m), valid for
// any integer representatives (the triple is representative-independent up to
// a global sign): (cos((a+b)pi/m), sin((a+b)pi/m), cos((b-a)pi/m)).
TrigVec3 tangent_meet_exact(const TrigRing& ring, long a, long b) {
  return {ring.cos_u(2 * (a + b)), ring.sin_u(2 * (a + b)), ring.cos_u(2 * (b - a))};
}

Sign pattern_sign(const TrigRing& ring, const std::array<std::pair<long, long>, 3>& idx) {
  TrigVec3 p0 = tangent_meet_exact(ring, idx[0].first, idx[0].second);
  TrigVec3 p1 = tangent_meet_exact(ring, idx[1].first, idx[1].second);
  TrigVec3 p2 = tangent_meet_exact(ring, idx[2].first, idx[2].second);
  return det3(p0, p1, p2).sign();
}

const TrigRing& alignment_ring(unsigned m) {
  static std::map<unsigned, std::shared_ptr<const TrigRing>> cache;
  static std::mutex cache_mutex;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, std::make_shared<const TrigRing>(m)).first;
  return *it->second;
}

}  // namespace

Sign check_alignment(unsigned m, long j, long l) {
  if (m < 8) throw DomainError("alignment test requires m >= 8");
  long mm = long(m);
  long D = md(l - j, mm);
  if (std::min(D, mm - D) < 4)
    throw DomainError("alignment test requires tangents at cyclic distance >= 4");
  const TrigRing& ring = alignment_ring(m);
  // Both shifted triples are evaluated exactly; a certified Zero from either
  // pattern is reported as Zero (the triple really is collinear). This happens
  // precisely when 2|l-j| = m: the central point is then the common direction
  // of two parallel tangents, and the outer points of each pattern are mirror
  // images under the reflection fixing that direction, so their chord passes
  // through it.
  Sign a = pattern_sign(ring, {{{j, l}, {j + 1, l - 2}, {j - 1, l + 2}}});
  if (a == Sign::Undecided || a == Sign::Zero) return a;
  Sign b = pattern_sign(ring, {{{j, l}, {j + 2, l - 1}, {j - 2, l + 1}}});
  if (b == Sign::Undecided || b == Sign::Zero) return b;
  return a;
}

// ---------------------------------------------------------------------------
// Intersection profile of an exact line, and the forbidden-pattern scan
// ---------------------------------------------------------------------------

std::vector<std::vector<std::size_t>> line_profile(const RegularFamily& fam, const TrigVec3& lam) {
  struct Group {
    TrigVec3 rep;
    std::vector<std::size_t> lines;
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < fam.n_lines(); ++i) {
    TrigVec3 li = fam.line_coeffs(i);
    if (ring_equal(li, lam)) continue;
    TrigVec3 x = cross(lam, li);
    if (ring_zero_triple(x)) throw std::logic_error("line_profile: cross of distinct lines vanished");
    bool merged = false;
    for (Group& g : groups) {
      if (ring_equal(g.rep, x)) {
        g.lines.push_back(i);
        merged = true;
        break;
      }
    }
    if (!merged) groups.push_back({std::move(x), {i}});
  }
  if (groups.size() < 2) {
    std::vector<std::vector<std::size_t>> flat;
    for (Group& g : groups) flat.push_back(std::move(g.lines));
    return flat;
  }

  // Cyclic order along lam: frame at the first group, everything else ordered
  // by the signed frame determinant tier and pairwise determinants, exactly
  // as the incidence builder orders vertices along a line.
  const TrigVec3& u = groups[0].rep;
  std::vector<std::pair<std::size_t, int>> upper;  // (group index, lift sign)
  for (std::size_t g = 1; g < groups.size(); ++g) {
    bool pos = certified_ring_positive(det3(u, groups[g].rep, lam), "line_profile frame determinant");
    upper.emplace_back(g, pos ? 1 : -1);
  }
  std::sort(upper.begin(), upper.end(),
            [&](const std::pair<std::size_t, int>& a, const std::pair<std::size_t, int>& b) {
              bool pos = certified_ring_positive(
                  det3(groups[a.first].rep, groups[b.first].rep, lam), "line_profile comparator");
              return (a.second * b.second > 0) ? pos : !pos;
            });

  std::vector<std::vector<std::size_t>> cycle;
  cycle.reserve(groups.size());
  cycle.push_back(std::move(groups[0].lines));
  for (const auto& [g, s] : upper) cycle.push_back(std::move(groups[g].lines));
  return cycle;
}

namespace {

std::vector<std::uint64_t> triple_point_keys(unsigned m) {
  using namespace regular_key;
  std::vector<std::uint64_t> keys;
  long mm = long(m);
  for (long d = 1; 2 * d < mm; ++d)
    for (long s = 0; s < 2 * mm; ++s)
      if (md(s - d, 2) == 0) keys.push_back(make(kFiniteVertex, std::uint64_t(d), std::uint64_t(s)));
  if (mm % 2 == 0)
    for (long t = 0; t < mm; ++t)
      if (md(t, 2) == md(mm / 2, 2)) keys.push_back(make(kInfiniteVertex, std::uint64_t(t)));
  return keys;
}

}  // namespace

std::vector<ForbiddenConfiguration> forbidden_configuration_scan(unsigned m) {
  RegularFamily fam(m, false);
  std::vector<std::uint64_t> keys = triple_point_keys(m);
  std::vector<TrigVec3> pts;
  pts.reserve(keys.size());
  for (std::uint64_t k : keys) pts.push_back(fam.key_point(k));

  std::vector<TrigVec3> lines;
  for (std::size_t i = 0; i < fam.n_lines(); ++i) lines.push_back(fam.line_coeffs(i));

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a + 1 < keys.size(); ++a)
    for (std::size_t b = a + 1; b < keys.size(); ++b) pairs.emplace_back(a, b);

  std::vector<std::vector<ForbiddenConfiguration>> found(pairs.size());
  par::for_indexed(pairs.size(), [&](std::size_t pi) {
    auto [a, b] = pairs[pi];
    TrigVec3 lam = cross(pts[a], pts[b]);
    if (ring_zero_triple(lam))
      throw std::logic_error("forbidden scan: join of distinct triple points vanished");
    if (lam.x.is_zero() && lam.y.is_zero()) return;  // the line at infinity
    if (lam.z.is_zero()) return;                     // passes through the center
    for (const TrigVec3& li : lines)
      if (ring_equal(lam, li)) return;  // a line of the arrangement itself

    std::vector<std::vector<std::size_t>> cycle = line_profile(fam, lam);
    std::size_t k = cycle.size();
    if (k < 5) return;
    auto type = [&](std::size_t w) -> char {
      std::size_t sz = cycle[w].size();
      return sz == 3 ? 'T' : sz == 1 ? 'E' : 'O';
    };
    for (std::size_t w = 0; w < k; ++w) {
      if (type(w) == 'T' && type((w + 1) % k) == 'E' && type((w + 2) % k) == 'T' &&
          type((w + 3) % k) == 'E' && type((w + 4) % k) == 'T') {
        ForbiddenConfiguration viol;
        viol.lambda_a = keys[a];
        viol.lambda_b = keys[b];
        for (int t = 0; t < 3; ++t) {
          const std::vector<std::size_t>& g = cycle[(w + 2 * std::size_t(t)) % k];
          viol.triples[std::size_t(t)] = fam.meet_key(g[0], g[1]);
        }
        found[pi].push_back(viol);
      }
    }
  });

  // A violating transversal carries three triple points, so three generating
  // pairs rediscover the same window (possibly traversed in the opposite
  // direction); report each geometric window once.
  std::vector<ForbiddenConfiguration> out;
  std::set<std::array<std::uint64_t, 3>> seen;
  for (const auto& v : found)
    for (const auto& viol : v) {
      std::array<std::uint64_t, 3> id = viol.triples;
      std::sort(id.begin(), id.end());
      if (seen.insert(id).second) out.push_back(viol);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Quadrilaterals crossed corner-to-corner by a mirror axis
// ---------------------------------------------------------------------------

unsigned count_crossed_quadrilaterals(unsigned m, LambdaKind kind) {
  std::size_t axis = 0;
  switch (kind) {
    case LambdaKind::ThroughOppositeCorners:
      if (m % 2 != 0 || m < 4)
        throw DomainError("an axis through opposite corners requires even m");
      axis = 1;  // odd axes pass through two opposite polygon corners
      break;
    case LambdaKind::ThroughTriangleInteriors:
      if (m % 2 != 0 || m < 4)
        throw DomainError("an axis through opposite tangency points requires even m");
      axis = 0;  // even axes pass through two opposite tangency points
      break;
    case LambdaKind::OddAxis:
      if (m % 2 != 1) throw DomainError("the mixed axis situation requires odd m");
      axis = 0;
      break;
  }

  RegularFamily fam(m, false);
  std::vector<std::size_t> ids(m);
  for (std::size_t j = 0; j < m; ++j) ids[j] = j;
  ids.push_back(std::size_t(m) + axis);
  IncidenceStructure s = build_incidence(fam.sub_arrangement(ids), fam.sub_oracle(ids));

  std::vector<std::vector<std::size_t>> edge_faces(s.edges.size());
  for (std::size_t f = 0; f < s.faces.size(); ++f)
    for (const IncidenceStructure::Step& st : s.faces[f]) edge_faces[st.edge].push_back(f);
  for (const auto& ef : edge_faces)
    if (ef.size() != 2) throw std::logic_error("edge does not border exactly two faces");

  // An axis edge is the chord of a reunited quadrilateral of the tangent
  // arrangement when both endpoints were already tangent-arrangement vertices
  // (two or more tangents through them) and the two faces flanking the chord
  // glue to a four-sided cell: |f1| + |f2| - 2 = 4.
  const std::size_t lam_idx = m;
  auto preexisting = [&](std::size_t v) { return s.vertices[v].lines.size() >= 3; };
  unsigned count = 0;
  for (std::size_t e = 0; e < s.edges.size(); ++e) {
    if (s.edges[e].line != lam_idx) continue;
    if (!preexisting(s.edges[e].v0) || !preexisting(s.edges[e].v1)) continue;
    if (s.faces[edge_faces[e][0]].size() + s.faces[edge_faces[e][1]].size() == 6) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Triangulated convex polygon bound
// ---------------------------------------------------------------------------

namespace {

struct PolygonTester {
  std::vector<ProjLine<Rational>> sides;
  std::vector<Sign> interior_sign;

  explicit PolygonTester(const std::vector<ProjPoint<Rational>>& poly) {
    if (poly.size() < 3) throw DomainError("polygon needs at least three vertices");
    Rational cx(0), cy(0);
    for (const auto& p : poly) {
      if (sign_of(p.z) == Sign::Zero) throw DomainError("polygon vertices must be affine");
      cx = cx + p.x / p.z;
      cy = cy + p.y / p.z;
    }
    Rational n(long(poly.size()));
    ProjPoint<Rational> c{cx / n, cy / n, Rational(1)};
    for (std::size_t i = 0; i < poly.size(); ++i) {
      ProjLine<Rational> side = join(poly[i], poly[(i + 1) % poly.size()]);
      Sign s = incident(c, side);
      if (s == Sign::Zero) throw DomainError("degenerate polygon: centroid on a side");
      sides.push_back(std::move(side));
      interior_sign.push_back(s);
    }
  }

  bool in_closed(const ProjPoint<Rational>& q) const {
    if (sign_of(q.z) == Sign::Zero) return false;
    bool flip = sign_of(q.z) == Sign::Negative;  // normalize the side of the sign test
    for (std::size_t i = 0; i < sides.size(); ++i) {
      Sign s = incident(q, sides[i]);
      if (flip) s = negated(s);
      if (s != Sign::Zero && s != interior_sign[i]) return false;
    }
    return true;
  }

  bool strictly_inside(const ProjPoint<Rational>& q) const {
    if (sign_of(q.z) == Sign::Zero) return false;
    bool flip = sign_of(q.z) == Sign::Negative;
    for (std::size_t i = 0; i < sides.size(); ++i) {
      Sign s = incident(q, sides[i]);
      if (flip) s = negated(s);
      if (s != interior_sign[i]) return false;
    }
    return true;
  }

 private:
  static Sign negated(Sign s) {
    if (s == Sign::Positive) return Sign::Negative;
    if (s == Sign::Negative) return Sign::Positive;
    return s;
  }
};

}  // namespace

CPInterResult cpinter_check(const CPInterInstance& inst) {
  PolygonTester P(inst.polygon);

  Arrangement<Rational> arr;
  arr.lines = P.sides;
  arr.lines.insert(arr.lines.end(), inst.f_lines.begin(), inst.f_lines.end());
  arr.lines.insert(arr.lines.end(), inst.g_lines.begin(), inst.g_lines.end());
  IncidenceStructure s = build_incidence(arr);

  // Vertex coordinates are recovered from the two lowest incident lines; the
  // builder guarantees every vertex has at least two.
  std::vector<ProjPoint<Rational>> coord;
  coord.reserve(s.vertices.size());
  for (const auto& v : s.vertices)
    coord.push_back(meet(arr.lines[v.lines[0]], arr.lines[v.lines[1]]));

  // A face is a cell of the subdivision of the polygon exactly when all its
  // vertices are affine and in the closed polygon and its vertex centroid is
  // strictly interior: cells cannot cross the side lines, and boundary-hugging
  // outside cells always carry a vertex outside, at infinity, or a centroid
  // on the boundary.
  bool triangulates = true;
  for (std::size_t f = 0; f < s.faces.size(); ++f) {
    std::vector<std::size_t> vs = s.face_vertices(f);
    bool inside = true;
    Rational cx(0), cy(0);
    for (std::size_t v : vs) {
      const ProjPoint<Rational>& q = coord[v];
      if (sign_of(q.z) == Sign::Zero || !P.in_closed(q)) {
        inside = false;
        break;
      }
      cx = cx + q.x / q.z;
      cy = cy + q.y / q.z;
    }
    if (!inside) continue;
    Rational n(long(vs.size()));
    if (!P.strictly_inside({cx / n, cy / n, Rational(1)})) continue;
    if (vs.size() != 3) {
      triangulates = false;
      break;
    }
  }

  CPInterResult out;
  out.triangulates = triangulates;
  out.holds = !triangulates || inst.g_lines.size() + 1 >= inst.f_lines.size();
  return out;
}

CPInterInstance random_cpinter_instance(SplitMix64& rng) {
  CPInterInstance inst;
  std::size_t nsides = 3 + rng.below(4);

  // Rational points on a circle of radius 3 via the tangent-half-angle
  // parametrization; the parameter order is the circular order.
  std::vector<Rational> ts;
  while (ts.size() < nsides) {
    Rational t(rng.range(-2000, 2000), 500);
    if (std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end(), [](const Rational& a, const Rational& b) {
    return sign_of(a - b) == Sign::Negative;
  });
  for (const Rational& t : ts) {
    Rational den = Rational(1) + t * t;
    inst.polygon.push_back({Rational(3) * (Rational(1) - t * t) / den,
                            Rational(6) * t / den, Rational(1)});
  }

  PolygonTester P(inst.polygon);
  auto interior_point = [&]() {
    Rational sx(0), sy(0), sw(0);
    for (const auto& v : inst.polygon) {
      Rational w(long(1 + rng.below(64)));
      sx = sx + w * v.x;
      sy = sy + w * v.y;
      sw = sw + w;
    }
    return ProjPoint<Rational>{sx / sw, sy / sw, Rational(1)};
  };
  auto interior_line = [&]() {
    for (;;) {
      ProjPoint<Rational> p = interior_point(), q = interior_point();
      if (equal(p, q) == Sign::Positive) return join(p, q);
    }
  };

  std::size_t nf = rng.below(5), ng = rng.below(7);
  for (unsigned attempts = 0; inst.f_lines.size() < nf && attempts < 400; ++attempts) {
    ProjLine<Rational> cand = interior_line();
    bool ok = true;
    for (const auto& f : inst.f_lines) {
      if (equal(cand, f) != Sign::Positive || P.in_closed(meet(cand, f))) {
        ok = false;
        break;
      }
    }
    if (ok) inst.f_lines.push_back(std::move(cand));
  }
  while (inst.g_lines.size() < ng) {
    ProjLine<Rational> cand = interior_line();
    bool ok = true;
    for (const auto& f : inst.f_lines)
      if (equal(cand, f) != Sign::Positive) ok = false;
    for (const auto& g : inst.g_lines)
      if (equal(cand, g) != Sign::Positive) ok = false;
    if (ok) inst.g_lines.push_back(std::move(cand));
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

FamilyClass classify_family(const IncidenceStructure& s) {
  if (!is_simplicial(s)) throw NotSimplicial("classification requires a simplicial arrangement");
  std::size_t n = s.n_lines;
  for (const auto& v : s.vertices)
    if (v.order() == n - 1) return {FamilyClass::Kind::R0, unsigned(n - 1)};

  static std::map<std::pair<unsigned, bool>, IncidenceStructure> cache;
  static std::mutex cache_mutex;
  auto reference = [&](unsigned m, bool with_inf) -> const IncidenceStructure& {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find({m, with_inf});
    if (it == cache.end())
      it = cache.emplace(std::make_pair(m, with_inf), RegularFamily(m, with_inf).incidence()).first;
    return it->second;
  };

  if (n % 2 == 0 && n >= 6) {
    unsigned m = unsigned(n / 2);
    if (incidence_isomorphic(s, reference(m, false))) return {FamilyClass::Kind::R1, m};
  }
  if (n % 2 == 1 && n >= 9) {
    unsigned m = unsigned((n - 1) / 2);
    if (m % 2 == 0 && incidence_isomorphic(s, reference(m, true)))
      return {FamilyClass::Kind::R2, m};
  }
  return {FamilyClass::Kind::Unknown, 0};
}

}  // namespace simparr
