#include "simparr/cubics.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace simparr {

const char* to_string(CubicClass c) {
  switch (c) {
    case CubicClass::SmoothOneComponent: return "smooth-one-component";
    case CubicClass::SmoothTwoComponents: return "smooth-two-components";
    case CubicClass::Nodal: return "nodal";
    case CubicClass::Cuspidal: return "cuspidal";
    case CubicClass::Acnodal: return "acnodal";
  }
  return "?";
}

const char* to_string(ConicClass c) {
  switch (c) {
    case ConicClass::Ellipse: return "ellipse";
    case ConicClass::Parabola: return "parabola";
    case ConicClass::Hyperbola: return "hyperbola";
    case ConicClass::Degenerate: return "degenerate";
  }
  return "?";
}

Interval nonzero_for_division(const Interval& x) {
  if (x.raw_sign() != Sign::Undecided) return x;
  const PrecisionPolicy& pol = precision_policy();
  Interval cur = x;
  for (unsigned p : pol.ladder) {
    if (p <= cur.precision() || p > pol.cap) continue;
    cur = cur.refined(p);
    if (cur.raw_sign() != Sign::Undecided) return cur;
  }
  return cur;  // still straddling: the division operator reports the failure
}

Rational pow_10(unsigned k) {
  Rational r(1);
  for (unsigned i = 0; i < k; ++i) r *= Rational(10);
  return r;
}

CubicClass classify(const WeierstrassCubic<Rational>& c) {
  Rational disc = Rational(4) * c.a * c.a * c.a + Rational(27) * c.b * c.b;
  Sign s = disc.sign();
  if (s == Sign::Negative) return CubicClass::SmoothTwoComponents;  // three real roots
  if (s == Sign::Positive) return CubicClass::SmoothOneComponent;
  if (c.a.is_zero()) return CubicClass::Cuspidal;  // 4a^3 = -27b^2 forces b = 0 too
  // Double root x0 = -3b/(2a); the third root is -2*x0, so the branch value at
  // the double point is 3*x0: crossing for x0 > 0, isolated point for x0 < 0
  // (x0 = 0 would force b = 0 and then a = 0, the cuspidal case).
  Rational x0 = Rational(-3) * c.b / (Rational(2) * c.a);
  return x0.sign() == Sign::Positive ? CubicClass::Nodal : CubicClass::Acnodal;
}

// ---------------------------------------------------------------------------
// Order-n points on the unbounded branch
// ---------------------------------------------------------------------------

namespace {

Rational cubic_disc(const WeierstrassCubic<Rational>& c) {
  return Rational(4) * c.a * c.a * c.a + Rational(27) * c.b * c.b;
}

// Target of a branch-position comparison: either the exact 2-torsion point
// (parameter 1/2) or a previously constructed point on the y > 0 arm, which
// is identified by its x alone.
struct BranchTarget {
  bool torsion = true;
  Interval x;
};

// Position of an affine point relative to the target along the branch cycle
// O -> (y > 0 arm, x decreasing) -> 2-torsion -> (y < 0 arm, x increasing).
// Returns -1 (strictly before) or +1 (strictly after); equality cannot be
// certified and surfaces as UndecidedEquality from the sign ladder.
int branch_position(const CubicPoint<Interval>& p, const BranchTarget& tgt) {
  if (p.infinity) return -1;  // O opens the cycle
  Sign sy = sign_of(p.y);
  if (sy == Sign::Undecided) throw UndecidedEquality("branch position: sign of y undecided");
  if (tgt.torsion) return sy == Sign::Positive ? -1 : +1;
  if (sy != Sign::Positive) return +1;  // past the 2-torsion point
  Sign dx = sign_of(p.x - tgt.x);
  if (dx == Sign::Undecided) throw UndecidedEquality("branch position: x comparison undecided");
  return dx == Sign::Positive ? -1 : +1;  // larger x = closer to O = earlier
}

// Exact test: x lies strictly on the unbounded branch (value positive AND
// x beyond the largest real root -- two-component curves have an oval whose
// x-range also makes the value positive, and the oval must be rejected).
bool on_unbounded_branch(const WeierstrassCubic<Rational>& c, const Interval& root_max,
                         const Rational& x) {
  Rational v = x * x * x + c.a * x + c.b;
  if (v.sign() != Sign::Positive) return false;
  Sign past = sign_of(Interval::from_rational(x) - root_max);
  if (past == Sign::Undecided)
    throw UndecidedEquality("branch test: comparison with the largest root undecided");
  return past == Sign::Positive;
}

CubicPoint<Interval> branch_point(const WeierstrassCubic<Interval>& ci, const Rational& x) {
  Interval xi = Interval::from_rational(x);
  Interval y = sqrt(xi * xi * xi + ci.a * xi + ci.b);
  return CubicPoint<Interval>::affine(std::move(xi), std::move(y));
}

// Certified |x| < bound (both strict inequalities) for an affine point.
bool coordinate_within(const Interval& x, const Rational& bound) {
  return sign_of(Interval::from_rational(bound) - x) == Sign::Positive &&
         sign_of(x + Interval::from_rational(bound)) == Sign::Positive;
}

bool coordinate_beyond(const Interval& x, const Rational& bound) {
  return sign_of(x - Interval::from_rational(bound)) == Sign::Positive ||
         sign_of(x + Interval::from_rational(bound)) == Sign::Negative;
}

}  // namespace

CubicPoint<Interval> find_order_n_point(const WeierstrassCubic<Rational>& c, unsigned n,
                                        const Rational& tolerance) {
  if (cubic_disc(c).is_zero()) throw DomainError("find_order_n_point: the curve must be smooth");
  if (n < 2) throw DomainError("find_order_n_point: order must be at least 2");
  if (tolerance.sign() != Sign::Positive)
    throw DomainError("find_order_n_point: tolerance must be positive");

  WeierstrassCubic<Interval> ci{Interval::from_rational(c.a), Interval::from_rational(c.b)};
  Interval root_max = Interval::cubic_root_max(c.a, c.b);
  CubicPoint<Interval> torsion2 = CubicPoint<Interval>::affine(root_max, Interval());
  if (n == 2) return torsion2;  // exact: y = 0, doubling gives O

  const Rational cauchy = Rational(2) + c.a.abs() + c.b.abs();  // > all roots
  const Rational bounded = pow_10(10);
  const Rational blowup = Rational(1) / tolerance;

  for (unsigned attempt = 0; attempt < 3; ++attempt) {
    // Chain length trades blow-up margin against enclosure width: the final
    // y-coordinates lose about 3*chain bits to cancellation when the deepest
    // levels (x ~ 4^chain) are folded in, while the truncation of 1/n at
    // `chain` fractional bits still leaves |x(nP)| around 2^(2*chain-10),
    // far beyond the default 1e20 threshold.
    unsigned chain = 48 + 16 * attempt;  // halving depth = fractional bits kept
    unsigned steps = chain + 56;         // bisection iterations per level
    try {
      // Q[k] approximates the parameter-2^-k point, Q[1] being exact.
      std::vector<CubicPoint<Interval>> q(chain + 1);
      q[1] = torsion2;
      BranchTarget prev;  // describes q[k-1]; starts as the 2-torsion point
      Rational prev_x;    // rational x of q[k-1] for k >= 3
      for (unsigned k = 2; k <= chain; ++k) {
        // Initial hi: on the branch with 2*P_hi strictly before the target.
        Rational hi = k == 2 ? cauchy : Rational(16) * prev_x + cauchy;
        for (unsigned guard = 0;; ++guard) {
          if (guard > 200) throw ConvergenceFailure("order-n search: no upper bracket");
          if (on_unbounded_branch(c, root_max, hi) &&
              branch_position(cubic_double(ci, branch_point(ci, hi)), prev) < 0)
            break;
          hi *= Rational(2);
        }
        // Initial lo: off the branch (hence conceptually past everything).
        Rational lo = -cauchy;
        for (unsigned it = 0; it < steps; ++it) {
          Rational mid = (lo + hi) / Rational(2);
          if (!on_unbounded_branch(c, root_max, mid)) {
            lo = mid;
            continue;
          }
          if (branch_position(cubic_double(ci, branch_point(ci, mid)), prev) < 0)
            hi = mid;
          else
            lo = mid;
        }
        q[k] = branch_point(ci, hi);
        prev = BranchTarget{false, q[k].x};
        prev_x = hi;
      }

      // P = sum of q[k] over the set bits of the binary expansion of 1/n.
      CubicPoint<Interval> p = CubicPoint<Interval>::at_infinity();
      mpz_class num = 1, den = n;
      for (unsigned k = 1; k <= chain; ++k) {
        num *= 2;
        if (num >= den) {
          num -= den;
          p = cubic_add(ci, p, q[k]);
        }
      }
      if (p.infinity) throw ConvergenceFailure("order-n search: empty digit expansion");

      // Certification: k*P affine and bounded for k < n, n*P beyond blow-up.
      // 2*P must go through cubic_double: adding an enclosure to itself asks
      // for the sign of an identically-zero difference, which no finite
      // precision can certify.
      CubicPoint<Interval> acc = p;
      bool ok = coordinate_within(p.x, bounded);
      for (unsigned k = 2; ok && k <= n; ++k) {
        acc = k == 2 ? cubic_double(ci, p) : cubic_add(ci, acc, p);
        if (acc.infinity) {
          ok = false;
          break;
        }
        ok = k < n ? coordinate_within(acc.x, bounded) : coordinate_beyond(acc.x, blowup);
      }
      if (ok) return p;
    } catch (const UndecidedEquality&) {
      // re-run with a longer chain
    } catch (const ConvergenceFailure&) {
      // re-run with a longer chain
    } catch (const ZeroDivisor&) {
      // a slope denominator stayed straddling at the cap: re-run
    }
  }
  throw ConvergenceFailure("find_order_n_point: certification failed after three attempts");
}

Arrangement<Interval> gen_coset_dual_arrangement(const WeierstrassCubic<Rational>& c, unsigned n,
                                                 long offset_index, const Rational& tolerance) {
  if (offset_index != 0)
    throw DomainError("gen_coset_dual_arrangement: only the trivial coset is implemented");
  if (n < 2) throw DomainError("gen_coset_dual_arrangement: subgroup size must be at least 2");
  CubicPoint<Interval> p = find_order_n_point(c, n, tolerance);
  WeierstrassCubic<Interval> ci{Interval::from_rational(c.a), Interval::from_rational(c.b)};
  Arrangement<Interval> arr;
  arr.lines.reserve(n);
  Interval one = Interval::from_rational(Rational(1));
  arr.lines.push_back({Interval(), one, Interval()});  // dual of O = [0:1:0]
  CubicPoint<Interval> acc = p;
  for (unsigned k = 1; k < n; ++k) {
    arr.lines.push_back({acc.x, acc.y, one});
    // advance via doubling once: acc == p may not be added to itself
    if (k + 1 < n) acc = k == 1 ? cubic_double(ci, p) : cubic_add(ci, acc, p);
  }
  return arr;
}

// ---------------------------------------------------------------------------
// Tangency census and the counting bound
// ---------------------------------------------------------------------------

bool tangency_bound_holds(long n, long k) {
  if (k < 0 || n < k) throw DomainError("tangency_bound_holds: need n >= k >= 0");
  return 7 * n >= 8 * k - 21;
}

namespace {

template <class S>
S dual_residual(const S& a, const S& b, const ProjLine<S>& l) {
  // Projective membership of the dual point [p:q:w] in y^2 z = x^3 + axz^2 + bz^3.
  return l.b * l.b * l.c - l.a * l.a * l.a - a * l.a * l.c * l.c - b * l.c * l.c * l.c;
}

}  // namespace

TangencyReport count_tangent_lines(const Arrangement<Rational>& arr,
                                   const WeierstrassCubic<Rational>& c) {
  TangencyReport rep;
  rep.n = arr.lines.size();
  for (const auto& l : arr.lines)
    if (dual_residual(c.a, c.b, l).is_zero()) ++rep.tangent;
  rep.bound_holds = tangency_bound_holds(long(rep.n), long(rep.tangent));
  return rep;
}

TangencyReport count_tangent_lines(const Arrangement<Interval>& arr,
                                   const WeierstrassCubic<Rational>& c) {
  // Exact zeros are invisible to bare intervals; this census is the one op
  // with an explicitly configured snap: refine to 512 bits, and report Zero
  // only for enclosures no wider than 2^-64 there. Straddling-but-wide
  // residuals are counted undecided, never silently classified.
  PrecisionPolicy policy;
  policy.ladder = {53, 128, 256, 512};
  policy.cap = 512;
  policy.snap_bits = 64;
  ScopedPrecisionPolicy scope(policy);

  TangencyReport rep;
  rep.n = arr.lines.size();
  Interval a = Interval::from_rational(c.a), b = Interval::from_rational(c.b);
  for (const auto& l : arr.lines) {
    Sign s = sign_of(dual_residual(a, b, l));
    if (s == Sign::Zero)
      ++rep.tangent;
    else if (s == Sign::Undecided)
      ++rep.undecided;
  }
  rep.bound_holds = tangency_bound_holds(long(rep.n), long(rep.tangent));
  return rep;
}

// ---------------------------------------------------------------------------
// Conic through five points
// ---------------------------------------------------------------------------

ConicFit conic_through_five(const std::array<ProjPoint<Rational>, 5>& pts) {
  // Exact Gauss-Jordan elimination of the 5x6 system for (a,b,c,d,e,f).
  std::array<std::array<Rational, 6>, 5> m;
  for (std::size_t i = 0; i < 5; ++i) {
    const ProjPoint<Rational>& p = pts[i];
    m[i] = {p.x * p.x, p.x * p.y, p.y * p.y, p.x * p.z, p.y * p.z, p.z * p.z};
  }
  std::array<int, 6> pivot_of_col;
  pivot_of_col.fill(-1);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < 6 && rank < 5; ++col) {
    std::size_t sel = rank;
    while (sel < 5 && m[sel][col].is_zero()) ++sel;
    if (sel == 5) continue;
    std::swap(m[sel], m[rank]);
    Rational inv = Rational(1) / m[rank][col];
    for (std::size_t j = col; j < 6; ++j) m[rank][j] *= inv;
    for (std::size_t r = 0; r < 5; ++r) {
      if (r == rank || m[r][col].is_zero()) continue;
      Rational f = m[r][col];
      for (std::size_t j = col; j < 6; ++j) m[r][j] -= f * m[rank][j];
    }
    pivot_of_col[col] = int(rank);
    ++rank;
  }
  if (rank < 5)
    throw RankDeficient("conic_through_five: the points do not determine a unique conic");

  std::size_t free_col = 0;
  while (pivot_of_col[free_col] >= 0) ++free_col;
  ConicFit fit;
  fit.coeffs.fill(Rational(0));
  fit.coeffs[free_col] = Rational(1);
  for (std::size_t col = 0; col < 6; ++col)
    if (pivot_of_col[col] >= 0) fit.coeffs[col] = -m[std::size_t(pivot_of_col[col])][free_col];

  const Rational &A = fit.coeffs[0], &B = fit.coeffs[1], &C = fit.coeffs[2];
  const Rational &D = fit.coeffs[3], &E = fit.coeffs[4], &F = fit.coeffs[5];
  // Determinant of twice the symmetric conic matrix [[2A,B,D],[B,2C,E],[D,E,2F]].
  Rational det = Rational(2) * A * (Rational(4) * C * F - E * E) -
                 B * (Rational(2) * B * F - E * D) + D * (B * E - Rational(2) * C * D);
  if (det.is_zero()) {
    fit.cls = ConicClass::Degenerate;
    return fit;
  }
  Sign disc = (B * B - Rational(4) * A * C).sign();
  fit.cls = disc == Sign::Negative ? ConicClass::Ellipse
            : disc == Sign::Zero   ? ConicClass::Parabola
                                   : ConicClass::Hyperbola;
  return fit;
}

// ---------------------------------------------------------------------------
// Polygon alignment conditions (exact, in the cyclotomic ring)
// ---------------------------------------------------------------------------

bool polygon_alignment_conditions(const TrigVec3& center, const std::vector<TrigVec3>& corners) {
  long n = long(corners.size());
  if (n < 5) throw DomainError("polygon_alignment_conditions: need at least five corners");
  auto at = [&](long i) -> const TrigVec3& {
    long r = i % n;
    return corners[std::size_t(r < 0 ? r + n : r)];
  };
  for (long i = 0; i < n; ++i) {
    TrigVec3 outer = cross(cross(at(i - 2), at(i - 1)), cross(at(i + 1), at(i + 2)));
    if (!det3(center, at(i), outer).is_zero()) return false;
    TrigVec3 left = cross(cross(at(i - 2), at(i - 1)), cross(at(i), at(i + 1)));
    TrigVec3 right = cross(cross(at(i - 3), at(i - 2)), cross(at(i + 1), at(i + 2)));
    if (!det3(center, left, right).is_zero()) return false;
  }
  return true;
}

bool regular_polygon_alignment_conditions(unsigned m) {
  if (m < 5) throw DomainError("regular_polygon_alignment_conditions: need m >= 5");
  TrigRing ring(m);
  std::vector<TrigVec3> corners;
  corners.reserve(m);
  for (long j = 0; j < long(m); ++j)
    corners.push_back({ring.cos_u(4 * j), ring.sin_u(4 * j), ring.one()});
  return polygon_alignment_conditions({ring.zero(), ring.zero(), ring.one()}, corners);
}

}  // namespace simparr
