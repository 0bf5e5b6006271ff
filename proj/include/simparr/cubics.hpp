#pragma once

// Weierstrass cubics y^2 = x^3 + a x + b over the reals: classification of
// the real-point set, the chord-tangent group law, approximate order-n points
// on the unbounded branch, dual-line arrangements of the finite subgroups they
// span, tangency counting of an arrangement against a curve, the line/tangent
// counting bound, and the exact conic-through-five-points classifier.

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "simparr/arrangement.hpp"
#include "simparr/interval.hpp"
#include "simparr/projective.hpp"
#include "simparr/scalar.hpp"
#include "simparr/trigring.hpp"

namespace simparr {

template <class S>
struct WeierstrassCubic {
  S a{}, b{};  // y^2 = x^3 + a x + b
};

// ---------------------------------------------------------------------------
// Classification of the real-point set. The curve is smooth iff
// 4a^3 + 27b^2 != 0; smooth curves have two connected components exactly when
// x^3 + ax + b has three real roots (4a^3 + 27b^2 < 0). Singular curves carry
// one double point at x0 = -3b/(2a) (or a triple point at the origin when
// a = b = 0): crossing node when the branch value 3*x0 is positive, isolated
// point when negative, cusp for the triple root.
// ---------------------------------------------------------------------------
enum class CubicClass { SmoothOneComponent, SmoothTwoComponents, Nodal, Cuspidal, Acnodal };

const char* to_string(CubicClass c);

CubicClass classify(const WeierstrassCubic<Rational>& c);

// ---------------------------------------------------------------------------
// Points and the chord-tangent group law. The identity O is the point at
// infinity in the vertical direction; the inverse of (x, y) is (x, -y).
// Equality decisions (shared x, opposite y) are certified through sign_of:
// exact for the rational backend, ladder-certified for intervals, and an
// UndecidedEquality is thrown when a needed comparison stays undecided at the
// cap. Doubling a point with y = 0 yields O (vertical tangent) unless the
// point is the curve's singular point, which is rejected.
// ---------------------------------------------------------------------------
// Division guard for the slope computations below. The exact backend divides
// directly. The interval backend may hold a straddling enclosure for a value
// whose sign is already certified nonzero (the enclosure is only as tight as
// the precision it was built at), and dividing by a straddling box is an
// error; this refines the denominator along the precision ladder until its
// enclosure excludes zero.
inline const Rational& nonzero_for_division(const Rational& x) { return x; }
Interval nonzero_for_division(const Interval& x);

template <class S>
struct CubicPoint {
  bool infinity = true;
  S x{}, y{};

  static CubicPoint at_infinity() { return {}; }
  static CubicPoint affine(S px, S py) {
    CubicPoint p;
    p.infinity = false;
    p.x = std::move(px);
    p.y = std::move(py);
    return p;
  }
};

template <class S>
CubicPoint<S> cubic_negate(const CubicPoint<S>& p) {
  if (p.infinity) return p;
  return CubicPoint<S>::affine(p.x, -p.y);
}

template <class S>
CubicPoint<S> cubic_double(const WeierstrassCubic<S>& c, const CubicPoint<S>& p) {
  if (p.infinity) return p;
  Sign sy = sign_of(p.y);
  if (sy == Sign::Undecided) throw UndecidedEquality("cubic_double: sign of y undecided");
  S xx = p.x * p.x;
  S slope_num = xx + xx + xx + c.a;  // 3x^2 + a
  if (sy == Sign::Zero) {
    // Vertical tangent (2-torsion) -- unless the tangent cone degenerates,
    // i.e. the point is the singular point of a non-smooth curve.
    if (sign_of(slope_num) == Sign::Zero)
      throw SingularPointUsed("cubic_double: singular point of the curve");
    return CubicPoint<S>::at_infinity();
  }
  S lam = slope_num / nonzero_for_division(p.y + p.y);
  S x3 = lam * lam - p.x - p.x;
  S y3 = lam * (p.x - x3) - p.y;
  return CubicPoint<S>::affine(std::move(x3), std::move(y3));
}

template <class S>
CubicPoint<S> cubic_add(const WeierstrassCubic<S>& c, const CubicPoint<S>& p,
                        const CubicPoint<S>& q) {
  if (p.infinity) return q;
  if (q.infinity) return p;
  S dxv = q.x - p.x;
  Sign dx = sign_of(dxv);
  if (dx == Sign::Undecided) throw UndecidedEquality("cubic_add: x comparison undecided");
  if (dx == Sign::Zero) {
    Sign sy = sign_of(p.y + q.y);
    if (sy == Sign::Undecided) throw UndecidedEquality("cubic_add: y comparison undecided");
    if (sy == Sign::Zero) return CubicPoint<S>::at_infinity();  // q = -p
    return cubic_double(c, p);                                  // q = p, y != 0
  }
  S lam = (q.y - p.y) / nonzero_for_division(dxv);
  S x3 = lam * lam - p.x - q.x;
  S y3 = lam * (p.x - x3) - p.y;
  return CubicPoint<S>::affine(std::move(x3), std::move(y3));
}

// n may be negative; double-and-add, so large |n| stays logarithmic.
template <class S>
CubicPoint<S> scalar_mul(const WeierstrassCubic<S>& c, long n, const CubicPoint<S>& p) {
  if (n == 0 || p.infinity) return CubicPoint<S>::at_infinity();
  CubicPoint<S> base = n < 0 ? cubic_negate(p) : p;
  unsigned long k = n < 0 ? -static_cast<unsigned long>(n) : static_cast<unsigned long>(n);
  int top = 63;
  while (top > 0 && !((k >> top) & 1UL)) --top;
  CubicPoint<S> acc = base;
  for (int i = top - 1; i >= 0; --i) {
    acc = cubic_double(c, acc);
    if ((k >> i) & 1UL) acc = cubic_add(c, acc, base);
  }
  return acc;
}

// 10^k as an exact rational (helper for tolerances and blow-up thresholds).
Rational pow_10(unsigned k);

// ---------------------------------------------------------------------------
// Approximate order-n point on the unbounded branch. Returns a point P with
// exact rational x (the final bisection bound), y the nonnegative branch
// value sqrt(x^3 + ax + b) as a refinable expression, such that
//   - k*P is certified affine and bounded (|x| <= 1e10) for 0 < k < n, and
//   - n*P is certified within `tolerance` of O in the chart sense
//     (|x(n*P)| >= 1/tolerance).
// The branch point at parameter t of the circle-group parametrization is
// located by a halving chain: Q_1 is the 2-torsion point (t = 1/2, largest
// real root of the cubic, exactly), and Q_{k+1} (t = 2^-(k+1)) is bisected on
// x against the predicate "position of 2*P_x vs position of Q_k", where the
// branch position (O first, then decreasing x with y > 0, then the 2-torsion
// point, then increasing x with y < 0) is strictly monotone in t. P is the
// sum of the Q_k over the set bits of the binary expansion of 1/n. On failed
// certification the bit budget is raised; after three attempts the search
// reports ConvergenceFailure.
//
// n = 2 returns the exact 2-torsion point. The curve must be smooth.
// ---------------------------------------------------------------------------
CubicPoint<Interval> find_order_n_point(const WeierstrassCubic<Rational>& c, unsigned n,
                                        const Rational& tolerance = Rational(1, 1) / pow_10(20));

// ---------------------------------------------------------------------------
// Dual-line arrangement of the order-n subgroup {O, P, 2P, ..., (n-1)P}
// spanned by an approximate order-n point. The dual of the affine point
// (x, y) is the line (x, y, 1); the dual of O = [0:1:0] is the line (0, 1, 0).
// Every dual point lies exactly on the curve by the group law, so all n lines
// of the result are tangent to the dual curve in the dual-membership sense
// counted below. offset_index selects a coset representative and is reserved:
// only the trivial coset (offset 0, the subgroup itself) is implemented.
// ---------------------------------------------------------------------------
Arrangement<Interval> gen_coset_dual_arrangement(const WeierstrassCubic<Rational>& c, unsigned n,
                                                 long offset_index = 0,
                                                 const Rational& tolerance = Rational(1, 1) /
                                                                             pow_10(20));

// ---------------------------------------------------------------------------
// Tangency census of an arrangement against a curve: a line is counted
// tangent exactly when its dual point [p:q:w] lies on the projective curve
// y^2 z = x^3 + a x z^2 + b z^3, i.e. the residual q^2 w - p^3 - a p w^2
// - b w^3 vanishes. Rational lines are decided exactly. Interval lines use a
// dedicated snap policy (refinement to 512 bits, snap tolerance 2^-64): an
// enclosure that still straddles zero but is wider than the snap is counted
// `undecided`, never silently tangent or non-tangent.
// ---------------------------------------------------------------------------
struct TangencyReport {
  std::size_t n = 0;          // lines in the arrangement
  std::size_t tangent = 0;    // certified on-curve dual points
  std::size_t undecided = 0;  // memberships not certified either way
  bool bound_holds = false;   // tangency_bound_holds(n, tangent)
};

TangencyReport count_tangent_lines(const Arrangement<Rational>& arr,
                                   const WeierstrassCubic<Rational>& c);
TangencyReport count_tangent_lines(const Arrangement<Interval>& arr,
                                   const WeierstrassCubic<Rational>& c);

// True iff 7n >= 8k - 21, the integer form of n >= 8/7 k - 3 relating the
// size n of an arrangement to the number k of its lines tangent to a cubic.
// Requires n >= k >= 0.
bool tangency_bound_holds(long n, long k);

// ---------------------------------------------------------------------------
// The unique conic a x^2 + b xy + c y^2 + d xz + e yz + f z^2 = 0 through
// five points, solved exactly over the rationals. Throws RankDeficient when
// the five points do not determine the conic up to scale (e.g. four of them
// collinear). The class is read in the affine chart z = 1: Degenerate when
// the symmetric conic matrix is singular, otherwise by the sign of b^2 - 4ac
// (negative ellipse, zero parabola, positive hyperbola).
// ---------------------------------------------------------------------------
enum class ConicClass { Ellipse, Parabola, Hyperbola, Degenerate };

const char* to_string(ConicClass c);

struct ConicFit {
  std::array<Rational, 6> coeffs{};  // (a, b, c, d, e, f)
  ConicClass cls = ConicClass::Degenerate;
};

ConicFit conic_through_five(const std::array<ProjPoint<Rational>, 5>& pts);

// ---------------------------------------------------------------------------
// Alignment conditions of a convex polygon with distinguished center, checked
// exactly in the cyclotomic ring. With corners x_1..x_n (n >= 5, cyclic
// indices) and center C, requires for every i:
//   - C, x_i and the meet of lines (x_{i-2} x_{i-1}) and (x_{i+1} x_{i+2})
//     are collinear, and
//   - C, the meet of (x_{i-2} x_{i-1}) and (x_i x_{i+1}), and the meet of
//     (x_{i-3} x_{i-2}) and (x_{i+1} x_{i+2}) are collinear.
// Returns true iff all determinants vanish exactly. The regular m-gon
// satisfies both families of conditions; perturbing one corner breaks them.
// ---------------------------------------------------------------------------
bool polygon_alignment_conditions(const TrigVec3& center, const std::vector<TrigVec3>& corners);

bool regular_polygon_alignment_conditions(unsigned m);

}  // namespace simparr
