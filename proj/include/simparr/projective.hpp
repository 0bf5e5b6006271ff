#pragma once

#include <array>
#include <string>

#include "simparr/interval.hpp"
#include "simparr/scalar.hpp"

namespace simparr {

// Backend adapter: the geometry below is templated over the scalar type and
// interacts with it only through arithmetic and sign_of.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational from_long(long v) { return Rational(v); }
  static Rational from_rational(const Rational& q) { return q; }
};

template <>
struct ScalarTraits<Interval> {
  static constexpr bool exact = false;
  static Interval from_long(long v) { return Interval::from_rational(Rational(v)); }
  static Interval from_rational(const Rational& q) { return Interval::from_rational(q); }
};

// Homogeneous coordinates. Not all three entries zero; no eager normalization
// (equality is decided by vanishing of the 2x2 minors, which also works for
// interval scalars).
template <class S>
struct ProjPoint {
  S x{}, y{}, z{};
};

// Coefficients of {[x:y:z] : a*x + b*y + c*z = 0}; same invariants as points.
template <class S>
struct ProjLine {
  S a{}, b{}, c{};
};

namespace detail {
inline bool decided_nonzero(Sign s) { return s == Sign::Negative || s == Sign::Positive; }
}

// Tri-state projective equality: Zero = equal, Positive = certified distinct,
// Undecided = the backend could not separate them at the precision cap.
template <class S>
Sign equal(const ProjPoint<S>& p, const ProjPoint<S>& q) {
  Sign m1 = sign_of(p.y * q.z - p.z * q.y);
  if (detail::decided_nonzero(m1)) return Sign::Positive;
  Sign m2 = sign_of(p.z * q.x - p.x * q.z);
  if (detail::decided_nonzero(m2)) return Sign::Positive;
  Sign m3 = sign_of(p.x * q.y - p.y * q.x);
  if (detail::decided_nonzero(m3)) return Sign::Positive;
  if (m1 == Sign::Zero && m2 == Sign::Zero && m3 == Sign::Zero) return Sign::Zero;
  return Sign::Undecided;
}

template <class S>
Sign equal(const ProjLine<S>& l, const ProjLine<S>& m) {
  Sign m1 = sign_of(l.b * m.c - l.c * m.b);
  if (detail::decided_nonzero(m1)) return Sign::Positive;
  Sign m2 = sign_of(l.c * m.a - l.a * m.c);
  if (detail::decided_nonzero(m2)) return Sign::Positive;
  Sign m3 = sign_of(l.a * m.b - l.b * m.a);
  if (detail::decided_nonzero(m3)) return Sign::Positive;
  if (m1 == Sign::Zero && m2 == Sign::Zero && m3 == Sign::Zero) return Sign::Zero;
  return Sign::Undecided;
}

// Line through two distinct points (cross product). The cross-product
// coordinates are exactly the equality minors, so distinctness certification
// comes for free.
template <class S>
ProjLine<S> join(const ProjPoint<S>& p, const ProjPoint<S>& q) {
  S a = p.y * q.z - p.z * q.y;
  S b = p.z * q.x - p.x * q.z;
  S c = p.x * q.y - p.y * q.x;
  Sign sa = sign_of(a);
  if (!detail::decided_nonzero(sa)) {
    Sign sb = sign_of(b);
    if (!detail::decided_nonzero(sb)) {
      Sign sc = sign_of(c);
      if (!detail::decided_nonzero(sc)) {
        if (sa == Sign::Zero && sb == Sign::Zero && sc == Sign::Zero)
          throw IdenticalPoints("join of projectively equal points");
        throw UndecidedEquality("join: could not certify points distinct");
      }
    }
  }
  return {std::move(a), std::move(b), std::move(c)};
}

// Intersection point of two distinct lines (dual of join).
template <class S>
ProjPoint<S> meet(const ProjLine<S>& l, const ProjLine<S>& m) {
  S x = l.b * m.c - l.c * m.b;
  S y = l.c * m.a - l.a * m.c;
  S z = l.a * m.b - l.b * m.a;
  Sign sx = sign_of(x);
  if (!detail::decided_nonzero(sx)) {
    Sign sy = sign_of(y);
    if (!detail::decided_nonzero(sy)) {
      Sign sz = sign_of(z);
      if (!detail::decided_nonzero(sz)) {
        if (sx == Sign::Zero && sy == Sign::Zero && sz == Sign::Zero)
          throw DuplicateLine("meet of projectively equal lines");
        throw UndecidedEquality("meet: could not certify lines distinct");
      }
    }
  }
  return {std::move(x), std::move(y), std::move(z)};
}

// Sign of a*x + b*y + c*z; Zero iff incident (exact backend).
template <class S>
Sign incident(const ProjPoint<S>& p, const ProjLine<S>& l) {
  return sign_of(l.a * p.x + l.b * p.y + l.c * p.z);
}

template <class S>
S det3(const S& a1, const S& a2, const S& a3, const S& b1, const S& b2, const S& b3,
       const S& c1, const S& c2, const S& c3) {
  return a1 * (b2 * c3 - b3 * c2) - a2 * (b1 * c3 - b3 * c1) + a3 * (b1 * c2 - b2 * c1);
}

// Sign of the 3x3 coordinate determinant; Zero iff collinear.
template <class S>
Sign collinear(const ProjPoint<S>& p, const ProjPoint<S>& q, const ProjPoint<S>& r) {
  return sign_of(det3(p.x, p.y, p.z, q.x, q.y, q.z, r.x, r.y, r.z));
}

// Dual statement: Zero iff the three lines pass through a common point.
template <class S>
Sign concurrent(const ProjLine<S>& l, const ProjLine<S>& m, const ProjLine<S>& n) {
  return sign_of(det3(l.a, l.b, l.c, m.a, m.b, m.c, n.a, n.b, n.c));
}

// Point-line duality: reinterpret the coordinate triple in the dual plane.
template <class S>
ProjLine<S> dualize_point(const ProjPoint<S>& p) {
  return {p.x, p.y, p.z};
}

template <class S>
ProjPoint<S> dualize_line(const ProjLine<S>& l) {
  return {l.a, l.b, l.c};
}

// Invertible projective transformation. Construction certifies det != 0.
template <class S>
struct ProjTransform {
  std::array<std::array<S, 3>, 3> m;

  static ProjTransform from_matrix(std::array<std::array<S, 3>, 3> mat) {
    ProjTransform t{std::move(mat)};
    Sign s = sign_of(t.det());
    if (s == Sign::Zero) throw SingularTransform("transform has zero determinant");
    if (s == Sign::Undecided)
      throw SingularTransform("transform determinant could not be certified nonzero");
    return t;
  }

  S det() const {
    return det3(m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1],
                m[2][2]);
  }

  // Transpose of the cofactor matrix; adj(T) * T = det(T) * I.
  ProjTransform adjugate() const {
    auto cof = [&](int r0, int r1, int c0, int c1) {
      return m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    };
    ProjTransform a{};
    a.m[0][0] = cof(1, 2, 1, 2);
    a.m[0][1] = -cof(0, 2, 1, 2);
    a.m[0][2] = cof(0, 1, 1, 2);
    a.m[1][0] = -cof(1, 2, 0, 2);
    a.m[1][1] = cof(0, 2, 0, 2);
    a.m[1][2] = -cof(0, 1, 0, 2);
    a.m[2][0] = cof(1, 2, 0, 1);
    a.m[2][1] = -cof(0, 2, 0, 1);
    a.m[2][2] = cof(0, 1, 0, 1);
    return a;
  }
};

template <class S>
ProjPoint<S> apply(const ProjTransform<S>& t, const ProjPoint<S>& p) {
  return {t.m[0][0] * p.x + t.m[0][1] * p.y + t.m[0][2] * p.z,
          t.m[1][0] * p.x + t.m[1][1] * p.y + t.m[1][2] * p.z,
          t.m[2][0] * p.x + t.m[2][1] * p.y + t.m[2][2] * p.z};
}

// Contragredient action: L' = adj(T)^T * L (= T^{-T} L up to the det factor),
// so incidence is preserved: L'(T p) = det(T) * L(p).
template <class S>
ProjLine<S> apply(const ProjTransform<S>& t, const ProjLine<S>& l) {
  ProjTransform<S> a = t.adjugate();
  return {a.m[0][0] * l.a + a.m[1][0] * l.b + a.m[2][0] * l.c,
          a.m[0][1] * l.a + a.m[1][1] * l.b + a.m[2][1] * l.c,
          a.m[0][2] * l.a + a.m[1][2] * l.b + a.m[2][2] * l.c};
}

// Backend promotions (rational geometry reused under the interval backend).
inline ProjPoint<Interval> promote(const ProjPoint<Rational>& p) {
  return {promote(p.x), promote(p.y), promote(p.z)};
}
inline ProjLine<Interval> promote(const ProjLine<Rational>& l) {
  return {promote(l.a), promote(l.b), promote(l.c)};
}

std::string str(const ProjPoint<Rational>& p);
std::string str(const ProjLine<Rational>& l);

class SplitMix64;

// Uniformly sampled small-entry invertible rational matrix (for property
// tests of transform invariance).
ProjTransform<Rational> random_invertible_transform(SplitMix64& rng);

}  // namespace simparr
