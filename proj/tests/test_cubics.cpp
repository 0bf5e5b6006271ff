#include <array>
#include <random>
#include <vector>

#include "doctest.h"
#include "simparr/cubics.hpp"

using namespace simparr;

namespace {

using RatCubic = WeierstrassCubic<Rational>;
using RatPoint = CubicPoint<Rational>;

RatPoint pt(long x_num, long x_den, long y_num, long y_den) {
  return RatPoint::affine(Rational(x_num, x_den), Rational(y_num, y_den));
}

RatPoint pt(long x, long y) { return pt(x, 1, y, 1); }

bool same_point(const RatPoint& p, const RatPoint& q) {
  if (p.infinity || q.infinity) return p.infinity == q.infinity;
  return (p.x - q.x).is_zero() && (p.y - q.y).is_zero();
}

bool on_curve(const RatCubic& c, const RatPoint& p) {
  if (p.infinity) return true;
  return (p.y * p.y - (p.x * p.x * p.x + c.a * p.x + c.b)).is_zero();
}

// Independent oracle: number of distinct real roots of x^3 + a*x + b via a
// Sturm chain evaluated at +/- (2 + |a| + |b|), which brackets every root.
int sturm_distinct_real_roots(const Rational& a, const Rational& b) {
  using Poly = std::vector<Rational>;  // coefficients, lowest degree first
  auto eval = [](const Poly& p, const Rational& x) {
    Rational v(0);
    for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    return v;
  };
  auto rem = [](Poly num, const Poly& den) {
    while (num.size() >= den.size() && num.size() > 0) {
      if (num.back().is_zero()) {
        num.pop_back();
        continue;
      }
      Rational f = num.back() / den.back();
      std::size_t off = num.size() - den.size();
      for (std::size_t i = 0; i < den.size(); ++i) num[off + i] -= f * den[i];
      while (!num.empty() && num.back().is_zero()) num.pop_back();
    }
    return num;
  };
  std::vector<Poly> chain;
  chain.push_back({b, a, Rational(0), Rational(1)});
  chain.push_back({a, Rational(0), Rational(3)});
  while (chain.back().size() > 1) {
    Poly r = rem(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    for (Rational& coef : r) coef = -coef;
    chain.push_back(std::move(r));
  }
  Rational bound = Rational(2) + a.abs() + b.abs();
  auto variations = [&](const Rational& x) {
    int v = 0;
    Sign prev = Sign::Zero;
    for (const Poly& p : chain) {
      Sign s = eval(p, x).sign();
      if (s == Sign::Zero) continue;
      if (prev != Sign::Zero && s != prev) ++v;
      prev = s;
    }
    return v;
  };
  return variations(-bound) - variations(bound);
}

Rational rand_rational(std::mt19937& rng, long lo, long hi, long max_den) {
  std::uniform_int_distribution<long> num(lo, hi), den(1, max_den);
  return Rational(num(rng), den(rng));
}

}  // namespace

TEST_SUITE("cubics") {
  TEST_CASE("classification of y^2 = x^3 + ax + b") {
    CHECK(classify(RatCubic{Rational(-3), Rational(2)}) == CubicClass::Nodal);
    CHECK(classify(RatCubic{Rational(-3), Rational(-2)}) == CubicClass::Acnodal);
    CHECK(classify(RatCubic{Rational(-1), Rational(0)}) == CubicClass::SmoothTwoComponents);
    CHECK(classify(RatCubic{Rational(0), Rational(2)}) == CubicClass::SmoothOneComponent);
    CHECK(classify(RatCubic{Rational(0), Rational(0)}) == CubicClass::Cuspidal);

    CHECK(std::string(to_string(CubicClass::Acnodal)) == "acnodal");
    CHECK(std::string(to_string(ConicClass::Parabola)) == "parabola");

    // Cross-check component count against an independent Sturm-chain root
    // count: three real branch roots = two components, one root = one.
    CHECK(sturm_distinct_real_roots(Rational(-3), Rational(2)) == 2);   // double root
    CHECK(sturm_distinct_real_roots(Rational(-3), Rational(-2)) == 2);  // double root
    std::mt19937 rng(20260814);
    int checked = 0;
    while (checked < 400) {
      Rational a = rand_rational(rng, -20, 20, 8), b = rand_rational(rng, -20, 20, 8);
      CubicClass cls = classify(RatCubic{a, b});
      if (cls != CubicClass::SmoothOneComponent && cls != CubicClass::SmoothTwoComponents)
        continue;  // the random draw hit the discriminant locus
      int roots = sturm_distinct_real_roots(a, b);
      REQUIRE(roots == (cls == CubicClass::SmoothTwoComponents ? 3 : 1));
      ++checked;
    }
  }

  TEST_CASE("chord-tangent group law: exact rational arithmetic") {
    RatCubic c{Rational(-1), Rational(1)};  // y^2 = x^3 - x + 1
    RatPoint P = pt(1, 1);
    RatPoint O = RatPoint::at_infinity();
    REQUIRE(on_curve(c, P));

    RatPoint P2 = cubic_double(c, P);
    CHECK(same_point(P2, pt(-1, 1)));
    RatPoint P3 = cubic_add(c, P2, P);
    CHECK(same_point(P3, pt(0, -1)));
    CHECK(on_curve(c, P2));
    CHECK(on_curve(c, P3));

    SUBCASE("identity and inverses") {
      CHECK(same_point(cubic_add(c, P, O), P));
      CHECK(same_point(cubic_add(c, O, P), P));
      CHECK(cubic_add(c, O, O).infinity);
      CHECK(cubic_add(c, P, cubic_negate(P)).infinity);
      CHECK(same_point(cubic_negate(O), O));
    }

    SUBCASE("commutativity and associativity on sampled multiples") {
      std::vector<RatPoint> mult(18, O);
      for (int i = 1; i < 18; ++i) mult[std::size_t(i)] = cubic_add(c, mult[std::size_t(i - 1)], P);
      for (int i : {1, 2, 5, 7}) {
        for (int j : {1, 3, 4, 8}) {
          RatPoint a = mult[std::size_t(i)], b = mult[std::size_t(j)];
          RatPoint ab = cubic_add(c, a, b);
          CHECK(same_point(ab, cubic_add(c, b, a)));
          CHECK(on_curve(c, ab));
          CHECK(same_point(ab, mult[std::size_t(i + j)]));
          for (int k : {2, 6}) {
            RatPoint lhs = cubic_add(c, ab, mult[std::size_t(k)]);
            RatPoint rhs = cubic_add(c, a, cubic_add(c, b, mult[std::size_t(k)]));
            CHECK(same_point(lhs, rhs));
          }
        }
      }
      SUBCASE("scalar_mul matches iterated addition, both signs") {
        for (long n = -16; n <= 16; ++n) {
          RatPoint want = O;
          for (long i = 0; i < (n < 0 ? -n : n); ++i)
            want = cubic_add(c, want, n < 0 ? cubic_negate(P) : P);
          CHECK(same_point(scalar_mul(c, n, P), want));
        }
      }
    }
  }

  TEST_CASE("group law: 2-torsion and singular-point rejection") {
    RatCubic c{Rational(-4), Rational(0)};  // y^2 = x^3 - 4x, full 2-torsion
    RatPoint t0 = pt(0, 0), tp = pt(2, 0), tm = pt(-2, 0);
    CHECK(cubic_double(c, t0).infinity);
    CHECK(cubic_double(c, tm).infinity);
    CHECK(same_point(cubic_add(c, tm, t0), tp));  // the three halves sum to O
    CHECK(same_point(cubic_add(c, tm, tp), t0));

    // The cusp of y^2 = x^3 and the node of y^2 = x^3 - 3x + 2 are not group
    // elements; using them must fail loudly instead of dividing by zero.
    RatCubic cusp{Rational(0), Rational(0)};
    CHECK_THROWS_AS((void)cubic_double(cusp, pt(0, 0)), SingularPointUsed);
    RatCubic node{Rational(-3), Rational(2)};
    CHECK_THROWS_AS((void)cubic_double(node, pt(1, 0)), SingularPointUsed);
  }

  TEST_CASE("group law: interval backend agrees with the rational route") {
    WeierstrassCubic<Interval> ci{Interval::from_rational(Rational(-1)),
                                  Interval::from_rational(Rational(1))};
    CubicPoint<Interval> P = CubicPoint<Interval>::affine(
        Interval::from_rational(Rational(1)), Interval::from_rational(Rational(1)));
    CubicPoint<Interval> P2 = cubic_double(ci, P);
    CubicPoint<Interval> P3 = cubic_add(ci, P2, P);
    REQUIRE(!P2.infinity);
    REQUIRE(!P3.infinity);
    CHECK((P2.x - Interval::from_rational(Rational(-1))).contains_zero());
    CHECK((P2.y - Interval::from_rational(Rational(1))).contains_zero());
    CHECK((P3.x).contains_zero());
    CHECK((P3.y + Interval::from_rational(Rational(1))).contains_zero());
    CHECK((P3.x).refined(128).magnitude_within(100));
  }

  TEST_CASE("find_order_n_point: certified points of finite branch order") {
    SUBCASE("n = 2 is the exact branch endpoint") {
      RatCubic c{Rational(-1), Rational(0)};  // roots -1, 0, 1
      CubicPoint<Interval> p = find_order_n_point(c, 2);
      REQUIRE(!p.infinity);
      CHECK((p.x - Interval::from_rational(Rational(1))).contains_zero());
      CHECK((p.x - Interval::from_rational(Rational(1))).refined(100).magnitude_within(60));
      CHECK(p.y.contains_zero());
      CHECK(p.y.magnitude_within(1000));  // exact zero enclosure
    }

    SUBCASE("n = 3 on y^2 = x^3 + 2 recovers the rational flex at x = 0") {
      RatCubic c{Rational(0), Rational(2)};
      CubicPoint<Interval> p = find_order_n_point(c, 3);
      REQUIRE(!p.infinity);
      CHECK(p.x.refined(150).magnitude_within(40));
      Interval y2 = p.y * p.y - Interval::from_rational(Rational(2));
      CHECK(y2.refined(400).magnitude_within(35));
      CHECK(sign_of(p.y) == Sign::Positive);
    }

    SUBCASE("n = 6 exists on a two-component curve and is deterministic") {
      RatCubic c{Rational(-1), Rational(1)};
      CubicPoint<Interval> p = find_order_n_point(c, 6);
      CubicPoint<Interval> q = find_order_n_point(c, 6);
      REQUIRE(!p.infinity);
      CHECK(p.x.refined(128).decimal(30) == q.x.refined(128).decimal(30));
      CHECK(p.y.refined(128).decimal(30) == q.y.refined(128).decimal(30));
      CHECK(sign_of(p.y) == Sign::Positive);  // the search works on the upper arm
    }

    SUBCASE("input validation") {
      CHECK_THROWS_AS((void)find_order_n_point(RatCubic{Rational(-3), Rational(2)}, 5),
                      DomainError);  // singular curve
      CHECK_THROWS_AS((void)find_order_n_point(RatCubic{Rational(-1), Rational(1)}, 1),
                      DomainError);
      CHECK_THROWS_AS(
          (void)find_order_n_point(RatCubic{Rational(-1), Rational(1)}, 5, Rational(-1)),
          DomainError);
    }
  }

  TEST_CASE("coset duals: lines of a cyclic subgroup under point-line duality") {
    SUBCASE("n = 3 on y^2 = x^3 + 2") {
      Arrangement<Interval> arr = gen_coset_dual_arrangement(RatCubic{Rational(0), Rational(2)}, 3);
      REQUIRE(arr.lines.size() == 3);
      CHECK(arr.lines[0].a.contains_zero());
      CHECK(arr.lines[0].a.magnitude_within(1000));
      CHECK(arr.lines[0].c.contains_zero());
      CHECK(sign_of(arr.lines[0].b) == Sign::Positive);
      // the two affine lines are near mirror images: b coefficients sum to a
      // certified-tiny value (the search error), not to exact zero
      Interval ysum = arr.lines[1].b + arr.lines[2].b;
      CHECK(ysum.refined(400).magnitude_within(30));
    }

    SUBCASE("tangency census certifies all twelve duals of a 12-element subgroup") {
      RatCubic c{Rational(-1), Rational(1)};
      Arrangement<Interval> arr = gen_coset_dual_arrangement(c, 12);
      REQUIRE(arr.lines.size() == 12);
      TangencyReport rep = count_tangent_lines(arr, c);
      CHECK(rep.n == 12);
      CHECK(rep.tangent == 12);
      CHECK(rep.undecided == 0);
      CHECK(rep.bound_holds);  // 84 >= 96 - 21

      // adding secant lines must not perturb the tangent count
      arr.lines.push_back({Interval::from_rational(Rational(1)),
                           Interval::from_rational(Rational(2)),
                           Interval::from_rational(Rational(3))});
      arr.lines.push_back({Interval::from_rational(Rational(5)),
                           Interval::from_rational(Rational(-1)),
                           Interval::from_rational(Rational(7))});
      TangencyReport rep2 = count_tangent_lines(arr, c);
      CHECK(rep2.n == 14);
      CHECK(rep2.tangent == 12);
      CHECK(rep2.undecided == 0);
    }

    SUBCASE("rejects the nontrivial coset request") {
      CHECK_THROWS_AS(
          (void)gen_coset_dual_arrangement(RatCubic{Rational(0), Rational(2)}, 3, 1),
          DomainError);
    }
  }

  TEST_CASE("rational tangency census on dual lines of known rational points") {
    RatCubic c{Rational(-1), Rational(1)};
    Arrangement<Rational> arr;
    // duals of rational curve points (tangent) ...
    auto dual = [](long x, long y) { return ProjLine<Rational>{Rational(x), Rational(y), Rational(1)}; };
    arr.lines.push_back(dual(1, 1));
    arr.lines.push_back(dual(0, 1));
    arr.lines.push_back(dual(-1, 1));
    arr.lines.push_back(dual(3, 5));
    arr.lines.push_back(dual(5, 11));
    arr.lines.push_back({Rational(0), Rational(1), Rational(0)});  // dual of O
    // ... and two lines whose dual points are off the curve
    arr.lines.push_back({Rational(1), Rational(0), Rational(0)});
    arr.lines.push_back({Rational(0), Rational(0), Rational(1)});
    TangencyReport rep = count_tangent_lines(arr, c);
    CHECK(rep.n == 8);
    CHECK(rep.tangent == 6);
    CHECK(rep.undecided == 0);
    CHECK(rep.bound_holds);
  }

  TEST_CASE("tangency counting bound 7n >= 8k - 21") {
    CHECK(!tangency_bound_holds(24, 24));  // 168 < 171
    CHECK(tangency_bound_holds(100, 80));  // 700 >= 619
    CHECK(tangency_bound_holds(0, 0));
    CHECK(tangency_bound_holds(3, 3));     // 21 >= 3
    CHECK(tangency_bound_holds(21, 21));   // 147 >= 147, boundary
    CHECK(!tangency_bound_holds(22, 22));  // 154 < 155
    for (long n = 25; n < 40; ++n) CHECK(tangency_bound_holds(n, 24));
    CHECK_THROWS_AS((void)tangency_bound_holds(5, 6), DomainError);
    CHECK_THROWS_AS((void)tangency_bound_holds(5, -1), DomainError);
  }

  TEST_CASE("conic through five points: classification") {
    auto P = [](long xn, long xd, long yn, long yd) {
      return ProjPoint<Rational>{Rational(xn, xd), Rational(yn, yd), Rational(1)};
    };
    auto residual = [](const ConicFit& f, const ProjPoint<Rational>& p) {
      const auto& v = f.coeffs;
      return v[0] * p.x * p.x + v[1] * p.x * p.y + v[2] * p.y * p.y + v[3] * p.x * p.z +
             v[4] * p.y * p.z + v[5] * p.z * p.z;
    };

    SUBCASE("hand-checked representatives") {
      std::array<ProjPoint<Rational>, 5> ell = {P(2, 1, 0, 1), P(-2, 1, 0, 1), P(0, 1, 1, 1),
                                                P(0, 1, -1, 1), P(6, 5, 4, 5)};
      ConicFit fe = conic_through_five(ell);
      CHECK(fe.cls == ConicClass::Ellipse);
      for (const auto& p : ell) CHECK(residual(fe, p).is_zero());

      std::array<ProjPoint<Rational>, 5> hyp = {P(1, 1, 1, 1), P(2, 1, 1, 2), P(-1, 1, -1, 1),
                                                P(3, 1, 1, 3), P(-2, 1, -1, 2)};
      CHECK(conic_through_five(hyp).cls == ConicClass::Hyperbola);

      std::array<ProjPoint<Rational>, 5> par = {P(0, 1, 0, 1), P(1, 1, 1, 1), P(2, 1, 4, 1),
                                                P(-1, 1, 1, 1), P(-2, 1, 4, 1)};
      CHECK(conic_through_five(par).cls == ConicClass::Parabola);

      std::array<ProjPoint<Rational>, 5> deg = {P(1, 1, 0, 1), P(2, 1, 0, 1), P(3, 1, 0, 1),
                                                P(0, 1, 1, 1), P(0, 1, 2, 1)};
      ConicFit fd = conic_through_five(deg);  // unique conic is the line pair xy = 0
      CHECK(fd.cls == ConicClass::Degenerate);
      for (const auto& p : deg) CHECK(residual(fd, p).is_zero());

      std::array<ProjPoint<Rational>, 5> rank4 = {P(0, 1, 0, 1), P(1, 1, 0, 1), P(2, 1, 0, 1),
                                                  P(3, 1, 0, 1), P(0, 1, 1, 1)};
      CHECK_THROWS_AS((void)conic_through_five(rank4), RankDeficient);
    }

    SUBCASE("randomized conics of known class via rational parametrizations") {
      std::mt19937 rng(77002026);
      std::uniform_int_distribution<long> small(-6, 6);
      auto distinct_params = [&](std::size_t count, bool nonzero) {
        std::vector<Rational> ts;
        std::uniform_int_distribution<long> num(-30, 30), den(1, 6);
        while (ts.size() < count) {
          Rational t(num(rng), den(rng));
          if (nonzero && t.is_zero()) continue;
          bool dup = false;
          for (const Rational& u : ts)
            if ((u - t).is_zero()) dup = true;
          if (!dup) ts.push_back(t);
        }
        return ts;
      };
      for (int trial = 0; trial < 200; ++trial) {
        Rational h(small(rng)), k(small(rng));
        std::array<ProjPoint<Rational>, 5> pts;
        ConicClass want;
        switch (trial % 3) {
          case 0: {  // ellipse: rational circle parametrization, axes scaled
            Rational r1(std::abs(small(rng)) + 1), r2(std::abs(small(rng)) + 1);
            auto ts = distinct_params(5, false);
            for (int i = 0; i < 5; ++i) {
              const Rational& t = ts[std::size_t(i)];
              Rational d = Rational(1) + t * t;
              pts[std::size_t(i)] = {h + r1 * (Rational(1) - t * t) / d,
                                     k + r2 * (t + t) / d, Rational(1)};
            }
            want = ConicClass::Ellipse;
            break;
          }
          case 1: {  // hyperbola: (x-h)(y-k) = s
            Rational s(std::abs(small(rng)) + 1);
            auto ts = distinct_params(5, true);
            for (int i = 0; i < 5; ++i) {
              const Rational& t = ts[std::size_t(i)];
              pts[std::size_t(i)] = {h + t, k + s / t, Rational(1)};
            }
            want = ConicClass::Hyperbola;
            break;
          }
          default: {  // parabola: y = p x^2 + q x + r with p != 0
            Rational p(std::abs(small(rng)) + 1), q(small(rng)), r(small(rng));
            auto ts = distinct_params(5, false);
            for (int i = 0; i < 5; ++i) {
              const Rational& t = ts[std::size_t(i)];
              pts[std::size_t(i)] = {t, p * t * t + q * t + r, Rational(1)};
            }
            want = ConicClass::Parabola;
            break;
          }
        }
        ConicFit fit = conic_through_five(pts);
        REQUIRE(fit.cls == want);
        for (const auto& p : pts) REQUIRE(residual(fit, p).is_zero());
      }
    }
  }

  TEST_CASE("polygon alignment conditions in the cyclotomic ring") {
    for (unsigned m = 5; m <= 10; ++m) {
      CAPTURE(m);
      CHECK(regular_polygon_alignment_conditions(m));
    }
    CHECK_THROWS_AS((void)regular_polygon_alignment_conditions(4), DomainError);

    SUBCASE("a perturbed hexagon fails the conditions") {
      TrigRing ring(6);
      std::vector<TrigVec3> corners;
      for (long j = 0; j < 6; ++j)
        corners.push_back({ring.cos_u(4 * j), ring.sin_u(4 * j), ring.one()});
      TrigValue stretch = ring.from_rational(Rational(11, 10));
      corners[0].x = stretch * corners[0].x;
      corners[0].y = stretch * corners[0].y;
      CHECK(!polygon_alignment_conditions({ring.zero(), ring.zero(), ring.one()}, corners));
    }
  }
}
