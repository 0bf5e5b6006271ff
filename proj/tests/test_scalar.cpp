#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "doctest.h"
#include "simparr/interval.hpp"
#include "simparr/rng.hpp"
#include "simparr/scalar.hpp"

using namespace simparr;
namespace bmp = boost::multiprecision;

TEST_SUITE("scalar") {

TEST_CASE("rational canonical form and arithmetic") {
  CHECK(Rational(6, 4).str() == "3/2");
  CHECK(Rational(-6, 4).str() == "-3/2");
  CHECK(Rational(6, -4).str() == "-3/2");
  CHECK(Rational(0, 5).str() == "0");
  CHECK((Rational(1, 3) + Rational(1, 6)).str() == "1/2");
  CHECK((Rational(1, 3) * Rational(3, 7)).str() == "1/7");
  CHECK((Rational(1, 3) - Rational(1, 3)).is_zero());
  CHECK(Rational(2) / Rational(1, 2) == Rational(4));
  CHECK_THROWS_AS(Rational(1, 0), DomainError);
  CHECK_THROWS_AS(Rational(1) / Rational(0), DomainError);
  CHECK(Rational(-5, 10).sign() == Sign::Negative);
  CHECK(sign_of(Rational(3, 2)) == Sign::Positive);
  CHECK(sign_of(Rational(0)) == Sign::Zero);
  CHECK(Rational(-7, 2).abs() == Rational(7, 2));
  CHECK(Rational(1, 2) < Rational(2, 3));
  CHECK(flip(Sign::Negative) == Sign::Positive);
  CHECK(flip(Sign::Undecided) == Sign::Undecided);
  CHECK(std::string(to_string(Sign::Undecided)) == "Undecided");
}

TEST_CASE("rational parsing") {
  CHECK(Rational::parse("6/4") == Rational(3, 2));
  CHECK(Rational::parse("-3") == Rational(-3));
  CHECK(Rational::parse(" +7/3 ") == Rational(7, 3));
  CHECK(Rational::parse("-0.125") == Rational(-1, 8));
  CHECK(Rational::parse("2.5e-1") == Rational(1, 4));
  CHECK(Rational::parse("1.5e3") == Rational(1500));
  CHECK(Rational::parse("0.0") == Rational(0));
  CHECK(Rational::parse("−1/2") == Rational(-1, 2));  // U+2212 minus sign
  CHECK_THROWS_AS(Rational::parse("1/0"), ParseError);
  CHECK_THROWS_AS(Rational::parse("abc"), ParseError);
  CHECK_THROWS_AS(Rational::parse(""), ParseError);
  CHECK_THROWS_AS(Rational::parse("1..2"), ParseError);
}

TEST_CASE("rational agrees with an independent bignum implementation") {
  SplitMix64 rng(20260814);
  for (int iter = 0; iter < 500; ++iter) {
    long long a = rng.range(-50, 50), b = rng.range(1, 40);
    long long c = rng.range(-50, 50), d = rng.range(1, 40);
    Rational x(a, b), y(c, d);
    bmp::cpp_rational bx(a, b), by(c, d);
    auto agree = [](const Rational& r, const bmp::cpp_rational& br) {
      return r.num().get_str() == bmp::numerator(br).str() &&
             r.den().get_str() == bmp::denominator(br).str();
    };
    CHECK(agree(x + y, bx + by));
    CHECK(agree(x - y, bx - by));
    CHECK(agree(x * y, bx * by));
    if (!y.is_zero()) CHECK(agree(x / y, bx / by));
  }
}

TEST_CASE("precision policy defaults") {
  const PrecisionPolicy& p = precision_policy();
  CHECK(p.cap == 1024);
  REQUIRE(p.ladder.size() == 4);
  CHECK(p.ladder.front() == 53);
  CHECK(p.ladder.back() == 1024);
  CHECK(!p.snap_bits);
}

TEST_CASE("interval enclosures of basic constants") {
  Interval r = sqrt(Interval::from_rational(Rational(2)));
  CHECK(r.precision() == 53);
  CHECK(r.lo_double() <= 1.4142135623730951);
  CHECK(r.hi_double() >= 1.4142135623730949);
  CHECK(r.width_within(40));

  Interval p = Interval::pi();
  CHECK(p.lo_double() <= 3.141592653589793);
  CHECK(p.hi_double() >= 3.141592653589793);
  CHECK(sign_of(p) == Sign::Positive);

  Interval c = Interval::cos_pi(Rational(1, 4));
  CHECK(c.mid_double() == doctest::Approx(0.7071067811865476));
  CHECK(Interval::sin_pi(Rational(1, 6)).mid_double() == doctest::Approx(0.5));
  CHECK(Interval::from_rational(Rational(1, 3)).decimal(10).substr(0, 5) == "3.333");
}

TEST_CASE("cosine windowing at extrema") {
  // angle enclosure straddles pi: exactly one minimum inside the window
  Interval cm = Interval::cos_pi(Rational(1));
  CHECK(cm.lo_double() == -1.0);
  CHECK(sign_of(cm) == Sign::Negative);
  // straddles 2*pi: one maximum inside
  Interval cp = Interval::cos_pi(Rational(2));
  CHECK(cp.hi_double() == 1.0);
  CHECK(sign_of(cp) == Sign::Positive);
  // exact zero of cosine can never be signed without a snap tolerance
  Interval cz = Interval::cos_pi(Rational(1, 2));
  CHECK(cz.contains_zero());
  CHECK(sign_of(cz) == Sign::Undecided);
  // point angle: cos(0) = 1 exactly
  Interval c0 = Interval::cos_pi(Rational(0));
  CHECK(c0.lo_double() == 1.0);
  CHECK(c0.hi_double() == 1.0);
  CHECK(Interval::sin_pi(Rational(3, 2)).hi_double() < 0);
}

TEST_CASE("certified sign of a trigonometric combination") {
  // 2*cos(4pi/9)*cos(pi/9) - cos(4pi/9) = 0.15270... > 0
  Interval c49 = Interval::cos_pi(Rational(4, 9));
  Interval c19 = Interval::cos_pi(Rational(1, 9));
  Interval x = Interval::from_rational(Rational(2)) * c49 * c19 - c49;
  CHECK(sign_of(x) == Sign::Positive);
  CHECK(x.mid_double() == doctest::Approx(0.15270364466613926).epsilon(1e-9));
}

TEST_CASE("precision escalation narrows and respects the cap") {
  Interval r = sqrt(Interval::from_rational(Rational(2)));
  Interval r2 = escalate_precision(r, 256);
  CHECK(r2.precision() == 256);
  CHECK(r2.width_within(200));
  CHECK(!r.width_within(200));
  CHECK(r2.lo_double() >= r.lo_double());
  CHECK(r2.hi_double() <= r.hi_double());
  CHECK_THROWS_AS(escalate_precision(r, 2048), MaxPrecisionExceeded);
}

TEST_CASE("zero is never certified without a snap tolerance") {
  Interval z = Interval::from_rational(Rational(0));
  CHECK(z.contains_zero());
  CHECK(sign_of(z) == Sign::Undecided);

  Interval two = Interval::from_rational(Rational(2));
  Interval h = sqrt(two) * sqrt(two) - two;  // true value 0
  CHECK(sign_of(h) == Sign::Undecided);
  CHECK_THROWS_AS(Interval::from_rational(Rational(1)) / h, ZeroDivisor);

  {
    PrecisionPolicy pol;
    pol.snap_bits = 64;
    ScopedPrecisionPolicy scope(pol);
    CHECK(sign_of(Interval::from_rational(Rational(0))) == Sign::Zero);
    Interval h2 = sqrt(two) * sqrt(two) - two;
    CHECK(sign_of(h2) == Sign::Zero);
    // a genuinely nonzero quantity must not be snapped
    CHECK(sign_of(Interval::from_rational(Rational(1, 1000000))) == Sign::Positive);
  }
  CHECK_THROWS_AS(sqrt(Interval::from_rational(Rational(-1))), DomainError);
}

TEST_CASE("largest real root of depressed cubics") {
  // single real root: x^3 - 8
  Interval r8 = Interval::cubic_root_max(Rational(0), Rational(-8));
  CHECK(r8.lo_double() <= 2.0);
  CHECK(r8.hi_double() >= 2.0);
  CHECK(r8.width_within(45));
  Interval r8f = r8.refined(256);
  CHECK(r8f.width_within(240));
  CHECK(r8f.lo_double() >= r8.lo_double());
  CHECK(r8f.hi_double() <= r8.hi_double());

  // three distinct roots -1, 0, 1: the largest is selected
  Interval r1 = Interval::cubic_root_max(Rational(-1), Rational(0));
  CHECK(r1.mid_double() == doctest::Approx(1.0));
  CHECK(r1.lo_double() > 0.9);

  // double-root cases resolve exactly
  Interval d1 = Interval::cubic_root_max(Rational(-3), Rational(2));  // (x-1)^2 (x+2)
  CHECK(d1.lo_double() == 1.0);
  CHECK(d1.hi_double() == 1.0);
  Interval d2 = Interval::cubic_root_max(Rational(-3), Rational(-2));  // (x+1)^2 (x-2)
  CHECK(d2.lo_double() == 2.0);
  CHECK(d2.hi_double() == 2.0);
  Interval d0 = Interval::cubic_root_max(Rational(0), Rational(0));
  CHECK(d0.lo_double() == 0.0);
  CHECK(d0.hi_double() == 0.0);
}

TEST_CASE("refinement never widens on random expression dags") {
  SplitMix64 rng(7);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<Interval> pool;
    pool.push_back(Interval::from_rational(
        Rational(rng.range(-9, 9), rng.range(1, 9))));
    pool.push_back(Interval::pi());
    pool.push_back(Interval::cos_pi(Rational(rng.range(-20, 20), rng.range(1, 12))));
    pool.push_back(Interval::sin_pi(Rational(rng.range(-20, 20), rng.range(1, 12))));
    for (int step = 0; step < 6; ++step) {
      const Interval& a = pool[rng.below(pool.size())];
      const Interval& b = pool[rng.below(pool.size())];
      switch (rng.below(3)) {
        case 0: pool.push_back(a + b); break;
        case 1: pool.push_back(a - b); break;
        default: pool.push_back(a * b); break;
      }
    }
    const Interval& x = pool.back();
    Interval fine = x.refined(212);
    CHECK(fine.lo_double() >= x.lo_double());
    CHECK(fine.hi_double() <= x.hi_double());
    Sign coarse = x.raw_sign();
    if (coarse != Sign::Undecided) CHECK(fine.raw_sign() == coarse);
  }
}

}  // TEST_SUITE
