#pragma once

#include <mpfr.h>

#include <memory>
#include <string>

#include "simparr/scalar.hpp"

namespace simparr {

// Directed-rounding endpoint. Owns one mpfr_t.
class MpfrFloat {
 public:
  MpfrFloat() { mpfr_init2(v_, 53); }
  explicit MpfrFloat(unsigned prec) { mpfr_init2(v_, static_cast<mpfr_prec_t>(prec)); }
  MpfrFloat(const MpfrFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  MpfrFloat(MpfrFloat&& o) noexcept {
    mpfr_init2(v_, 53);
    mpfr_swap(v_, o.v_);
  }
  MpfrFloat& operator=(MpfrFloat o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~MpfrFloat() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Self-validating enclosure of a real number. Carries a re-evaluable
// expression handle so precision escalation recomputes from the symbolic
// source instead of widening already-rounded endpoints.
class Interval {
 public:
  Interval();  // [0,0], constant zero

  static Interval from_rational(const Rational& q, unsigned prec = 0);
  static Interval pi(unsigned prec = 0);
  // cos(q*pi), sin(q*pi) for rational q.
  static Interval cos_pi(const Rational& q, unsigned prec = 0);
  static Interval sin_pi(const Rational& q, unsigned prec = 0);
  // Largest real root of x^3 + a*x + b (refinable to any precision).
  static Interval cubic_root_max(const Rational& a, const Rational& b, unsigned prec = 0);

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);  // throws ZeroDivisor
  Interval operator-() const;
  friend Interval sqrt(const Interval& a);  // throws DomainError if surely negative

  unsigned precision() const { return prec_; }
  // Sign from the current enclosure only (no refinement): never Zero.
  Sign raw_sign() const;
  bool contains_zero() const;
  double lo_double() const { return mpfr_get_d(lo_.get(), MPFR_RNDD); }
  double hi_double() const { return mpfr_get_d(hi_.get(), MPFR_RNDU); }
  double mid_double() const;
  // Midpoint with the given number of significant decimal digits (RNDN).
  std::string decimal(unsigned digits) const;
  // width <= 2^-bits, measured absolutely.
  bool width_within(unsigned bits) const;
  // max(|lo|, |hi|) <= 2^-bits.
  bool magnitude_within(unsigned bits) const;
  const ExprPtr& expr() const { return expr_; }

  // Re-evaluates the expression at target_bits (must not exceed the policy
  // cap) and intersects with the current enclosure, so width never grows.
  Interval refined(unsigned target_bits) const;

  friend class TrigValue;

 private:
  Interval(ExprPtr e, MpfrFloat lo, MpfrFloat hi, unsigned prec);

  ExprPtr expr_;
  MpfrFloat lo_, hi_;
  unsigned prec_;
};

// Explicit escalation entry point: throws MaxPrecisionExceeded beyond the cap.
Interval escalate_precision(const Interval& x, unsigned target_bits);

// Certified sign with ladder escalation; Zero only under a configured snap.
Sign sign_of(const Interval& x);

// Promotion used by mixed rational/interval predicates.
inline Interval promote(const Rational& q) { return Interval::from_rational(q); }
inline const Interval& promote(const Interval& x) { return x; }

}  // namespace simparr
