#pragma once

#include <memory>
#include <vector>

#include "simparr/interval.hpp"
#include "simparr/scalar.hpp"

namespace simparr {

class TrigValue;

// Exact arithmetic in Q(zeta), zeta = exp(i*pi/(2m)): the coordinates of all
// vertices and lines of the regular arrangements with parameter m are
// rational combinations of cos(k*pi/(2m)) and sin(k*pi/(2m)), which live in
// this one cyclotomic field (of order 4m so that sin, i.e. a quarter-turn
// phase shift, is available). Elements are coefficient vectors reduced
// modulo the 4m-th cyclotomic polynomial, which is the minimal polynomial of
// zeta, so the representation is canonical and zero tests are exact.
class TrigRing {
 public:
  explicit TrigRing(unsigned m);

  unsigned m() const { return m_; }
  unsigned order() const { return n_; }                      // 4m
  unsigned degree() const { return unsigned(phi_.size() - 1); }  // deg of modulus
  const std::vector<Rational>& modulus() const { return phi_; }

  TrigValue zero() const;
  TrigValue one() const;
  TrigValue from_rational(const Rational& q) const;
  TrigValue zeta_pow(long k) const;  // zeta^k (k mod 4m)
  // Angle arguments are in units of pi/(2m).
  TrigValue cos_u(long k) const;
  TrigValue sin_u(long k) const;

  // Enclosure of cos(k*pi/(2m)), precomputed for all residues.
  const Interval& cos_enclosure(unsigned k) const { return cos_vals_[k]; }

  // n-th cyclotomic polynomial, ascending coefficients (exact recursive
  // computation: divide X^n - 1 by the cyclotomics of the proper divisors).
  static std::vector<Rational> cyclotomic(unsigned n);

 private:
  unsigned m_, n_;
  std::vector<Rational> phi_;
  std::vector<Interval> cos_vals_;  // cos(k*pi/(2m)), k = 0..n-1
};

// Element of a TrigRing. The ring must outlive its values. Binary operations
// require operands of the same ring.
class TrigValue {
 public:
  TrigValue() = default;

  bool is_zero() const;
  const TrigRing& ring() const { return *ring_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  TrigValue operator-() const;
  friend TrigValue operator+(const TrigValue& a, const TrigValue& b);
  friend TrigValue operator-(const TrigValue& a, const TrigValue& b);
  friend TrigValue operator*(const TrigValue& a, const TrigValue& b);
  TrigValue operator*(const Rational& q) const;
  friend bool operator==(const TrigValue& a, const TrigValue& b);
  friend bool operator!=(const TrigValue& a, const TrigValue& b) { return !(a == b); }

  // Enclosure of the element under zeta -> exp(i*pi/(2m)), real part.
  // Meaningful for real elements (all values this toolkit constructs).
  Interval to_interval() const;

  // Exact Zero via the canonical representation; otherwise interval sign with
  // ladder escalation. Undecided only if the cap is insufficient, which
  // callers treat as a hard failure rather than a silent pass.
  Sign sign() const;

 private:
  friend class TrigRing;
  TrigValue(const TrigRing* ring, std::vector<Rational> c) : ring_(ring), c_(std::move(c)) {}

  const TrigRing* ring_ = nullptr;
  std::vector<Rational> c_;
};

inline Sign sign_of(const TrigValue& v) { return v.sign(); }

// Homogeneous triple over the ring (points and line coefficient vectors).
struct TrigVec3 {
  TrigValue x, y, z;
};

TrigValue dot(const TrigVec3& a, const TrigVec3& b);
TrigVec3 cross(const TrigVec3& a, const TrigVec3& b);
TrigValue det3(const TrigVec3& a, const TrigVec3& b, const TrigVec3& c);

}  // namespace simparr
