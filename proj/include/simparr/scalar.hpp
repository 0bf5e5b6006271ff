#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace simparr {

// Certified sign of a quantity. The interval backend reports Undecided when the
// enclosure still straddles zero at the precision cap; it never reports Zero
// unless a snap tolerance has been configured explicitly (even for the point
// interval [0,0] -- callers that need exact zeros use the rational backend or
// the cyclotomic ring).
enum class Sign : std::int8_t { Negative = -1, Zero = 0, Positive = 1, Undecided = 2 };

const char* to_string(Sign s);

inline Sign flip(Sign s) {
  switch (s) {
    case Sign::Negative: return Sign::Positive;
    case Sign::Positive: return Sign::Negative;
    default: return s;
  }
}

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Requested precision exceeds the configured cap.
struct MaxPrecisionExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Division by an interval whose enclosure contains zero.
struct ZeroDivisor : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IdenticalPoints : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DuplicateLine : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularTransform : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// A coincidence/separation decision could not be certified at the cap.
struct UndecidedCoincidence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Distinctness of two projective objects could not be certified.
struct UndecidedEquality : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Group-law input was the singular point of a non-smooth cubic.
struct SingularPointUsed : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConvergenceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotSimplicial : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IsNearPencil : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RankDeficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact rational scalar. Invariants (maintained by mpq canonicalization):
// lowest terms, denominator > 0.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design
  Rational(long num, long den);
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  // Accepts "p", "p/q", decimal ("-0.25", "1.5e-3"). U+2212 minus tolerated.
  static Rational parse(std::string_view s);

  std::string str() const;       // "p" or "p/q"
  double to_double() const { return v_.get_d(); }
  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  Sign sign() const {
    int s = sgn(v_);
    return s < 0 ? Sign::Negative : (s > 0 ? Sign::Positive : Sign::Zero);
  }
  bool is_zero() const { return sgn(v_) == 0; }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  Rational abs() const { return Rational(mpq_class(::abs(v_))); }

 private:
  mpq_class v_;
};

inline Sign sign_of(const Rational& x) { return x.sign(); }

// Precision policy for the interval backend. Mutated only at startup / in
// test scopes; worker threads treat it as read-only.
struct PrecisionPolicy {
  std::vector<unsigned> ladder{53, 128, 256, 1024};
  unsigned cap = 1024;
  // Snap tolerance 2^-snap_bits: when set, a straddling enclosure no wider
  // than the tolerance at the cap is reported as Zero.
  std::optional<unsigned> snap_bits{};
};

PrecisionPolicy& precision_policy();

// RAII scope for tests and ops that need a custom policy.
class ScopedPrecisionPolicy {
 public:
  explicit ScopedPrecisionPolicy(PrecisionPolicy p);
  ~ScopedPrecisionPolicy();
  ScopedPrecisionPolicy(const ScopedPrecisionPolicy&) = delete;

 private:
  PrecisionPolicy saved_;
};

}  // namespace simparr
