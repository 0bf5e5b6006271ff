#include "simparr/trigring.hpp"

#include <cassert>
#include <map>
#include <mutex>
#include <stdexcept>

namespace simparr {

namespace {

using Poly = std::vector<Rational>;  // ascending coefficients

void trim(Poly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

// Exact division (remainder must vanish; divisor monic up to sign).
Poly divide_exact(Poly num, const Poly& den) {
  assert(!den.empty());
  Poly q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, Rational(0));
  while (num.size() >= den.size()) {
    Rational f = num.back() / den.back();
    std::size_t shift = num.size() - den.size();
    q[shift] = f;
    for (std::size_t i = 0; i < den.size(); ++i) num[shift + i] -= f * den[i];
    trim(num);
    if (num.empty()) break;
    if (num.size() < den.size()) throw std::logic_error("non-exact polynomial division");
  }
  return q;
}

}  // namespace

std::vector<Rational> TrigRing::cyclotomic(unsigned n) {
  static std::map<unsigned, Poly> memo;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);

  // iterative worklist over divisors so the recursion shares the memo
  std::vector<unsigned> todo{n};
  while (!todo.empty()) {
    unsigned k = todo.back();
    if (memo.count(k)) {
      todo.pop_back();
      continue;
    }
    bool ready = true;
    for (unsigned d = 1; d < k; ++d)
      if (k % d == 0 && !memo.count(d)) {
        todo.push_back(d);
        ready = false;
      }
    if (!ready) continue;
    todo.pop_back();
    Poly p(k + 1, Rational(0));  // X^k - 1
    p[0] = Rational(-1);
    p[k] = Rational(1);
    for (unsigned d = 1; d < k; ++d)
      if (k % d == 0) p = divide_exact(std::move(p), memo.at(d));
    memo.emplace(k, std::move(p));
  }
  return memo.at(n);
}

TrigRing::TrigRing(unsigned m) : m_(m), n_(4 * m) {
  if (m == 0) throw DomainError("TrigRing parameter must be positive");
  phi_ = cyclotomic(n_);
  cos_vals_.reserve(n_);
  for (unsigned k = 0; k < n_; ++k)
    cos_vals_.push_back(Interval::cos_pi(Rational(long(k), long(2 * m))));
}

TrigValue TrigRing::zero() const { return TrigValue(this, {}); }

TrigValue TrigRing::one() const { return from_rational(Rational(1)); }

TrigValue TrigRing::from_rational(const Rational& q) const {
  if (q.is_zero()) return zero();
  return TrigValue(this, {q});
}

namespace {
// Reduce mod the monic modulus phi in place, then drop trailing zeros.
void reduce_mod(std::vector<Rational>& c, const std::vector<Rational>& phi) {
  const std::size_t deg = phi.size() - 1;
  while (c.size() > deg) {
    Rational f = c.back();
    std::size_t shift = c.size() - phi.size();
    if (!f.is_zero())
      for (std::size_t i = 0; i + 1 < phi.size(); ++i) c[shift + i] -= f * phi[i];
    c.pop_back();
  }
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}
}  // namespace

TrigValue TrigRing::zeta_pow(long k) const {
  long r = k % long(n_);
  if (r < 0) r += n_;
  std::vector<Rational> c(std::size_t(r) + 1, Rational(0));
  c[std::size_t(r)] = Rational(1);
  reduce_mod(c, phi_);
  return TrigValue(this, std::move(c));
}

TrigValue TrigRing::cos_u(long k) const {
  // cos(k*pi/(2m)) = (zeta^k + zeta^-k) / 2
  return (zeta_pow(k) + zeta_pow(-k)) * Rational(1, 2);
}

TrigValue TrigRing::sin_u(long k) const {
  // sin(t) = cos(pi/2 - t); pi/2 is m units
  return cos_u(long(m_) - k);
}

bool TrigValue::is_zero() const {
  for (const Rational& q : c_)
    if (!q.is_zero()) return false;
  return true;
}

TrigValue TrigValue::operator-() const {
  std::vector<Rational> c(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] = -c_[i];
  return TrigValue(ring_, std::move(c));
}

TrigValue operator+(const TrigValue& a, const TrigValue& b) {
  const TrigRing* ring = a.ring_ ? a.ring_ : b.ring_;
  assert(!a.ring_ || !b.ring_ || a.ring_ == b.ring_);
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  while (!c.empty() && c.back().is_zero()) c.pop_back();
  return TrigValue(ring, std::move(c));
}

TrigValue operator-(const TrigValue& a, const TrigValue& b) { return a + (-b); }

TrigValue operator*(const TrigValue& a, const TrigValue& b) {
  const TrigRing* ring = a.ring_ ? a.ring_ : b.ring_;
  assert(!a.ring_ || !b.ring_ || a.ring_ == b.ring_);
  if (a.is_zero() || b.is_zero()) return TrigValue(ring, {});
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  reduce_mod(c, ring->modulus());
  return TrigValue(ring, std::move(c));
}

TrigValue TrigValue::operator*(const Rational& q) const {
  if (q.is_zero() || is_zero()) return TrigValue(ring_, {});
  std::vector<Rational> c(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] = c_[i] * q;
  return TrigValue(ring_, std::move(c));
}

bool operator==(const TrigValue& a, const TrigValue& b) { return (a - b).is_zero(); }

Interval TrigValue::to_interval() const {
  Interval sum = Interval::from_rational(Rational(0));
  bool first = true;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k].is_zero()) continue;
    Interval term = k == 0 ? Interval::from_rational(c_[0])
                           : Interval::from_rational(c_[k]) * ring().cos_enclosure(unsigned(k));
    sum = first ? term : sum + term;
    first = false;
  }
  return sum;
}

Sign TrigValue::sign() const {
  if (is_zero()) return Sign::Zero;
  return sign_of(to_interval());  // nonzero: ladder escalation decides
}

TrigValue dot(const TrigVec3& a, const TrigVec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

TrigVec3 cross(const TrigVec3& a, const TrigVec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

TrigValue det3(const TrigVec3& a, const TrigVec3& b, const TrigVec3& c) {
  return dot(a, cross(b, c));
}

}  // namespace simparr
