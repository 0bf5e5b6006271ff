#include "simparr/interval.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>
#include <utility>

namespace simparr {

struct Expr {
  enum class Kind : std::uint8_t {
    rat, pi, add, sub, mul, div, neg, cos, sin, sqrt_, cubic_root_max
  };
  Kind kind;
  Rational q;   // rat payload; cubic: coefficient a
  Rational q2;  // cubic: coefficient b
  ExprPtr a, b;
};

namespace {

ExprPtr mk(Expr::Kind k, ExprPtr a = nullptr, ExprPtr b = nullptr) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr mk_rat(const Rational& q) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::rat;
  e->q = q;
  return e;
}

struct Box {
  MpfrFloat lo, hi;
  explicit Box(unsigned prec) : lo(prec), hi(prec) {}
};

void box_set_q(Box& r, const mpq_class& q) {
  mpfr_set_q(r.lo.get(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi.get(), q.get_mpq_t(), MPFR_RNDU);
}

Box box_rat(const Rational& q, unsigned p) {
  Box r(p);
  box_set_q(r, q.raw());
  return r;
}

Box box_pi(unsigned p) {
  Box r(p);
  mpfr_const_pi(r.lo.get(), MPFR_RNDD);
  mpfr_const_pi(r.hi.get(), MPFR_RNDU);
  return r;
}

Box box_add(const Box& a, const Box& b, unsigned p) {
  Box r(p);
  mpfr_add(r.lo.get(), a.lo.get(), b.lo.get(), MPFR_RNDD);
  mpfr_add(r.hi.get(), a.hi.get(), b.hi.get(), MPFR_RNDU);
  return r;
}

Box box_sub(const Box& a, const Box& b, unsigned p) {
  Box r(p);
  mpfr_sub(r.lo.get(), a.lo.get(), b.hi.get(), MPFR_RNDD);
  mpfr_sub(r.hi.get(), a.hi.get(), b.lo.get(), MPFR_RNDU);
  return r;
}

Box box_neg(const Box& a, unsigned p) {
  Box r(p);
  mpfr_neg(r.lo.get(), a.hi.get(), MPFR_RNDD);
  mpfr_neg(r.hi.get(), a.lo.get(), MPFR_RNDU);
  return r;
}

Box box_mul(const Box& a, const Box& b, unsigned p) {
  Box r(p);
  MpfrFloat t(p);
  mpfr_srcptr as[2] = {a.lo.get(), a.hi.get()};
  mpfr_srcptr bs[2] = {b.lo.get(), b.hi.get()};
  bool first = true;
  for (auto x : as)
    for (auto y : bs) {
      mpfr_mul(t.get(), x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t.get(), r.lo.get()) < 0) mpfr_set(r.lo.get(), t.get(), MPFR_RNDD);
      mpfr_mul(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t.get(), r.hi.get()) > 0) mpfr_set(r.hi.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  return r;
}

Box box_div(const Box& a, const Box& b, unsigned p) {
  if (mpfr_sgn(b.lo.get()) <= 0 && mpfr_sgn(b.hi.get()) >= 0)
    throw ZeroDivisor("interval division by enclosure containing zero");
  Box r(p);
  MpfrFloat t(p);
  mpfr_srcptr as[2] = {a.lo.get(), a.hi.get()};
  mpfr_srcptr bs[2] = {b.lo.get(), b.hi.get()};
  bool first = true;
  for (auto x : as)
    for (auto y : bs) {
      mpfr_div(t.get(), x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t.get(), r.lo.get()) < 0) mpfr_set(r.lo.get(), t.get(), MPFR_RNDD);
      mpfr_div(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t.get(), r.hi.get()) > 0) mpfr_set(r.hi.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  return r;
}

Box box_sqrt(const Box& a, unsigned p) {
  if (mpfr_sgn(a.hi.get()) < 0) throw DomainError("sqrt of surely negative interval");
  Box r(p);
  if (mpfr_sgn(a.lo.get()) <= 0)
    mpfr_set_zero(r.lo.get(), 1);
  else
    mpfr_sqrt(r.lo.get(), a.lo.get(), MPFR_RNDD);
  mpfr_sqrt(r.hi.get(), a.hi.get(), MPFR_RNDU);
  return r;
}

void box_whole_cos(Box& r) {
  mpfr_set_si(r.lo.get(), -1, MPFR_RNDD);
  mpfr_set_si(r.hi.get(), 1, MPFR_RNDU);
}

// Enclosure of cos over [a.lo, a.hi]: locate the integer window of x/pi to
// decide monotonicity; conservative fallback is [-1,1].
Box box_cos(const Box& a, unsigned p) {
  Box r(p);
  MpfrFloat w(p);
  mpfr_sub(w.get(), a.hi.get(), a.lo.get(), MPFR_RNDU);
  if (mpfr_cmp_ui(w.get(), 7) >= 0) {
    box_whole_cos(r);
    return r;
  }
  Box pi = box_pi(p + 16);
  Box t = box_div(a, pi, p + 16);
  MpfrFloat fl(p + 16), fh(p + 16);
  mpfr_floor(fl.get(), t.lo.get());
  mpfr_floor(fh.get(), t.hi.get());
  mpz_class kl, kh;
  if (!mpfr_fits_slong_p(fl.get(), MPFR_RNDD) || !mpfr_fits_slong_p(fh.get(), MPFR_RNDU)) {
    box_whole_cos(r);
    return r;
  }
  mpfr_get_z(kl.get_mpz_t(), fl.get(), MPFR_RNDN);
  mpfr_get_z(kh.get_mpz_t(), fh.get(), MPFR_RNDN);
  mpz_class span = kh - kl;
  MpfrFloat c1d(p), c1u(p), c2d(p), c2u(p);
  mpfr_cos(c1d.get(), a.lo.get(), MPFR_RNDD);
  mpfr_cos(c1u.get(), a.lo.get(), MPFR_RNDU);
  mpfr_cos(c2d.get(), a.hi.get(), MPFR_RNDD);
  mpfr_cos(c2u.get(), a.hi.get(), MPFR_RNDU);
  if (span == 0) {
    // monotone segment: endpoint values bound the range
    mpfr_min(r.lo.get(), c1d.get(), c2d.get(), MPFR_RNDD);
    mpfr_max(r.hi.get(), c1u.get(), c2u.get(), MPFR_RNDU);
  } else if (span == 1) {
    // exactly one extremum (at kh*pi) may lie inside
    if (mpz_even_p(kh.get_mpz_t())) {
      mpfr_set_si(r.hi.get(), 1, MPFR_RNDU);
      mpfr_min(r.lo.get(), c1d.get(), c2d.get(), MPFR_RNDD);
    } else {
      mpfr_set_si(r.lo.get(), -1, MPFR_RNDD);
      mpfr_max(r.hi.get(), c1u.get(), c2u.get(), MPFR_RNDU);
    }
  } else {
    box_whole_cos(r);
  }
  return r;
}

Box box_sin(const Box& a, unsigned p) {
  // sin(x) = cos(x - pi/2)
  Box pi = box_pi(p + 16);
  Box half(p + 16);
  mpfr_div_ui(half.lo.get(), pi.lo.get(), 2, MPFR_RNDD);
  mpfr_div_ui(half.hi.get(), pi.hi.get(), 2, MPFR_RNDU);
  Box shifted = box_sub(a, half, p + 16);
  return box_cos(shifted, p);
}

Rational cubic_eval(const Rational& a, const Rational& b, const Rational& x) {
  return ((x * x) * x) + a * x + b;
}

Rational pow2_neg(unsigned bits) {
  mpz_class d;
  mpz_ui_pow_ui(d.get_mpz_t(), 2, bits);
  return Rational(mpq_class(1) / mpq_class(d));
}

// Largest real root of x^3 + a x + b by exact rational bisection; the
// bracket choice distinguishes the 1-root and 3-root cases via the
// discriminant so bisection cannot converge to a smaller root.
Box box_cubic_root_max(const Rational& a, const Rational& b, unsigned p) {
  Box r(p);
  auto exact = [&](const Rational& v) {
    box_set_q(r, v.raw());
    return r;
  };
  if (a.is_zero() && b.is_zero()) return exact(Rational(0));
  Rational disc = Rational(-4) * a * a * a - Rational(27) * b * b;
  if (disc.is_zero()) {
    Rational x0 = Rational(-3) * b / (Rational(2) * a);
    Rational x1 = Rational(-2) * x0;
    return exact(std::max(x0, x1));
  }
  Rational M = Rational(2) + std::max(a.abs(), b.abs());
  Rational lo, hi = M;
  if (disc.sign() == Sign::Negative) {
    lo = -M;  // single real root
  } else {
    // three distinct roots; start just above the positive critical point
    Rational rad = -a / Rational(3);  // a < 0 here
    Rational l(0), u = Rational(1) + rad;
    while (cubic_eval(a, b, u).sign() != Sign::Negative) {
      Rational mid = (l + u) / Rational(2);
      if (mid * mid >= rad)
        u = mid;
      else
        l = mid;
    }
    lo = u;
  }
  assert(cubic_eval(a, b, lo).sign() == Sign::Negative);
  assert(cubic_eval(a, b, hi).sign() == Sign::Positive);
  Rational eps = pow2_neg(p + 2);
  while (hi - lo > eps) {
    Rational mid = (lo + hi) / Rational(2);
    Sign s = cubic_eval(a, b, mid).sign();
    if (s == Sign::Zero) return exact(mid);
    if (s == Sign::Negative)
      lo = mid;
    else
      hi = mid;
  }
  mpfr_set_q(r.lo.get(), lo.raw().get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi.get(), hi.raw().get_mpq_t(), MPFR_RNDU);
  return r;
}

using Memo = std::unordered_map<const Expr*, Box>;

const Box& eval_expr(const Expr* e, unsigned p, Memo& memo) {
  auto it = memo.find(e);
  if (it != memo.end()) return it->second;
  Box r(p);
  switch (e->kind) {
    case Expr::Kind::rat: r = box_rat(e->q, p); break;
    case Expr::Kind::pi: r = box_pi(p); break;
    case Expr::Kind::add: r = box_add(eval_expr(e->a.get(), p, memo), eval_expr(e->b.get(), p, memo), p); break;
    case Expr::Kind::sub: r = box_sub(eval_expr(e->a.get(), p, memo), eval_expr(e->b.get(), p, memo), p); break;
    case Expr::Kind::mul: r = box_mul(eval_expr(e->a.get(), p, memo), eval_expr(e->b.get(), p, memo), p); break;
    case Expr::Kind::div: r = box_div(eval_expr(e->a.get(), p, memo), eval_expr(e->b.get(), p, memo), p); break;
    case Expr::Kind::neg: r = box_neg(eval_expr(e->a.get(), p, memo), p); break;
    case Expr::Kind::cos: r = box_cos(eval_expr(e->a.get(), p, memo), p); break;
    case Expr::Kind::sin: r = box_sin(eval_expr(e->a.get(), p, memo), p); break;
    case Expr::Kind::sqrt_: r = box_sqrt(eval_expr(e->a.get(), p, memo), p); break;
    case Expr::Kind::cubic_root_max: r = box_cubic_root_max(e->q, e->q2, p); break;
  }
  return memo.emplace(e, std::move(r)).first->second;
}

Box eval_root(const Expr* e, unsigned p) {
  Memo memo;
  return eval_expr(e, p, memo);
}

unsigned base_prec() { return precision_policy().ladder.empty() ? 53u : precision_policy().ladder.front(); }

}  // namespace

Interval::Interval(ExprPtr e, MpfrFloat lo, MpfrFloat hi, unsigned prec)
    : expr_(std::move(e)), lo_(std::move(lo)), hi_(std::move(hi)), prec_(prec) {}

Interval::Interval() : Interval(from_rational(Rational(0))) {}

Interval Interval::from_rational(const Rational& q, unsigned prec) {
  if (prec == 0) prec = base_prec();
  Box b = box_rat(q, prec);
  return Interval(mk_rat(q), std::move(b.lo), std::move(b.hi), prec);
}

Interval Interval::pi(unsigned prec) {
  if (prec == 0) prec = base_prec();
  Box b = box_pi(prec);
  return Interval(mk(Expr::Kind::pi), std::move(b.lo), std::move(b.hi), prec);
}

Interval Interval::cos_pi(const Rational& q, unsigned prec) {
  auto angle = mk(Expr::Kind::mul, mk_rat(q), mk(Expr::Kind::pi));
  auto e = mk(Expr::Kind::cos, std::move(angle));
  if (prec == 0) prec = base_prec();
  Box b = eval_root(e.get(), prec);
  return Interval(std::move(e), std::move(b.lo), std::move(b.hi), prec);
}

Interval Interval::sin_pi(const Rational& q, unsigned prec) {
  auto angle = mk(Expr::Kind::mul, mk_rat(q), mk(Expr::Kind::pi));
  auto e = mk(Expr::Kind::sin, std::move(angle));
  if (prec == 0) prec = base_prec();
  Box b = eval_root(e.get(), prec);
  return Interval(std::move(e), std::move(b.lo), std::move(b.hi), prec);
}

Interval Interval::cubic_root_max(const Rational& a, const Rational& b, unsigned prec) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::cubic_root_max;
  e->q = a;
  e->q2 = b;
  if (prec == 0) prec = base_prec();
  Box bx = eval_root(e.get(), prec);
  return Interval(ExprPtr(e), std::move(bx.lo), std::move(bx.hi), prec);
}

#define SIMPARR_BINOP(OP, KIND, BOXFN)                                              \
  Interval operator OP(const Interval& a, const Interval& b) {                      \
    unsigned p = std::min(a.prec_, b.prec_);                                        \
    Box ab(a.prec_), bb(b.prec_);                                                   \
    mpfr_set(ab.lo.get(), a.lo_.get(), MPFR_RNDD);                                  \
    mpfr_set(ab.hi.get(), a.hi_.get(), MPFR_RNDU);                                  \
    mpfr_set(bb.lo.get(), b.lo_.get(), MPFR_RNDD);                                  \
    mpfr_set(bb.hi.get(), b.hi_.get(), MPFR_RNDU);                                  \
    Box r = BOXFN(ab, bb, p);                                                       \
    return Interval(mk(Expr::Kind::KIND, a.expr_, b.expr_), std::move(r.lo),        \
                    std::move(r.hi), p);                                            \
  }

SIMPARR_BINOP(+, add, box_add)
SIMPARR_BINOP(-, sub, box_sub)
SIMPARR_BINOP(*, mul, box_mul)
SIMPARR_BINOP(/, div, box_div)
#undef SIMPARR_BINOP

Interval Interval::operator-() const {
  Box ab(prec_);
  mpfr_set(ab.lo.get(), lo_.get(), MPFR_RNDD);
  mpfr_set(ab.hi.get(), hi_.get(), MPFR_RNDU);
  Box r = box_neg(ab, prec_);
  return Interval(mk(Expr::Kind::neg, expr_), std::move(r.lo), std::move(r.hi), prec_);
}

Interval sqrt(const Interval& a) {
  Box ab(a.prec_);
  mpfr_set(ab.lo.get(), a.lo_.get(), MPFR_RNDD);
  mpfr_set(ab.hi.get(), a.hi_.get(), MPFR_RNDU);
  Box r = box_sqrt(ab, a.prec_);
  return Interval(mk(Expr::Kind::sqrt_, a.expr_), std::move(r.lo), std::move(r.hi), a.prec_);
}

Sign Interval::raw_sign() const {
  if (mpfr_sgn(lo_.get()) > 0) return Sign::Positive;
  if (mpfr_sgn(hi_.get()) < 0) return Sign::Negative;
  return Sign::Undecided;
}

bool Interval::contains_zero() const {
  return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0;
}

double Interval::mid_double() const {
  return (lo_double() + hi_double()) / 2.0;
}

std::string Interval::decimal(unsigned digits) const {
  MpfrFloat mid(prec_ + 8);
  mpfr_add(mid.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_ui(mid.get(), mid.get(), 2, MPFR_RNDN);
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Re", static_cast<int>(digits) - 1, mid.get());
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

bool Interval::width_within(unsigned bits) const {
  MpfrFloat w(prec_ + 8);
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return mpfr_cmp_ui_2exp(w.get(), 1, -static_cast<mpfr_exp_t>(bits)) <= 0;
}

bool Interval::magnitude_within(unsigned bits) const {
  MpfrFloat m(prec_ + 8), m2(prec_ + 8);
  mpfr_abs(m.get(), lo_.get(), MPFR_RNDU);
  mpfr_abs(m2.get(), hi_.get(), MPFR_RNDU);
  mpfr_max(m.get(), m.get(), m2.get(), MPFR_RNDU);
  return mpfr_cmp_ui_2exp(m.get(), 1, -static_cast<mpfr_exp_t>(bits)) <= 0;
}

Interval Interval::refined(unsigned target_bits) const {
  if (target_bits > precision_policy().cap)
    throw MaxPrecisionExceeded("refinement beyond precision cap");
  if (target_bits <= prec_) return *this;
  try {
    Box b = eval_root(expr_.get(), target_bits);
    // intersect with the current enclosure: width never grows
    if (mpfr_cmp(lo_.get(), b.lo.get()) > 0) mpfr_set(b.lo.get(), lo_.get(), MPFR_RNDD);
    if (mpfr_cmp(hi_.get(), b.hi.get()) < 0) mpfr_set(b.hi.get(), hi_.get(), MPFR_RNDU);
    assert(mpfr_cmp(b.lo.get(), b.hi.get()) <= 0);
    return Interval(expr_, std::move(b.lo), std::move(b.hi), target_bits);
  } catch (const ZeroDivisor&) {
    // A division node can straddle zero when the whole tree is re-evaluated
    // at a precision that leaves wide intermediate boxes, even though the
    // denominator was certified nonzero when the division was built. The
    // current enclosure stays sound; keep it, labeled with the target, so a
    // sign ladder can escalate to the next rung instead of aborting.
    Box keep(target_bits);
    mpfr_set(keep.lo.get(), lo_.get(), MPFR_RNDD);
    mpfr_set(keep.hi.get(), hi_.get(), MPFR_RNDU);
    return Interval(expr_, std::move(keep.lo), std::move(keep.hi), target_bits);
  }
}

Interval escalate_precision(const Interval& x, unsigned target_bits) {
  if (target_bits > precision_policy().cap)
    throw MaxPrecisionExceeded("escalate_precision beyond cap");
  return x.refined(target_bits);
}

Sign sign_of(const Interval& x) {
  Sign s = x.raw_sign();
  if (s != Sign::Undecided) return s;
  const PrecisionPolicy& pol = precision_policy();
  Interval cur = x;
  for (unsigned p : pol.ladder) {
    if (p <= cur.precision()) continue;
    if (p > pol.cap) break;
    cur = cur.refined(p);
    s = cur.raw_sign();
    if (s != Sign::Undecided) return s;
  }
  if (pol.snap_bits) {
    // snapped Zero: enclosure straddles zero and both endpoints are within
    // the configured tolerance 2^-snap_bits
    Interval fine = cur.precision() >= pol.cap ? cur : cur.refined(pol.cap);
    if (fine.contains_zero() && fine.magnitude_within(*pol.snap_bits)) return Sign::Zero;
  }
  return Sign::Undecided;
}

}  // namespace simparr
