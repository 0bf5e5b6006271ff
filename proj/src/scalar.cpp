#include "simparr/scalar.hpp"

#include <cctype>

namespace simparr {

const char* to_string(Sign s) {
  switch (s) {
    case Sign::Negative: return "Negative";
    case Sign::Zero: return "Zero";
    case Sign::Positive: return "Positive";
    default: return "Undecided";
  }
}

Rational::Rational(long num, long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("rational division by zero");
  v_ /= o.v_;
  return *this;
}

namespace {

// Strips an optional sign, accepting ASCII '-', '+' and U+2212.
bool strip_sign(std::string_view& s) {
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    bool neg = s[0] == '-';
    s.remove_prefix(1);
    return neg;
  }
  if (s.size() >= 3 && static_cast<unsigned char>(s[0]) == 0xE2 &&
      static_cast<unsigned char>(s[1]) == 0x88 && static_cast<unsigned char>(s[2]) == 0x92) {
    s.remove_prefix(3);
    return true;
  }
  return false;
}

mpz_class parse_digits(std::string_view s) {
  if (s.empty()) throw ParseError("empty integer");
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("bad digit in number");
  return mpz_class(std::string(s), 10);
}

mpz_class pow10(unsigned long k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
  return r;
}

}  // namespace

Rational Rational::parse(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw ParseError("empty rational");
  bool neg = strip_sign(s);

  auto slash = s.find('/');
  mpq_class v;
  if (slash != std::string_view::npos) {
    mpz_class num = parse_digits(s.substr(0, slash));
    mpz_class den = parse_digits(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator");
    v = mpq_class(num) / mpq_class(den);
  } else {
    // decimal form: digits[.digits][e[+-]digits]
    std::string_view mant = s;
    long exp10 = 0;
    auto e = s.find_first_of("eE");
    if (e != std::string_view::npos) {
      mant = s.substr(0, e);
      std::string_view es = s.substr(e + 1);
      bool eneg = strip_sign(es);
      mpz_class ev = parse_digits(es);
      if (!ev.fits_slong_p()) throw ParseError("exponent out of range");
      exp10 = eneg ? -ev.get_si() : ev.get_si();
    }
    auto dot = mant.find('.');
    mpz_class digits;
    long frac = 0;
    if (dot != std::string_view::npos) {
      std::string joined = std::string(mant.substr(0, dot)) + std::string(mant.substr(dot + 1));
      if (joined.empty()) throw ParseError("empty decimal");
      digits = parse_digits(joined);
      frac = static_cast<long>(mant.size() - dot - 1);
    } else {
      digits = parse_digits(mant);
    }
    long net = exp10 - frac;
    v = mpq_class(digits);
    if (net > 0)
      v *= mpq_class(pow10(static_cast<unsigned long>(net)));
    else if (net < 0)
      v /= mpq_class(pow10(static_cast<unsigned long>(-net)));
  }
  v.canonicalize();
  if (neg) v = -v;
  return Rational(std::move(v));
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

namespace {
PrecisionPolicy g_policy{};
}

PrecisionPolicy& precision_policy() { return g_policy; }

ScopedPrecisionPolicy::ScopedPrecisionPolicy(PrecisionPolicy p) : saved_(g_policy) {
  g_policy = std::move(p);
}
ScopedPrecisionPolicy::~ScopedPrecisionPolicy() { g_policy = saved_; }

}  // namespace simparr
