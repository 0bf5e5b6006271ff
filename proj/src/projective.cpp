#include "simparr/projective.hpp"

#include "simparr/rng.hpp"

namespace simparr {

std::string str(const ProjPoint<Rational>& p) {
  return "[" + p.x.str() + ":" + p.y.str() + ":" + p.z.str() + "]";
}

std::string str(const ProjLine<Rational>& l) {
  return "(" + l.a.str() + " " + l.b.str() + " " + l.c.str() + ")";
}

ProjTransform<Rational> random_invertible_transform(SplitMix64& rng) {
  for (;;) {
    std::array<std::array<Rational, 3>, 3> m;
    for (auto& row : m)
      for (auto& e : row) e = Rational(rng.range(-9, 9));
    ProjTransform<Rational> t{m};
    if (!t.det().is_zero()) return ProjTransform<Rational>::from_matrix(m);
  }
}

}  // namespace simparr
