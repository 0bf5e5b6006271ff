#include "simparr/render.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

namespace simparr {

namespace {

constexpr double kBox = 4.0;          // view box is [-kBox, kBox]^2
constexpr double kDotMargin = 4.2;    // dots drawn when the center is this close
constexpr double kStrokeWidth = 0.04;

double to_double(const Rational& x) { return x.to_double(); }
double to_double(const Interval& x) {
  return std::strtod(x.refined(192).decimal(20).c_str(), nullptr);
}

template <class S>
S make_one();
template <>
Rational make_one<Rational>() { return Rational(1); }
template <>
Interval make_one<Interval>() { return Interval::from_rational(Rational(1)); }

// Fixed four-decimal formatting; "-0.0000" normalizes to "0.0000".
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

template <class S>
ProjPoint<S> cross_lines(const ProjLine<S>& p, const ProjLine<S>& q) {
  return {p.b * q.c - p.c * q.b, p.c * q.a - p.a * q.c, p.a * q.b - p.b * q.a};
}

// Change of coordinates sending `l` to the line at infinity: a matrix M with
// third row l and two standard basis rows chosen so det(M) != 0; lines map by
// l' = l * adj(M) (projectively equal to l * M^-1).
template <class S>
std::array<std::array<S, 3>, 3> chart_matrix(const ProjLine<S>& l) {
  std::array<S, 3> row{l.a, l.b, l.c};
  // Candidate basis-row pairs and the resulting determinant component.
  const std::array<std::array<int, 2>, 3> picks{{{0, 1}, {0, 2}, {1, 2}}};
  for (const auto& pick : picks) {
    const S& det = row[3 - pick[0] - pick[1]];
    Sign s = sign_of(det);
    if (s == Sign::Positive || s == Sign::Negative) {
      std::array<std::array<S, 3>, 3> m{};
      m[0][pick[0]] = make_one<S>();
      m[1][pick[1]] = make_one<S>();
      m[2] = {row[0], row[1], row[2]};
      return m;
    }
  }
  throw UndecidedCoincidence("chart line has no certified nonzero coordinate");
}

template <class S>
std::array<std::array<S, 3>, 3> adjugate(const std::array<std::array<S, 3>, 3>& m) {
  std::array<std::array<S, 3>, 3> adj{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
      int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
      adj[j][i] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    }
  return adj;
}

template <class S>
ProjLine<S> apply_chart(const ProjLine<S>& l, const std::array<std::array<S, 3>, 3>& adj) {
  return {l.a * adj[0][0] + l.b * adj[1][0] + l.c * adj[2][0],
          l.a * adj[0][1] + l.b * adj[1][1] + l.c * adj[2][1],
          l.a * adj[0][2] + l.b * adj[1][2] + l.c * adj[2][2]};
}

// Clips a x + b y + c = 0 to the view box; false when no finite segment.
bool clip_line(double a, double b, double c, std::array<double, 4>& seg) {
  double n2 = a * a + b * b;
  if (!(n2 > 1e-24)) return false;  // the line at infinity (or numerically so)
  double px = -a * c / n2, py = -b * c / n2;
  double len = std::sqrt(n2);
  double dx = b / len, dy = -a / len;
  double t0 = -1e9, t1 = 1e9;
  auto restrict_to = [&](double p, double d) {
    // p + t d in [-kBox, kBox]
    if (std::fabs(d) < 1e-15) return p >= -kBox - 1e-12 && p <= kBox + 1e-12;
    double lo = (-kBox - p) / d, hi = (kBox - p) / d;
    if (lo > hi) std::swap(lo, hi);
    if (lo > t0) t0 = lo;
    if (hi < t1) t1 = hi;
    return true;
  };
  if (!restrict_to(px, dx) || !restrict_to(py, dy)) return false;
  if (!(t0 < t1)) return false;
  seg = {px + t0 * dx, py + t0 * dy, px + t1 * dx, py + t1 * dy};
  return true;
}

double dot_radius(unsigned order) {
  double r = 0.05 + 0.03 * (order - 2);
  return r > 0.22 ? 0.22 : r;
}

template <class S>
std::string render_impl(const Arrangement<S>& arr, const MeetOracle& oracle,
                        const RenderOptions& opt) {
  IncidenceStructure inc = build_incidence(arr, oracle);

  std::vector<ProjLine<S>> lines = arr.lines;
  if (opt.chart_line) {
    if (*opt.chart_line >= lines.size())
      throw DomainError("chart line index " + std::to_string(*opt.chart_line) +
                        " out of range for " + std::to_string(lines.size()) + " lines");
    auto adj = adjugate(chart_matrix(lines[*opt.chart_line]));
    for (ProjLine<S>& l : lines) l = apply_chart(l, adj);
  }

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"-4 -4 8 8\">\n";
  svg += "<g transform=\"scale(1,-1)\" stroke-linecap=\"round\">\n";

  for (const ProjLine<S>& l : lines) {
    std::array<double, 4> seg;
    if (!clip_line(to_double(l.a), to_double(l.b), to_double(l.c), seg)) continue;
    svg += "<line x1=\"" + fmt(seg[0]) + "\" y1=\"" + fmt(seg[1]) + "\" x2=\"" + fmt(seg[2]) +
           "\" y2=\"" + fmt(seg[3]) + "\" stroke=\"#2b4a6f\" stroke-width=\"" +
           fmt(kStrokeWidth) + "\"/>\n";
  }

  for (const IncidenceStructure::Vertex& v : inc.vertices) {
    ProjPoint<S> p = cross_lines(lines[v.lines[0]], lines[v.lines[1]]);
    Sign sz = sign_of(p.z);
    if (sz != Sign::Positive && sz != Sign::Negative) continue;  // at infinity
    double z = to_double(p.z);
    if (std::fabs(z) < 1e-12) continue;
    double cx = to_double(p.x) / z, cy = to_double(p.y) / z;
    if (std::fabs(cx) > kDotMargin || std::fabs(cy) > kDotMargin) continue;
    svg += "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" +
           fmt(dot_radius(v.order())) + "\" fill=\"#c0432e\"/>\n";
  }

  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace

std::string render_svg(const LoadedArrangement& la, const RenderOptions& opt) {
  return la.interval_backend ? render_impl(la.interval, la.oracle, opt)
                             : render_impl(la.rational, MeetOracle{}, opt);
}

void save_svg(const std::string& path, const LoadedArrangement& la, const RenderOptions& opt) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open '" + path + "' for writing");
  os << render_svg(la, opt);
  if (!os.good()) throw ParseError("write to '" + path + "' failed");
}

}  // namespace simparr
