#include "simparr/io.hpp"

#include <json.hpp>

#include <array>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "simparr/cubics.hpp"
#include "simparr/families.hpp"

namespace simparr {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// "key=value" token; throws on malformed input.
std::pair<std::string, std::string> split_kv(const std::string& tok) {
  std::size_t eq = tok.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == tok.size())
    throw ParseError("malformed generator field '" + tok + "'");
  return {tok.substr(0, eq), tok.substr(eq + 1)};
}

unsigned parse_unsigned(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    unsigned long v = std::stoul(s, &used);
    if (used != s.size()) throw ParseError("");
    return static_cast<unsigned>(v);
  } catch (const std::exception&) {
    throw ParseError(std::string("invalid ") + what + " '" + s + "'");
  }
}

}  // namespace

std::size_t GeneratorSpec::expected_rows() const {
  switch (kind) {
    case Kind::NearPencil: return std::size_t(near_pencil_k) + 1;
    case Kind::Regular: return 2 * std::size_t(regular_m) + (regular_infinity ? 1 : 0);
    case Kind::CosetDual: return coset_n;
    default: return 0;
  }
}

std::string generator_header(const GeneratorSpec& gen) {
  switch (gen.kind) {
    case GeneratorSpec::Kind::NearPencil:
      return "near-pencil k=" + std::to_string(gen.near_pencil_k);
    case GeneratorSpec::Kind::Regular:
      return "regular m=" + std::to_string(gen.regular_m) +
             " infinity=" + (gen.regular_infinity ? "1" : "0");
    case GeneratorSpec::Kind::CosetDual:
      return "coset-dual a=" + gen.cubic_a.str() + " b=" + gen.cubic_b.str() +
             " n=" + std::to_string(gen.coset_n);
    default:
      throw DomainError("generator_header: no generator recorded");
  }
}

GeneratorSpec parse_generator_header(const std::string& payload) {
  std::vector<std::string> toks = split_ws(payload);
  if (toks.empty()) throw ParseError("empty generator header");
  GeneratorSpec gen;
  const std::string& name = toks[0];
  if (name == "near-pencil")
    gen.kind = GeneratorSpec::Kind::NearPencil;
  else if (name == "regular")
    gen.kind = GeneratorSpec::Kind::Regular;
  else if (name == "coset-dual")
    gen.kind = GeneratorSpec::Kind::CosetDual;
  else
    throw ParseError("unknown generator '" + name + "'");
  for (std::size_t i = 1; i < toks.size(); ++i) {
    auto [key, value] = split_kv(toks[i]);
    if (gen.kind == GeneratorSpec::Kind::NearPencil && key == "k")
      gen.near_pencil_k = parse_unsigned(value, "near-pencil k");
    else if (gen.kind == GeneratorSpec::Kind::Regular && key == "m")
      gen.regular_m = parse_unsigned(value, "regular m");
    else if (gen.kind == GeneratorSpec::Kind::Regular && key == "infinity")
      gen.regular_infinity = parse_unsigned(value, "regular infinity") != 0;
    else if (gen.kind == GeneratorSpec::Kind::CosetDual && key == "a")
      gen.cubic_a = Rational::parse(value);
    else if (gen.kind == GeneratorSpec::Kind::CosetDual && key == "b")
      gen.cubic_b = Rational::parse(value);
    else if (gen.kind == GeneratorSpec::Kind::CosetDual && key == "n")
      gen.coset_n = parse_unsigned(value, "coset n");
    else
      throw ParseError("unexpected generator field '" + key + "'");
  }
  if (gen.expected_rows() == 0) throw ParseError("generator header misses a size field");
  return gen;
}

void write_arrangement(std::ostream& os, const Arrangement<Rational>& arr,
                       const GeneratorSpec& gen) {
  os << "# simparr arrangement\n# backend rational\n";
  if (gen.kind != GeneratorSpec::Kind::None) os << "# generator " << generator_header(gen) << "\n";
  for (const ProjLine<Rational>& l : arr.lines)
    os << l.a.str() << ' ' << l.b.str() << ' ' << l.c.str() << '\n';
}

void write_arrangement(std::ostream& os, const Arrangement<Interval>& arr,
                       const GeneratorSpec& gen, unsigned digits) {
  if (gen.kind == GeneratorSpec::Kind::None || gen.kind == GeneratorSpec::Kind::NearPencil)
    throw DomainError(
        "interval coordinates need rebuildable generator provenance; "
        "cannot serialize re-certifiably without it");
  if (digits < kCoordinateDigits)
    throw DomainError("interval serialization below " + std::to_string(kCoordinateDigits) +
                      " digits cannot be re-certified");
  os << "# simparr arrangement\n# backend interval\n# precision " << digits << "\n";
  os << "# generator " << generator_header(gen) << "\n";
  // A coefficient certified below the ingestion tolerance (with margin)
  // serializes as plain 0; the stored value still re-certifies against the
  // rebuilt coordinate.
  auto token = [digits](const Interval& c) -> std::string {
    Interval r = c.refined(kRecertEvalBits);
    if (r.magnitude_within(kRecertToleranceBits + 20)) return "0";
    return r.decimal(digits);
  };
  for (const ProjLine<Interval>& l : arr.lines)
    os << token(l.a) << ' ' << token(l.b) << ' ' << token(l.c) << '\n';
}

void save_arrangement(const std::string& path, const Arrangement<Rational>& arr,
                      const GeneratorSpec& gen) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open '" + path + "' for writing");
  write_arrangement(os, arr, gen);
  if (!os.good()) throw ParseError("write to '" + path + "' failed");
}

void save_arrangement(const std::string& path, const Arrangement<Interval>& arr,
                      const GeneratorSpec& gen, unsigned digits) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open '" + path + "' for writing");
  write_arrangement(os, arr, gen, digits);
  if (!os.good()) throw ParseError("write to '" + path + "' failed");
}

namespace {

// |rebuilt - stored| must certify below the ingestion tolerance.
void certify_coordinate(const Interval& rebuilt, const Rational& stored, std::size_t row,
                        int col) {
  Interval diff = (rebuilt - Interval::from_rational(stored)).refined(kRecertEvalBits);
  if (!diff.magnitude_within(kRecertToleranceBits))
    throw ParseError("stored coordinate " + std::to_string(col) + " of row " +
                     std::to_string(row) + " disagrees with the regenerated arrangement");
}

}  // namespace

LoadedArrangement read_arrangement(std::istream& is) {
  bool interval_backend = false;
  bool backend_seen = false;
  unsigned digits = 0;
  GeneratorSpec gen;
  std::vector<std::array<Rational, 3>> rows;

  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string payload = trim(line.substr(1));
      if (payload.rfind("backend", 0) == 0) {
        std::string value = trim(payload.substr(7));
        if (value == "rational")
          interval_backend = false;
        else if (value == "interval")
          interval_backend = true;
        else
          throw ParseError("unknown backend '" + value + "'");
        backend_seen = true;
      } else if (payload.rfind("precision", 0) == 0) {
        digits = parse_unsigned(trim(payload.substr(9)), "precision");
      } else if (payload.rfind("generator", 0) == 0) {
        gen = parse_generator_header(trim(payload.substr(9)));
      }
      // Other comments are ignored.
      continue;
    }
    std::vector<std::string> toks = split_ws(line);
    if (toks.size() != 3)
      throw ParseError("row at line " + std::to_string(lineno) + " has " +
                       std::to_string(toks.size()) + " fields, expected 3");
    try {
      rows.push_back({Rational::parse(toks[0]), Rational::parse(toks[1]),
                      Rational::parse(toks[2])});
    } catch (const ParseError& e) {
      throw ParseError("row at line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (rows.empty()) throw ParseError("arrangement file contains no lines");

  if (gen.kind != GeneratorSpec::Kind::None && rows.size() != gen.expected_rows())
    throw ParseError("file has " + std::to_string(rows.size()) + " rows but the generator '" +
                     generator_header(gen) + "' produces " +
                     std::to_string(gen.expected_rows()));

  LoadedArrangement la;
  la.generator = gen;
  if (!interval_backend) {
    (void)backend_seen;
    la.interval_backend = false;
    la.rational.lines.reserve(rows.size());
    for (const auto& r : rows) la.rational.lines.push_back({r[0], r[1], r[2]});
    return la;
  }

  // Interval rows: rebuild from provenance and certify every stored token.
  la.interval_backend = true;
  switch (gen.kind) {
    case GeneratorSpec::Kind::Regular: {
      RegularFamily fam(gen.regular_m, gen.regular_infinity);
      la.interval = fam.arrangement();
      la.oracle = fam.oracle();
      break;
    }
    case GeneratorSpec::Kind::CosetDual: {
      WeierstrassCubic<Rational> c{gen.cubic_a, gen.cubic_b};
      la.interval = gen_coset_dual_arrangement(c, gen.coset_n);
      break;
    }
    case GeneratorSpec::Kind::NearPencil:
      throw ParseError("near-pencil arrangements are rational-backed; interval rows cannot "
                       "carry that provenance");
    default:
      throw ParseError("interval rows without generator provenance cannot be re-certified");
  }
  if (digits < kCoordinateDigits)
    throw ParseError("declared precision " + std::to_string(digits) +
                     " is below the re-certifiable minimum " +
                     std::to_string(kCoordinateDigits));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    certify_coordinate(la.interval.lines[i].a, rows[i][0], i, 0);
    certify_coordinate(la.interval.lines[i].b, rows[i][1], i, 1);
    certify_coordinate(la.interval.lines[i].c, rows[i][2], i, 2);
  }
  return la;
}

LoadedArrangement load_arrangement(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open '" + path + "'");
  return read_arrangement(is);
}

AnalysisReport analyze(const IncidenceStructure& s) {
  AnalysisReport r;
  r.n = s.n_lines;
  r.V = s.V();
  r.E = s.E();
  r.F = s.F();
  r.v_histogram = s.v_histogram();
  r.simplicial = is_simplicial(s);
  DoublePointStats dp = double_point_stats(s);
  r.double_points = dp.count;
  r.adjacent_double_pair = dp.has_adjacent_pair;
  r.gauss_bonnet = gauss_bonnet_sum(s);
  r.family = r.simplicial ? to_string(classify_family(s)) : "none";
  return r;
}

AnalysisReport analyze(const LoadedArrangement& la) {
  IncidenceStructure s =
      la.interval_backend ? build_incidence(la.interval, la.oracle) : build_incidence(la.rational);
  return analyze(s);
}

std::string to_json(const AnalysisReport& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["V"] = r.V;
  j["E"] = r.E;
  j["F"] = r.F;
  nlohmann::ordered_json h = nlohmann::ordered_json::object();
  for (const auto& [k, count] : r.v_histogram) h[std::to_string(k)] = count;
  j["v_histogram"] = std::move(h);
  j["simplicial"] = r.simplicial;
  j["double_points"] = r.double_points;
  j["adjacent_double_pair"] = r.adjacent_double_pair;
  j["family"] = r.family;
  j["gauss_bonnet"] = r.gauss_bonnet;
  return j.dump();
}

}  // namespace simparr
