#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>

#include "simparr/arrangement.hpp"
#include "simparr/interval.hpp"
#include "simparr/scalar.hpp"

namespace simparr {

// ---------------------------------------------------------------------------
// Arrangement files. UTF-8 text, one projective line per row as three
// whitespace-separated scalars "a b c"; '#' starts a comment. Header comments
// carry the backend, the serialization precision, and the generator
// provenance:
//
//   # simparr arrangement
//   # backend interval
//   # precision 48
//   # generator regular m=4 infinity=0
//   -1.2303...e-01 9.9240...e-01 -1.0000...e+00
//   ...
//
// Rational rows are exact and authoritative. Interval rows are decimal
// snapshots of irrational coordinates; they are never trusted on ingestion.
// Instead the reader rebuilds the exact coordinates from the generator
// provenance, certifies every stored token against the rebuilt value, and
// returns the rebuilt expressions (with the generator's coincidence oracle
// when it has one). A tampered row, a forged generator header, or a
// precision too low to certify all raise ParseError.
// ---------------------------------------------------------------------------

// Provenance of a generated arrangement, recorded in file headers.
struct GeneratorSpec {
  enum class Kind { None, NearPencil, Regular, CosetDual };
  Kind kind = Kind::None;
  // NearPencil: k concurrent lines (k + 1 rows).
  unsigned near_pencil_k = 0;
  // Regular: m tangents + m axes (+ line at infinity when regular_infinity).
  unsigned regular_m = 0;
  bool regular_infinity = false;
  // CosetDual: duals of {O, P, ..., (n-1)P} on y^2 = x^3 + a x + b.
  Rational cubic_a, cubic_b;
  unsigned coset_n = 0;

  std::size_t expected_rows() const;
};

// Header directive payload of "# generator ..." and its parser.
std::string generator_header(const GeneratorSpec& gen);
GeneratorSpec parse_generator_header(const std::string& payload);

// Significant decimal digits written per interval coordinate, the minimum a
// reader accepts, and the absolute certification tolerance 2^-tolerance_bits
// applied to |stored - rebuilt| (evaluated at recert_eval_bits).
inline constexpr unsigned kCoordinateDigits = 48;
inline constexpr unsigned kRecertToleranceBits = 100;
inline constexpr unsigned kRecertEvalBits = 512;

// Result of reading an arrangement file. Exactly one backend is populated;
// `oracle` is non-empty only when the generator supplies a symbolic
// coincidence oracle (the regular families).
struct LoadedArrangement {
  bool interval_backend = false;
  Arrangement<Rational> rational;
  Arrangement<Interval> interval;
  MeetOracle oracle;
  GeneratorSpec generator;

  std::size_t n_lines() const {
    return interval_backend ? interval.lines.size() : rational.lines.size();
  }
};

void write_arrangement(std::ostream& os, const Arrangement<Rational>& arr,
                       const GeneratorSpec& gen = {});
// Interval coordinates are only serializable with provenance (gen.kind must
// name a rebuildable generator); throws DomainError otherwise.
void write_arrangement(std::ostream& os, const Arrangement<Interval>& arr,
                       const GeneratorSpec& gen, unsigned digits = kCoordinateDigits);

void save_arrangement(const std::string& path, const Arrangement<Rational>& arr,
                      const GeneratorSpec& gen = {});
void save_arrangement(const std::string& path, const Arrangement<Interval>& arr,
                      const GeneratorSpec& gen, unsigned digits = kCoordinateDigits);

LoadedArrangement read_arrangement(std::istream& is);
LoadedArrangement load_arrangement(const std::string& path);

// ---------------------------------------------------------------------------
// Combinatorial analysis of an arrangement, serialized as a JSON object with
// exactly the fields {n, V, E, F, v_histogram, simplicial, double_points,
// adjacent_double_pair, family, gauss_bonnet} in that order. `family` is the
// classification string ("R0(4)", "R1(6)", ..., "Unknown") for simplicial
// input and "none" otherwise.
// ---------------------------------------------------------------------------
struct AnalysisReport {
  std::size_t n = 0;
  std::size_t V = 0, E = 0, F = 0;
  std::map<unsigned, std::size_t> v_histogram;
  bool simplicial = false;
  std::size_t double_points = 0;
  bool adjacent_double_pair = false;
  std::string family;
  long gauss_bonnet = 0;
};

AnalysisReport analyze(const IncidenceStructure& s);
// Builds the incidence structure (rational exactly; interval with the
// generator's oracle when present). Propagates DuplicateLine and
// UndecidedCoincidence.
AnalysisReport analyze(const LoadedArrangement& la);

std::string to_json(const AnalysisReport& r);

}  // namespace simparr
