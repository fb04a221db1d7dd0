#pragma once

// Depth-budgeted weak* checks over clopen test families. A pass at finite
// depth is evidence of weak*-nullity on the tested sets, not a proof of it.

#include <cstdint>
#include <string>
#include <vector>

#include "jnlab/jn.hpp"

namespace jnlab::verify {

using cantor::Clopen;

enum class FamilyKind { kCylinders, kAllClopen, kRandom };

struct Family {
  FamilyKind kind = FamilyKind::kCylinders;
  std::size_t samples = 0;  // random family size
  std::uint64_t seed = 0;

  static Family cylinders() { return {}; }
  static Family all_clopen() { return {FamilyKind::kAllClopen, 0, 0}; }
  static Family random(std::size_t k, std::uint64_t seed) { return {FamilyKind::kRandom, k, seed}; }
};

std::string to_string(FamilyKind kind);
FamilyKind parse_family(const std::string& text);

/// Largest depth accepted by the exhaustive all-clopen family.
inline constexpr int kAllClopenMaxDepth = 5;

struct Row {
  std::size_t n = 0;
  Rational norm;
  Rational max_abs;
  Clopen witness;
  bool operator==(const Row&) const = default;
};

struct Verdict {
  std::string construction;
  int depth = 0;
  std::size_t terms = 0;
  std::string family;
  Rational tolerance;
  std::vector<Row> rows;
  bool norms_exact_one = true;
  bool decay_below_tolerance = true;
  bool disjoint_supports = true;
  bool degenerate = false;
  bool operator==(const Verdict&) const = default;
};

/// The clopen sets of the family at depth <= D, in evaluation order. The
/// all-clopen family is not enumerated (it is maximized exactly per term).
std::vector<Clopen> family_sets(const Family& family, int depth);

/// max |mu(U)| over the family together with a set attaining it. For the
/// all-clopen family the maximum over every union of depth-D cells is taken
/// exactly: the positive cells or the negative cells.
std::pair<Rational, Clopen> max_abs_over(const jn::Term& t, const Family& family, int depth,
                                         const std::vector<Clopen>& sets);

/// Evaluates terms n < N against the family. Decay is judged on n with
/// 2n >= N against `tol`; disjointness is checked on finitely supported terms.
Verdict weakstar_report(const jn::MeasureSequence& seq, int depth, std::size_t terms, const Family& family,
                        const Rational& tol = Rational(1, 100));

struct CheckResult {
  bool passed = false;
  Verdict verdict;
};

/// Passes iff every term n < N has norm exactly 1 and every term with
/// 2n >= N stays below tol on all cylinders of depth <= D.
CheckResult check_fsjn(const jn::MeasureSequence& seq, int depth, std::size_t terms, const Rational& tol);

enum class Format { kCsv, kJson };

std::string render(const Verdict& v, Format format);
/// Writes the rendered verdict; throws Error(kIo) when the file cannot be written.
void emit(const Verdict& v, Format format, const std::string& path);
/// Inverse of render(v, kJson).
Verdict parse_verdict_json(const std::string& text);

}  // namespace jnlab::verify
