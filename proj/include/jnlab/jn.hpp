#pragma once

// Josefson-Nissenzweig sequence constructors on the Cantor space and its
// closed subspaces: the scattered pair sequence, the canonical finitely
// supported sequence, independent-set densities, sequences derived from
// uniformly distributed points, truncation of countably supported sequences,
// disjointification and transport along tree maps.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "jnlab/cantor.hpp"
#include "jnlab/measures.hpp"

namespace jnlab::jn {

using cantor::Clopen;
using cantor::Point;
using cantor::TreeMap;
using cantor::Word;
using measures::CsMeasure;
using measures::DensityMeasure;
using measures::FsMeasure;

using Term = std::variant<FsMeasure, DensityMeasure>;

Rational term_norm(const Term& t);
Rational term_eval(const Term& t, const Clopen& u);
/// Mass of every depth-d cylinder.
std::vector<Rational> term_cells(const Term& t, int depth);

/// A lazily generated sequence of measures plus the metadata needed to
/// reproduce it. `length` is set for finite sequences.
struct MeasureSequence {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  int working_depth = cantor::kMaxNodeDepth;
  bool normalized = true;
  std::optional<std::size_t> length;
  std::function<Term(std::size_t)> generator;

  Term term(std::size_t n) const;
  /// Convenience for sequences whose terms are all finitely supported.
  FsMeasure fs_term(std::size_t n) const;
};

MeasureSequence from_terms(std::string name, std::vector<FsMeasure> terms, int working_depth = cantor::kMaxNodeDepth);

// ---------------------------------------------------------------- constructors

/// mu_n = (delta_{x_n} - delta_x)/2. Checks injectivity, that no x_n equals
/// the limit, and convergence up to `working_depth`: for every d <= depth,
/// the last point disagreeing with the limit on its first d bits lies in the
/// first half of the list.
MeasureSequence scattered_jn(const std::vector<Point>& points, const Point& limit, int working_depth);

/// 0^n 1^omega, the points of the standard convergent sequence to 0^omega.
Point comb_point(std::size_t n);

/// 2^-(n+1) sum_{s in 2^n} (delta_{s 1^omega} - delta_{s 0^omega}).
FsMeasure standard_fsjn(unsigned n);
MeasureSequence standard_sequence();

/// Depth-(n+1) density, +lambda on cells with bit n set and -lambda elsewhere.
DensityMeasure independent_jn(unsigned n);
MeasureSequence independent_sequence();

/// Binary digits of n, least significant first, followed by 0^omega.
Point van_der_corput(std::uint64_t n);

struct Interval {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;  // inclusive
  std::uint64_t size() const { return hi - lo + 1; }
  bool operator==(const Interval&) const = default;
};

/// P_n = {2^n - 1, ..., 2^(n+1) - 2}.
Interval uds_partition(unsigned n);

struct UdsTerm {
  FsMeasure raw;
  FsMeasure normalized;
};

using PointStream = std::function<Point(std::uint64_t)>;

/// nu_n = (1/max P_{n+1}) sum_{k<max P_{n+1}} delta_{x_k} - (1/max P_n) sum_{k<max P_n} delta_{x_k}.
/// Requires n >= 1 and x injective below max P_{n+1}.
UdsTerm uds_to_fsjn(const PointStream& x, unsigned n);
/// Term m is the normalized nu_{m+1}.
MeasureSequence uds_sequence(PointStream x, std::string source);

/// Smallest head with certified tail below 1/n, normalized. Throws
/// Error(kCertificate) if the head norm is not above 1 - 1/n.
FsMeasure truncate_csjn(const std::function<CsMeasure(std::size_t)>& seq, std::size_t n);

/// Countably supported sequence used by the truncation demos:
/// -delta_{0^omega}/2 + sum_{k>=1} 2^-(k+1) delta_{0^(n+k-1) 1^omega}.
CsMeasure geometric_csjn(std::size_t n);

/// Seeded fsJN-style sequence a*delta_x - a*delta_{y_n} + b*delta_{u_n} - b*delta_{v_n}
/// with 2|a| + 2b = 1 and y_n, u_n, v_n leaving x at bit n+1.
MeasureSequence random_pair_sequence(std::uint64_t seed, std::size_t terms);

// ---------------------------------------------------------------- disjointify

struct DisjointifyResult {
  bool verified = false;
  std::vector<FsMeasure> terms;            // theta_k
  std::vector<std::size_t> subsequence;    // n_k
  std::map<Point, Rational> limit_weights;  // alpha_x, zero entries omitted
  std::vector<std::string> failures;       // post-verification findings

  MeasureSequence as_sequence() const;
};

/// Splits each selected term into a part concentrated on fresh points and a
/// part close to the pointwise limit, then pairs consecutive fresh parts.
/// Throws kInsufficientHorizon when the weights do not stabilize on at least
/// four indices and kDegenerate when fewer than two terms carry fresh mass
/// above 2*tol. Post-verification problems are reported in `failures`.
DisjointifyResult disjointify(const MeasureSequence& seq, std::size_t horizon = 64,
                              const Rational& tol = Rational(1, 1000));

// ---------------------------------------------------------------- transport

/// Lexicographically least depth-D domain node whose image agrees with the
/// target on the most bits (at least `depth`), extended by its last bit.
Point select_preimage(const TreeMap& f, const Point& target, int depth);

/// Product measure of f[U] intersect f[Y \ U] computed on depth-`depth` node-sets.
Rational overlap_measure(const TreeMap& f, const Clopen& u, int depth);

struct TransportResult {
  FsMeasure measure;
  bool hypothesis_violated = false;
  Rational max_overlap;
  Clopen overlap_witness;
};

/// 2^-(n+1) sum_s (delta_{y_s^1} - delta_{y_s^0}) with y_s^i selected
/// preimages of s i^omega. Overlap is tested on every domain cylinder of
/// depth <= n+1 against `overlap_bound`.
TransportResult transport(const TreeMap& f, unsigned n, int depth, const Rational& overlap_bound = Rational(0));

struct TransportBoundRow {
  Clopen u;
  Rational value;  // |nu_n(U)|
  Rational bound;  // |mu_n(A)| + 2^-(n+1) #{(s,i) : x_s^i in A and B}
};

struct TransportBoundReport {
  unsigned n = 0;
  std::vector<TransportBoundRow> rows;
  bool holds = true;
  int n0 = 0;  // largest canonical depth of f[U] over the tested U
  int n1 = 0;  // working depth of the map
};

/// Checks |nu_n(U)| <= |mu_n(f[U])| + 2^-(n+1) #{x_s^i in f[U] and f[Y\U]} for
/// every tested U, where f[.] are depth-D image node-sets.
TransportBoundReport transport_bound_check(const TreeMap& f, unsigned n, const std::vector<Clopen>& tests);

struct BoundaryReport {
  bool hypothesis_satisfied = true;
  Clopen overlap;   // f[U] and f[Y\U], truncated to the check depth
  Clopen boundary;  // boundary of f[U] joined with the boundary of f[Y\U]
  bool holds = false;
  std::string note;
};

/// Finite-resolution check of: overlap of the images equals the union of
/// their boundaries, when the overlap has empty interior. Requires
/// depth(U) <= depth < working depth.
BoundaryReport image_boundary_check(const TreeMap& f, const Clopen& u, int depth);

/// Every domain node at depth `depth` has a depth-D descendant whose image has
/// exactly one preimage node.
bool irreducible_through(const TreeMap& f, int depth);

}  // namespace jnlab::jn
