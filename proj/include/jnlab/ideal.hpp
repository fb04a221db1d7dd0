#pragma once

// Pseudo-unions in the density ideal of a weighted partition of omega.
// Elements outside every cell never influence a ratio and are ignored.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "jnlab/rational.hpp"

namespace jnlab::ideal {

/// Disjoint finite cells A_n with positive element weights.
struct WeightedPartition {
  std::string name;
  std::function<std::vector<std::uint64_t>(std::uint64_t)> cell;
  std::function<std::optional<std::uint64_t>(std::uint64_t)> cell_index;
  std::function<Rational(std::uint64_t)> weight;

  Rational cell_mass(std::uint64_t n) const;
};

enum class BlockWeights { kUnit, kPoly };

/// A_n = {n*m, ..., n*m + m - 1}. Unit weights are 1; poly weights give the
/// j-th element of block n the weight (n+1)^-j.
WeightedPartition blocks(std::uint64_t m, BlockWeights weights);
/// Parses "blocks:m=8" with a weights name "unit" or "poly".
WeightedPartition parse_partition(const std::string& spec, const std::string& weights);

/// Member of the ideal: membership plus a nonincreasing certificate
/// eps(n) >= mu(A_n and C)/mu(A_n) tending to 0.
struct IdealSet {
  std::string name;
  std::function<bool(std::uint64_t)> contains;
  std::function<Rational(std::uint64_t)> certificate;
};

/// Certificate forms: {"form":"power","c":"1/2","exponent":2} is c*(n+1)^-exponent,
/// {"form":"step","value":"1/8","until":5} is value for n < until and 0 after.
std::function<Rational(std::uint64_t)> parse_certificate(const nlohmann::json& j);

/// Set kinds: {"kind":"finite","elements":[...]} and
/// {"kind":"block-element","index":j,"from":b,"m":8} (element j of block n
/// for n >= b), each with a "certificate".
IdealSet parse_set(const nlohmann::json& j, std::uint64_t default_m);
std::vector<IdealSet> parse_sets(const nlohmann::json& j, std::uint64_t default_m);

IdealSet block_element(std::uint64_t m, std::uint64_t index, std::uint64_t from,
                       std::function<Rational(std::uint64_t)> certificate);

/// mu(A_n and C)/mu(A_n), exactly.
Rational ratio(const WeightedPartition& p, const IdealSet& c, std::uint64_t n);

struct PseudoUnion {
  IdealSet set;
  std::vector<std::uint64_t> schedule;  // n_0 < n_1 < ...
};

/// n_k is the least n > n_{k-1} with sum_{i<=k} eps_i(n) < 1/(k+1), searched
/// up to 10*(k+1)*max_i inv_i(1/(2(k+1))) where inv_i is the first n with
/// eps_i(n) below the argument (itself searched up to `inverse_cap`). Throws
/// kScheduleSearch naming the stuck k. The result is the union of
/// C_k \ (A_0 u ... u A_{n_k}).
PseudoUnion pseudo_union(const WeightedPartition& p, const std::vector<IdealSet>& cs, std::size_t k,
                         std::uint64_t inverse_cap = 1u << 20);

/// The set determined by a given schedule (without searching).
IdealSet union_from_schedule(const WeightedPartition& p, const std::vector<IdealSet>& cs,
                             const std::vector<std::uint64_t>& schedule);

struct Violation {
  std::string check;  // "containment", "ratio", "certificate", "schedule"
  std::size_t k = 0;
  std::uint64_t n = 0;        // cell index, when relevant
  std::uint64_t element = 0;  // witness element, when relevant
  std::string detail;
};

struct PseudoUnionReport {
  std::size_t containment_checks = 0;
  std::size_t ratio_checks = 0;
  std::vector<Violation> violations;
  bool passed() const { return violations.empty(); }
};

/// Checks, for elements of the cells A_n lying below `horizon`: the schedule
/// is strictly increasing; C_k \ C lies in A_0 u ... u A_{n_k}; the ratio of
/// C in A_n is below 1/(k+1) for n_k < n <= n_{k+1} (below 1/K past the last
/// entry); and the certificate of C dominates the ratio.
PseudoUnionReport verify_pseudo_union(const WeightedPartition& p, const std::vector<IdealSet>& cs, const IdealSet& c,
                                      const std::vector<std::uint64_t>& schedule, std::uint64_t horizon);

nlohmann::json to_json(const PseudoUnionReport& r);

}  // namespace jnlab::ideal
