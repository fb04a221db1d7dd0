#pragma once

// Inverse systems of simple extensions of length omega. Stage K_t has points
// 0..t; step t doubles the point split[t] and the new copy is point t+1, so
// the bonding map K_{t+1} -> K_t sends t+1 to split[t] and fixes the rest.
//
// Coding: K_0's point has the empty code; when a point with code w is split
// the survivor gets w0 and the new point w1. The thread of a point is its
// code followed by 0^omega.

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "jnlab/cantor.hpp"
#include "jnlab/jn.hpp"
#include "jnlab/verify.hpp"

namespace jnlab::systems {

using cantor::Point;
using cantor::PrunedTree;
using cantor::Word;

enum class PolicyKind { kRoundRobin, kFixedPoint, kCustom };

struct Policy {
  PolicyKind kind = PolicyKind::kRoundRobin;
  /// Round-robin only: after splitting the root, only points whose code
  /// starts with this word are split.
  std::string prefix;
  /// Fixed-point only: the point that is always split.
  std::size_t point = 0;
  /// Custom only: the split indices, one per step.
  std::vector<std::size_t> splits;

  static Policy round_robin(std::string prefix = {}) { return {PolicyKind::kRoundRobin, std::move(prefix), 0, {}}; }
  static Policy fixed_point(std::size_t point = 0) { return {PolicyKind::kFixedPoint, {}, point, {}}; }
  static Policy custom(std::vector<std::size_t> splits) { return {PolicyKind::kCustom, {}, 0, std::move(splits)}; }
};

std::string to_string(PolicyKind kind);
PolicyKind parse_policy(const std::string& text);

class SimpleSystem {
 public:
  std::size_t steps() const { return splits_.size(); }
  const Policy& policy() const { return policy_; }
  const std::vector<std::size_t>& splits() const { return splits_; }
  /// Final-stage codes, indexed by point.
  const std::vector<Word>& codes() const { return codes_; }

  /// Bonding map pi_t^{t+1} applied to a point of K_{t+1}.
  std::size_t bond(std::size_t t, std::size_t x) const;
  /// pi_t^u as the composite of single steps.
  std::size_t project(std::size_t u, std::size_t t, std::size_t x) const;
  /// Codes of the points of K_t.
  std::vector<Word> codes_at(std::size_t t) const;
  /// Deepest coded depth no later split can change, or nullopt if unbounded.
  std::optional<int> settled_depth() const { return settled_; }

  /// The system restricted to its first `t` steps.
  SimpleSystem truncated(std::size_t t) const;

  nlohmann::json to_json() const;
  static SimpleSystem from_json(const nlohmann::json& j);

  friend SimpleSystem build_system(const Policy& policy, std::size_t steps);

 private:
  static SimpleSystem make(const Policy& policy, std::size_t steps);

  Policy policy_;
  std::vector<std::size_t> splits_;
  std::vector<Word> codes_;
  std::optional<int> settled_;
};

/// Throws kInvalidArgument for zero steps and kInvalidSplitIndex for a custom
/// split index outside the current stage.
SimpleSystem build_system(const Policy& policy, std::size_t steps);

/// Nodes of the threads of the final stage up to `depth`. Throws
/// kDepthExceeded if later splits could still add nodes at that depth.
PrunedTree limit_tree(const SimpleSystem& sys, int depth);

struct PerfectWitness {
  Word root;
  int full_depth = 0;  // the complete binary tree of this height sits under root
  PrunedTree subtree;
};

struct ScatteredWitness {
  std::vector<Point> points;  // side points x_n
  Point limit;                // x
};

using Witness = std::variant<PerfectWitness, ScatteredWitness>;

struct ClassifyStats {
  int max_full_depth = 0;
  int comb_length = 0;
  int perfect_threshold = 0;
  int scattered_threshold = 0;
};

/// Looks at the first `budget` steps. Perfect when some node carries a
/// complete binary subtree of height >= max(2, floor(log2(budget+1)) - 1);
/// scattered when some path has >= max(3, ceil(sqrt(budget))) splits with a
/// leaf on one side. Perfect wins when both hold; otherwise throws
/// kInconclusiveAtBudget.
Witness classify(const SimpleSystem& sys, std::size_t budget, ClassifyStats* stats = nullptr);

enum class MassRuleKind { kHalfHalf, kProportional };

struct MassRule {
  MassRuleKind kind = MassRuleKind::kHalfHalf;
  Rational survivor_share = Rational(1, 2);  // proportional(r): survivor keeps r

  static MassRule half_half() { return {}; }
  static MassRule proportional(const Rational& r) { return {MassRuleKind::kProportional, r}; }
};

/// Probability measure on the limit given by stage-local splitting of mass.
class NodeMeasure {
 public:
  NodeMeasure(const SimpleSystem& sys, const MassRule& rule);

  const SimpleSystem& system() const { return *sys_; }
  const MassRule& rule() const { return rule_; }
  /// Final-stage point masses (zero outside the conditioning node).
  const std::vector<Rational>& final_masses() const { return final_; }
  /// Weights of the points of K_t, folded back from the final stage.
  std::vector<Rational> stage_masses(std::size_t t) const;
  /// Weights of K_t computed forward from the rule, ignoring any conditioning.
  std::vector<Rational> forward_masses(std::size_t t) const;
  /// Mass of every depth-d node of the coded limit.
  std::vector<Rational> node_masses(int depth) const;

  /// Restricts to threads through `root` and renormalizes.
  NodeMeasure conditioned(const Word& root) const;

 private:
  std::shared_ptr<const SimpleSystem> sys_;
  MassRule rule_;
  std::vector<Rational> final_;
  Word root_;
  Rational root_mass_ = Rational(1);
};

/// Greedy uniformly distributed enumeration of `count` points of the coded
/// limit at `depth`: descend choosing the child that most undershoots its
/// share, ties to bit 0, skipping exhausted subtrees. Throws kAtomicMeasure if
/// some depth-D node has mass above 2^-ceil(D/2).
std::vector<Point> ud_sequence(const NodeMeasure& m, int depth, std::size_t count);
Point ud_point(const NodeMeasure& m, int depth, std::size_t n);

struct PipelineResult {
  Witness witness;
  jn::MeasureSequence sequence;
  verify::CheckResult check;
};

struct PipelineOptions {
  std::size_t budget = 32;
  int depth = 8;           // convergence/working depth
  int check_depth = 6;
  std::size_t terms = 12;
  Rational tol = Rational(1, 10);
  MassRule rule = MassRule::half_half();
};

PipelineResult fsjnp_pipeline(const SimpleSystem& sys, const PipelineOptions& opt);

/// pi_s^u = pi_s^{s+1} o ... o pi_{u-1}^u checked pointwise on K_u against
/// code prefixes, for every s < u <= steps.
bool check_bonding_law(const SimpleSystem& sys);

/// For every X in K_{t+1}: boundary(pi[X]) \ pi[boundary X] is within {x_t},
/// where a point is on the boundary of a set if a point outside the set has
/// a thread agreeing with it on `depth` bits. Exhaustive; requires t+1 < 16.
bool check_simple_extension_boundaries(const SimpleSystem& sys, std::size_t t, int depth);

/// Every clopen set of depth <= `depth` (at most 4) meeting the coded limit
/// contains the whole fibre of some final-stage point.
bool check_irreducible(const SimpleSystem& sys, int depth);

}  // namespace jnlab::systems
