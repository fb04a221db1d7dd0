#pragma once

// Value types for the Cantor space 2^omega: finite bit words, eventually
// constant points, clopen sets as node-sets over a single depth, closed
// subspaces as pruned binary trees and level-preserving tree maps.
//
// Bit words are written root bit first. A node t of depth d is identified with
// the integer whose binary expansion (most significant bit first) is t.

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jnlab/rational.hpp"

namespace jnlab::cantor {

/// Largest depth at which node-sets are materialized.
inline constexpr int kMaxNodeDepth = 24;

class Word {
 public:
  Word() = default;
  explicit Word(std::string_view bits);

  static Word from_index(std::uint64_t index, int length);
  static Word repeat(int bit, int length);

  int size() const { return static_cast<int>(bits_.size()); }
  bool empty() const { return bits_.empty(); }
  int operator[](int i) const { return bits_[static_cast<std::size_t>(i)] == '1' ? 1 : 0; }

  /// Integer code of the word; requires size() <= 63.
  std::uint64_t index() const;

  Word child(int bit) const;
  Word prefix(int length) const;
  Word concat(const Word& other) const;
  Word flipped() const;
  bool is_prefix_of(const Word& other) const;

  const std::string& str() const { return bits_; }

  auto operator<=>(const Word&) const = default;

 private:
  std::string bits_;
};

/// The branch prefix followed by tail^omega, stored canonically: the prefix
/// never ends with the tail bit.
class Point {
 public:
  Point() = default;
  Point(Word prefix, int tail);

  static Point constant(int bit) { return Point(Word{}, bit); }

  const Word& prefix() const { return prefix_; }
  int tail() const { return tail_; }

  int bit(std::size_t i) const {
    return i < prefix_.str().size() ? prefix_[static_cast<int>(i)] : tail_;
  }

  /// First `depth` bits of the branch.
  Word head(int depth) const;

  bool operator==(const Point&) const = default;
  /// Lexicographic order of the infinite branches.
  std::strong_ordering operator<=>(const Point& other) const;

  /// "0110(1)" style rendering: prefix then the repeated tail bit.
  std::string to_string() const;

 private:
  Word prefix_;
  int tail_ = 0;
};

/// Clopen subset of 2^omega, stored as a membership mask over the 2^depth
/// nodes of a single depth. The depth is kept minimal; depth 0 is used only
/// for the empty set and the whole space.
class Clopen {
 public:
  Clopen() : mask_(1, false) {}

  static Clopen empty() { return Clopen(); }
  static Clopen full();
  static Clopen cylinder(const Word& node);
  static Clopen from_nodes(int depth, std::span<const Word> nodes);
  static Clopen from_mask(int depth, std::vector<bool> mask);

  int depth() const { return depth_; }
  bool is_empty() const;
  bool is_full() const;

  /// Membership mask after refining to `depth` (>= this->depth()).
  std::vector<bool> mask_at(int depth) const;
  std::vector<Word> nodes() const;
  std::size_t node_count() const;

  bool contains(const Point& p) const;
  /// True iff the whole cylinder [t] lies inside the set.
  bool covers(const Word& t) const;

  /// Product measure of the set.
  Rational measure() const;

  Clopen meet(const Clopen& other) const;
  Clopen join(const Clopen& other) const;
  Clopen complement() const;
  Clopen difference(const Clopen& other) const;

  bool operator==(const Clopen&) const = default;

  /// "depth:{node,node}" rendering.
  std::string to_string() const;

 private:
  Clopen(int depth, std::vector<bool> mask);
  void canonicalize();

  int depth_ = 0;
  std::vector<bool> mask_;
};

inline Clopen clopen_meet(const Clopen& a, const Clopen& b) { return a.meet(b); }
inline Clopen clopen_join(const Clopen& a, const Clopen& b) { return a.join(b); }
inline Clopen clopen_complement(const Clopen& a) { return a.complement(); }
inline Clopen clopen_difference(const Clopen& a, const Clopen& b) { return a.difference(b); }
inline bool point_in_clopen(const Point& p, const Clopen& u) { return u.contains(p); }

/// Closed subset of 2^omega presented by its node-sets T_0..T_D. Downward
/// closed and pruned (every node above depth D has a child).
class PrunedTree {
 public:
  PrunedTree() : PrunedTree(full(0)) {}

  static PrunedTree full(int depth);
  /// Downward closure of a set of depth-`depth` nodes.
  static PrunedTree from_leaves(int depth, std::span<const Word> leaves);
  /// Validates downward closure and pruning; throws Error(kInvalidArgument).
  static PrunedTree from_levels(std::vector<std::vector<bool>> levels);

  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  bool contains(const Word& node) const;
  const std::vector<bool>& level(int d) const;
  std::vector<Word> nodes_at(int d) const;
  std::size_t count_at(int d) const;
  /// Union of the cylinders of T_d.
  Clopen as_clopen(int d) const;
  bool is_full() const;

  bool operator==(const PrunedTree&) const = default;

 private:
  explicit PrunedTree(std::vector<std::vector<bool>> levels) : levels_(std::move(levels)) {}
  std::vector<std::vector<bool>> levels_;
};

/// Level-preserving, monotone map between pruned trees, tabulated on every
/// domain node up to the working depth.
class TreeMap {
 public:
  static constexpr std::uint64_t kAbsent = ~std::uint64_t{0};

  /// images[d][i] is the image index of domain node i at depth d, or kAbsent
  /// when the node is not in the domain. Validates level preservation,
  /// monotonicity and that images lie in the codomain.
  TreeMap(PrunedTree domain, PrunedTree codomain, std::vector<std::vector<std::uint64_t>> images);

  static TreeMap identity(int depth);
  /// Tabulates f on the deepest level of `domain` and derives the coarser
  /// levels by truncation; throws if f is not consistent with truncation.
  /// The codomain defaults to the image tree when not given.
  static TreeMap from_deepest(const PrunedTree& domain, const std::function<Word(const Word&)>& f);
  static TreeMap from_deepest(const PrunedTree& domain, PrunedTree codomain,
                              const std::function<Word(const Word&)>& f);

  const PrunedTree& domain() const { return domain_; }
  const PrunedTree& codomain() const { return codomain_; }
  int depth() const { return domain_.depth(); }

  Word image(const Word& node) const;
  /// Image index of domain node i at depth d, or kAbsent.
  std::uint64_t image_index(int d, std::uint64_t i) const { return images_[static_cast<std::size_t>(d)][i]; }
  bool surjective_at(int d) const;

  /// Node-set at depth d of the image of U intersected with the domain.
  Clopen image_of_clopen(const Clopen& u, int d) const;

  bool operator==(const TreeMap&) const = default;

 private:
  PrunedTree domain_;
  PrunedTree codomain_;
  std::vector<std::vector<std::uint64_t>> images_;
};

inline Clopen image_of_clopen(const TreeMap& f, const Clopen& u, int d) { return f.image_of_clopen(u, d); }

}  // namespace jnlab::cantor
