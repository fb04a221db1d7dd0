#pragma once

// Sample tree maps used by the transport demos, the CLI and the tests.

#include <cstdint>
#include <string>
#include <vector>

#include "jnlab/cantor.hpp"

namespace jnlab::maps {

using cantor::TreeMap;
using cantor::Word;

/// Complements every bit; an automorphism of the full tree.
TreeMap bit_flip(int depth);

/// Full domain; [01] is folded onto [00] and everything else is fixed.
/// Codomain [00] u [1].
TreeMap collapse_pair(int depth);

/// Full domain, f(iw) = 0w: the images of [0] and [1] coincide.
TreeMap full_overlap(int depth);

/// Two closed pieces glued along one branch. Below `u` the domain keeps
/// u0 P and u1 Q, where P has the nodes with at most one 1 and Q the nodes
/// 0^j 1^k; u1 v is sent to u0 v. The pieces share only u0 0^omega, so the
/// overlap of images has empty interior. Elsewhere the map is the identity.
TreeMap gluing(int depth, const Word& u);

/// Random child swaps at every node, drawn from `seed`.
struct Automorphism {
  int depth = 0;
  std::vector<std::vector<bool>> swap;  // swap[d][t]: children of node t are exchanged

  static Automorphism random(int depth, std::uint64_t seed);
  Word apply(const Word& w) const;
  Word invert(const Word& w) const;
};

/// sigma2 o gluing(u) o sigma1^-1 with u of length <= 2, all drawn from `seed`.
/// Irreducible at every depth up to depth - 2.
TreeMap seeded_gluing(int depth, std::uint64_t seed);

/// Looks up a sample map by name: identity, bit-flip, collapse-pair,
/// full-overlap, gluing (with seed). Throws Error(kSchema) on an unknown name.
TreeMap by_name(const std::string& name, int depth, std::uint64_t seed);

}  // namespace jnlab::maps
