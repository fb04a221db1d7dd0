#include "jnlab/maps.hpp"

#include <random>
#include <vector>

#include "jnlab/error.hpp"

namespace jnlab::maps {

using cantor::PrunedTree;

namespace {

std::vector<Word> all_words(int length) {
  std::vector<Word> out;
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << length); ++i) out.push_back(Word::from_index(i, length));
  return out;
}

int ones(const Word& w) {
  int c = 0;
  for (char ch : w.str()) c += ch == '1';
  return c;
}

// 0^j 1^k
bool zeros_then_ones(const Word& w) {
  const auto& s = w.str();
  const auto first_one = s.find('1');
  return first_one == std::string::npos || s.find('0', first_one) == std::string::npos;
}

}  // namespace

TreeMap bit_flip(int depth) {
  return TreeMap::from_deepest(PrunedTree::full(depth), [](const Word& w) { return w.flipped(); });
}

TreeMap collapse_pair(int depth) {
  if (depth < 2) throw Error(ErrorCode::kInvalidArgument, "collapse-pair needs depth >= 2");
  const Word from("01"), to("00");
  return TreeMap::from_deepest(PrunedTree::full(depth), [&](const Word& w) {
    return from.is_prefix_of(w) ? to.concat(Word(w.str().substr(2))) : w;
  });
}

TreeMap full_overlap(int depth) {
  if (depth < 1) throw Error(ErrorCode::kInvalidArgument, "full-overlap needs depth >= 1");
  return TreeMap::from_deepest(PrunedTree::full(depth), [](const Word& w) { return Word("0").concat(Word(w.str().substr(1))); });
}

namespace {

std::vector<Word> gluing_leaves(int depth, const Word& u) {
  std::vector<Word> leaves;
  for (const Word& w : all_words(depth)) {
    if (!u.is_prefix_of(w)) {
      leaves.push_back(w);
      continue;
    }
    const Word v(w.str().substr(static_cast<std::size_t>(u.size()) + 1));
    const bool side = w[u.size()] == 1;
    if (side ? zeros_then_ones(v) : ones(v) <= 1) leaves.push_back(w);
  }
  return leaves;
}

Word glue(const Word& w, const Word& u) {
  if (u.is_prefix_of(w) && w[u.size()] == 1) {
    std::string s = w.str();
    s[static_cast<std::size_t>(u.size())] = '0';
    return Word(s);
  }
  return w;
}

}  // namespace

TreeMap gluing(int depth, const Word& u) {
  if (depth < u.size() + 2) throw Error(ErrorCode::kInvalidArgument, "gluing needs depth >= |u| + 2");
  const auto leaves = gluing_leaves(depth, u);
  return TreeMap::from_deepest(PrunedTree::from_leaves(depth, leaves), [&](const Word& w) { return glue(w, u); });
}

Automorphism Automorphism::random(int depth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Automorphism a;
  a.depth = depth;
  for (int d = 0; d < depth; ++d) {
    std::vector<bool> lvl(std::size_t{1} << d);
    for (std::size_t i = 0; i < lvl.size(); ++i) lvl[i] = (rng() & 1U) != 0;
    a.swap.push_back(std::move(lvl));
  }
  return a;
}

Word Automorphism::apply(const Word& w) const {
  std::string out = w.str();
  for (int i = 0; i < w.size(); ++i)
    if (swap[static_cast<std::size_t>(i)][w.prefix(i).index()]) out[static_cast<std::size_t>(i)] ^= 1;
  return Word(out);
}

Word Automorphism::invert(const Word& w) const {
  std::string out;
  for (int i = 0; i < w.size(); ++i) {
    const bool s = swap[static_cast<std::size_t>(i)][Word(out).index()];
    out.push_back(static_cast<char>('0' + (w[i] ^ (s ? 1 : 0))));
  }
  return Word(out);
}

TreeMap seeded_gluing(int depth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int len = static_cast<int>(rng() % 3);
  const Word u = Word::from_index(len ? rng() % (std::uint64_t{1} << len) : 0, len);
  if (depth < u.size() + 2) throw Error(ErrorCode::kInvalidArgument, "seeded gluing needs depth >= 4");
  const Automorphism s1 = Automorphism::random(depth, rng());
  const Automorphism s2 = Automorphism::random(depth, rng());
  std::vector<Word> leaves;
  for (const Word& y : gluing_leaves(depth, u)) leaves.push_back(s1.apply(y));
  return TreeMap::from_deepest(PrunedTree::from_leaves(depth, leaves),
                               [&](const Word& w) { return s2.apply(glue(s1.invert(w), u)); });
}

TreeMap by_name(const std::string& name, int depth, std::uint64_t seed) {
  if (name == "identity") return TreeMap::identity(depth);
  if (name == "bit-flip") return bit_flip(depth);
  if (name == "collapse-pair") return collapse_pair(depth);
  if (name == "full-overlap") return full_overlap(depth);
  if (name == "gluing") return seeded_gluing(depth, seed);
  throw Error(ErrorCode::kSchema, "unknown map '" + name + "' (identity, bit-flip, collapse-pair, full-overlap, gluing)");
}

}  // namespace jnlab::maps
