#pragma once

// Hand-rolled generators for property tests. Everything is drawn from a
// seeded mt19937_64 so failures replay exactly.

#include <cstdint>
#include <random>
#include <vector>

#include "jnlab/cantor.hpp"
#include "jnlab/measures.hpp"

namespace gen {

using jnlab::Rational;
using jnlab::cantor::Clopen;
using jnlab::cantor::Point;
using jnlab::cantor::Word;
using jnlab::measures::FsMeasure;

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  std::uint64_t below(std::uint64_t n) { return rng() % n; }
  int bit() { return static_cast<int>(rng() & 1U); }

  Word word(int max_len) {
    const int len = static_cast<int>(below(static_cast<std::uint64_t>(max_len) + 1));
    return word_of(len);
  }
  Word word_of(int len) { return Word::from_index(len ? rng() % (std::uint64_t{1} << len) : 0, len); }

  Point point(int max_prefix) { return Point(word(max_prefix), bit()); }

  Clopen clopen(int max_depth) {
    const int d = static_cast<int>(below(static_cast<std::uint64_t>(max_depth) + 1));
    std::vector<bool> mask(std::size_t{1} << d);
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = bit() != 0;
    return Clopen::from_mask(d, std::move(mask));
  }

  // small signed rational p/q with |p| <= 8, q in 1..8
  Rational weight() {
    Rational q(static_cast<long>(below(17)) - 8, static_cast<unsigned long>(below(8) + 1));
    q.canonicalize();
    return q;
  }

  FsMeasure measure(int atoms, int max_prefix) {
    FsMeasure mu;
    for (int i = 0; i < atoms; ++i) mu.add(point(max_prefix), weight());
    return mu;
  }
};

}  // namespace gen
