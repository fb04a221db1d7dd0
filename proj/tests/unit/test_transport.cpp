#include <set>
#include <vector>

#include "doctest.h"
#include "gen.hpp"
#include "jnlab/error.hpp"
#include "jnlab/jn.hpp"
#include "jnlab/maps.hpp"
#include "jnlab/verify.hpp"

using namespace jnlab;
using namespace jnlab::jn;

namespace {

Clopen cyl(const char* w) { return Clopen::cylinder(Word(w)); }

std::vector<Point> comb(std::size_t n) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(comb_point(i));
  return out;
}

FsMeasure half_pair(const Point& a, const Point& b) {
  return FsMeasure({{a, Rational(1, 2)}, {b, Rational(-1, 2)}});
}

}  // namespace

TEST_SUITE("transport") {
  TEST_CASE("preimage selection") {
    const Point x(Word("0110"), 1);
    CHECK(select_preimage(TreeMap::identity(6), x, 6) == x);
    CHECK(select_preimage(maps::bit_flip(6), Point::constant(0), 6) == Point::constant(1));
    // [00] and [01] both land on the [00] side; the leftmost branch wins
    CHECK(select_preimage(maps::collapse_pair(4), Point::constant(0), 4) == Point::constant(0));
    CHECK(select_preimage(maps::collapse_pair(4), Point(Word("001"), 0), 4) == Point(Word("001"), 0));
    try {
      (void)select_preimage(maps::collapse_pair(4), Point(Word("01"), 0), 2);
      FAIL("expected no-preimage");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNoPreimage);
    }
  }

  TEST_CASE("transport examples") {
    for (unsigned n = 0; n < 6; ++n) CHECK(transport(TreeMap::identity(8), n, 8).measure == standard_fsjn(n));
    CHECK(transport(maps::bit_flip(6), 0, 6).measure == half_pair(Point::constant(0), Point::constant(1)));
    CHECK(transport(TreeMap::identity(6), 1, 6).measure.eval(cyl("01")) == Rational(1, 4));
    CHECK_FALSE(transport(maps::bit_flip(6), 3, 6).hypothesis_violated);
    CHECK(transport(maps::bit_flip(6), 3, 6).max_overlap == 0);
    CHECK_THROWS_AS(transport(maps::collapse_pair(6), 1, 6), Error);
    CHECK_THROWS_AS(transport(TreeMap::identity(4), 4, 4), Error);
  }

  TEST_CASE("transported terms have norm 1 through automorphisms") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const maps::Automorphism a = maps::Automorphism::random(7, seed);
      const TreeMap f = TreeMap::from_deepest(cantor::PrunedTree::full(7), [&](const Word& w) { return a.apply(w); });
      for (unsigned n = 0; n < 5; ++n) {
        const TransportResult r = transport(f, n, 7);
        CHECK(r.measure.norm() == 1);
        CHECK_FALSE(r.hypothesis_violated);
      }
      const auto tests = verify::family_sets(verify::Family::cylinders(), 5);
      for (unsigned n = 0; n < 5; ++n) CHECK(transport_bound_check(f, n, tests).holds);
    }
  }

  TEST_CASE("overlap examples") {
    CHECK(overlap_measure(TreeMap::identity(4), cyl("010"), 4) == 0);
    CHECK(overlap_measure(maps::full_overlap(4), cyl("0"), 1) == Rational(1, 2));
    CHECK(overlap_measure(maps::bit_flip(4), cyl("0"), 1) == 0);
    CHECK(overlap_measure(maps::collapse_pair(4), cyl("01"), 4) == Rational(1, 4));
  }

  TEST_CASE("boundary check examples") {
    const BoundaryReport id = image_boundary_check(TreeMap::identity(6), cyl("0110"), 4);
    CHECK(id.hypothesis_satisfied);
    CHECK(id.holds);
    CHECK(id.overlap.is_empty());
    CHECK(id.boundary.is_empty());

    const BoundaryReport glued = image_boundary_check(maps::gluing(6, Word()), cyl("0"), 4);
    CHECK(glued.hypothesis_satisfied);
    CHECK(glued.holds);
    CHECK(glued.overlap == cyl("0000"));
    CHECK(glued.boundary == cyl("0000"));

    const BoundaryReport full = image_boundary_check(maps::full_overlap(6), cyl("0"), 4);
    CHECK_FALSE(full.hypothesis_satisfied);
    CHECK_FALSE(full.note.empty());

    CHECK_THROWS_AS(image_boundary_check(TreeMap::identity(4), cyl("0"), 4), Error);
  }

  TEST_CASE("seeded gluing maps are irreducible and satisfy the boundary identity") {
    gen::Gen g(77);
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const TreeMap f = maps::seeded_gluing(6, seed);
      CHECK(irreducible_through(f, 4));
      for (int i = 0; i < 20; ++i) {
        const BoundaryReport r = image_boundary_check(f, g.clopen(4), 4);
        CHECK(r.hypothesis_satisfied);
        CHECK(r.holds);
      }
    }
    CHECK_FALSE(irreducible_through(maps::full_overlap(6), 2));
  }
}

TEST_SUITE("disjointify") {
  TEST_CASE("scattered pairs give the hand-derived terms") {
    const DisjointifyResult r = disjointify(scattered_jn(comb(32), Point::constant(0), 4), 32);
    CHECK(r.verified);
    REQUIRE(r.terms.size() == 16);
    for (std::size_t k = 0; k < 16; ++k) CHECK(r.terms[k] == half_pair(comb_point(2 * k), comb_point(2 * k + 1)));
    CHECK(r.limit_weights.size() == 1);
    CHECK(r.limit_weights.at(Point::constant(0)) == Rational(-1, 2));
  }

  TEST_CASE("disjoint input with no limit part pairs consecutive terms") {
    std::vector<FsMeasure> terms;
    for (std::size_t n = 0; n < 16; ++n) terms.push_back(half_pair(comb_point(2 * n), comb_point(2 * n + 1)));
    const DisjointifyResult r = disjointify(from_terms("moving-pairs", terms), 16);
    CHECK(r.verified);
    CHECK(r.limit_weights.empty());
    REQUIRE(r.terms.size() == 8);
    for (std::size_t k = 0; k < 8; ++k) CHECK(r.terms[k] == (terms[2 * k] - terms[2 * k + 1]) * Rational(1, 2));
  }

  TEST_CASE("constant sequences are degenerate") {
    const std::vector<FsMeasure> same(12, half_pair(Point::constant(1), Point::constant(0)));
    try {
      (void)disjointify(from_terms("constant", same), 12);
      FAIL("expected degenerate");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDegenerate);
    }
  }

  TEST_CASE("short horizons are rejected") {
    try {
      (void)disjointify(scattered_jn(comb(8), Point::constant(0), 2), 3);
      FAIL("expected insufficient horizon");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInsufficientHorizon);
    }
  }

  TEST_CASE("random inputs give disjoint norm-1 outputs") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const DisjointifyResult r = disjointify(random_pair_sequence(seed, 32), 32);
      CHECK(r.failures.empty());
      std::set<Point> seen;
      for (const FsMeasure& t : r.terms) {
        CHECK(t.norm() == 1);
        for (const auto& [x, w] : t.atoms()) CHECK(seen.insert(x).second);
      }
    }
  }
}
