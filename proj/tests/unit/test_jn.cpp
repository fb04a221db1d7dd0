#include <string>
#include <vector>

#include "doctest.h"
#include "gen.hpp"
#include "jnlab/error.hpp"
#include "jnlab/jn.hpp"
#include "jnlab/verify.hpp"
#include "uds_table.hpp"

using namespace jnlab;
using namespace jnlab::jn;

namespace {

Clopen cyl(const char* w) { return Clopen::cylinder(Word(w)); }

std::vector<Point> comb(std::size_t n) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(comb_point(i));
  return out;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInvalidArgument;
}

// tests/oracles/truncation.py: n, head norm, normalized head weights
struct TruncRow {
  std::size_t n;
  const char* head_norm;
  std::vector<const char*> weights;
};
const TruncRow kTruncOracle[] = {
    {1, "1/2", {"-1"}},
    {2, "3/4", {"-2/3", "1/3"}},
    {3, "3/4", {"-2/3", "1/3"}},
    {4, "7/8", {"-4/7", "2/7", "1/7"}},
    {5, "7/8", {"-4/7", "2/7", "1/7"}},
    {8, "15/16", {"-8/15", "4/15", "2/15", "1/15"}},
};

}  // namespace

TEST_SUITE("jn") {
  TEST_CASE("scattered pair sequence") {
    const MeasureSequence seq = scattered_jn(comb(16), Point::constant(0), 6);
    CHECK(term_eval(seq.term(2), cyl("1")) == 0);
    CHECK(term_eval(seq.term(0), cyl("1")) == Rational(1, 2));
    for (std::size_t n = 0; n < 16; ++n) CHECK(term_norm(seq.term(n)) == 1);
    CHECK_THROWS_AS(seq.term(16), Error);
  }

  TEST_CASE("scattered pair sequence vanishes once the point is inside every tested cylinder around the limit") {
    const MeasureSequence seq = scattered_jn(comb(20), Point::constant(0), 8);
    gen::Gen g(12);
    for (int i = 0; i < 200; ++i) {
      const Clopen u = g.clopen(8);
      for (std::size_t n = 8; n < 20; ++n) CHECK(term_eval(seq.term(n), u) == 0);
    }
  }

  TEST_CASE("scattered pair sequence checks its input") {
    std::vector<Point> rep = comb(8);
    rep[5] = rep[2];
    CHECK(code_of([&] { scattered_jn(rep, Point::constant(0), 2); }) == ErrorCode::kInjectivity);
    CHECK(code_of([&] { scattered_jn({Point::constant(0)}, Point::constant(0), 1); }) == ErrorCode::kInjectivity);
    std::vector<Point> far;
    for (std::size_t i = 0; i < 8; ++i) far.push_back(Point(Word::repeat(1, static_cast<int>(i) + 1), 0));
    CHECK(code_of([&] { scattered_jn(far, Point::constant(0), 3); }) == ErrorCode::kConvergenceCheck);
  }

  TEST_CASE("standard sequence examples") {
    CHECK(standard_fsjn(0) == FsMeasure({{Point::constant(1), Rational(1, 2)}, {Point::constant(0), Rational(-1, 2)}}));
    CHECK(standard_fsjn(1).eval(cyl("0")) == 0);
    CHECK(standard_fsjn(1).eval(cyl("01")) == Rational(1, 4));
    for (unsigned n = 0; n <= 10; ++n) {
      CHECK(standard_fsjn(n).support_size() == (std::size_t{2} << n));
      CHECK(standard_fsjn(n).norm() == 1);
    }
  }

  TEST_CASE("standard sequence vanishes on clopens of depth <= n") {
    gen::Gen g(13);
    for (unsigned n = 1; n <= 9; ++n) {
      const FsMeasure mu = standard_fsjn(n);
      for (int i = 0; i < 100; ++i) CHECK(mu.eval(g.clopen(static_cast<int>(n))) == 0);
    }
  }

  TEST_CASE("independent sets examples") {
    const DensityMeasure d0 = independent_jn(0);
    CHECK(d0.depth() == 1);
    CHECK(d0.cells() == std::vector<Rational>{Rational(-1, 2), Rational(1, 2)});
    CHECK(independent_jn(1).eval(cyl("1")) == 0);
    gen::Gen g(14);
    for (unsigned n = 0; n <= 10; ++n) {
      CHECK(independent_jn(n).total_variation() == 1);
      for (int i = 0; i < 50; ++i) CHECK(independent_jn(n).eval(g.clopen(static_cast<int>(n))) == 0);
    }
  }

  TEST_CASE("van der Corput points") {
    CHECK(van_der_corput(0) == Point::constant(0));
    CHECK(van_der_corput(3) == Point(Word("11"), 0));
    CHECK(van_der_corput(4) == Point(Word("001"), 0));
    CHECK(van_der_corput(6).to_string() == "011(0)");
  }

  TEST_CASE("partition cells") {
    CHECK(uds_partition(0) == Interval{0, 0});
    CHECK(uds_partition(2) == Interval{3, 6});
    CHECK(make_rational(static_cast<long>(uds_partition(2).size()), uds_partition(2).hi) == Rational(2, 3));
    for (unsigned n = 0; n < 30; ++n) CHECK(uds_partition(n).hi + 1 == uds_partition(n + 1).lo);
    CHECK_THROWS_AS(uds_partition(63), Error);
  }

  TEST_CASE("uds terms match the brute-force oracle") {
    const auto seq = uds_sequence(van_der_corput, "van-der-corput");
    for (const oracle::UdsRow& row : oracle::kUds) {
      const UdsTerm t = uds_to_fsjn(van_der_corput, row.n);
      CHECK(t.raw.norm() == parse_rational(row.norm));
      CHECK(t.raw.norm() >= Rational(1, 2));
      CHECK(t.normalized.norm() == 1);
      const auto sets = verify::family_sets(verify::Family::cylinders(), 6);
      CHECK(verify::max_abs_over(seq.term(row.n - 1), verify::Family::cylinders(), 6, sets).first == parse_rational(row.max_abs));
    }
  }

  TEST_CASE("uds first term follows the formula") {
    const UdsTerm t = uds_to_fsjn(van_der_corput, 1);
    CHECK(t.raw.weight(van_der_corput(0)) == Rational(1, 6) - Rational(1, 2));
    CHECK(t.raw.weight(van_der_corput(1)) == Rational(1, 6) - Rational(1, 2));
    CHECK(t.raw.weight(van_der_corput(5)) == Rational(1, 6));
    CHECK(t.raw.support_size() == 6);
  }

  TEST_CASE("uds errors") {
    CHECK(code_of([] { uds_to_fsjn(van_der_corput, 0); }) == ErrorCode::kInvalidArgument);
    const PointStream repeating = [](std::uint64_t k) { return van_der_corput(k % 4); };
    CHECK(code_of([&] { uds_to_fsjn(repeating, 2); }) == ErrorCode::kInjectivity);
  }

  TEST_CASE("truncation matches the tail-sum oracle") {
    for (const TruncRow& row : kTruncOracle) {
      const auto tr = measures::cs_truncate(geometric_csjn(row.n), Rational(1UL, static_cast<unsigned long>(row.n)));
      CHECK(tr.head.norm() == parse_rational(row.head_norm));
      const FsMeasure mu = truncate_csjn(geometric_csjn, row.n);
      CHECK(mu.norm() == 1);
      REQUIRE(mu.support_size() == row.weights.size());
      const auto head = geometric_csjn(row.n);
      for (std::size_t k = 0; k < row.weights.size(); ++k)
        CHECK(mu.weight(head.term(k)->first) == parse_rational(row.weights[k]));
    }
  }

  TEST_CASE("truncation of a finitely supported input") {
    const FsMeasure mu = standard_fsjn(3);
    const auto finite = [&](std::size_t) { return measures::CsMeasure::from_finite(mu); };
    // 16 atoms of weight 1/16: a tail below 1/5 may keep three of them, below 1/17 none
    CHECK(truncate_csjn(finite, 5).support_size() == 13);
    CHECK(truncate_csjn(finite, 5).norm() == 1);
    CHECK(truncate_csjn(finite, 17) == mu);
    CHECK(code_of([] { truncate_csjn(geometric_csjn, 0); }) == ErrorCode::kInvalidArgument);
  }

  TEST_CASE("random pair sequences are fsJN-shaped") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const MeasureSequence seq = random_pair_sequence(seed, 16);
      for (std::size_t n = 0; n < 16; ++n) {
        const FsMeasure mu = seq.fs_term(n);
        CHECK(mu.norm() == 1);
        CHECK(mu.total_mass() == 0);
        const Word head = mu.atoms().begin()->first.head(static_cast<int>(n) + 1);
        for (const auto& [p, w] : mu.atoms()) CHECK(p.head(static_cast<int>(n) + 1) == head);
      }
    }
  }
}
