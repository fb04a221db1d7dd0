#include <vector>

#include "doctest.h"
#include "gen.hpp"
#include "jnlab/error.hpp"
#include "jnlab/ideal.hpp"

using namespace jnlab;
using namespace jnlab::ideal;

namespace {

nlohmann::json power(const char* c, unsigned e) { return {{"form", "power"}, {"c", c}, {"exponent", e}}; }

// C_i: element 1 + i % 7 of every block from i on, certified by (n+1)^-(1 + i % 7)
std::vector<IdealSet> family(std::size_t count) {
  std::vector<IdealSet> out;
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned j = 1 + static_cast<unsigned>(i % 7);
    out.push_back(block_element(8, j, i, parse_certificate(power("1/1", j))));
  }
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

}  // namespace

TEST_SUITE("ideal") {
  TEST_CASE("block partitions") {
    const WeightedPartition p = blocks(8, BlockWeights::kPoly);
    CHECK(p.cell(2) == std::vector<std::uint64_t>{16, 17, 18, 19, 20, 21, 22, 23});
    CHECK(p.cell_index(17) == 2U);
    CHECK(p.weight(18) == Rational(1, 9));
    CHECK(p.cell_mass(0) == 8);
    CHECK(p.cell_mass(1) == Rational(255, 128));
    CHECK(blocks(4, BlockWeights::kUnit).cell_mass(9) == 4);
    CHECK(parse_partition("blocks:m=8", "poly").cell_mass(1) == Rational(255, 128));
    CHECK(code_of([] { parse_partition("stripes:m=8", "poly"); }) == ErrorCode::kSchema);
    CHECK(code_of([] { parse_partition("blocks:m=8x", "poly"); }) == ErrorCode::kSchema);
    CHECK(code_of([] { parse_partition("blocks:m=8", "cubic"); }) == ErrorCode::kSchema);
  }

  TEST_CASE("certificates") {
    CHECK(parse_certificate(power("1/2", 2))(1) == Rational(1, 8));
    const auto step = parse_certificate({{"form", "step"}, {"value", "1/8"}, {"until", 5}});
    CHECK(step(4) == Rational(1, 8));
    CHECK(step(5) == 0);
    CHECK(code_of([] { parse_certificate({{"form", "power"}, {"c", "-1"}, {"exponent", 1}}); }) == ErrorCode::kSchema);
    CHECK(code_of([] { parse_certificate({{"form", "power"}, {"c", "1"}, {"exponent", -1}}); }) == ErrorCode::kSchema);
    CHECK(code_of([] { parse_certificate({{"form", "log"}}); }) == ErrorCode::kSchema);
  }

  TEST_CASE("set parsing and ratios") {
    const WeightedPartition p = blocks(8, BlockWeights::kPoly);
    const auto sets = parse_sets(nlohmann::json::parse(R"({"sets": [
      {"kind": "block-element", "index": 1, "certificate": {"form": "power", "c": "1", "exponent": 1}},
      {"kind": "finite", "elements": [3, 9], "certificate": {"form": "step", "value": "1", "until": 2}}
    ]})"),
                                 8);
    REQUIRE(sets.size() == 2);
    CHECK(ratio(p, sets[0], 1) == Rational(64, 255));
    CHECK(ratio(p, sets[1], 0) == Rational(1, 8));
    CHECK(ratio(p, sets[1], 1) == Rational(64, 255));
    CHECK(ratio(p, sets[1], 2) == 0);
    CHECK(code_of([] { parse_set({{"kind", "block-element"}, {"index", 8}, {"certificate", power("1", 1)}}, 8); }) ==
          ErrorCode::kSchema);
    CHECK(code_of([] { parse_set({{"kind", "finite"}, {"elements", {1}}}, 8); }) == ErrorCode::kSchema);
  }

  TEST_CASE("certificates of the test family dominate the ratios") {
    const WeightedPartition p = blocks(8, BlockWeights::kPoly);
    for (const IdealSet& c : family(14))
      for (std::uint64_t n = 0; n < 200; ++n) CHECK(ratio(p, c, n) <= c.certificate(n));
  }

  TEST_CASE("pseudo-union schedule and verification") {
    const WeightedPartition p = blocks(8, BlockWeights::kPoly);
    const auto cs = family(20);
    const PseudoUnion u = pseudo_union(p, cs, 4);
    CHECK(u.schedule == std::vector<std::uint64_t>{1, 2, 3, 4});
    const PseudoUnion full = pseudo_union(p, cs, 20);
    const PseudoUnionReport rep = verify_pseudo_union(p, cs, full.set, full.schedule, 4096);
    CHECK(rep.passed());
    CHECK(rep.containment_checks > 0);
    CHECK(rep.ratio_checks > 0);
  }

  TEST_CASE("pseudo-unions contain each set past its schedule entry") {
    const WeightedPartition p = blocks(8, BlockWeights::kPoly);
    const auto cs = family(10);
    const PseudoUnion u = pseudo_union(p, cs, 10);
    gen::Gen g(41);
    for (int i = 0; i < 500; ++i) {
      const std::size_t k = g.below(10);
      const std::uint64_t e = g.below(4000);
      if (cs[k].contains(e) && e / 8 > u.schedule[k]) CHECK(u.set.contains(e));
      if (u.set.contains(e)) {
        bool some = false;
        for (const IdealSet& c : cs) some = some || c.contains(e);
        CHECK(some);
      }
    }
  }

  TEST_CASE("corrupted schedules are reported") {
    const WeightedPartition p = blocks(8, BlockWeights::kPoly);
    const auto cs = family(4);
    const std::vector<std::uint64_t> bad{1, 2, 3, 3};
    const IdealSet c = union_from_schedule(p, cs, bad);
    const PseudoUnionReport rep = verify_pseudo_union(p, cs, c, bad, 1024);
    REQUIRE_FALSE(rep.passed());
    CHECK(rep.violations.front().check == "schedule");
    CHECK(rep.violations.front().k == 3);

    // C keeps only C_0: elements of C_1 past n_1 are missing from it
    const IdealSet thin = union_from_schedule(p, cs, {1});
    const PseudoUnionReport miss = verify_pseudo_union(p, cs, thin, {1, 2, 3, 4}, 1024);
    REQUIRE_FALSE(miss.passed());
    CHECK(miss.violations.front().check == "containment");
    CHECK(miss.violations.front().k == 1);
  }

  TEST_CASE("a certificate that never decays stalls the search") {
    const WeightedPartition p = blocks(8, BlockWeights::kUnit);
    std::vector<IdealSet> cs;
    for (std::uint64_t i = 0; i < 4; ++i) cs.push_back(block_element(8, i, 0, parse_certificate(power("1/8", 0))));
    try {
      (void)pseudo_union(p, cs, 4, 1000);
      FAIL("expected a stalled search");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kScheduleSearch);
      CHECK(std::string(e.what()).find("k = 2") != std::string::npos);
    }
    CHECK(code_of([&] { pseudo_union(p, cs, 5); }) == ErrorCode::kInvalidArgument);
  }
}
