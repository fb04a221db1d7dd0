#include <vector>

#include "doctest.h"
#include "gen.hpp"
#include "jnlab/error.hpp"
#include "jnlab/systems.hpp"

using namespace jnlab;
using namespace jnlab::systems;

namespace {

std::vector<std::string> strs(const std::vector<Word>& ws) {
  std::vector<std::string> out;
  for (const Word& w : ws) out.push_back(w.str());
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

Policy random_custom(gen::Gen& g, std::size_t steps) {
  std::vector<std::size_t> splits;
  for (std::size_t t = 0; t < steps; ++t) splits.push_back(g.below(t + 1));
  return Policy::custom(splits);
}

}  // namespace

TEST_SUITE("systems") {
  TEST_CASE("policy examples") {
    const SimpleSystem rr = build_system(Policy::round_robin(), 3);
    CHECK(rr.splits() == std::vector<std::size_t>{0, 0, 1});
    CHECK(strs(rr.codes()) == std::vector<std::string>{"00", "10", "01", "11"});

    const SimpleSystem fp = build_system(Policy::fixed_point(), 3);
    CHECK(strs(fp.codes()) == std::vector<std::string>{"000", "1", "01", "001"});
    CHECK(fp.settled_depth() == 3);

    const SimpleSystem cu = build_system(Policy::custom({0, 1}), 2);
    CHECK(strs(cu.codes()) == std::vector<std::string>{"0", "10", "11"});
    CHECK(cu.bond(1, 2) == 1);
    CHECK(cu.bond(1, 0) == 0);
    CHECK(cu.project(2, 0, 2) == 0);
    CHECK(strs(cu.codes_at(1)) == std::vector<std::string>{"0", "1"});
  }

  TEST_CASE("round-robin with a prefix only refines under it") {
    const SimpleSystem s = build_system(Policy::round_robin("1"), 7);
    for (std::size_t x = 0; x < s.codes().size(); ++x)
      if (x != 0) CHECK(s.codes()[x].str().front() == '1');
    CHECK(s.codes()[0].str() == "0");
  }

  TEST_CASE("build errors") {
    CHECK(code_of([] { build_system(Policy::round_robin(), 0); }) == ErrorCode::kInvalidArgument);
    CHECK(code_of([] { build_system(Policy::custom({0, 5}), 2); }) == ErrorCode::kInvalidSplitIndex);
    CHECK(code_of([] { build_system(Policy::fixed_point(1), 2); }) == ErrorCode::kInvalidSplitIndex);
    CHECK(code_of([] { limit_tree(build_system(Policy::fixed_point(), 3), 4); }) == ErrorCode::kDepthExceeded);
    CHECK(code_of([] { parse_policy("zigzag"); }) == ErrorCode::kSchema);
  }

  TEST_CASE("json round trip") {
    gen::Gen g(31);
    for (int i = 0; i < 20; ++i) {
      const std::size_t steps = 1 + g.below(20);
      const SimpleSystem s = build_system(random_custom(g, steps), steps);
      CHECK(SimpleSystem::from_json(s.to_json()).splits() == s.splits());
    }
    const SimpleSystem fp = build_system(Policy::fixed_point(), 5);
    CHECK(SimpleSystem::from_json(fp.to_json()).codes() == fp.codes());
    const SimpleSystem rr = build_system(Policy::round_robin("01"), 9);
    CHECK(SimpleSystem::from_json(rr.to_json()).codes() == rr.codes());
    nlohmann::json bad = rr.to_json();
    bad["splits"][3] = 0;
    CHECK(code_of([&] { SimpleSystem::from_json(bad); }) == ErrorCode::kSchema);
  }

  TEST_CASE("bonding maps compose along random systems") {
    gen::Gen g(32);
    for (int i = 0; i < 40; ++i) {
      const std::size_t steps = 1 + g.below(14);
      const SimpleSystem s = build_system(random_custom(g, steps), steps);
      CHECK(check_bonding_law(s));
      CHECK(s.codes_at(steps) == s.codes());
      for (std::size_t t = 0; t < steps; ++t) CHECK(check_simple_extension_boundaries(s, t, static_cast<int>(steps)));
    }
  }

  TEST_CASE("limits are irreducible") {
    CHECK(check_irreducible(build_system(Policy::round_robin(), 15), 3));
    CHECK(check_irreducible(build_system(Policy::fixed_point(), 6), 4));
    gen::Gen g(33);
    for (int i = 0; i < 20; ++i) {
      const std::size_t steps = 1 + g.below(10);
      CHECK(check_irreducible(build_system(random_custom(g, steps), steps), 2));
    }
  }

  TEST_CASE("classification") {
    ClassifyStats st;
    const Witness sc = classify(build_system(Policy::fixed_point(), 32), 32, &st);
    REQUIRE(std::holds_alternative<ScatteredWitness>(sc));
    CHECK(st.scattered_threshold == 6);
    CHECK(std::get<ScatteredWitness>(sc).limit == Point::constant(0));
    CHECK(std::get<ScatteredWitness>(sc).points.size() >= 6);

    const Witness pf = classify(build_system(Policy::round_robin(), 31), 31, &st);
    REQUIRE(std::holds_alternative<PerfectWitness>(pf));
    CHECK(st.perfect_threshold == 4);
    CHECK(std::get<PerfectWitness>(pf).full_depth >= 4);

    CHECK(code_of([] { classify(build_system(Policy::round_robin(), 1), 1); }) == ErrorCode::kInconclusiveAtBudget);
    CHECK(code_of([] { classify(build_system(Policy::round_robin(), 3), 4); }) == ErrorCode::kInvalidArgument);
  }

  TEST_CASE("mass rules") {
    const NodeMeasure half(build_system(Policy::round_robin(), 3), MassRule::half_half());
    CHECK(half.final_masses() == std::vector<Rational>(4, Rational(1, 4)));
    CHECK(half.stage_masses(1) == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    CHECK(half.node_masses(2) == std::vector<Rational>(4, Rational(1, 4)));

    const NodeMeasure third(build_system(Policy::fixed_point(), 2), MassRule::proportional(Rational(1, 3)));
    CHECK(third.final_masses() == std::vector<Rational>{Rational(1, 9), Rational(2, 3), Rational(2, 9)});

    const NodeMeasure cond = half.conditioned(Word("1"));
    CHECK(cond.final_masses() == std::vector<Rational>{Rational(0), Rational(1, 2), Rational(0), Rational(1, 2)});
    CHECK_THROWS_AS(NodeMeasure(build_system(Policy::round_robin(), 1), MassRule::proportional(Rational(3, 2))), Error);
  }

  TEST_CASE("stage masses agree with the forward rule") {
    gen::Gen g(34);
    for (int i = 0; i < 30; ++i) {
      const std::size_t steps = 1 + g.below(16);
      const Rational r(static_cast<unsigned long>(1 + g.below(6)), 7UL);
      const NodeMeasure m(build_system(random_custom(g, steps), steps), MassRule::proportional(r));
      for (std::size_t t = 0; t <= steps; ++t) {
        CHECK(m.stage_masses(t) == m.forward_masses(t));
        Rational sum = 0;
        for (const Rational& w : m.stage_masses(t)) sum += w;
        CHECK(sum == 1);
      }
    }
  }

  TEST_CASE("greedy uniform enumeration") {
    const NodeMeasure m(build_system(Policy::round_robin(), 7), MassRule::half_half());
    const auto pts = ud_sequence(m, 3, 8);
    CHECK(pts.front() == Point::constant(0));
    CHECK(std::set<Point>(pts.begin(), pts.end()).size() == 8);
    CHECK(ud_point(m, 3, 5) == pts[5]);
    // every dyadic block of 2^k consecutive points hits each depth-k node once
    for (int k = 1; k <= 3; ++k) {
      const std::size_t block = std::size_t{1} << k;
      for (std::size_t start = 0; start + block <= pts.size(); start += block) {
        std::set<Word> heads;
        for (std::size_t i = start; i < start + block; ++i) heads.insert(pts[i].head(k));
        CHECK(heads.size() == block);
      }
    }
    CHECK(code_of([&] { ud_sequence(m, 3, 9); }) == ErrorCode::kAtomicMeasure);
    const NodeMeasure atomic(build_system(Policy::fixed_point(), 6), MassRule::half_half());
    CHECK(code_of([&] { ud_sequence(atomic, 4, 2); }) == ErrorCode::kAtomicMeasure);
  }

  TEST_CASE("pipeline on both branches") {
    PipelineOptions opt;
    const PipelineResult sc = fsjnp_pipeline(build_system(Policy::fixed_point(), 32), opt);
    CHECK(std::holds_alternative<ScatteredWitness>(sc.witness));
    CHECK(sc.check.passed);

    opt.terms = 4;
    opt.budget = 63;
    const PipelineResult pf = fsjnp_pipeline(build_system(Policy::round_robin(), 63), opt);
    CHECK(std::holds_alternative<PerfectWitness>(pf.witness));
    CHECK(pf.check.verdict.norms_exact_one);
    for (const auto& row : pf.check.verdict.rows) CHECK(row.norm == 1);
  }
}
