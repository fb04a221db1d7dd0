#include <vector>

#include "doctest.h"
#include "gen.hpp"
#include "jnlab/error.hpp"
#include "jnlab/jn.hpp"
#include "jnlab/measures.hpp"

using namespace jnlab;
using namespace jnlab::measures;
using cantor::Clopen;
using cantor::Point;
using cantor::Word;

namespace {

const Point kOnes = Point::constant(1);
const Point kZeros = Point::constant(0);

Clopen cyl(const char* w) { return Clopen::cylinder(Word(w)); }

FsMeasure half_pair(const Point& a, const Point& b) {
  return FsMeasure({{a, Rational(1, 2)}, {b, Rational(-1, 2)}});
}

// weights 2^-(k+1) on 0^k 1^omega
CsMeasure geometric() {
  CsMeasure cs;
  cs.term = [](std::size_t k) -> std::optional<std::pair<Point, Rational>> {
    return std::make_pair(Point(Word::repeat(0, static_cast<int>(k)), 1), pow2_inv(static_cast<unsigned>(k + 1)));
  };
  cs.tail_bound = [](std::size_t m) { return pow2_inv(static_cast<unsigned>(m)); };
  return cs;
}

std::vector<std::pair<Clopen, Clopen>> disjoint_pairs(int depth) {
  std::vector<std::pair<Clopen, Clopen>> out;
  const std::size_t w = std::size_t{1} << depth;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < w; ++i) total *= 3;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::vector<bool> a(w), b(w);
    std::uint64_t c = code;
    for (std::size_t i = 0; i < w; ++i, c /= 3) {
      a[i] = c % 3 == 1;
      b[i] = c % 3 == 2;
    }
    out.emplace_back(Clopen::from_mask(depth, a), Clopen::from_mask(depth, b));
  }
  return out;
}

}  // namespace

TEST_SUITE("measures") {
  TEST_CASE("eval examples") {
    CHECK(eval(FsMeasure::dirac(kOnes), cyl("1")) == 1);
    CHECK(eval(half_pair(kOnes, kZeros), cyl("0")) == Rational(-1, 2));
    const FsMeasure mu({{kOnes, Rational(1, 3)}, {kZeros, Rational(1, 5)}});
    CHECK(eval(mu, Clopen::full()) == mu.total_mass());
  }

  TEST_CASE("norm examples and coalescing") {
    CHECK(norm(half_pair(kOnes, kZeros)) == 1);
    CHECK(norm(FsMeasure()) == 0);
    FsMeasure mu;
    mu.add(kOnes, Rational(1, 4));
    mu.add(Point(Word("111"), 1), Rational(1, 4));
    CHECK(mu.support_size() == 1);
    CHECK(norm(mu) == Rational(1, 2));
    mu.add(kOnes, Rational(-1, 2));
    CHECK(mu.is_zero());
  }

  TEST_CASE("restrict examples") {
    const FsMeasure mu = half_pair(kOnes, kZeros);
    CHECK(mu.restrict(Clopen::full()) == mu);
    CHECK(mu.restrict(std::set<Point>{kOnes}) == FsMeasure::dirac(kOnes, Rational(1, 2)));
    CHECK(mu.restrict(Clopen::empty()).is_zero());
  }

  TEST_CASE("normalize examples") {
    const FsMeasure quarter({{kOnes, Rational(1, 4)}, {kZeros, Rational(-1, 4)}});
    CHECK(quarter.normalize() == half_pair(kOnes, kZeros));
    CHECK(half_pair(kOnes, kZeros).normalize() == half_pair(kOnes, kZeros));
    try {
      (void)FsMeasure().normalize();
      FAIL("expected zero-measure");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kZeroMeasure);
    }
  }

  TEST_CASE("density examples") {
    CHECK(density_eval(DensityMeasure::lebesgue(), cyl("01")) == Rational(1, 4));
    const DensityMeasure d(2, {Rational(1, 8), Rational(-1, 2), Rational(0), Rational(1, 4)});
    CHECK(density_eval(d, Clopen::full()) == Rational(-1, 8));
    CHECK(density_eval(jn::independent_jn(1), cyl("0")) == 0);
    CHECK(d.total_variation() == Rational(7, 8));
  }

  TEST_CASE("density refinement leaves evaluations unchanged") {
    gen::Gen g(21);
    for (int i = 0; i < 50; ++i) {
      const int depth = static_cast<int>(g.below(4));
      std::vector<Rational> cells(std::size_t{1} << depth);
      for (auto& c : cells) c = g.weight();
      const DensityMeasure d(depth, cells);
      const DensityMeasure fine = d.refine(depth + 3);
      CHECK(fine.total_variation() == d.total_variation());
      for (int k = 0; k < 20; ++k) {
        const Clopen u = g.clopen(7);
        CHECK(fine.eval(u) == d.eval(u));
      }
    }
  }

  TEST_CASE("additivity, exhaustive over disjoint pairs at depth 3") {
    gen::Gen g(4);
    const FsMeasure mu = g.measure(12, 5);
    for (const auto& [a, b] : disjoint_pairs(3)) CHECK(mu.eval(a.join(b)) == mu.eval(a) + mu.eval(b));
  }

  TEST_CASE("additivity, random disjoint pairs up to depth 8") {
    gen::Gen g(5);
    for (int i = 0; i < 300; ++i) {
      const FsMeasure mu = g.measure(10, 10);
      const Clopen a = g.clopen(8);
      const Clopen b = g.clopen(8).difference(a);
      CHECK(mu.eval(a.join(b)) == mu.eval(a) + mu.eval(b));
    }
  }

  TEST_CASE("norm is a norm") {
    gen::Gen g(6);
    for (int i = 0; i < 300; ++i) {
      const FsMeasure a = g.measure(6, 4), b = g.measure(6, 4);
      const Rational c = g.weight();
      CHECK((a + b).norm() <= a.norm() + b.norm());
      CHECK((a * c).norm() == abs(c) * a.norm());
      CHECK((a - a).is_zero());
    }
  }

  TEST_CASE("restrict decomposes the measure") {
    gen::Gen g(8);
    for (int i = 0; i < 300; ++i) {
      const FsMeasure mu = g.measure(10, 8);
      const Clopen u = g.clopen(6);
      CHECK(mu.restrict(u) + mu.restrict(u.complement()) == mu);
      CHECK(mu.restrict(u).norm() + mu.restrict(u.complement()).norm() == mu.norm());
    }
  }

  TEST_CASE("cell masses sum to the total mass") {
    gen::Gen g(9);
    for (int i = 0; i < 50; ++i) {
      const FsMeasure mu = g.measure(8, 6);
      const auto cells = mu.cell_masses(4);
      Rational sum = 0;
      for (const auto& c : cells) sum += c;
      CHECK(sum == mu.total_mass());
      CHECK(cells[5] == mu.eval(cyl("0101")));
    }
  }

  TEST_CASE("cs_truncate examples") {
    const Truncation t = cs_truncate(geometric(), Rational(1, 5));
    CHECK(t.length == 3);
    CHECK(t.tail_certificate == Rational(1, 8));
    CHECK(t.head.norm() == Rational(7, 8));

    const FsMeasure mu = half_pair(kOnes, kZeros);
    const Truncation all = cs_truncate(CsMeasure::from_finite(mu), Rational(1, 1000));
    CHECK(all.head == mu);
    CHECK(all.tail_certificate == 0);

    const Truncation none = cs_truncate(geometric(), Rational(2));
    CHECK(none.length == 0);
    CHECK(none.head.is_zero());
  }

  TEST_CASE("cs_truncate rejects repeated points and exhausted streams") {
    CsMeasure rep;
    rep.term = [](std::size_t) -> std::optional<std::pair<Point, Rational>> { return std::make_pair(kOnes, Rational(1, 4)); };
    rep.tail_bound = [](std::size_t m) -> Rational { return Rational(1) / (m + 1); };
    CHECK_THROWS_AS(cs_truncate(rep, Rational(1, 10)), Error);

    CsMeasure stuck = geometric();
    stuck.tail_bound = [](std::size_t) { return Rational(1); };
    try {
      (void)cs_truncate(stuck, Rational(1, 2), 100);
      FAIL("expected certificate error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kCertificate);
    }
  }
}
