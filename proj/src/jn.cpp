#include "jnlab/jn.hpp"

#include <random>
#include <set>

#include "jnlab/error.hpp"

namespace jnlab::jn {

Rational term_norm(const Term& t) {
  if (const auto* fs = std::get_if<FsMeasure>(&t)) return fs->norm();
  return std::get<DensityMeasure>(t).total_variation();
}

Rational term_eval(const Term& t, const Clopen& u) {
  if (const auto* fs = std::get_if<FsMeasure>(&t)) return fs->eval(u);
  return std::get<DensityMeasure>(t).eval(u);
}

std::vector<Rational> term_cells(const Term& t, int depth) {
  if (const auto* fs = std::get_if<FsMeasure>(&t)) return fs->cell_masses(depth);
  const auto& dm = std::get<DensityMeasure>(t);
  if (dm.depth() <= depth) return dm.refine(depth).cells();
  const int shift = dm.depth() - depth;
  std::vector<Rational> out(std::size_t{1} << depth, Rational(0));
  for (std::size_t j = 0; j < dm.cells().size(); ++j) out[j >> shift] += dm.cells()[j];
  return out;
}

Term MeasureSequence::term(std::size_t n) const {
  if (length && n >= *length)
    throw Error(ErrorCode::kInvalidArgument,
                name + " has " + std::to_string(*length) + " terms, index " + std::to_string(n) + " requested");
  return generator(n);
}

FsMeasure MeasureSequence::fs_term(std::size_t n) const {
  Term t = term(n);
  if (auto* fs = std::get_if<FsMeasure>(&t)) return std::move(*fs);
  throw Error(ErrorCode::kInvalidArgument, name + " is not finitely supported");
}

MeasureSequence from_terms(std::string name, std::vector<FsMeasure> terms, int working_depth) {
  MeasureSequence seq;
  seq.name = std::move(name);
  seq.working_depth = working_depth;
  seq.length = terms.size();
  seq.generator = [terms = std::move(terms)](std::size_t n) -> Term { return terms.at(n); };
  return seq;
}

// ---------------------------------------------------------------- scattered

Point comb_point(std::size_t n) { return Point(Word::repeat(0, static_cast<int>(n)), 1); }

MeasureSequence scattered_jn(const std::vector<Point>& points, const Point& limit, int working_depth) {
  if (points.empty()) throw Error(ErrorCode::kInvalidArgument, "scattered sequence needs at least one point");
  std::set<Point> seen;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] == limit) throw Error(ErrorCode::kInjectivity, "point " + std::to_string(i) + " equals the limit");
    if (!seen.insert(points[i]).second)
      throw Error(ErrorCode::kInjectivity, "point " + std::to_string(i) + " repeats " + points[i].to_string());
  }
  for (int d = 1; d <= working_depth; ++d) {
    const Word target = limit.head(d);
    std::size_t last_bad = 0;
    bool any = false;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (points[i].head(d) != target) last_bad = i, any = true;
    if (any && 2 * (last_bad + 1) > points.size())
      throw Error(ErrorCode::kConvergenceCheck, "point " + std::to_string(last_bad) + " still leaves [" + target.str() +
                                                    "] in the second half of " + std::to_string(points.size()) + " points");
  }
  MeasureSequence seq;
  seq.name = "scattered-jn";
  seq.params = {{"limit", limit.to_string()}, {"points", points.size()}};
  seq.working_depth = working_depth;
  seq.length = points.size();
  seq.generator = [points, limit](std::size_t n) -> Term {
    return FsMeasure({{points.at(n), Rational(1, 2)}, {limit, Rational(-1, 2)}});
  };
  return seq;
}

// ---------------------------------------------------------------- canonical

FsMeasure standard_fsjn(unsigned n) {
  if (static_cast<int>(n) >= cantor::kMaxNodeDepth) throw Error(ErrorCode::kDepthExceeded, "index too large");
  const Rational w = pow2_inv(n + 1);
  FsMeasure mu;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    const Word word = Word::from_index(s, static_cast<int>(n));
    mu.add(Point(word, 1), w);
    mu.add(Point(word, 0), -w);
  }
  return mu;
}

MeasureSequence standard_sequence() {
  MeasureSequence seq;
  seq.name = "standard-fsjn";
  seq.generator = [](std::size_t n) -> Term { return standard_fsjn(static_cast<unsigned>(n)); };
  return seq;
}

DensityMeasure independent_jn(unsigned n) {
  const int depth = static_cast<int>(n) + 1;
  if (depth > cantor::kMaxNodeDepth) throw Error(ErrorCode::kDepthExceeded, "index too large");
  const Rational w = pow2_inv(n + 1);
  std::vector<Rational> cells(std::size_t{1} << depth);
  for (std::size_t t = 0; t < cells.size(); ++t) cells[t] = (t & 1U) ? w : Rational(-w);
  return DensityMeasure(depth, std::move(cells));
}

MeasureSequence independent_sequence() {
  MeasureSequence seq;
  seq.name = "independent-jn";
  seq.generator = [](std::size_t n) -> Term { return independent_jn(static_cast<unsigned>(n)); };
  return seq;
}

// ---------------------------------------------------------------- uniformly distributed

Point van_der_corput(std::uint64_t n) {
  std::string bits;
  for (; n; n >>= 1) bits.push_back((n & 1U) ? '1' : '0');
  return Point(Word(bits), 0);
}

Interval uds_partition(unsigned n) {
  if (n > 62) throw Error(ErrorCode::kInvalidArgument, "partition index too large");
  return {(std::uint64_t{1} << n) - 1, (std::uint64_t{1} << (n + 1)) - 2};
}

UdsTerm uds_to_fsjn(const PointStream& x, unsigned n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "the sequence is indexed from n = 1 (max P_0 = 0)");
  const std::uint64_t big = uds_partition(n + 1).hi;
  const std::uint64_t small = uds_partition(n).hi;
  std::set<Point> seen;
  UdsTerm out;
  const Rational a(1UL, static_cast<unsigned long>(big));
  const Rational b(1UL, static_cast<unsigned long>(small));
  for (std::uint64_t k = 0; k < big; ++k) {
    const Point p = x(k);
    if (!seen.insert(p).second) throw Error(ErrorCode::kInjectivity, "point " + std::to_string(k) + " repeats " + p.to_string());
    out.raw.add(p, k < small ? Rational(a - b) : a);
  }
  const Rational nn = out.raw.norm();
  if (nn == 0) throw Error(ErrorCode::kZeroMeasure, "nu_n vanished despite injective points");
  if (nn < Rational(1, 2)) throw Error(ErrorCode::kConvergenceCheck, "norm of nu_n fell below 1/2");
  out.normalized = out.raw * (1 / nn);
  return out;
}

MeasureSequence uds_sequence(PointStream x, std::string source) {
  MeasureSequence seq;
  seq.name = "uds-fsjn";
  seq.params = {{"points", std::move(source)}};
  seq.generator = [x = std::move(x)](std::size_t m) -> Term {
    return uds_to_fsjn(x, static_cast<unsigned>(m + 1)).normalized;
  };
  return seq;
}

// ---------------------------------------------------------------- truncation

FsMeasure truncate_csjn(const std::function<CsMeasure(std::size_t)>& seq, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "truncation index starts at 1");
  const Rational eps(1UL, static_cast<unsigned long>(n));
  const measures::Truncation tr = measures::cs_truncate(seq(n), eps);
  const Rational head_norm = tr.head.norm();
  if (head_norm <= 1 - eps)
    throw Error(ErrorCode::kCertificate, "head norm " + to_string(head_norm) + " is not above 1 - 1/" + std::to_string(n));
  return tr.head.normalize();
}

CsMeasure geometric_csjn(std::size_t n) {
  CsMeasure cs;
  cs.term = [n](std::size_t k) -> std::optional<std::pair<Point, Rational>> {
    if (k == 0) return std::make_pair(Point::constant(0), Rational(-1, 2));
    return std::make_pair(comb_point(n + k - 1), pow2_inv(static_cast<unsigned>(k + 1)));
  };
  cs.tail_bound = [](std::size_t m) { return m == 0 ? Rational(1) : pow2_inv(static_cast<unsigned>(m)); };
  return cs;
}

// ---------------------------------------------------------------- random inputs

MeasureSequence random_pair_sequence(std::uint64_t seed, std::size_t terms) {
  std::mt19937_64 rng(seed);
  std::string bits;
  for (std::size_t i = 0; i < terms + 2; ++i) bits.push_back((rng() & 1U) ? '1' : '0');
  const Point x(Word(bits), 0);
  const Rational a = make_rational(static_cast<long>(rng() % 4), 8) * ((rng() & 1U) ? 1 : -1);
  const Rational b = (1 - 2 * abs(a)) / 2;
  std::vector<FsMeasure> out;
  for (std::size_t n = 0; n < terms; ++n) {
    const Word base = x.head(static_cast<int>(n) + 1).child(1 - x.bit(n + 1));
    FsMeasure mu;
    mu.add(x, a);
    mu.add(Point(base.child(0), 1), -a);
    mu.add(Point(base.child(1), 0), b);
    mu.add(Point(base.child(1).child(1), 0), -b);
    out.push_back(std::move(mu));
  }
  MeasureSequence seq = from_terms("random-pairs", std::move(out));
  seq.params = {{"seed", seed}, {"terms", terms}};
  return seq;
}

}  // namespace jnlab::jn
