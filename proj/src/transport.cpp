#include <bit>
#include <map>

#include "jnlab/error.hpp"
#include "jnlab/jn.hpp"

namespace jnlab::jn {

namespace {

std::size_t width(int d) { return std::size_t{1} << d; }

// The points x_s^i = s i^omega, s in 2^n, paired with their sign.
std::vector<std::pair<Point, int>> standard_points(unsigned n) {
  std::vector<std::pair<Point, int>> out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    const Word w = Word::from_index(s, static_cast<int>(n));
    out.emplace_back(Point(w, 1), 1);
    out.emplace_back(Point(w, 0), -1);
  }
  return out;
}

}  // namespace

Point select_preimage(const TreeMap& f, const Point& target, int depth) {
  const int d = f.depth();
  if (depth < 0 || depth > d)
    throw Error(ErrorCode::kDepthExceeded, "preimage depth " + std::to_string(depth) + " beyond working depth " + std::to_string(d));
  const std::uint64_t t = target.head(d).index();
  const auto& level = f.domain().level(d);
  int best = -1;
  std::uint64_t best_node = 0;
  for (std::uint64_t i = 0; i < level.size(); ++i) {
    if (!level[i]) continue;
    const int agree = d - static_cast<int>(std::bit_width(f.image_index(d, i) ^ t));
    if (agree > best) best = agree, best_node = i;
  }
  if (best < depth)
    throw Error(ErrorCode::kNoPreimage, "no domain node maps onto " + target.head(depth).str() + " at depth " + std::to_string(depth));
  const Word w = Word::from_index(best_node, d);
  return Point(w, d > 0 ? w[d - 1] : 0);
}

Rational overlap_measure(const TreeMap& f, const Clopen& u, int depth) {
  const Clopen a = f.image_of_clopen(u, depth);
  const Clopen b = f.image_of_clopen(u.complement(), depth);
  return a.meet(b).measure();
}

TransportResult transport(const TreeMap& f, unsigned n, int depth, const Rational& overlap_bound) {
  if (depth > f.depth()) throw Error(ErrorCode::kDepthExceeded, "transport depth beyond the map's working depth");
  if (static_cast<int>(n) >= depth) throw Error(ErrorCode::kInvalidArgument, "transport needs n < depth");
  for (int d = 0; d <= depth; ++d)
    if (!f.surjective_at(d) || !f.codomain().as_clopen(d).is_full())
      throw Error(ErrorCode::kNoPreimage, "map is not onto the Cantor space at depth " + std::to_string(d));
  TransportResult out;
  const Rational w = pow2_inv(n + 1);
  for (const auto& [x, sign] : standard_points(n)) out.measure.add(select_preimage(f, x, depth), sign > 0 ? w : Rational(-w));

  out.max_overlap = 0;
  for (int d = 0; d <= static_cast<int>(n) + 1; ++d) {
    for (const Word& t : f.domain().nodes_at(d)) {
      const Clopen u = Clopen::cylinder(t);
      const Rational ov = overlap_measure(f, u, depth);
      if (ov > out.max_overlap) out.max_overlap = ov, out.overlap_witness = u;
    }
  }
  out.hypothesis_violated = out.max_overlap > overlap_bound;
  return out;
}

TransportBoundReport transport_bound_check(const TreeMap& f, unsigned n, const std::vector<Clopen>& tests) {
  const int d = f.depth();
  TransportBoundReport rep;
  rep.n = n;
  rep.n1 = d;
  const FsMeasure nu = transport(f, n, d).measure;
  const FsMeasure mu = standard_fsjn(n);
  const auto xs = standard_points(n);
  const Rational w = pow2_inv(n + 1);
  for (const Clopen& u : tests) {
    const Clopen a = f.image_of_clopen(u, d);
    const Clopen b = f.image_of_clopen(u.complement(), d);
    const Clopen both = a.meet(b);
    std::size_t count = 0;
    for (const auto& [x, sign] : xs)
      if (both.contains(x)) ++count;
    TransportBoundRow row{u, abs(nu.eval(u)), abs(mu.eval(a)) + w * static_cast<unsigned long>(count)};
    if (row.value > row.bound) rep.holds = false;
    rep.n0 = std::max(rep.n0, a.depth());
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

BoundaryReport image_boundary_check(const TreeMap& f, const Clopen& u, int depth) {
  const int d = f.depth();
  if (depth >= d || u.depth() > depth)
    throw Error(ErrorCode::kDepthExceeded, "boundary check needs depth(U) <= depth < working depth " + std::to_string(d));
  const cantor::PrunedTree& z = f.codomain();
  const std::vector<bool> a = f.image_of_clopen(u, d).mask_at(d);
  const std::vector<bool> b = f.image_of_clopen(u.complement(), d).mask_at(d);

  // inside[k][i]: every codomain descendant of node i at depth D lies in the overlap.
  std::vector<std::vector<bool>> inside(static_cast<std::size_t>(d + 1));
  inside[static_cast<std::size_t>(d)].resize(width(d));
  for (std::size_t i = 0; i < width(d); ++i) inside[static_cast<std::size_t>(d)][i] = z.level(d)[i] && a[i] && b[i];
  for (int k = d - 1; k >= 0; --k) {
    auto& cur = inside[static_cast<std::size_t>(k)];
    const auto& below = inside[static_cast<std::size_t>(k + 1)];
    const auto& zb = z.level(k + 1);
    cur.assign(width(k), false);
    for (std::size_t i = 0; i < width(k); ++i) {
      if (!z.level(k)[i]) continue;
      bool all = true;
      for (std::size_t c = 2 * i; c <= 2 * i + 1; ++c)
        if (zb[c] && !below[c]) all = false;
      cur[i] = all;
    }
  }
  BoundaryReport rep;
  for (int k = 0; k <= depth; ++k)
    for (std::size_t i = 0; i < width(k); ++i)
      if (inside[static_cast<std::size_t>(k)][i]) {
        rep.hypothesis_satisfied = false;
        rep.note = "overlap contains the cylinder [" + Word::from_index(i, k).str() + "]";
        return rep;
      }

  const int shift = d - depth;
  std::vector<bool> lhs(width(depth), false), rhs(width(depth), false);
  for (std::size_t i = 0; i < width(d); ++i)
    if (z.level(d)[i] && a[i] && b[i]) lhs[i >> shift] = true;
  for (std::size_t v = 0; v < width(d - 1); ++v) {
    const std::size_t c0 = 2 * v, c1 = 2 * v + 1;
    if (!z.level(d)[c0] || !z.level(d)[c1]) continue;
    if (a[c0] != a[c1] || b[c0] != b[c1]) rhs[v >> (shift - 1)] = true;
  }
  rep.overlap = Clopen::from_mask(depth, std::move(lhs));
  rep.boundary = Clopen::from_mask(depth, std::move(rhs));
  rep.holds = rep.overlap == rep.boundary;
  return rep;
}

bool irreducible_through(const TreeMap& f, int depth) {
  const int d = f.depth();
  if (depth > d) throw Error(ErrorCode::kDepthExceeded, "irreducibility depth beyond working depth");
  const auto& leaves = f.domain().level(d);
  std::map<std::uint64_t, int> multiplicity;
  for (std::uint64_t i = 0; i < leaves.size(); ++i)
    if (leaves[i]) ++multiplicity[f.image_index(d, i)];
  std::vector<bool> ok(width(depth), false);
  for (std::uint64_t i = 0; i < leaves.size(); ++i)
    if (leaves[i] && multiplicity[f.image_index(d, i)] == 1) ok[i >> (d - depth)] = true;
  for (std::uint64_t t = 0; t < width(depth); ++t)
    if (f.domain().level(depth)[t] && !ok[t]) return false;
  return true;
}

}  // namespace jnlab::jn
