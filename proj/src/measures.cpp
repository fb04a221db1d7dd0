#include "jnlab/measures.hpp"

#include <cstdlib>

#include "jnlab/error.hpp"

namespace jnlab::measures {

FsMeasure::FsMeasure(const std::vector<std::pair<Point, Rational>>& atoms) {
  for (const auto& [x, w] : atoms) add(x, w);
}

FsMeasure FsMeasure::dirac(const Point& x, const Rational& w) {
  FsMeasure m;
  m.add(x, w);
  return m;
}

void FsMeasure::add(const Point& x, const Rational& w) {
  if (w == 0) return;
  auto [it, inserted] = atoms_.try_emplace(x, w);
  if (inserted) return;
  it->second += w;
  if (it->second == 0) atoms_.erase(it);
}

Rational FsMeasure::weight(const Point& x) const {
  auto it = atoms_.find(x);
  return it == atoms_.end() ? Rational(0) : it->second;
}

std::set<Point> FsMeasure::support() const {
  std::set<Point> s;
  for (const auto& [x, w] : atoms_) s.insert(x);
  return s;
}

Rational FsMeasure::eval(const Clopen& u) const {
  Rational sum = 0;
  for (const auto& [x, w] : atoms_)
    if (u.contains(x)) sum += w;
  return sum;
}

Rational FsMeasure::total_mass() const {
  Rational sum = 0;
  for (const auto& [x, w] : atoms_) sum += w;
  return sum;
}

Rational FsMeasure::norm() const {
  Rational sum = 0;
  for (const auto& [x, w] : atoms_) sum += abs(w);
  return sum;
}

FsMeasure FsMeasure::restrict(const Clopen& s) const {
  FsMeasure out;
  for (const auto& [x, w] : atoms_)
    if (s.contains(x)) out.atoms_.emplace(x, w);
  return out;
}

FsMeasure FsMeasure::restrict(const std::set<Point>& s) const {
  FsMeasure out;
  for (const auto& [x, w] : atoms_)
    if (s.count(x)) out.atoms_.emplace(x, w);
  return out;
}

FsMeasure FsMeasure::normalize() const {
  const Rational n = norm();
  if (n == 0) throw Error(ErrorCode::kZeroMeasure, "cannot normalize the zero measure");
  return *this * (1 / n);
}

std::vector<Rational> FsMeasure::cell_masses(int depth) const {
  std::vector<Rational> cells(std::size_t{1} << depth, Rational(0));
  for (const auto& [x, w] : atoms_) cells[x.head(depth).index()] += w;
  return cells;
}

FsMeasure FsMeasure::operator+(const FsMeasure& o) const {
  FsMeasure out = *this;
  for (const auto& [x, w] : o.atoms_) out.add(x, w);
  return out;
}

FsMeasure FsMeasure::operator-(const FsMeasure& o) const {
  FsMeasure out = *this;
  for (const auto& [x, w] : o.atoms_) out.add(x, -w);
  return out;
}

FsMeasure FsMeasure::operator*(const Rational& c) const {
  FsMeasure out;
  if (c == 0) return out;
  for (const auto& [x, w] : atoms_) out.atoms_.emplace(x, w * c);
  return out;
}

// ---------------------------------------------------------------- density

DensityMeasure::DensityMeasure(int depth, std::vector<Rational> cells) : depth_(depth), cells_(std::move(cells)) {
  if (depth < 0 || depth > cantor::kMaxNodeDepth)
    throw Error(ErrorCode::kDepthExceeded, "density depth out of range");
  if (cells_.size() != (std::size_t{1} << depth))
    throw Error(ErrorCode::kInvalidArgument, "density needs one weight per depth-d node");
}

DensityMeasure DensityMeasure::refine(int depth) const {
  if (depth < depth_) throw Error(ErrorCode::kInvalidArgument, "cannot refine to a coarser depth");
  if (depth > cantor::kMaxNodeDepth) throw Error(ErrorCode::kDepthExceeded, "density depth out of range");
  const int shift = depth - depth_;
  const Rational share = pow2_inv(static_cast<unsigned>(shift));
  std::vector<Rational> out(std::size_t{1} << depth);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = cells_[j >> shift] * share;
  return DensityMeasure(depth, std::move(out));
}

Rational DensityMeasure::eval(const Clopen& u) const {
  const int d = std::max(depth_, u.depth());
  const std::vector<bool> mask = u.mask_at(d);
  // Evaluate cell by cell without materializing the refined density.
  const int shift = d - depth_;
  const Rational share = pow2_inv(static_cast<unsigned>(shift));
  Rational sum = 0;
  for (std::size_t j = 0; j < mask.size(); ++j)
    if (mask[j]) sum += cells_[j >> shift] * share;
  return sum;
}

Rational DensityMeasure::total_variation() const {
  Rational sum = 0;
  for (const Rational& w : cells_) sum += abs(w);
  return sum;
}

// ---------------------------------------------------------------- countable

CsMeasure CsMeasure::from_finite(const FsMeasure& mu) {
  std::vector<std::pair<Point, Rational>> atoms(mu.atoms().begin(), mu.atoms().end());
  CsMeasure cs;
  cs.term = [atoms](std::size_t k) -> std::optional<std::pair<Point, Rational>> {
    if (k >= atoms.size()) return std::nullopt;
    return atoms[k];
  };
  cs.tail_bound = [atoms](std::size_t m) {
    Rational sum = 0;
    for (std::size_t k = m; k < atoms.size(); ++k) sum += abs(atoms[k].second);
    return sum;
  };
  return cs;
}

Truncation cs_truncate(const CsMeasure& mu, const Rational& eps, std::size_t max_terms) {
  if (eps <= 0) throw Error(ErrorCode::kInvalidArgument, "truncation tolerance must be positive");
  Truncation out;
  std::set<Point> seen;
  for (std::size_t m = 0;; ++m) {
    const Rational tail = mu.tail_bound(m);
    if (tail < 0) throw Error(ErrorCode::kCertificate, "negative tail bound at " + std::to_string(m));
    if (tail < eps) {
      out.length = m;
      out.tail_certificate = tail;
      return out;
    }
    if (m >= max_terms)
      throw Error(ErrorCode::kCertificate, "tail bound still " + to_string(tail) + " after " + std::to_string(m) + " terms");
    auto atom = mu.term(m);
    if (!atom)
      throw Error(ErrorCode::kCertificate, "stream ended at " + std::to_string(m) + " with tail bound " + to_string(tail));
    if (!seen.insert(atom->first).second)
      throw Error(ErrorCode::kInvalidArgument, "countable stream repeats point " + atom->first.to_string());
    out.head.add(atom->first, atom->second);
  }
}

}  // namespace jnlab::measures
