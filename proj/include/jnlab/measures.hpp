#pragma once

// Exact signed measures: finitely supported (FsMeasure), piecewise-constant
// densities with respect to the product measure (DensityMeasure) and lazily
// presented countably supported measures with tail certificates (CsMeasure).

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "jnlab/cantor.hpp"
#include "jnlab/rational.hpp"

namespace jnlab::measures {

using cantor::Clopen;
using cantor::Point;

/// Signed measure with finite support. Duplicate points are coalesced and
/// zero weights dropped on every mutation.
class FsMeasure {
 public:
  using Atoms = std::map<Point, Rational>;

  FsMeasure() = default;
  explicit FsMeasure(const std::vector<std::pair<Point, Rational>>& atoms);

  static FsMeasure dirac(const Point& x, const Rational& w = Rational(1));

  /// Adds w at x, coalescing with an existing atom.
  void add(const Point& x, const Rational& w);

  const Atoms& atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }
  bool is_zero() const { return atoms_.empty(); }
  Rational weight(const Point& x) const;
  std::set<Point> support() const;

  Rational eval(const Clopen& u) const;
  Rational total_mass() const;
  Rational norm() const;

  FsMeasure restrict(const Clopen& s) const;
  FsMeasure restrict(const std::set<Point>& s) const;
  /// Throws Error(kZeroMeasure) on the zero measure.
  FsMeasure normalize() const;

  /// Mass of each depth-d cylinder, indexed by node.
  std::vector<Rational> cell_masses(int depth) const;

  FsMeasure operator+(const FsMeasure& o) const;
  FsMeasure operator-(const FsMeasure& o) const;
  FsMeasure operator*(const Rational& c) const;
  bool operator==(const FsMeasure&) const = default;

 private:
  Atoms atoms_;
};

inline Rational eval(const FsMeasure& mu, const Clopen& u) { return mu.eval(u); }
inline Rational norm(const FsMeasure& mu) { return mu.norm(); }

/// Signed measure whose density w.r.t. the product measure is constant on
/// each depth-d cylinder; cells[i] is the mass of the i-th depth-d node.
class DensityMeasure {
 public:
  DensityMeasure() : cells_(1, Rational(0)) {}
  DensityMeasure(int depth, std::vector<Rational> cells);

  /// The product measure, presented at depth 0.
  static DensityMeasure lebesgue() { return DensityMeasure(0, {Rational(1)}); }

  int depth() const { return depth_; }
  const std::vector<Rational>& cells() const { return cells_; }

  /// Splits every cell evenly down to `depth` (>= this->depth()).
  DensityMeasure refine(int depth) const;
  Rational eval(const Clopen& u) const;
  Rational total_variation() const;

  bool operator==(const DensityMeasure&) const = default;

 private:
  int depth_ = 0;
  std::vector<Rational> cells_;
};

inline Rational density_eval(const DensityMeasure& mu, const Clopen& u) { return mu.eval(u); }

/// Countably supported measure: term(k) is the k-th atom (nullopt past the
/// end of a finite stream) and tail_bound(m) bounds sum_{k>=m} |w_k|.
struct CsMeasure {
  std::function<std::optional<std::pair<Point, Rational>>(std::size_t)> term;
  std::function<Rational(std::size_t)> tail_bound;

  static CsMeasure from_finite(const FsMeasure& mu);
};

struct Truncation {
  FsMeasure head;
  std::size_t length = 0;
  Rational tail_certificate;
};

/// Smallest head whose certified tail is below eps. Stops with
/// Error(kCertificate) after `max_terms` atoms, and rejects repeated points.
Truncation cs_truncate(const CsMeasure& mu, const Rational& eps, std::size_t max_terms = 1u << 20);

}  // namespace jnlab::measures
