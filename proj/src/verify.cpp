#include "jnlab/verify.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "jnlab/error.hpp"
#include "jnlab/serialize.hpp"

namespace jnlab::verify {

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kCylinders: return "cylinders";
    case FamilyKind::kAllClopen: return "all-clopen";
    case FamilyKind::kRandom: return "random";
  }
  return "?";
}

FamilyKind parse_family(const std::string& text) {
  if (text == "cylinders") return FamilyKind::kCylinders;
  if (text == "all-clopen") return FamilyKind::kAllClopen;
  if (text == "random") return FamilyKind::kRandom;
  throw Error(ErrorCode::kSchema, "unknown test family '" + text + "'");
}

namespace {

std::string family_label(const Family& f) {
  if (f.kind == FamilyKind::kRandom) return "random(" + std::to_string(f.samples) + ",seed=" + std::to_string(f.seed) + ")";
  return to_string(f.kind);
}

void check_depth(const Family& family, int depth) {
  if (depth < 0 || depth > cantor::kMaxNodeDepth) throw Error(ErrorCode::kDepthExceeded, "test depth out of range");
  if (family.kind == FamilyKind::kAllClopen && depth > kAllClopenMaxDepth)
    throw Error(ErrorCode::kDepthExceeded, "all-clopen family is exhaustive only up to depth " + std::to_string(kAllClopenMaxDepth));
}

}  // namespace

std::vector<Clopen> family_sets(const Family& family, int depth) {
  check_depth(family, depth);
  std::vector<Clopen> out;
  switch (family.kind) {
    case FamilyKind::kCylinders:
      for (int d = 0; d <= depth; ++d)
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << d); ++i) out.push_back(Clopen::cylinder(cantor::Word::from_index(i, d)));
      break;
    case FamilyKind::kAllClopen:
      break;
    case FamilyKind::kRandom: {
      std::mt19937_64 rng(family.seed);
      for (std::size_t k = 0; k < family.samples; ++k) {
        const int d = static_cast<int>(rng() % static_cast<std::uint64_t>(depth + 1));
        std::vector<bool> mask(std::size_t{1} << d);
        std::uint64_t bits = 0;
        for (std::size_t j = 0; j < mask.size(); ++j) {
          if (j % 64 == 0) bits = rng();
          mask[j] = (bits >> (j % 64)) & 1U;
        }
        out.push_back(Clopen::from_mask(d, std::move(mask)));
      }
      break;
    }
  }
  return out;
}

std::pair<Rational, Clopen> max_abs_over(const jn::Term& t, const Family& family, int depth,
                                         const std::vector<Clopen>& sets) {
  check_depth(family, depth);
  const std::vector<Rational> cells = jn::term_cells(t, depth);
  if (family.kind == FamilyKind::kAllClopen) {
    Rational pos = 0, neg = 0;
    std::vector<bool> pmask(cells.size()), nmask(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i] > 0) pos += cells[i], pmask[i] = true;
      if (cells[i] < 0) neg -= cells[i], nmask[i] = true;
    }
    if (pos >= neg) return {pos, Clopen::from_mask(depth, std::move(pmask))};
    return {neg, Clopen::from_mask(depth, std::move(nmask))};
  }
  Rational best = -1;
  Clopen witness;
  for (const Clopen& u : sets) {
    const std::vector<bool> mask = u.mask_at(depth);
    Rational v = 0;
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i]) v += cells[i];
    v = abs(v);
    if (v > best) best = v, witness = u;
  }
  if (best < 0) best = 0;
  return {best, witness};
}

Verdict weakstar_report(const jn::MeasureSequence& seq, int depth, std::size_t terms, const Family& family,
                        const Rational& tol) {
  check_depth(family, depth);
  if (depth > seq.working_depth)
    throw Error(ErrorCode::kDepthExceeded, "test depth " + std::to_string(depth) + " beyond the sequence's working depth " +
                                               std::to_string(seq.working_depth));
  Verdict v;
  v.construction = seq.name;
  v.depth = depth;
  v.terms = terms;
  v.family = family_label(family);
  v.tolerance = tol;
  v.degenerate = terms == 0;
  const std::vector<Clopen> sets = family_sets(family, depth);
  std::set<cantor::Point> seen;
  for (std::size_t n = 0; n < terms; ++n) {
    const jn::Term t = seq.term(n);
    Row row;
    row.n = n;
    row.norm = jn::term_norm(t);
    std::tie(row.max_abs, row.witness) = max_abs_over(t, family, depth, sets);
    if (row.norm != 1) v.norms_exact_one = false;
    if (2 * n >= terms && row.max_abs >= tol) v.decay_below_tolerance = false;
    if (const auto* fs = std::get_if<measures::FsMeasure>(&t)) {
      for (const auto& [x, w] : fs->atoms())
        if (!seen.insert(x).second) v.disjoint_supports = false;
    } else {
      v.disjoint_supports = false;
    }
    v.rows.push_back(std::move(row));
  }
  return v;
}

CheckResult check_fsjn(const jn::MeasureSequence& seq, int depth, std::size_t terms, const Rational& tol) {
  CheckResult r;
  r.verdict = weakstar_report(seq, depth, terms, Family::cylinders(), tol);
  r.passed = r.verdict.norms_exact_one && r.verdict.decay_below_tolerance;
  return r;
}

// ---------------------------------------------------------------- output

namespace {

std::string witness_text(const Clopen& u) { return u.to_string(); }

}  // namespace

std::string render(const Verdict& v, Format format) {
  if (format == Format::kJson) return serialize::to_json(v).dump(2) + "\n";
  std::ostringstream out;
  out << "n,norm,max_abs,max_abs_decimal,witness\n";
  for (const Row& r : v.rows)
    out << r.n << ',' << jnlab::to_string(r.norm) << ',' << jnlab::to_string(r.max_abs) << ','
        << to_decimal(r.max_abs) << ",\"" << witness_text(r.witness) << "\"\n";
  return out.str();
}

void emit(const Verdict& v, Format format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << render(v, format);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

Verdict parse_verdict_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("verdict is not valid JSON: ") + e.what());
  }
  return serialize::verdict_from_json(j);
}

}  // namespace jnlab::verify
