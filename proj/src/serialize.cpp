#include "jnlab/serialize.hpp"

#include "jnlab/error.hpp"

namespace jnlab::serialize {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::kSchema, std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string text_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) throw Error(ErrorCode::kSchema, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

long long int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw Error(ErrorCode::kSchema, std::string("field '") + key + "' must be an integer");
  return v.get<long long>();
}

bool bool_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_boolean()) throw Error(ErrorCode::kSchema, std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

int depth_field(const json& j) {
  const long long d = int_field(j, "depth");
  if (d < 0 || d > cantor::kMaxNodeDepth) throw Error(ErrorCode::kSchema, "depth out of range");
  return static_cast<int>(d);
}

}  // namespace

json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(mpz_class(std::to_string(j.get<long long>())));
  if (!j.is_string()) throw Error(ErrorCode::kSchema, "rational must be a \"p/q\" string");
  return parse_rational(j.get<std::string>());
}

json to_json(const cantor::Point& p) { return {{"prefix", p.prefix().str()}, {"tail", p.tail()}}; }

cantor::Point point_from_json(const json& j) {
  const long long tail = int_field(j, "tail");
  if (tail != 0 && tail != 1) throw Error(ErrorCode::kSchema, "tail must be 0 or 1");
  return cantor::Point(cantor::Word(text_field(j, "prefix")), static_cast<int>(tail));
}

json to_json(const cantor::Clopen& u) {
  json nodes = json::array();
  for (const auto& w : u.nodes()) nodes.push_back(w.str());
  return {{"depth", u.depth()}, {"nodes", nodes}};
}

cantor::Clopen clopen_from_json(const json& j) {
  const int d = depth_field(j);
  const json& nodes = field(j, "nodes");
  if (!nodes.is_array()) throw Error(ErrorCode::kSchema, "nodes must be an array");
  std::vector<cantor::Word> words;
  for (const json& n : nodes) {
    if (!n.is_string()) throw Error(ErrorCode::kSchema, "node must be a bit string");
    words.emplace_back(n.get<std::string>());
  }
  try {
    return cantor::Clopen::from_nodes(d, words);
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchema, e.what());
  }
}

json to_json(const cantor::TreeMap& f) {
  json levels = json::array();
  for (int d = 0; d <= f.depth(); ++d) {
    json pairs = json::array();
    for (const auto& w : f.domain().nodes_at(d)) pairs.push_back(json::array({w.str(), f.image(w).str()}));
    levels.push_back(pairs);
  }
  json cod = json::array();
  for (const auto& w : f.codomain().nodes_at(f.depth())) cod.push_back(w.str());
  return {{"depth", f.depth()}, {"levels", levels}, {"codomain", cod}};
}

cantor::TreeMap tree_map_from_json(const json& j) {
  const int depth = depth_field(j);
  const json& levels = field(j, "levels");
  if (!levels.is_array() || static_cast<int>(levels.size()) != depth + 1)
    throw Error(ErrorCode::kSchema, "levels must list depths 0..depth");
  try {
    std::vector<std::vector<bool>> dom;
    std::vector<std::vector<std::uint64_t>> images;
    for (int d = 0; d <= depth; ++d) {
      dom.emplace_back(std::size_t{1} << d, false);
      images.emplace_back(std::size_t{1} << d, cantor::TreeMap::kAbsent);
      for (const json& pair : levels[static_cast<std::size_t>(d)]) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
          throw Error(ErrorCode::kSchema, "map entries must be [node, image] pairs");
        const cantor::Word src(pair[0].get<std::string>()), dst(pair[1].get<std::string>());
        if (src.size() != d || dst.size() != d) throw Error(ErrorCode::kSchema, "map entry at the wrong depth");
        dom[static_cast<std::size_t>(d)][src.index()] = true;
        images[static_cast<std::size_t>(d)][src.index()] = dst.index();
      }
    }
    std::vector<cantor::Word> leaves;
    if (j.contains("codomain")) {
      for (const json& n : j.at("codomain")) leaves.emplace_back(n.get<std::string>());
    } else {
      for (std::uint64_t v : images.back())
        if (v != cantor::TreeMap::kAbsent) leaves.push_back(cantor::Word::from_index(v, depth));
    }
    return cantor::TreeMap(cantor::PrunedTree::from_levels(std::move(dom)), cantor::PrunedTree::from_leaves(depth, leaves),
                           std::move(images));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchema) throw;
    throw Error(ErrorCode::kSchema, e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema, e.what());
  }
}

json to_json(const measures::FsMeasure& mu) {
  json atoms = json::array();
  for (const auto& [x, w] : mu.atoms()) atoms.push_back({{"point", to_json(x)}, {"weight", to_json(w)}});
  return {{"atoms", atoms}};
}

measures::FsMeasure fs_measure_from_json(const json& j) {
  const json& atoms = field(j, "atoms");
  if (!atoms.is_array()) throw Error(ErrorCode::kSchema, "atoms must be an array");
  measures::FsMeasure mu;
  for (const json& a : atoms) mu.add(point_from_json(field(a, "point")), rational_from_json(field(a, "weight")));
  return mu;
}

json to_json(const measures::DensityMeasure& mu) {
  json cells = json::object();
  for (std::size_t i = 0; i < mu.cells().size(); ++i)
    cells[cantor::Word::from_index(i, mu.depth()).str()] = to_json(mu.cells()[i]);
  return {{"depth", mu.depth()}, {"cells", cells}};
}

measures::DensityMeasure density_from_json(const json& j) {
  const int d = depth_field(j);
  const json& cells = field(j, "cells");
  if (!cells.is_object()) throw Error(ErrorCode::kSchema, "cells must be an object");
  std::vector<Rational> w(std::size_t{1} << d, Rational(0));
  for (const auto& [key, value] : cells.items()) {
    const cantor::Word node(key);
    if (node.size() != d) throw Error(ErrorCode::kSchema, "cell '" + key + "' is not at depth " + std::to_string(d));
    w[node.index()] = rational_from_json(value);
  }
  return measures::DensityMeasure(d, std::move(w));
}

json to_json(const jn::Term& t) {
  if (const auto* fs = std::get_if<measures::FsMeasure>(&t)) return to_json(*fs);
  return to_json(std::get<measures::DensityMeasure>(t));
}

json to_json(const verify::Verdict& v) {
  json rows = json::array();
  for (const auto& r : v.rows)
    rows.push_back({{"n", r.n},
                    {"norm", to_json(r.norm)},
                    {"max_abs", to_json(r.max_abs)},
                    {"max_abs_decimal", to_decimal(r.max_abs)},
                    {"witness", to_json(r.witness)}});
  return {{"construction", v.construction},
          {"depth", v.depth},
          {"terms", v.terms},
          {"family", v.family},
          {"tolerance", to_json(v.tolerance)},
          {"rows", rows},
          {"norms_exact_one", v.norms_exact_one},
          {"decay_below_tolerance", v.decay_below_tolerance},
          {"disjoint_supports", v.disjoint_supports},
          {"degenerate", v.degenerate}};
}

verify::Verdict verdict_from_json(const json& j) {
  verify::Verdict v;
  v.construction = text_field(j, "construction");
  v.depth = depth_field(j);
  const long long terms = int_field(j, "terms");
  if (terms < 0) throw Error(ErrorCode::kSchema, "terms must be non-negative");
  v.terms = static_cast<std::size_t>(terms);
  v.family = text_field(j, "family");
  v.tolerance = rational_from_json(field(j, "tolerance"));
  const json& rows = field(j, "rows");
  if (!rows.is_array()) throw Error(ErrorCode::kSchema, "rows must be an array");
  for (const json& r : rows) {
    verify::Row row;
    const long long n = int_field(r, "n");
    if (n < 0) throw Error(ErrorCode::kSchema, "row index must be non-negative");
    row.n = static_cast<std::size_t>(n);
    row.norm = rational_from_json(field(r, "norm"));
    row.max_abs = rational_from_json(field(r, "max_abs"));
    row.witness = clopen_from_json(field(r, "witness"));
    v.rows.push_back(std::move(row));
  }
  v.norms_exact_one = bool_field(j, "norms_exact_one");
  v.decay_below_tolerance = bool_field(j, "decay_below_tolerance");
  v.disjoint_supports = bool_field(j, "disjoint_supports");
  v.degenerate = bool_field(j, "degenerate");
  return v;
}

}  // namespace jnlab::serialize
