#pragma once

// JSON encodings. Rationals are "p/q" strings, bit words are '0'/'1' strings
// written root bit first. Parsers throw Error(kSchema) on malformed input.

#include "json.hpp"
#include "jnlab/cantor.hpp"
#include "jnlab/measures.hpp"
#include "jnlab/verify.hpp"

namespace jnlab::serialize {

using nlohmann::json;

json to_json(const Rational& q);
Rational rational_from_json(const json& j);

json to_json(const cantor::Point& p);
cantor::Point point_from_json(const json& j);

json to_json(const cantor::Clopen& u);
cantor::Clopen clopen_from_json(const json& j);

/// {"depth": D, "levels": [[["0","1"], ...], ...]}: per depth, node -> image pairs.
json to_json(const cantor::TreeMap& f);
cantor::TreeMap tree_map_from_json(const json& j);

json to_json(const measures::FsMeasure& mu);
measures::FsMeasure fs_measure_from_json(const json& j);

json to_json(const measures::DensityMeasure& mu);
measures::DensityMeasure density_from_json(const json& j);

json to_json(const jn::Term& t);

json to_json(const verify::Verdict& v);
verify::Verdict verdict_from_json(const json& j);

}  // namespace jnlab::serialize
