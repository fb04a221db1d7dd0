#include "jnlab/ideal.hpp"

#include <memory>
#include <set>

#include "jnlab/error.hpp"

namespace jnlab::ideal {

namespace {

Rational pow_inv(std::uint64_t base, unsigned long exponent) {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), base, exponent);
  return Rational(mpz_class(1), den);
}

Rational json_rational(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::kSchema, std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  if (v.is_number_integer()) return Rational(mpz_class(std::to_string(v.get<long long>())));
  if (!v.is_string()) throw Error(ErrorCode::kSchema, std::string("field '") + key + "' must be a rational string");
  return parse_rational(v.get<std::string>());
}

std::uint64_t json_count(const nlohmann::json& j, const char* key) {
  const bool ok = j.contains(key) && (j.at(key).is_number_unsigned() ||
                                      (j.at(key).is_number_integer() && j.at(key).get<long long>() >= 0));
  if (!ok) throw Error(ErrorCode::kSchema, std::string("field '") + key + "' must be a non-negative integer");
  return j.at(key).get<std::uint64_t>();
}

}  // namespace

Rational WeightedPartition::cell_mass(std::uint64_t n) const {
  Rational sum = 0;
  for (std::uint64_t e : cell(n)) sum += weight(e);
  return sum;
}

WeightedPartition blocks(std::uint64_t m, BlockWeights weights) {
  if (m == 0) throw Error(ErrorCode::kInvalidArgument, "block size must be positive");
  WeightedPartition p;
  p.name = std::string("blocks:m=") + std::to_string(m) + (weights == BlockWeights::kPoly ? ",poly" : ",unit");
  p.cell = [m](std::uint64_t n) {
    std::vector<std::uint64_t> out(m);
    for (std::uint64_t j = 0; j < m; ++j) out[j] = n * m + j;
    return out;
  };
  p.cell_index = [m](std::uint64_t e) -> std::optional<std::uint64_t> { return e / m; };
  if (weights == BlockWeights::kUnit)
    p.weight = [](std::uint64_t) { return Rational(1); };
  else
    p.weight = [m](std::uint64_t e) { return pow_inv(e / m + 1, static_cast<unsigned long>(e % m)); };
  return p;
}

WeightedPartition parse_partition(const std::string& spec, const std::string& weights) {
  const std::string head = "blocks:m=";
  if (spec.rfind(head, 0) != 0) throw Error(ErrorCode::kSchema, "partition must look like blocks:m=<size>");
  std::uint64_t m = 0;
  try {
    std::size_t used = 0;
    m = std::stoull(spec.substr(head.size()), &used);
    if (used != spec.size() - head.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorCode::kSchema, "bad block size in '" + spec + "'");
  }
  if (m == 0 || m > 64) throw Error(ErrorCode::kSchema, "block size must lie in 1..64");
  if (weights == "unit") return blocks(m, BlockWeights::kUnit);
  if (weights == "poly") return blocks(m, BlockWeights::kPoly);
  throw Error(ErrorCode::kSchema, "unknown weights '" + weights + "'");
}

std::function<Rational(std::uint64_t)> parse_certificate(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("form") || !j.at("form").is_string())
    throw Error(ErrorCode::kSchema, "certificate needs a \"form\"");
  const std::string form = j.at("form").get<std::string>();
  if (form == "power") {
    const Rational c = json_rational(j, "c");
    const std::uint64_t e = json_count(j, "exponent");
    if (c < 0) throw Error(ErrorCode::kSchema, "certificate constant must be non-negative");
    return [c, e](std::uint64_t n) -> Rational { return c * pow_inv(n + 1, static_cast<unsigned long>(e)); };
  }
  if (form == "step") {
    const Rational v = json_rational(j, "value");
    const std::uint64_t until = json_count(j, "until");
    if (v < 0) throw Error(ErrorCode::kSchema, "certificate value must be non-negative");
    return [v, until](std::uint64_t n) { return n < until ? v : Rational(0); };
  }
  throw Error(ErrorCode::kSchema, "unknown certificate form '" + form + "'");
}

IdealSet block_element(std::uint64_t m, std::uint64_t index, std::uint64_t from,
                       std::function<Rational(std::uint64_t)> certificate) {
  if (index >= m) throw Error(ErrorCode::kInvalidArgument, "block element index outside the block");
  IdealSet s;
  s.name = "block-element(j=" + std::to_string(index) + ",from=" + std::to_string(from) + ")";
  s.contains = [m, index, from](std::uint64_t e) { return e % m == index && e / m >= from; };
  s.certificate = std::move(certificate);
  return s;
}

IdealSet parse_set(const nlohmann::json& j, std::uint64_t default_m) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw Error(ErrorCode::kSchema, "set needs a \"kind\"");
  if (!j.contains("certificate")) throw Error(ErrorCode::kSchema, "set needs a \"certificate\"");
  auto cert = parse_certificate(j.at("certificate"));
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "finite") {
    if (!j.contains("elements") || !j.at("elements").is_array()) throw Error(ErrorCode::kSchema, "finite set needs \"elements\"");
    auto elems = std::make_shared<std::set<std::uint64_t>>();
    for (const auto& e : j.at("elements")) {
      if (!e.is_number_unsigned()) throw Error(ErrorCode::kSchema, "elements must be non-negative integers");
      elems->insert(e.get<std::uint64_t>());
    }
    IdealSet s;
    s.name = "finite(" + std::to_string(elems->size()) + ")";
    s.contains = [elems](std::uint64_t e) { return elems->count(e) > 0; };
    s.certificate = std::move(cert);
    return s;
  }
  if (kind == "block-element") {
    const std::uint64_t m = j.contains("m") ? json_count(j, "m") : default_m;
    const std::uint64_t index = json_count(j, "index");
    if (index >= m) throw Error(ErrorCode::kSchema, "block element index outside the block");
    return block_element(m, index, j.contains("from") ? json_count(j, "from") : 0, std::move(cert));
  }
  throw Error(ErrorCode::kSchema, "unknown set kind '" + kind + "'");
}

std::vector<IdealSet> parse_sets(const nlohmann::json& j, std::uint64_t default_m) {
  const nlohmann::json& list = j.is_object() && j.contains("sets") ? j.at("sets") : j;
  if (!list.is_array()) throw Error(ErrorCode::kSchema, "sets must be an array or {\"sets\": [...]}");
  std::vector<IdealSet> out;
  for (const auto& s : list) out.push_back(parse_set(s, default_m));
  return out;
}

Rational ratio(const WeightedPartition& p, const IdealSet& c, std::uint64_t n) {
  Rational in = 0, all = 0;
  for (std::uint64_t e : p.cell(n)) {
    const Rational w = p.weight(e);
    all += w;
    if (c.contains(e)) in += w;
  }
  if (all <= 0) throw Error(ErrorCode::kInvalidArgument, "cell " + std::to_string(n) + " has no mass");
  return in / all;
}

IdealSet union_from_schedule(const WeightedPartition& p, const std::vector<IdealSet>& cs,
                             const std::vector<std::uint64_t>& schedule) {
  if (schedule.size() > cs.size()) throw Error(ErrorCode::kInvalidArgument, "schedule longer than the set list");
  auto sets = std::make_shared<std::vector<IdealSet>>(cs.begin(), cs.begin() + static_cast<std::ptrdiff_t>(schedule.size()));
  auto sched = std::make_shared<std::vector<std::uint64_t>>(schedule);
  IdealSet u;
  u.name = "pseudo-union(" + std::to_string(schedule.size()) + ")";
  u.contains = [sets, sched, index = p.cell_index](std::uint64_t e) {
    const auto n = index(e);
    if (!n) return false;
    for (std::size_t k = 0; k < sched->size(); ++k)
      if (*n > (*sched)[k] && (*sets)[k].contains(e)) return true;
    return false;
  };
  u.certificate = [sets, sched](std::uint64_t n) {
    const auto& s = *sched;
    if (s.empty()) return Rational(0);
    if (n <= s[0]) return Rational(1);
    for (std::size_t k = 0; k + 1 < s.size(); ++k)
      if (n <= s[k + 1]) return Rational(1UL, static_cast<unsigned long>(k + 1));
    Rational sum = 0;
    for (const auto& c : *sets) sum += c.certificate(n);
    return sum;
  };
  return u;
}

PseudoUnion pseudo_union(const WeightedPartition& p, const std::vector<IdealSet>& cs, std::size_t k,
                         std::uint64_t inverse_cap) {
  if (k > cs.size()) throw Error(ErrorCode::kInvalidArgument, "K exceeds the number of sets");
  std::vector<std::uint64_t> schedule;
  for (std::size_t step = 0; step < k; ++step) {
    const Rational target(1UL, static_cast<unsigned long>(step + 1));
    const Rational half = target / 2;
    std::uint64_t inverse = 1;
    for (std::size_t i = 0; i <= step; ++i) {
      std::uint64_t n = 0;
      while (n <= inverse_cap && cs[i].certificate(n) >= half) ++n;
      if (n > inverse_cap)
        throw Error(ErrorCode::kScheduleSearch, "stuck at k = " + std::to_string(step) + ": certificate of set " +
                                                    std::to_string(i) + " stays above " + to_string(half));
      inverse = std::max(inverse, n);
    }
    const std::uint64_t start = schedule.empty() ? 0 : schedule.back() + 1;
    const std::uint64_t limit = start + 10 * (step + 1) * inverse;
    std::optional<std::uint64_t> found;
    for (std::uint64_t n = start; n <= limit && !found; ++n) {
      Rational sum = 0;
      for (std::size_t i = 0; i <= step; ++i) sum += cs[i].certificate(n);
      if (sum < target) found = n;
    }
    if (!found)
      throw Error(ErrorCode::kScheduleSearch, "stuck at k = " + std::to_string(step) + ": no n in [" + std::to_string(start) +
                                                  ", " + std::to_string(limit) + "] brings the certified ratio below " +
                                                  to_string(target));
    schedule.push_back(*found);
  }
  return {union_from_schedule(p, cs, schedule), schedule};
}

PseudoUnionReport verify_pseudo_union(const WeightedPartition& p, const std::vector<IdealSet>& cs, const IdealSet& c,
                                      const std::vector<std::uint64_t>& schedule, std::uint64_t horizon) {
  PseudoUnionReport rep;
  const std::size_t kk = schedule.size();
  if (kk > cs.size()) {
    rep.violations.push_back({"schedule", kk, 0, 0, "schedule longer than the set list"});
    return rep;
  }
  for (std::size_t k = 1; k < kk; ++k)
    if (schedule[k] <= schedule[k - 1])
      rep.violations.push_back({"schedule", k, schedule[k], 0, "schedule is not strictly increasing"});

  // Cells whose elements all lie below the horizon.
  std::vector<std::vector<std::uint64_t>> cells;
  for (std::uint64_t n = 0;; ++n) {
    auto cell = p.cell(n);
    bool inside = !cell.empty();
    for (std::uint64_t e : cell) inside = inside && e < horizon;
    if (!inside) break;
    cells.push_back(std::move(cell));
  }

  for (std::size_t k = 0; k < kk; ++k)
    for (std::uint64_t n = 0; n < cells.size(); ++n) {
      if (n <= schedule[k]) continue;
      for (std::uint64_t e : cells[n]) {
        ++rep.containment_checks;
        if (cs[k].contains(e) && !c.contains(e))
          rep.violations.push_back({"containment", k, n, e,
                                    "element of C_" + std::to_string(k) + " outside C and outside A_0..A_" +
                                        std::to_string(schedule[k])});
      }
    }

  for (std::uint64_t n = 0; n < cells.size(); ++n) {
    const Rational r = ratio(p, c, n);
    if (r > c.certificate(n))
      rep.violations.push_back({"certificate", 0, n, 0, "ratio " + to_string(r) + " exceeds " + to_string(c.certificate(n))});
    if (kk == 0 || n <= schedule[0]) continue;
    std::size_t k = 0;
    while (k + 1 < kk && n > schedule[k + 1]) ++k;
    const Rational bound(1UL, static_cast<unsigned long>(k + 1));
    ++rep.ratio_checks;
    if (r >= bound)
      rep.violations.push_back({"ratio", k, n, 0, "ratio " + to_string(r) + " is not below " + to_string(bound)});
  }
  return rep;
}

nlohmann::json to_json(const PseudoUnionReport& r) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& x : r.violations)
    v.push_back({{"check", x.check}, {"k", x.k}, {"n", x.n}, {"element", x.element}, {"detail", x.detail}});
  return {{"passed", r.passed()},
          {"containment_checks", r.containment_checks},
          {"ratio_checks", r.ratio_checks},
          {"violations", v}};
}

}  // namespace jnlab::ideal
