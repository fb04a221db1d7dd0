#include "jnlab/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "jnlab/error.hpp"
#include "jnlab/ideal.hpp"
#include "jnlab/jn.hpp"
#include "jnlab/maps.hpp"
#include "jnlab/serialize.hpp"
#include "jnlab/systems.hpp"
#include "jnlab/verify.hpp"

namespace jnlab::cli {

using nlohmann::json;

namespace {

json verify_defaults(json extra) {
  json d = {{"depth", 6}, {"tol", "1/10"}, {"family", "cylinders"}, {"samples", 64}, {"format", "csv"}};
  if (extra.is_object()) d.update(extra);
  return d;
}

json system_defaults(json extra) {
  json d = {{"policy", "round-robin"}, {"steps", 15}, {"prefix", ""}, {"point", 0}, {"splits", nullptr}};
  if (extra.is_object()) d.update(extra);
  return d;
}

json ideal_defaults(json extra) {
  json d = {{"partition", "blocks:m=8"}, {"weights", "poly"}, {"sets", nullptr}, {"count", 20}};
  if (extra.is_object()) d.update(extra);
  return d;
}

std::vector<CommandInfo> build_table() {
  return {
      {"jn standard", "canonical finitely supported sequence on the Cantor space",
       "2^-(n+1) sum_s (delta_{s1^omega} - delta_{s0^omega}), zero on clopens of depth <= n",
       verify_defaults({{"terms", 8}, {"verify", false}})},
      {"jn independent", "independent-sets densities against the product measure",
       "mu_n(A) = lambda(B_n & A) - lambda(B_n^c & A), B_n = {x : x(n) = 1}",
       verify_defaults({{"terms", 8}, {"verify", false}})},
      {"jn scattered", "pair sequence on a convergent sequence of points",
       "mu_n = (delta_{x_n} - delta_x)/2 for x_n -> x",
       verify_defaults({{"terms", 16}, {"verify", false}, {"points", nullptr}, {"limit", nullptr}})},
      {"jn uds", "sequence built from a uniformly distributed injective point sequence",
       "nu_n = averages over max P_{n+1} minus averages over max P_n, normalized",
       verify_defaults({{"terms", 12}, {"verify", true}})},
      {"jn transport", "pull the canonical sequence back along a tree map",
       "nu_n = 2^-(n+1) sum_s (delta_{y_s^1} - delta_{y_s^0}) with f(y_s^i) = s i^omega",
       verify_defaults({{"terms", 6}, {"verify", false}, {"map", "identity"}, {"map_depth", 8}, {"overlap_bound", "0"}})},
      {"jn disjointify", "disjointly supported sequence from a finitely supported one",
       "mu_{n_k} = nu^1_k + nu^2_k, rho_k = nu^1_{2k} - nu^1_{2k+1}, theta_k = rho_k/|rho_k|",
       {{"input", "scattered-comb"}, {"terms", 32}, {"horizon", 32}, {"tol", "1/1000"}}},
      {"jn truncate", "finite head of a countably supported sequence",
       "finite F_n in the support with |mu_n restricted to the complement| < 1/n, then normalized",
       {{"n", 4}}},
      {"systems build", "inverse system of simple extensions", "stage t+1 doubles one point of stage t",
       system_defaults({})},
      {"systems classify", "perfect or scattered witness in the limit of a system",
       "perfect subtree or a convergent sequence with its limit", system_defaults({{"budget", nullptr}})},
      {"systems pipeline", "sequence on the limit of a system of simple extensions",
       "scattered limit: pair sequence; otherwise a uniformly distributed sequence for a node measure",
       system_defaults({{"policy", "fixed-point"},
                        {"steps", nullptr},
                        {"budget", nullptr},
                        {"depth", 8},
                        {"check_depth", 6},
                        {"terms", 12},
                        {"tol", "1/10"},
                        {"rule", "half-half"},
                        {"share", "1/2"},
                        {"format", "csv"}})},
      {"ideal pseudo-union", "pseudo-union of countably many members of a density ideal",
       "C almost contains every C_k outside finitely many cells, with relative mass below 1/(k+1)",
       ideal_defaults({{"k", nullptr}, {"inverse_cap", 1048576}})},
      {"ideal verify", "check a pseudo-union schedule", "containment, certificate and ratio bounds on every cell",
       ideal_defaults({{"k", nullptr}, {"inverse_cap", 1048576}, {"schedule", nullptr}, {"horizon", 4096}})},
      {"verify", "weak* decay report for a named construction", "max |mu_n(U)| over a clopen test family",
       verify_defaults({{"construction", "standard"}, {"terms", 12}})},
      {"emit", "re-render a saved verdict", "CSV columns n, norm, max_abs, max_abs_decimal, witness",
       {{"input", ""}, {"format", "csv"}, {"output", nullptr}}},
  };
}

// Type expected for parameters whose default is null.
json::value_t nullable_type(const std::string& key) {
  if (key == "points" || key == "splits" || key == "sets" || key == "schedule") return json::value_t::array;
  if (key == "limit") return json::value_t::object;
  if (key == "output") return json::value_t::string;
  return json::value_t::number_unsigned;
}

bool type_matches(json::value_t expected, const json& v) {
  switch (expected) {
    case json::value_t::number_unsigned:
    case json::value_t::number_integer:
      return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
    default:
      return v.type() == expected;
  }
}

std::string type_name(json::value_t t) {
  switch (t) {
    case json::value_t::number_unsigned:
    case json::value_t::number_integer:
      return "a non-negative integer";
    case json::value_t::string:
      return "a string";
    case json::value_t::boolean:
      return "a boolean";
    case json::value_t::array:
      return "an array";
    case json::value_t::object:
      return "an object";
    default:
      return "a value";
  }
}

// ---------------------------------------------------------------- parameter access

struct Params {
  const json& j;

  bool has(const char* key) const { return !j.at(key).is_null(); }
  std::uint64_t count(const char* key) const { return j.at(key).get<std::uint64_t>(); }
  int depth(const char* key) const {
    const std::uint64_t v = count(key);
    if (v > static_cast<std::uint64_t>(cantor::kMaxNodeDepth))
      throw Error(ErrorCode::kSchema, std::string(key) + " must be at most " + std::to_string(cantor::kMaxNodeDepth));
    return static_cast<int>(v);
  }
  std::string text(const char* key) const { return j.at(key).get<std::string>(); }
  bool flag(const char* key) const { return j.at(key).get<bool>(); }
  Rational rational(const char* key) const { return parse_rational(text(key)); }
};

// ---------------------------------------------------------------- artifacts

class Outputs {
 public:
  explicit Outputs(std::string dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create output directory '" + dir_ + "': " + ec.message());
  }

  std::string path(const std::string& name) const { return (std::filesystem::path(dir_) / name).string(); }

  void write(const std::string& name, const std::string& text) const { write_path(path(name), text); }
  void write_json(const std::string& name, const json& j) const { write(name, j.dump(2) + "\n"); }

  static void write_path(const std::string& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot open '" + p + "' for writing");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "write to '" + p + "' failed");
  }

 private:
  std::string dir_;
};

verify::Format parse_format(const std::string& f) {
  if (f == "csv") return verify::Format::kCsv;
  if (f == "json") return verify::Format::kJson;
  throw Error(ErrorCode::kSchema, "format must be csv or json, not '" + f + "'");
}

std::string report_name(verify::Format f) { return f == verify::Format::kCsv ? "report.csv" : "report.json"; }

verify::Family family_of(const Params& p, std::uint64_t seed) {
  const verify::FamilyKind kind = verify::parse_family(p.text("family"));
  if (kind == verify::FamilyKind::kRandom) return verify::Family::random(p.count("samples"), seed);
  if (kind == verify::FamilyKind::kAllClopen) return verify::Family::all_clopen();
  return verify::Family::cylinders();
}

json measures_json(const jn::MeasureSequence& seq, std::size_t terms) {
  json list = json::array();
  for (std::size_t n = 0; n < terms; ++n) list.push_back(serialize::to_json(seq.term(n)));
  return {{"construction", seq.name}, {"params", seq.params}, {"terms", std::move(list)}};
}

bool passes(const verify::Verdict& v) { return v.norms_exact_one && v.decay_below_tolerance && !v.degenerate; }

// Writes measures.json and, when asked, the weak* report. Returns the exit code.
int emit_sequence(const jn::MeasureSequence& seq, const Params& p, std::uint64_t seed, bool check, const Outputs& out,
                  std::ostream& log) {
  const std::size_t terms = seq.length ? std::min<std::size_t>(*seq.length, p.count("terms")) : p.count("terms");
  out.write_json("measures.json", measures_json(seq, terms));
  if (!check) {
    log << seq.name << ": wrote " << terms << " terms\n";
    return kExitOk;
  }
  const verify::Format format = parse_format(p.text("format"));
  const verify::Verdict v = verify::weakstar_report(seq, p.depth("depth"), terms, family_of(p, seed), p.rational("tol"));
  verify::emit(v, format, out.path(report_name(format)));
  const bool ok = passes(v);
  log << seq.name << ": " << terms << " terms, depth " << v.depth << ", family " << v.family << ": "
      << (ok ? "pass" : "FAIL") << "\n";
  return ok ? kExitOk : kExitVerificationFailed;
}

std::vector<cantor::Point> comb(std::size_t terms) {
  std::vector<cantor::Point> pts;
  for (std::size_t n = 0; n < terms; ++n) pts.push_back(jn::comb_point(n));
  return pts;
}

jn::MeasureSequence scattered_from(const Params& p) {
  std::vector<cantor::Point> pts;
  if (p.has("points")) {
    for (const json& x : p.j.at("points")) pts.push_back(serialize::point_from_json(x));
  } else {
    pts = comb(p.count("terms"));
  }
  const cantor::Point limit = p.has("limit") ? serialize::point_from_json(p.j.at("limit")) : cantor::Point::constant(0);
  return jn::scattered_jn(pts, limit, p.depth("depth"));
}

jn::MeasureSequence uds_van_der_corput() { return jn::uds_sequence(jn::van_der_corput, "van-der-corput"); }

jn::MeasureSequence named_sequence(const std::string& name, const Params& p, std::uint64_t seed) {
  if (name == "standard") return jn::standard_sequence();
  if (name == "independent") return jn::independent_sequence();
  if (name == "uds") return uds_van_der_corput();
  if (name == "scattered") return jn::scattered_jn(comb(p.count("terms")), cantor::Point::constant(0), p.depth("depth"));
  if (name == "random-pairs") return jn::random_pair_sequence(seed, p.count("terms"));
  if (name == "constant-dirac") {
    const std::size_t terms = p.count("terms");
    return jn::from_terms("constant-dirac", std::vector<measures::FsMeasure>(terms, measures::FsMeasure::dirac(cantor::Point::constant(0))));
  }
  if (name == "moving-dirac") {
    std::vector<measures::FsMeasure> terms;
    for (std::size_t n = 0; n < p.count("terms"); ++n) terms.push_back(measures::FsMeasure::dirac(jn::comb_point(n)));
    return jn::from_terms("moving-dirac", std::move(terms));
  }
  throw Error(ErrorCode::kSchema, "unknown construction '" + name +
                                      "' (standard, independent, uds, scattered, random-pairs, constant-dirac, moving-dirac)");
}

// ---------------------------------------------------------------- systems

systems::Policy policy_of(const Params& p) {
  const systems::PolicyKind kind = systems::parse_policy(p.text("policy"));
  if (kind == systems::PolicyKind::kRoundRobin) return systems::Policy::round_robin(p.text("prefix"));
  if (kind == systems::PolicyKind::kFixedPoint) return systems::Policy::fixed_point(p.count("point"));
  if (!p.has("splits")) throw Error(ErrorCode::kSchema, "custom policy needs \"splits\"");
  std::vector<std::size_t> splits;
  for (const json& s : p.j.at("splits")) {
    if (!s.is_number_unsigned()) throw Error(ErrorCode::kSchema, "splits must be non-negative integers");
    splits.push_back(s.get<std::size_t>());
  }
  return systems::Policy::custom(std::move(splits));
}

std::size_t steps_of(const Params& p, const systems::Policy& policy) {
  if (p.has("steps")) return p.count("steps");
  if (policy.kind == systems::PolicyKind::kCustom) return policy.splits.size();
  if (policy.kind == systems::PolicyKind::kFixedPoint) return 64;
  // enough leaves for the uniformly distributed branch
  const std::size_t terms = p.j.contains("terms") ? p.count("terms") : 12;
  if (terms + 2 > 20) throw Error(ErrorCode::kSchema, "automatic step count supports at most 18 terms");
  return (std::size_t{1} << (terms + 2)) - 1;
}

std::size_t budget_of(const Params& p, std::size_t steps) {
  return p.has("budget") ? p.count("budget") : std::min<std::size_t>(steps, 32);
}

json witness_json(const systems::Witness& w) {
  if (const auto* pw = std::get_if<systems::PerfectWitness>(&w))
    return {{"kind", "perfect"}, {"root", pw->root.str()}, {"full_depth", pw->full_depth}};
  const auto& sw = std::get<systems::ScatteredWitness>(w);
  json pts = json::array();
  for (const auto& x : sw.points) pts.push_back(serialize::to_json(x));
  return {{"kind", "scattered"}, {"limit", serialize::to_json(sw.limit)}, {"points", std::move(pts)}};
}

json stats_json(const systems::ClassifyStats& s) {
  return {{"max_full_depth", s.max_full_depth},
          {"comb_length", s.comb_length},
          {"perfect_threshold", s.perfect_threshold},
          {"scattered_threshold", s.scattered_threshold}};
}

systems::MassRule rule_of(const Params& p) {
  const std::string r = p.text("rule");
  if (r == "half-half") return systems::MassRule::half_half();
  if (r == "proportional") {
    const Rational share = p.rational("share");
    if (share <= 0 || share >= 1) throw Error(ErrorCode::kSchema, "share must lie strictly between 0 and 1");
    return systems::MassRule::proportional(share);
  }
  throw Error(ErrorCode::kSchema, "rule must be half-half or proportional, not '" + r + "'");
}

// ---------------------------------------------------------------- ideal

std::vector<ideal::IdealSet> ideal_sets(const Params& p, std::uint64_t m, json& echo) {
  if (p.has("sets")) return ideal::parse_sets(p.j.at("sets"), m);
  // C_i: element 1 + (i mod 7) of every block from i on, certificate (n+1)^-j
  json sets = json::array();
  for (std::uint64_t i = 0; i < p.count("count"); ++i) {
    const std::uint64_t j = 1 + i % 7;
    sets.push_back({{"kind", "block-element"},
                    {"index", j},
                    {"from", i},
                    {"m", m},
                    {"certificate", {{"form", "power"}, {"c", "1/1"}, {"exponent", j}}}});
  }
  echo = sets;
  return ideal::parse_sets(sets, m);
}

std::uint64_t block_size(const std::string& partition) {
  const auto pos = partition.find("m=");
  return pos == std::string::npos ? 0 : std::stoull(partition.substr(pos + 2));
}

// ---------------------------------------------------------------- dispatch

int run_jn(const std::string& sub, const Params& p, std::uint64_t seed, const Outputs& out, std::ostream& log) {
  if (sub == "standard") return emit_sequence(jn::standard_sequence(), p, seed, p.flag("verify"), out, log);
  if (sub == "independent") return emit_sequence(jn::independent_sequence(), p, seed, p.flag("verify"), out, log);
  if (sub == "scattered") return emit_sequence(scattered_from(p), p, seed, p.flag("verify"), out, log);
  if (sub == "uds") return emit_sequence(uds_van_der_corput(), p, seed, p.flag("verify"), out, log);

  if (sub == "transport") {
    const int d = p.depth("map_depth");
    const cantor::TreeMap f = maps::by_name(p.text("map"), d, seed);
    const std::size_t terms = p.count("terms");
    const Rational bound = p.rational("overlap_bound");
    std::vector<measures::FsMeasure> nus;
    json flags = json::array();
    bool hypothesis_ok = true;
    for (std::size_t n = 0; n < terms; ++n) {
      jn::TransportResult r = jn::transport(f, static_cast<unsigned>(n), d, bound);
      hypothesis_ok = hypothesis_ok && !r.hypothesis_violated;
      flags.push_back({{"n", n},
                       {"hypothesis_violated", r.hypothesis_violated},
                       {"max_overlap", to_string(r.max_overlap)},
                       {"overlap_witness", serialize::to_json(r.overlap_witness)}});
      nus.push_back(std::move(r.measure));
    }
    jn::MeasureSequence seq = jn::from_terms("transport", std::move(nus), d);
    seq.params = {{"map", p.text("map")}, {"map_depth", d}};
    const auto tests = verify::family_sets(verify::Family::cylinders(), std::min(p.depth("depth"), d));
    json bounds = json::array();
    bool bound_ok = true;
    for (std::size_t n = 0; n < terms; ++n) {
      const jn::TransportBoundReport rep = jn::transport_bound_check(f, static_cast<unsigned>(n), tests);
      bound_ok = bound_ok && rep.holds;
      bounds.push_back({{"n", n}, {"holds", rep.holds}, {"n0", rep.n0}, {"n1", rep.n1}});
    }
    out.write_json("result.json", {{"map", serialize::to_json(f)}, {"overlap", flags}, {"bound_checks", bounds}});
    const int code = emit_sequence(seq, p, seed, p.flag("verify"), out, log);
    if (!hypothesis_ok) log << "transport: overlap above the configured bound (flagged in result.json)\n";
    if (!bound_ok) {
      log << "transport: bound check failed\n";
      return kExitVerificationFailed;
    }
    return code;
  }

  if (sub == "disjointify") {
    const std::string input = p.text("input");
    jn::MeasureSequence seq;
    if (input == "scattered-comb")
      seq = jn::scattered_jn(comb(p.count("terms")), cantor::Point::constant(0), 6);
    else if (input == "random-pairs")
      seq = jn::random_pair_sequence(seed, p.count("terms"));
    else
      throw Error(ErrorCode::kSchema, "input must be scattered-comb or random-pairs, not '" + input + "'");
    const jn::DisjointifyResult r = jn::disjointify(seq, p.count("horizon"), p.rational("tol"));
    json thetas = json::array();
    for (const auto& t : r.terms) thetas.push_back(serialize::to_json(t));
    json alphas = json::array();
    for (const auto& [x, w] : r.limit_weights) alphas.push_back({{"point", serialize::to_json(x)}, {"weight", to_string(w)}});
    out.write_json("measures.json", {{"construction", "disjointified"}, {"params", seq.params}, {"terms", thetas}});
    out.write_json("result.json", {{"verified", r.verified},
                                   {"subsequence", r.subsequence},
                                   {"limit_weights", alphas},
                                   {"failures", r.failures}});
    log << "disjointify: " << r.terms.size() << " terms, " << (r.verified ? "verified" : "FAILED post-verification") << "\n";
    return r.verified ? kExitOk : kExitVerificationFailed;
  }

  if (sub == "truncate") {
    const std::size_t n = p.count("n");
    const measures::FsMeasure mu = jn::truncate_csjn(jn::geometric_csjn, n);
    out.write_json("measures.json", {{"construction", "truncated-geometric"},
                                     {"params", {{"n", n}}},
                                     {"terms", json::array({serialize::to_json(mu)})}});
    log << "truncate: head of " << mu.support_size() << " atoms, norm " << to_string(mu.norm()) << "\n";
    return kExitOk;
  }
  throw Error(ErrorCode::kSchema, "unknown command 'jn " + sub + "'");
}

int run_systems(const std::string& sub, const Params& p, const Outputs& out, std::ostream& log) {
  const systems::Policy policy = policy_of(p);
  const std::size_t steps = steps_of(p, policy);
  const systems::SimpleSystem sys = systems::build_system(policy, steps);
  out.write_json("system.json", sys.to_json());
  if (sub == "build") {
    log << "systems build: " << steps << " steps, " << systems::to_string(policy.kind) << "\n";
    return kExitOk;
  }
  if (sub == "classify") {
    systems::ClassifyStats stats;
    const systems::Witness w = systems::classify(sys, budget_of(p, steps), &stats);
    out.write_json("result.json", {{"witness", witness_json(w)}, {"stats", stats_json(stats)}});
    log << "systems classify: " << (std::holds_alternative<systems::PerfectWitness>(w) ? "perfect" : "scattered") << "\n";
    return kExitOk;
  }
  if (sub == "pipeline") {
    systems::PipelineOptions opt;
    opt.budget = budget_of(p, steps);
    opt.depth = p.depth("depth");
    opt.check_depth = p.depth("check_depth");
    opt.terms = p.count("terms");
    opt.tol = p.rational("tol");
    opt.rule = rule_of(p);
    const systems::PipelineResult r = systems::fsjnp_pipeline(sys, opt);
    const verify::Format format = parse_format(p.text("format"));
    out.write_json("measures.json", measures_json(r.sequence, r.check.verdict.terms));
    verify::emit(r.check.verdict, format, out.path(report_name(format)));
    out.write_json("result.json", {{"witness", witness_json(r.witness)}, {"sequence", r.sequence.name}, {"passed", r.check.passed}});
    log << "systems pipeline: " << (std::holds_alternative<systems::PerfectWitness>(r.witness) ? "perfect" : "scattered")
        << " branch, " << r.sequence.name << ", " << (r.check.passed ? "pass" : "FAIL") << "\n";
    return r.check.passed ? kExitOk : kExitVerificationFailed;
  }
  throw Error(ErrorCode::kSchema, "unknown command 'systems " + sub + "'");
}

int run_ideal(const std::string& sub, const Params& p, const Outputs& out, std::ostream& log) {
  const ideal::WeightedPartition part = ideal::parse_partition(p.text("partition"), p.text("weights"));
  json sets_echo = p.j.at("sets");
  const auto cs = ideal_sets(p, block_size(p.text("partition")), sets_echo);
  if (cs.empty()) throw Error(ErrorCode::kSchema, "at least one set is needed");
  const std::size_t k = p.has("k") ? p.count("k") : cs.size();
  if (k > cs.size()) throw Error(ErrorCode::kSchema, "k must not exceed the number of sets");

  std::vector<std::uint64_t> schedule;
  if (sub == "verify" && p.has("schedule")) {
    for (const json& n : p.j.at("schedule")) {
      if (!n.is_number_unsigned()) throw Error(ErrorCode::kSchema, "schedule entries must be non-negative integers");
      schedule.push_back(n.get<std::uint64_t>());
    }
  } else {
    schedule = ideal::pseudo_union(part, cs, k, p.count("inverse_cap")).schedule;
  }
  if (sub == "pseudo-union") {
    out.write_json("result.json", {{"partition", part.name}, {"sets", sets_echo}, {"schedule", schedule}});
    log << "ideal pseudo-union: schedule of " << schedule.size() << " entries\n";
    return kExitOk;
  }
  if (sub == "verify") {
    const std::vector<ideal::IdealSet> used(cs.begin(), cs.begin() + static_cast<std::ptrdiff_t>(std::min(cs.size(), schedule.size())));
    const ideal::IdealSet c = ideal::union_from_schedule(part, used, schedule);
    const ideal::PseudoUnionReport rep = ideal::verify_pseudo_union(part, used, c, schedule, p.count("horizon"));
    out.write_json("result.json", {{"partition", part.name}, {"schedule", schedule}, {"report", ideal::to_json(rep)}});
    log << "ideal verify: " << rep.violations.size() << " violations\n";
    return rep.passed() ? kExitOk : kExitVerificationFailed;
  }
  throw Error(ErrorCode::kSchema, "unknown command 'ideal " + sub + "'");
}

int run_emit(const Params& p, const Outputs& out, std::ostream& log) {
  const std::string input = p.text("input");
  if (input.empty()) throw Error(ErrorCode::kSchema, "emit needs an input verdict file");
  std::ifstream in(input, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read '" + input + "'");
  std::ostringstream text;
  text << in.rdbuf();
  const verify::Verdict v = verify::parse_verdict_json(text.str());
  const verify::Format format = parse_format(p.text("format"));
  const std::string path = p.has("output") ? p.text("output") : out.path(report_name(format));
  verify::emit(v, format, path);
  log << "emit: wrote " << path << "\n";
  return kExitOk;
}

std::uint64_t parse_seed(const std::string& text) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used, 10);
    if (used != text.size() || text.front() == '-') throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kSchema, std::string(kSeedEnv) + " must be a non-negative integer, not '" + text + "'");
  }
}

}  // namespace

// ---------------------------------------------------------------- public API

const std::vector<CommandInfo>& command_table() {
  static const std::vector<CommandInfo> table = build_table();
  return table;
}

const CommandInfo& command_info(const std::string& name) {
  for (const auto& c : command_table())
    if (c.name == name) return c;
  throw Error(ErrorCode::kSchema, "unknown command '" + name + "'");
}

std::vector<std::string> commands() {
  std::vector<std::string> out;
  for (const auto& c : command_table()) out.push_back(c.name);
  return out;
}

json RunConfig::to_json() const {
  return {{"command", command}, {"params", params}, {"seed", seed}, {"out_dir", out_dir}};
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kSchema, "config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (key != "command" && key != "params" && key != "seed" && key != "out_dir")
      throw Error(ErrorCode::kSchema, "unknown config field '" + key + "'");
  RunConfig c;
  if (!j.contains("command") || !j.at("command").is_string()) throw Error(ErrorCode::kSchema, "config needs a \"command\" string");
  c.command = j.at("command").get<std::string>();
  if (j.contains("params")) {
    if (!j.at("params").is_object()) throw Error(ErrorCode::kSchema, "\"params\" must be an object");
    c.params = j.at("params");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw Error(ErrorCode::kSchema, "\"seed\" must be a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("out_dir")) {
    if (!j.at("out_dir").is_string()) throw Error(ErrorCode::kSchema, "\"out_dir\" must be a string");
    c.out_dir = j.at("out_dir").get<std::string>();
  }
  return c;
}

RunConfig normalize(const RunConfig& config) {
  const CommandInfo& info = command_info(config.command);
  RunConfig out = config;
  out.params = info.defaults;
  for (const auto& [key, value] : config.params.items()) {
    if (!info.defaults.contains(key)) throw Error(ErrorCode::kSchema, "'" + config.command + "' has no parameter '" + key + "'");
    const json& def = info.defaults.at(key);
    const json::value_t expected = def.is_null() ? nullable_type(key) : def.type();
    if (!value.is_null() && !type_matches(expected, value))
      throw Error(ErrorCode::kSchema, "parameter '" + key + "' must be " + type_name(expected));
    if (value.is_null() && !def.is_null()) throw Error(ErrorCode::kSchema, "parameter '" + key + "' cannot be null");
    out.params[key] = value;
  }
  for (const auto& [key, value] : out.params.items())
    if ((key == "tol" || key == "share" || key == "overlap_bound") && value.is_string()) parse_rational(value.get<std::string>());
  if (out.out_dir.empty()) throw Error(ErrorCode::kSchema, "out_dir must not be empty");
  return out;
}

int run(const RunConfig& config, std::ostream& log) {
  try {
    RunConfig c = config;
    if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') c.seed = parse_seed(env);
    c = normalize(c);
    const Outputs out(c.out_dir);
    out.write_json("config.json", c.to_json());
    const Params p{c.params};
    const auto space = c.command.find(' ');
    const std::string group = c.command.substr(0, space);
    const std::string sub = space == std::string::npos ? "" : c.command.substr(space + 1);
    if (group == "jn") return run_jn(sub, p, c.seed, out, log);
    if (group == "systems") return run_systems(sub, p, out, log);
    if (group == "ideal") return run_ideal(sub, p, out, log);
    if (group == "emit") return run_emit(p, out, log);
    return emit_sequence(named_sequence(p.text("construction"), p, c.seed), p, c.seed, true, out, log);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kSchema || e.code() == ErrorCode::kIo ? kExitSchema : kExitConstruction;
  } catch (const json::exception& e) {
    log << "error: schema: " << e.what() << "\n";
    return kExitSchema;
  }
}

int run_file(const std::string& path, std::ostream& log) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    log << "error: io: cannot read '" << path << "'\n";
    return kExitSchema;
  }
  json j;
  try {
    j = json::parse(in);
    return run(RunConfig::from_json(j), log);
  } catch (const json::exception& e) {
    log << "error: schema: " << e.what() << "\n";
    return kExitSchema;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kSchema || e.code() == ErrorCode::kIo ? kExitSchema : kExitConstruction;
  }
}

}  // namespace jnlab::cli
