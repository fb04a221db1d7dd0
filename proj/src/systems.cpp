#include "jnlab/systems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <functional>

#include "jnlab/error.hpp"

namespace jnlab::systems {

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kRoundRobin: return "round-robin";
    case PolicyKind::kFixedPoint: return "fixed-point";
    case PolicyKind::kCustom: return "custom";
  }
  return "?";
}

PolicyKind parse_policy(const std::string& text) {
  if (text == "round-robin") return PolicyKind::kRoundRobin;
  if (text == "fixed-point") return PolicyKind::kFixedPoint;
  if (text == "custom") return PolicyKind::kCustom;
  throw Error(ErrorCode::kSchema, "unknown policy '" + text + "'");
}

namespace {

constexpr int kMaxCodeLength = 1 << 12;

bool compatible(const Word& a, const Word& b) { return a.is_prefix_of(b) || b.is_prefix_of(a); }

Point thread(const Word& code) { return Point(code, 0); }

}  // namespace

// ---------------------------------------------------------------- building

SimpleSystem SimpleSystem::make(const Policy& policy, std::size_t steps) {
  SimpleSystem sys;
  sys.policy_ = policy;
  sys.codes_.push_back(Word{});
  auto split = [&](std::size_t x) {
    const Word w = sys.codes_[x];
    if (w.size() >= kMaxCodeLength)
      throw Error(ErrorCode::kDepthExceeded, "code of point " + std::to_string(x) + " grew beyond the supported length");
    sys.codes_[x] = w.child(0);
    sys.codes_.push_back(w.child(1));
    sys.splits_.push_back(x);
  };
  switch (policy.kind) {
    case PolicyKind::kRoundRobin: {
      const Word prefix(policy.prefix);
      std::deque<std::size_t> queue{0};
      while (sys.splits_.size() < steps) {
        if (queue.empty()) throw Error(ErrorCode::kInvalidArgument, "round-robin queue ran empty");
        const std::size_t x = queue.front();
        queue.pop_front();
        if (!compatible(sys.codes_[x], prefix)) continue;
        split(x);
        queue.push_back(x);
        queue.push_back(sys.codes_.size() - 1);
      }
      while (!queue.empty() && !compatible(sys.codes_[queue.front()], prefix)) queue.pop_front();
      if (!queue.empty()) sys.settled_ = sys.codes_[queue.front()].size();
      break;
    }
    case PolicyKind::kFixedPoint:
      if (policy.point != 0)
        throw Error(ErrorCode::kInvalidSplitIndex, "fixed point " + std::to_string(policy.point) + " is not in K_0");
      while (sys.splits_.size() < steps) split(policy.point);
      sys.settled_ = sys.codes_[policy.point].size();
      break;
    case PolicyKind::kCustom:
      if (policy.splits.size() < steps)
        throw Error(ErrorCode::kInvalidArgument, "custom policy lists " + std::to_string(policy.splits.size()) + " splits, " +
                                                     std::to_string(steps) + " requested");
      for (std::size_t t = 0; t < steps; ++t) {
        if (policy.splits[t] > t)
          throw Error(ErrorCode::kInvalidSplitIndex, "split index " + std::to_string(policy.splits[t]) + " at step " +
                                                         std::to_string(t) + " is outside K_" + std::to_string(t));
        split(policy.splits[t]);
      }
      break;
  }
  return sys;
}

SimpleSystem build_system(const Policy& policy, std::size_t steps) {
  if (steps == 0) throw Error(ErrorCode::kInvalidArgument, "a system needs at least one step");
  return SimpleSystem::make(policy, steps);
}

std::size_t SimpleSystem::bond(std::size_t t, std::size_t x) const {
  if (t >= steps() || x > t + 1) throw Error(ErrorCode::kInvalidArgument, "point outside K_" + std::to_string(t + 1));
  return x == t + 1 ? splits_[t] : x;
}

std::size_t SimpleSystem::project(std::size_t u, std::size_t t, std::size_t x) const {
  if (t > u || u > steps()) throw Error(ErrorCode::kInvalidArgument, "projection needs t <= u <= steps");
  for (std::size_t s = u; s > t; --s) x = bond(s - 1, x);
  return x;
}

std::vector<Word> SimpleSystem::codes_at(std::size_t t) const {
  if (t > steps()) throw Error(ErrorCode::kInvalidArgument, "stage beyond the system");
  std::vector<Word> codes{Word{}};
  for (std::size_t s = 0; s < t; ++s) {
    const Word w = codes[splits_[s]];
    codes[splits_[s]] = w.child(0);
    codes.push_back(w.child(1));
  }
  return codes;
}

SimpleSystem SimpleSystem::truncated(std::size_t t) const {
  if (t > steps()) throw Error(ErrorCode::kInvalidArgument, "cannot truncate beyond the system");
  Policy p = policy_;
  if (p.kind == PolicyKind::kCustom) p.splits.assign(splits_.begin(), splits_.begin() + static_cast<std::ptrdiff_t>(t));
  return make(p, t);
}

nlohmann::json SimpleSystem::to_json() const {
  nlohmann::json j = {{"policy", systems::to_string(policy_.kind)}, {"splits", splits_}};
  if (policy_.kind == PolicyKind::kRoundRobin && !policy_.prefix.empty()) j["prefix"] = policy_.prefix;
  if (policy_.kind == PolicyKind::kFixedPoint) j["point"] = policy_.point;
  return j;
}

SimpleSystem SimpleSystem::from_json(const nlohmann::json& j) {
  try {
    Policy p;
    p.kind = parse_policy(j.at("policy").get<std::string>());
    const auto splits = j.at("splits").get<std::vector<std::size_t>>();
    if (j.contains("prefix")) p.prefix = j.at("prefix").get<std::string>();
    if (j.contains("point")) p.point = j.at("point").get<std::size_t>();
    if (p.kind == PolicyKind::kCustom) p.splits = splits;
    SimpleSystem sys = build_system(p, splits.size());
    if (sys.splits_ != splits) throw Error(ErrorCode::kSchema, "split list does not match the policy");
    return sys;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("system: ") + e.what());
  }
}

PrunedTree limit_tree(const SimpleSystem& sys, int depth) {
  if (depth < 0 || depth > cantor::kMaxNodeDepth) throw Error(ErrorCode::kDepthExceeded, "limit depth out of range");
  if (sys.settled_depth() && depth > *sys.settled_depth())
    throw Error(ErrorCode::kDepthExceeded, "depth " + std::to_string(depth) + " is not settled after " +
                                               std::to_string(sys.steps()) + " steps (settled through " +
                                               std::to_string(*sys.settled_depth()) + ")");
  std::vector<Word> leaves;
  for (const Word& c : sys.codes()) leaves.push_back(thread(c).head(depth));
  return PrunedTree::from_leaves(depth, leaves);
}

// ---------------------------------------------------------------- classify

namespace {

struct Trie {
  struct Node {
    int child[2] = {-1, -1};
    Word word;
    int full = 0;
    int comb = 0;
    bool leaf() const { return child[0] < 0; }
  };
  std::vector<Node> nodes;

  explicit Trie(const std::vector<Word>& codes) {
    nodes.push_back({});
    for (const Word& c : codes) {
      int cur = 0;
      for (int i = 0; i < c.size(); ++i) {
        const int b = c[i];
        if (nodes[static_cast<std::size_t>(cur)].child[b] < 0) {
          Node n;
          n.word = nodes[static_cast<std::size_t>(cur)].word.child(b);
          nodes[static_cast<std::size_t>(cur)].child[b] = static_cast<int>(nodes.size());
          nodes.push_back(std::move(n));
        }
        cur = nodes[static_cast<std::size_t>(cur)].child[b];
      }
    }
    // Children are created after parents, so a reverse sweep is bottom-up.
    for (std::size_t i = nodes.size(); i-- > 0;) {
      Node& n = nodes[i];
      if (n.leaf()) continue;
      const Node& a = nodes[static_cast<std::size_t>(n.child[0])];
      const Node& b = nodes[static_cast<std::size_t>(n.child[1])];
      n.full = 1 + std::min(a.full, b.full);
      int deeper = 0;
      for (const Node* c : {&a, &b})
        if (!c->leaf()) deeper = std::max(deeper, c->comb);
      n.comb = ((a.leaf() || b.leaf()) ? 1 : 0) + deeper;
    }
  }
};

int floor_log2(std::size_t v) { return v == 0 ? 0 : static_cast<int>(std::bit_width(v)) - 1; }

}  // namespace

Witness classify(const SimpleSystem& sys, std::size_t budget, ClassifyStats* stats) {
  if (budget > sys.steps()) throw Error(ErrorCode::kInvalidArgument, "budget exceeds the system's step count");
  const SimpleSystem head = sys.truncated(budget);
  const Trie trie(head.codes());
  ClassifyStats st;
  st.perfect_threshold = std::max(2, floor_log2(budget + 1) - 1);
  st.scattered_threshold = std::max(3, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(budget)))));
  const Trie::Node* best = &trie.nodes[0];
  for (const auto& n : trie.nodes) {
    if (n.full > best->full || (n.full == best->full && (n.word.size() < best->word.size() ||
                                                         (n.word.size() == best->word.size() && n.word < best->word))))
      best = &n;
  }
  st.max_full_depth = best->full;
  st.comb_length = trie.nodes[0].comb;
  if (stats) *stats = st;

  if (st.max_full_depth >= st.perfect_threshold) {
    PerfectWitness w;
    w.root = best->word;
    w.full_depth = best->full;
    std::vector<Word> leaves;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << w.full_depth); ++i)
      leaves.push_back(w.root.concat(Word::from_index(i, w.full_depth)));
    w.subtree = PrunedTree::from_leaves(w.root.size() + w.full_depth, leaves);
    return w;
  }
  if (st.comb_length >= st.scattered_threshold) {
    ScatteredWitness w;
    const Trie::Node* cur = &trie.nodes[0];
    while (!cur->leaf()) {
      const auto& a = trie.nodes[static_cast<std::size_t>(cur->child[0])];
      const auto& b = trie.nodes[static_cast<std::size_t>(cur->child[1])];
      const Trie::Node* next;
      if (a.leaf() && b.leaf()) {
        w.points.push_back(thread(b.word));
        next = &a;
      } else if (a.leaf() || b.leaf()) {
        w.points.push_back(thread(a.leaf() ? a.word : b.word));
        next = a.leaf() ? &b : &a;
      } else {
        next = b.comb > a.comb ? &b : &a;
      }
      cur = next;
    }
    w.limit = thread(cur->word);
    return w;
  }
  throw Error(ErrorCode::kInconclusiveAtBudget,
              "full depth " + std::to_string(st.max_full_depth) + " < " + std::to_string(st.perfect_threshold) + " and comb " +
                  std::to_string(st.comb_length) + " < " + std::to_string(st.scattered_threshold) + " after " +
                  std::to_string(budget) + " steps");
}

// ---------------------------------------------------------------- measures

NodeMeasure::NodeMeasure(const SimpleSystem& sys, const MassRule& rule)
    : sys_(std::make_shared<const SimpleSystem>(sys)), rule_(rule) {
  if (rule.kind == MassRuleKind::kHalfHalf) rule_.survivor_share = Rational(1, 2);
  if (rule_.survivor_share < 0 || rule_.survivor_share > 1)
    throw Error(ErrorCode::kInvalidArgument, "survivor share must lie in [0, 1]");
  final_ = forward_masses(sys.steps());
}

std::vector<Rational> NodeMeasure::forward_masses(std::size_t t) const {
  if (t > sys_->steps()) throw Error(ErrorCode::kInvalidArgument, "stage beyond the system");
  std::vector<Rational> m{Rational(1)};
  for (std::size_t s = 0; s < t; ++s) {
    const std::size_t x = sys_->splits()[s];
    m.push_back(m[x] * (1 - rule_.survivor_share));
    m[x] *= rule_.survivor_share;
  }
  return m;
}

std::vector<Rational> NodeMeasure::stage_masses(std::size_t t) const {
  if (t > sys_->steps()) throw Error(ErrorCode::kInvalidArgument, "stage beyond the system");
  std::vector<Rational> m = final_;
  for (std::size_t u = sys_->steps(); u > t; --u) {
    m[sys_->splits()[u - 1]] += m.back();
    m.pop_back();
  }
  return m;
}

std::vector<Rational> NodeMeasure::node_masses(int depth) const {
  limit_tree(*sys_, depth);  // depth must be settled
  std::vector<Rational> out(std::size_t{1} << depth, Rational(0));
  for (std::size_t x = 0; x < final_.size(); ++x) out[thread(sys_->codes()[x]).head(depth).index()] += final_[x];
  return out;
}

NodeMeasure NodeMeasure::conditioned(const Word& root) const {
  NodeMeasure out = *this;
  Rational mass = 0;
  for (std::size_t x = 0; x < final_.size(); ++x) {
    if (thread(sys_->codes()[x]).head(root.size()) == root)
      mass += final_[x];
    else
      out.final_[x] = 0;
  }
  if (mass == 0) throw Error(ErrorCode::kZeroMeasure, "no mass under [" + root.str() + "]");
  for (Rational& w : out.final_) w /= mass;
  out.root_ = root;
  out.root_mass_ = mass * root_mass_;
  return out;
}

std::vector<Point> ud_sequence(const NodeMeasure& m, int depth, std::size_t count) {
  std::vector<std::vector<Rational>> mass(static_cast<std::size_t>(depth + 1));
  mass[static_cast<std::size_t>(depth)] = m.node_masses(depth);
  const Rational threshold = pow2_inv(static_cast<unsigned>((depth + 1) / 2));
  for (std::size_t i = 0; i < mass.back().size(); ++i)
    if (mass.back()[i] > threshold)
      throw Error(ErrorCode::kAtomicMeasure, "node " + Word::from_index(i, depth).str() + " carries mass " +
                                                 jnlab::to_string(mass.back()[i]) + " > " + jnlab::to_string(threshold));
  // capacity = number of positive-mass leaves below each node
  std::vector<std::vector<std::size_t>> cap(static_cast<std::size_t>(depth + 1));
  cap[static_cast<std::size_t>(depth)].resize(mass.back().size());
  for (std::size_t i = 0; i < mass.back().size(); ++i) cap.back()[i] = mass.back()[i] > 0 ? 1 : 0;
  for (int d = depth - 1; d >= 0; --d) {
    const auto ud = static_cast<std::size_t>(d);
    mass[ud].assign(std::size_t{1} << d, Rational(0));
    cap[ud].assign(std::size_t{1} << d, 0);
    for (std::size_t i = 0; i < mass[ud + 1].size(); ++i) {
      mass[ud][i >> 1] += mass[ud + 1][i];
      cap[ud][i >> 1] += cap[ud + 1][i];
    }
  }
  std::vector<std::vector<std::size_t>> used(static_cast<std::size_t>(depth + 1));
  for (int d = 0; d <= depth; ++d) used[static_cast<std::size_t>(d)].assign(std::size_t{1} << d, 0);

  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    if (used[0][0] >= cap[0][0])
      throw Error(ErrorCode::kAtomicMeasure, "only " + std::to_string(cap[0][0]) + " distinct points exist at depth " +
                                                 std::to_string(depth));
    std::uint64_t v = 0;
    for (int d = 0; d < depth; ++d) {
      const auto ud = static_cast<std::size_t>(d);
      int pick = -1;
      Rational best;
      for (int b = 0; b < 2; ++b) {
        const std::uint64_t c = 2 * v + static_cast<std::uint64_t>(b);
        if (mass[ud + 1][c] == 0 || used[ud + 1][c] >= cap[ud + 1][c]) continue;
        const Rational under = Rational(static_cast<unsigned long>(used[ud][v])) * mass[ud + 1][c] / mass[ud][v] -
                               static_cast<unsigned long>(used[ud + 1][c]);
        if (pick < 0 || under > best) pick = b, best = under;
      }
      ++used[ud][v];
      v = 2 * v + static_cast<std::uint64_t>(pick);
    }
    ++used[static_cast<std::size_t>(depth)][v];
    out.push_back(Point(Word::from_index(v, depth), 0));
  }
  return out;
}

Point ud_point(const NodeMeasure& m, int depth, std::size_t n) { return ud_sequence(m, depth, n + 1).back(); }

// ---------------------------------------------------------------- pipeline

PipelineResult fsjnp_pipeline(const SimpleSystem& sys, const PipelineOptions& opt) {
  Witness w = classify(sys, opt.budget);
  if (const auto* sc = std::get_if<ScatteredWitness>(&w)) {
    jn::MeasureSequence seq = jn::scattered_jn(sc->points, sc->limit, opt.depth);
    const std::size_t terms = std::min(opt.terms, sc->points.size());
    verify::CheckResult check = verify::check_fsjn(seq, opt.check_depth, terms, opt.tol);
    return {std::move(w), std::move(seq), std::move(check)};
  }
  const auto& pw = std::get<PerfectWitness>(w);
  const std::uint64_t needed = jn::uds_partition(static_cast<unsigned>(opt.terms + 1)).hi;
  const int settled = sys.settled_depth().value_or(cantor::kMaxNodeDepth);
  const NodeMeasure m = NodeMeasure(sys, opt.rule).conditioned(pw.root);
  int depth = std::max(pw.root.size() + 1, opt.check_depth);
  for (;; ++depth) {
    if (depth > settled || depth > cantor::kMaxNodeDepth)
      throw Error(ErrorCode::kDepthExceeded, std::to_string(needed) + " distinct points need more than the settled depth " +
                                                 std::to_string(settled));
    const auto leaves = limit_tree(sys, depth).nodes_at(depth);
    const auto under = std::count_if(leaves.begin(), leaves.end(), [&](const Word& x) { return pw.root.is_prefix_of(x); });
    if (static_cast<std::uint64_t>(under) >= needed) break;
  }
  auto points = std::make_shared<std::vector<Point>>(ud_sequence(m, depth, needed));
  jn::MeasureSequence seq = jn::uds_sequence([points](std::uint64_t k) { return points->at(k); }, "greedy-ud");
  seq.params["root"] = pw.root.str();
  seq.params["depth"] = depth;
  verify::CheckResult check = verify::check_fsjn(seq, opt.check_depth, opt.terms, opt.tol);
  return {std::move(w), std::move(seq), std::move(check)};
}

// ---------------------------------------------------------------- invariants

bool check_bonding_law(const SimpleSystem& sys) {
  std::vector<std::vector<Word>> codes;
  for (std::size_t t = 0; t <= sys.steps(); ++t) codes.push_back(sys.codes_at(t));
  for (std::size_t u = 1; u <= sys.steps(); ++u)
    for (std::size_t s = 0; s < u; ++s)
      for (std::size_t x = 0; x <= u; ++x) {
        const std::size_t y = sys.project(u, s, x);
        if (!codes[s][y].is_prefix_of(codes[u][x])) return false;
        std::size_t matches = 0;
        for (const Word& c : codes[s])
          if (c.is_prefix_of(codes[u][x])) ++matches;
        if (matches != 1) return false;
      }
  return true;
}

bool check_simple_extension_boundaries(const SimpleSystem& sys, std::size_t t, int depth) {
  if (t >= sys.steps() || t + 2 > 16) throw Error(ErrorCode::kInvalidArgument, "boundary check needs t < steps and t + 2 <= 16");
  const auto lower = sys.codes_at(t), upper = sys.codes_at(t + 1);
  auto heads = [depth](const std::vector<Word>& codes) {
    std::vector<Word> h;
    for (const Word& c : codes) h.push_back(thread(c).head(depth));
    return h;
  };
  const auto hl = heads(lower), hu = heads(upper);
  auto boundary = [](const std::vector<Word>& h, std::uint32_t set) {
    std::uint32_t out = 0;
    for (std::size_t p = 0; p < h.size(); ++p) {
      if (!((set >> p) & 1U)) continue;
      for (std::size_t q = 0; q < h.size(); ++q)
        if (!((set >> q) & 1U) && h[p] == h[q]) out |= 1U << p;
    }
    return out;
  };
  auto image = [&](std::uint32_t set) {
    std::uint32_t out = 0;
    for (std::size_t x = 0; x < upper.size(); ++x)
      if ((set >> x) & 1U) out |= 1U << sys.bond(t, x);
    return out;
  };
  const std::uint32_t allowed = 1U << sys.splits()[t];
  for (std::uint32_t x = 0; x < (1U << upper.size()); ++x) {
    const std::uint32_t lhs = boundary(hl, image(x)) & ~image(boundary(hu, x));
    if (lhs & ~allowed) return false;
  }
  return true;
}

bool check_irreducible(const SimpleSystem& sys, int depth) {
  if (depth > 4) throw Error(ErrorCode::kInvalidArgument, "exhaustive irreducibility check is limited to depth 4");
  const auto level = limit_tree(sys, depth).level(depth);
  const std::size_t width = level.size();
  // Each final point's fibre, as the set of limit nodes at `depth` it reaches.
  std::vector<std::uint32_t> fibres;
  for (const Word& c : sys.codes()) {
    std::uint32_t f = 0;
    for (std::size_t i = 0; i < width; ++i) {
      const Word node = Word::from_index(i, depth);
      if (level[i] && (c.is_prefix_of(node) || node.is_prefix_of(c))) f |= 1U << i;
    }
    // A code longer than `depth` still has its fibre inside a single node.
    fibres.push_back(f);
  }
  std::uint32_t support = 0;
  for (std::size_t i = 0; i < width; ++i)
    if (level[i]) support |= 1U << i;
  for (std::uint64_t u = 1; u < (std::uint64_t{1} << width); ++u) {
    const auto set = static_cast<std::uint32_t>(u);
    if (!(set & support)) continue;
    bool found = false;
    for (std::uint32_t f : fibres)
      if ((f & ~set) == 0) found = true;
    if (!found) return false;
  }
  return true;
}

}  // namespace jnlab::systems
