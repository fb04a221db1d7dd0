#include "jnlab/cantor.hpp"

#include <algorithm>

#include "jnlab/error.hpp"

namespace jnlab::cantor {

namespace {

void require_node_depth(int depth) {
  if (depth < 0 || depth > kMaxNodeDepth)
    throw Error(ErrorCode::kDepthExceeded, "node depth " + std::to_string(depth) + " outside [0, " +
                                               std::to_string(kMaxNodeDepth) + "]");
}

std::size_t width(int depth) { return std::size_t{1} << depth; }

}  // namespace

// ---------------------------------------------------------------- Word

Word::Word(std::string_view bits) : bits_(bits) {
  for (char c : bits_)
    if (c != '0' && c != '1') throw Error(ErrorCode::kSchema, "bit word must contain only 0/1: '" + bits_ + "'");
}

Word Word::from_index(std::uint64_t index, int length) {
  Word w;
  w.bits_.resize(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) w.bits_[static_cast<std::size_t>(i)] = ((index >> (length - 1 - i)) & 1U) ? '1' : '0';
  return w;
}

Word Word::repeat(int bit, int length) {
  Word w;
  w.bits_.assign(static_cast<std::size_t>(std::max(length, 0)), bit ? '1' : '0');
  return w;
}

std::uint64_t Word::index() const {
  if (bits_.size() > 63) throw Error(ErrorCode::kDepthExceeded, "word too long for a node index");
  std::uint64_t v = 0;
  for (char c : bits_) v = (v << 1) | (c == '1' ? 1U : 0U);
  return v;
}

Word Word::child(int bit) const {
  Word w = *this;
  w.bits_.push_back(bit ? '1' : '0');
  return w;
}

Word Word::prefix(int length) const {
  Word w;
  w.bits_ = bits_.substr(0, static_cast<std::size_t>(std::max(length, 0)));
  return w;
}

Word Word::concat(const Word& other) const {
  Word w = *this;
  w.bits_ += other.bits_;
  return w;
}

Word Word::flipped() const {
  Word w = *this;
  for (char& c : w.bits_) c = c == '1' ? '0' : '1';
  return w;
}

bool Word::is_prefix_of(const Word& other) const {
  return bits_.size() <= other.bits_.size() && other.bits_.compare(0, bits_.size(), bits_) == 0;
}

// ---------------------------------------------------------------- Point

Point::Point(Word prefix, int tail) : tail_(tail ? 1 : 0) {
  std::string bits = prefix.str();
  const char t = tail_ ? '1' : '0';
  while (!bits.empty() && bits.back() == t) bits.pop_back();
  prefix_ = Word(bits);
}

Word Point::head(int depth) const {
  std::string bits;
  bits.reserve(static_cast<std::size_t>(depth));
  for (int i = 0; i < depth; ++i) bits.push_back(bit(static_cast<std::size_t>(i)) ? '1' : '0');
  return Word(bits);
}

std::strong_ordering Point::operator<=>(const Point& other) const {
  // Canonical forms differ no later than one bit past the longer prefix.
  const std::size_t n = std::max(prefix_.str().size(), other.prefix_.str().size()) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    const int a = bit(i), b = other.bit(i);
    if (a != b) return a <=> b;
  }
  return std::strong_ordering::equal;
}

std::string Point::to_string() const { return prefix_.str() + "(" + (tail_ ? "1" : "0") + ")"; }

// ---------------------------------------------------------------- Clopen

Clopen::Clopen(int depth, std::vector<bool> mask) : depth_(depth), mask_(std::move(mask)) { canonicalize(); }

Clopen Clopen::full() { return Clopen(0, std::vector<bool>(1, true)); }

Clopen Clopen::cylinder(const Word& node) {
  require_node_depth(node.size());
  std::vector<bool> mask(width(node.size()), false);
  mask[node.index()] = true;
  return Clopen(node.size(), std::move(mask));
}

Clopen Clopen::from_nodes(int depth, std::span<const Word> nodes) {
  require_node_depth(depth);
  std::vector<bool> mask(width(depth), false);
  for (const Word& w : nodes) {
    if (w.size() != depth) throw Error(ErrorCode::kInvalidArgument, "node '" + w.str() + "' is not at depth " + std::to_string(depth));
    mask[w.index()] = true;
  }
  return Clopen(depth, std::move(mask));
}

Clopen Clopen::from_mask(int depth, std::vector<bool> mask) {
  require_node_depth(depth);
  if (mask.size() != width(depth)) throw Error(ErrorCode::kInvalidArgument, "mask size does not match depth");
  return Clopen(depth, std::move(mask));
}

void Clopen::canonicalize() {
  while (depth_ > 0) {
    const std::size_t half = width(depth_ - 1);
    bool collapsible = true;
    for (std::size_t i = 0; i < half && collapsible; ++i) collapsible = mask_[2 * i] == mask_[2 * i + 1];
    if (!collapsible) break;
    std::vector<bool> coarse(half);
    for (std::size_t i = 0; i < half; ++i) coarse[i] = mask_[2 * i];
    mask_ = std::move(coarse);
    --depth_;
  }
}

bool Clopen::is_empty() const { return depth_ == 0 && !mask_[0]; }
bool Clopen::is_full() const { return depth_ == 0 && mask_[0]; }

std::vector<bool> Clopen::mask_at(int depth) const {
  if (depth < depth_) throw Error(ErrorCode::kInvalidArgument, "cannot coarsen a clopen below its canonical depth");
  require_node_depth(depth);
  const int shift = depth - depth_;
  std::vector<bool> out(width(depth));
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = mask_[j >> shift];
  return out;
}

std::vector<Word> Clopen::nodes() const {
  std::vector<Word> out;
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (mask_[i]) out.push_back(Word::from_index(i, depth_));
  return out;
}

std::size_t Clopen::node_count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), true));
}

bool Clopen::contains(const Point& p) const { return mask_[p.head(depth_).index()]; }

bool Clopen::covers(const Word& t) const {
  if (t.size() >= depth_) return mask_[t.prefix(depth_).index()];
  const int shift = depth_ - t.size();
  const std::size_t lo = static_cast<std::size_t>(t.index()) << shift;
  for (std::size_t j = lo; j < lo + width(shift); ++j)
    if (!mask_[j]) return false;
  return true;
}

Rational Clopen::measure() const {
  Rational q(static_cast<unsigned long>(node_count()));
  return q * pow2_inv(static_cast<unsigned>(depth_));
}

namespace {

template <class Op>
Clopen combine(const Clopen& a, const Clopen& b, Op op) {
  const int d = std::max(a.depth(), b.depth());
  std::vector<bool> ma = a.mask_at(d), mb = b.mask_at(d);
  for (std::size_t i = 0; i < ma.size(); ++i) ma[i] = op(ma[i], mb[i]);
  return Clopen::from_mask(d, std::move(ma));
}

}  // namespace

Clopen Clopen::meet(const Clopen& other) const { return combine(*this, other, [](bool x, bool y) { return x && y; }); }
Clopen Clopen::join(const Clopen& other) const { return combine(*this, other, [](bool x, bool y) { return x || y; }); }
Clopen Clopen::difference(const Clopen& other) const {
  return combine(*this, other, [](bool x, bool y) { return x && !y; });
}

Clopen Clopen::complement() const {
  std::vector<bool> m = mask_;
  m.flip();
  return Clopen(depth_, std::move(m));
}

std::string Clopen::to_string() const {
  std::string out = std::to_string(depth_) + ":{";
  bool first = true;
  for (const Word& w : nodes()) {
    if (!first) out += ",";
    out += w.str();
    first = false;
  }
  return out + "}";
}

// ---------------------------------------------------------------- PrunedTree

PrunedTree PrunedTree::full(int depth) {
  require_node_depth(depth);
  std::vector<std::vector<bool>> levels;
  for (int d = 0; d <= depth; ++d) levels.emplace_back(width(d), true);
  return PrunedTree(std::move(levels));
}

PrunedTree PrunedTree::from_leaves(int depth, std::span<const Word> leaves) {
  require_node_depth(depth);
  std::vector<std::vector<bool>> levels;
  for (int d = 0; d <= depth; ++d) levels.emplace_back(width(d), false);
  for (const Word& w : leaves) {
    if (w.size() != depth) throw Error(ErrorCode::kInvalidArgument, "leaf '" + w.str() + "' is not at depth " + std::to_string(depth));
    std::uint64_t idx = w.index();
    for (int d = depth; d >= 0; --d, idx >>= 1) levels[static_cast<std::size_t>(d)][idx] = true;
  }
  if (leaves.empty()) throw Error(ErrorCode::kInvalidArgument, "a pruned tree needs at least one leaf");
  return PrunedTree(std::move(levels));
}

PrunedTree PrunedTree::from_levels(std::vector<std::vector<bool>> levels) {
  if (levels.empty()) throw Error(ErrorCode::kInvalidArgument, "a pruned tree needs a root level");
  const int depth = static_cast<int>(levels.size()) - 1;
  require_node_depth(depth);
  for (int d = 0; d <= depth; ++d)
    if (levels[static_cast<std::size_t>(d)].size() != width(d))
      throw Error(ErrorCode::kInvalidArgument, "level " + std::to_string(d) + " has the wrong width");
  if (!levels[0][0]) throw Error(ErrorCode::kInvalidArgument, "root missing");
  for (int d = 1; d <= depth; ++d) {
    const auto& lvl = levels[static_cast<std::size_t>(d)];
    const auto& up = levels[static_cast<std::size_t>(d - 1)];
    for (std::size_t i = 0; i < lvl.size(); ++i)
      if (lvl[i] && !up[i >> 1])
        throw Error(ErrorCode::kInvalidArgument, "node " + Word::from_index(i, d).str() + " has no parent");
    for (std::size_t i = 0; i < up.size(); ++i)
      if (up[i] && !lvl[2 * i] && !lvl[2 * i + 1])
        throw Error(ErrorCode::kInvalidArgument, "node " + Word::from_index(i, d - 1).str() + " has no child");
  }
  return PrunedTree(std::move(levels));
}

bool PrunedTree::contains(const Word& node) const {
  if (node.size() > depth()) throw Error(ErrorCode::kDepthExceeded, "node deeper than the tree's working depth");
  return levels_[static_cast<std::size_t>(node.size())][node.index()];
}

const std::vector<bool>& PrunedTree::level(int d) const {
  if (d < 0 || d > depth()) throw Error(ErrorCode::kDepthExceeded, "level " + std::to_string(d) + " beyond working depth");
  return levels_[static_cast<std::size_t>(d)];
}

std::vector<Word> PrunedTree::nodes_at(int d) const {
  const auto& lvl = level(d);
  std::vector<Word> out;
  for (std::size_t i = 0; i < lvl.size(); ++i)
    if (lvl[i]) out.push_back(Word::from_index(i, d));
  return out;
}

std::size_t PrunedTree::count_at(int d) const {
  const auto& lvl = level(d);
  return static_cast<std::size_t>(std::count(lvl.begin(), lvl.end(), true));
}

Clopen PrunedTree::as_clopen(int d) const { return Clopen::from_mask(d, level(d)); }

bool PrunedTree::is_full() const {
  for (const auto& lvl : levels_)
    if (std::find(lvl.begin(), lvl.end(), false) != lvl.end()) return false;
  return true;
}

// ---------------------------------------------------------------- TreeMap

TreeMap::TreeMap(PrunedTree domain, PrunedTree codomain, std::vector<std::vector<std::uint64_t>> images)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), images_(std::move(images)) {
  const int depth = domain_.depth();
  if (codomain_.depth() < depth) throw Error(ErrorCode::kInvalidArgument, "codomain tree shallower than domain tree");
  if (static_cast<int>(images_.size()) != depth + 1) throw Error(ErrorCode::kInvalidArgument, "image table has the wrong number of levels");
  for (int d = 0; d <= depth; ++d) {
    const auto& dom = domain_.level(d);
    const auto& cod = codomain_.level(d);
    const auto& img = images_[static_cast<std::size_t>(d)];
    if (img.size() != width(d)) throw Error(ErrorCode::kInvalidArgument, "image level " + std::to_string(d) + " has the wrong width");
    for (std::size_t i = 0; i < img.size(); ++i) {
      if (!dom[i]) {
        if (img[i] != kAbsent) throw Error(ErrorCode::kInvalidArgument, "image given for a node outside the domain");
        continue;
      }
      if (img[i] == kAbsent || img[i] >= width(d) || !cod[img[i]])
        throw Error(ErrorCode::kInvalidArgument,
                    "node " + Word::from_index(i, d).str() + " has no image in the codomain at the same depth");
      if (d > 0 && (img[i] >> 1) != images_[static_cast<std::size_t>(d - 1)][i >> 1])
        throw Error(ErrorCode::kInvalidArgument, "map is not monotone at node " + Word::from_index(i, d).str());
    }
  }
}

TreeMap TreeMap::identity(int depth) {
  PrunedTree t = PrunedTree::full(depth);
  std::vector<std::vector<std::uint64_t>> images;
  for (int d = 0; d <= depth; ++d) {
    std::vector<std::uint64_t> lvl(width(d));
    for (std::size_t i = 0; i < lvl.size(); ++i) lvl[i] = i;
    images.push_back(std::move(lvl));
  }
  return TreeMap(t, t, std::move(images));
}

namespace {

std::vector<std::vector<std::uint64_t>> tabulate(const PrunedTree& domain, const std::function<Word(const Word&)>& f) {
  const int depth = domain.depth();
  std::vector<std::vector<std::uint64_t>> images;
  for (int d = 0; d <= depth; ++d) images.emplace_back(width(d), TreeMap::kAbsent);
  for (const Word& leaf : domain.nodes_at(depth)) {
    const Word img = f(leaf);
    if (img.size() != depth) throw Error(ErrorCode::kInvalidArgument, "map is not level-preserving at '" + leaf.str() + "'");
    std::uint64_t src = leaf.index(), dst = img.index();
    for (int d = depth; d >= 0; --d, src >>= 1, dst >>= 1) {
      auto& slot = images[static_cast<std::size_t>(d)][src];
      if (slot != TreeMap::kAbsent && slot != dst)
        throw Error(ErrorCode::kInvalidArgument,
                    "map is not monotone: node " + Word::from_index(src, d).str() + " receives two images");
      slot = dst;
    }
  }
  return images;
}

PrunedTree image_tree(const PrunedTree& domain, const std::vector<std::vector<std::uint64_t>>& images) {
  const int depth = domain.depth();
  std::vector<Word> leaves;
  for (std::uint64_t v : images[static_cast<std::size_t>(depth)])
    if (v != TreeMap::kAbsent) leaves.push_back(Word::from_index(v, depth));
  return PrunedTree::from_leaves(depth, leaves);
}

}  // namespace

TreeMap TreeMap::from_deepest(const PrunedTree& domain, const std::function<Word(const Word&)>& f) {
  auto images = tabulate(domain, f);
  PrunedTree cod = image_tree(domain, images);
  return TreeMap(domain, std::move(cod), std::move(images));
}

TreeMap TreeMap::from_deepest(const PrunedTree& domain, PrunedTree codomain, const std::function<Word(const Word&)>& f) {
  return TreeMap(domain, std::move(codomain), tabulate(domain, f));
}

Word TreeMap::image(const Word& node) const {
  if (node.size() > depth()) throw Error(ErrorCode::kDepthExceeded, "node '" + node.str() + "' beyond the map's working depth");
  const std::uint64_t v = images_[static_cast<std::size_t>(node.size())][node.index()];
  if (v == kAbsent) throw Error(ErrorCode::kInvalidArgument, "node '" + node.str() + "' is not in the domain");
  return Word::from_index(v, node.size());
}

bool TreeMap::surjective_at(int d) const {
  if (d > depth()) throw Error(ErrorCode::kDepthExceeded, "surjectivity check beyond working depth");
  std::vector<bool> hit(width(d), false);
  for (std::uint64_t v : images_[static_cast<std::size_t>(d)])
    if (v != kAbsent) hit[v] = true;
  return hit == codomain_.level(d);
}

Clopen TreeMap::image_of_clopen(const Clopen& u, int d) const {
  if (d > depth()) throw Error(ErrorCode::kDepthExceeded, "image requested at depth " + std::to_string(d) + " beyond working depth " + std::to_string(depth()));
  if (u.depth() > d) throw Error(ErrorCode::kDepthExceeded, "clopen deeper than the requested image depth");
  const std::vector<bool> in_u = u.mask_at(d);
  const auto& img = images_[static_cast<std::size_t>(d)];
  std::vector<bool> out(width(d), false);
  for (std::size_t i = 0; i < img.size(); ++i)
    if (img[i] != kAbsent && in_u[i]) out[img[i]] = true;
  return Clopen::from_mask(d, std::move(out));
}

}  // namespace jnlab::cantor
