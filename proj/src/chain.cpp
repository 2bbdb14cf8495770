#include "cantor/chain.hpp"

#include "cantor/error.hpp"
#include "cantor/matrices.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace cantor {

std::string_view to_string(LedgerEntry::Kind kind) noexcept {
  return kind == LedgerEntry::Kind::object ? "object" : "morphism";
}

const Anchor* AutomorphismPrefix::at(std::size_t level) const {
  for (const auto& a : anchors) {
    if (a.level == level) return &a;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// GoodMeasureChain

GoodMeasureChain::GoodMeasureChain(GroupDescriptor V) : V_(std::move(V)) {
  if (classify(V_).group_like != Tri::yes) {
    throw Error(ErrorCode::NotGroupLike, "value set is not infinite");
  }
  levels_.push_back(WeightedPartition::unit());
}

const WeightedPartition& GoodMeasureChain::level(std::size_t n) const {
  if (n >= levels_.size()) {
    throw Error(ErrorCode::InvalidInput, "no level " + std::to_string(n));
  }
  return levels_[n];
}

const std::map<CellId, CellId>& GoodMeasureChain::parent_map(std::size_t n) const {
  if (n >= parents_.size()) {
    throw Error(ErrorCode::InvalidInput, "no link " + std::to_string(n));
  }
  return parents_[n];
}

PartitionMorphism GoodMeasureChain::link(std::size_t n) const {
  return PartitionMorphism{level(n + 1), level(n), parent_map(n)};
}

CellId GoodMeasureChain::project(const CellId& cell, std::size_t j, std::size_t i) const {
  if (i > j || j > top()) {
    throw Error(ErrorCode::InvalidInput, "cannot project level " + std::to_string(j) +
                                             " to level " + std::to_string(i));
  }
  CellId c = cell;
  for (std::size_t k = j; k > i; --k) {
    const auto& parents = parents_[k - 1];
    const auto it = parents.find(c);
    if (it == parents.end()) {
      throw Error(ErrorCode::InvalidInput,
                  "cell '" + c + "' is not on level " + std::to_string(k));
    }
    c = it->second;
  }
  return c;
}

PartitionMorphism GoodMeasureChain::projection(std::size_t j, std::size_t i) const {
  PartitionMorphism m{level(j), level(i), {}};
  for (const auto& c : m.source.cells()) m.map.emplace(c.id, project(c.id, j, i));
  return m;
}

std::size_t GoodMeasureChain::append(const PartitionMorphism& link) {
  if (!(link.target == levels_.back())) {
    throw Error(ErrorCode::InvalidInput, "link does not end at the top level");
  }
  if (!verify_morphism(link)) {
    throw Error(ErrorCode::InvalidInput, "link is not a valid morphism");
  }
  link.source.require_in(V_);
  levels_.push_back(link.source);
  parents_.push_back(link.map);
  return top();
}

std::size_t GoodMeasureChain::split_top(const CellId& cell,
                                        const std::vector<ExactValue>& parts) {
  if (parts.size() == 1) return top();
  const Split s = split_cell(levels_.back(), cell, parts, V_);
  return append(s.pi);
}

const LedgerEntry* GoodMeasureChain::find_ledger(const std::string& key) const {
  for (const auto& e : ledger_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

void GoodMeasureChain::record(LedgerEntry entry) {
  if (entry.stage > top()) {
    throw Error(ErrorCode::InvalidInput, "ledger stage beyond the top level");
  }
  ledger_.push_back(std::move(entry));
}

GoodMeasureChain GoodMeasureChain::restore(GroupDescriptor V,
                                           std::vector<WeightedPartition> levels,
                                           std::vector<std::map<CellId, CellId>> parents,
                                           std::vector<LedgerEntry> ledger,
                                           std::size_t schedule_height) {
  GoodMeasureChain chain(std::move(V));
  if (levels.empty() || parents.size() + 1 != levels.size()) {
    throw Error(ErrorCode::InvalidInput, "levels and links do not match");
  }
  chain.levels_ = std::move(levels);
  chain.parents_ = std::move(parents);
  chain.ledger_ = std::move(ledger);
  chain.schedule_height_ = schedule_height;
  if (!chain.valid()) {
    throw Error(ErrorCode::InvalidInput, "stored chain violates its invariants");
  }
  return chain;
}

bool GoodMeasureChain::valid() const {
  if (!(levels_.front() == WeightedPartition::unit())) return false;
  for (const auto& P : levels_) {
    for (const auto& c : P.cells()) {
      if (!member(c.weight, V_)) return false;
    }
  }
  for (std::size_t n = 0; n + 1 < levels_.size(); ++n) {
    if (!verify_morphism(link(n))) return false;
  }
  for (const auto& e : ledger_) {
    if (e.stage > top()) return false;
    const auto& P = levels_[e.stage];
    if (e.lift.size() != P.size()) return false;
    for (const auto& c : P.cells()) {
      if (e.lift.count(c.id) == 0) return false;
    }
  }
  return true;
}

GoodMeasureChain new_chain(const GroupDescriptor& V) { return GoodMeasureChain(V); }

// ---------------------------------------------------------------------------
// Absorption

namespace {

std::string partition_key(const WeightedPartition& P) {
  std::string key;
  for (const auto& c : P.cells()) key += c.id + "=" + c.weight.to_string() + ";";
  return key;
}

}  // namespace

std::string object_key(const WeightedPartition& target) {
  return "object:" + partition_key(target);
}

std::string morphism_key(const PartitionMorphism& challenge, std::size_t level) {
  std::string key = "morphism@" + std::to_string(level) + ":";
  for (const auto& c : challenge.source.cells()) {
    key += c.id + "=" + c.weight.to_string() + ">" + challenge(c.id) + ";";
  }
  return key;
}

namespace {

// Installs am.G as the new top unless p1 is a bijection; returns the stage
// and the map stage -> source(f2).
std::pair<std::size_t, std::map<CellId, CellId>> install(GoodMeasureChain& chain,
                                                         const Amalgam& am) {
  if (am.G.size() == chain.level(chain.top()).size()) {
    std::map<CellId, CellId> lift;
    for (const auto& c : am.G.cells()) lift.emplace(am.p1(c.id), am.p2(c.id));
    return {chain.top(), std::move(lift)};
  }
  const std::size_t stage = chain.append(am.p1);
  return {stage, am.p2.map};
}

}  // namespace

std::size_t absorb_object(GoodMeasureChain& chain, const WeightedPartition& target) {
  target.require_in(chain.V());
  if (!(target.total() == ExactValue(1))) {
    throw Error(ErrorCode::SumMismatch, "object has total " + target.total().to_string());
  }
  const std::string key = object_key(target);
  if (const auto* e = chain.find_ledger(key)) return e->stage;

  const WeightedPartition& base = chain.level(0);
  PartitionMorphism to_base{target, base, {}};
  for (const auto& c : target.cells()) to_base.map.emplace(c.id, base.cells()[0].id);
  const Amalgam am = amalgamate(chain.projection(chain.top(), 0), to_base, chain.V());
  auto [stage, lift] = install(chain, am);
  chain.record({LedgerEntry::Kind::object, key, stage, std::move(lift)});
  return stage;
}

std::size_t absorb_morphism(GoodMeasureChain& chain, const PartitionMorphism& challenge,
                            std::size_t level) {
  if (level > chain.top() || !(challenge.target == chain.level(level))) {
    throw Error(ErrorCode::InvalidChallenge,
                "challenge does not end at level " + std::to_string(level));
  }
  if (!verify_morphism(challenge)) {
    throw Error(ErrorCode::InvalidChallenge, "challenge is not a valid morphism");
  }
  challenge.source.require_in(chain.V());
  const std::string key = morphism_key(challenge, level);
  if (const auto* e = chain.find_ledger(key)) return e->stage;

  const Amalgam am = amalgamate(chain.projection(chain.top(), level), challenge, chain.V());
  auto [stage, lift] = install(chain, am);
  for (const auto& c : chain.level(stage).cells()) {
    if (challenge(lift.at(c.id)) != chain.project(c.id, stage, level)) {
      throw std::logic_error("absorbed challenge does not commute at '" + c.id + "'");
    }
  }
  chain.record({LedgerEntry::Kind::morphism, key, stage, std::move(lift)});
  return stage;
}

namespace {

// Multisets of values (as nondecreasing index sequences into `values`) with
// at most `max_parts` elements summing to exactly 1, in lexicographic order.
std::vector<std::vector<ExactValue>> unit_tuples(const std::vector<ExactValue>& values,
                                                 std::size_t max_parts) {
  std::vector<std::vector<ExactValue>> out;
  std::vector<ExactValue> current;
  const ExactValue one(1);
  std::function<void(std::size_t, const ExactValue&)> go = [&](std::size_t from,
                                                               const ExactValue& s) {
    if (s == one) {
      out.push_back(current);
      return;
    }
    if (current.size() == max_parts) return;
    for (std::size_t i = from; i < values.size(); ++i) {
      const ExactValue next = s + values[i];
      if (next > one) continue;
      current.push_back(values[i]);
      go(i, next);
      current.pop_back();
    }
  };
  go(0, ExactValue(0));
  return out;
}

}  // namespace

void run_schedule(GoodMeasureChain& chain, std::size_t budget) {
  if (budget == 0) throw Error(ErrorCode::PreconditionFailed, "budget must be at least 1");
  for (std::size_t h = chain.schedule_height() + 1; h <= budget; ++h) {
    const auto values = enumerate(chain.V(), h + 1);
    for (const auto& tuple : unit_tuples(values, h + 1)) {
      absorb_object(chain, WeightedPartition::from_weights("o", tuple));
    }
    const std::size_t last = std::min(h - 1, chain.top());
    for (std::size_t i = 0; i <= last; ++i) {
      const WeightedPartition P = chain.level(i);
      for (const auto& c : P.cells()) {
        for (const auto& v : values) {
          const ExactValue rest = c.weight - v;
          if (rest.sign() <= 0 || v < rest) continue;
          const Split s = split_cell(P, c.id, {v, rest}, chain.V());
          absorb_morphism(chain, s.pi, i);
        }
      }
    }
    chain.set_schedule_height(h);
  }
}

// ---------------------------------------------------------------------------
// Clopen sets

namespace {

void require_cells(const GoodMeasureChain& chain, const ClopenSet& U) {
  const auto& P = chain.level(U.level);
  for (const auto& c : U.cells) {
    if (!P.contains(c)) {
      throw Error(ErrorCode::InvalidInput,
                  "cell '" + c + "' is not on level " + std::to_string(U.level));
    }
  }
}

}  // namespace

ExactValue measure(const GoodMeasureChain& chain, const ClopenSet& U) {
  require_cells(chain, U);
  ExactValue total;
  for (const auto& c : U.cells) total += chain.level(U.level).weight(c);
  return total;
}

ClopenSet lift_set(const GoodMeasureChain& chain, const ClopenSet& U, std::size_t level) {
  require_cells(chain, U);
  if (level < U.level) {
    throw Error(ErrorCode::InvalidInput, "cannot lift a set to a shallower level");
  }
  ClopenSet out{level, {}};
  for (const auto& c : chain.level(level).cells()) {
    if (U.cells.count(chain.project(c.id, level, U.level)) > 0) out.cells.insert(c.id);
  }
  return out;
}

ClopenSet canonical(const GoodMeasureChain& chain, const ClopenSet& U) {
  require_cells(chain, U);
  for (std::size_t i = 0; i < U.level; ++i) {
    std::map<CellId, int> state;  // 1: fully inside, 0: fully outside, -1: mixed
    for (const auto& c : chain.level(U.level).cells()) {
      const int in = U.cells.count(c.id) > 0 ? 1 : 0;
      const CellId a = chain.project(c.id, U.level, i);
      const auto it = state.find(a);
      if (it == state.end()) {
        state.emplace(a, in);
      } else if (it->second != in) {
        it->second = -1;
      }
    }
    bool ok = true;
    ClopenSet out{i, {}};
    for (const auto& [a, s] : state) {
      if (s < 0) ok = false;
      if (s == 1) out.cells.insert(a);
    }
    if (ok) return out;
  }
  return U;
}

ClopenSet subset_witness(GoodMeasureChain& chain, const ClopenSet& U, const ClopenSet& W) {
  const ExactValue target = measure(chain, U);
  const ExactValue room = measure(chain, W);
  if (!(target < room)) {
    throw Error(ErrorCode::NotSmaller,
                "measure " + target.to_string() + " is not below " + room.to_string());
  }
  const std::size_t top = chain.top();
  const auto& P = chain.level(top);
  const ClopenSet lifted = lift_set(chain, W, top);
  std::vector<CellId> order(lifted.cells.begin(), lifted.cells.end());
  std::stable_sort(order.begin(), order.end(), [&](const CellId& a, const CellId& b) {
    return P.weight(a) > P.weight(b);
  });

  std::set<CellId> chosen;
  ExactValue rest = target;
  for (const auto& c : order) {
    if (rest.is_zero()) break;
    const ExactValue w = P.weight(c);
    if (w <= rest) {
      chosen.insert(c);
      rest -= w;
      continue;
    }
    chain.split_top(c, {rest, w - rest});
    chosen.insert(c + "/0");
    rest = ExactValue(0);
  }
  return ClopenSet{chain.top(), std::move(chosen)};
}

std::size_t maximal_partition_witness(GoodMeasureChain& chain,
                                      const std::vector<ExactValue>& targets) {
  if (targets.empty()) throw Error(ErrorCode::InvalidInput, "no targets");
  for (const auto& t : targets) {
    if (t.sign() <= 0 || !member(t, chain.V())) {
      throw Error(ErrorCode::NotInV, t.to_string());
    }
  }
  const ExactValue total = sum(targets);
  if (!(total == ExactValue(1))) {
    throw Error(ErrorCode::SumMismatch, "targets sum to " + total.to_string());
  }
  return absorb_object(chain, WeightedPartition::from_weights("m", targets));
}

// ---------------------------------------------------------------------------
// Density

ExactValue smaller_element(const GroupDescriptor& V, const ExactValue& w) {
  const RationalGroup& G0 = V.rational_component();
  std::uint64_t prime = 0;
  if (G0.default_exponent().is_infinite()) {
    for (std::uint64_t p = 2; prime == 0; ++p) {
      if (is_prime(p) && G0.exponent(p).is_infinite()) prime = p;
    }
  } else {
    for (const auto& [p, e] : G0.exceptions()) {
      if (e.is_infinite()) {
        prime = p;
        break;
      }
    }
  }
  if (prime != 0) {
    Rational u(1, prime);
    while (!(ExactValue(u) < w)) u /= prime;
    return ExactValue(u);
  }
  if (V.irrational_components().empty()) {
    throw Error(ErrorCode::NotGroupLike, "finite value set has no small elements");
  }
  // Subtractive Euclid on s and 1 - s: both stay positive elements of V and
  // the smaller one tends to 0 since s is irrational.
  ExactValue a = ExactValue::symbol(V.irrational_components().front().symbol);
  ExactValue b = ExactValue(1) - a;
  while (true) {
    if (a < w) return a;
    if (b < w) return b;
    if (a > b) {
      a -= b;
    } else {
      b -= a;
    }
  }
}

void ensure_depth(GoodMeasureChain& chain, std::size_t depth) {
  while (chain.top() < depth) {
    const WeightedPartition& P = chain.level(chain.top());
    std::vector<WeightedPartition::Cell> cells;
    std::map<CellId, CellId> map;
    for (const auto& c : P.cells()) {
      // Double a small element up to (w/4, w/2].
      ExactValue v = smaller_element(chain.V(), c.weight / 2);
      while (v * Rational(4) <= c.weight) v = v * Rational(2);
      cells.push_back({c.id + "/0", c.weight - v});
      cells.push_back({c.id + "/1", v});
      map.emplace(c.id + "/0", c.id);
      map.emplace(c.id + "/1", c.id);
    }
    WeightedPartition R(std::move(cells));
    chain.append(PartitionMorphism{R, P, std::move(map)});
  }
}

// ---------------------------------------------------------------------------
// Automorphism prefixes

AutomorphismPrefix identity_prefix(const GoodMeasureChain& chain, std::size_t depth) {
  AutomorphismPrefix out;
  for (std::size_t i = 0; i <= depth; ++i) {
    Anchor a{i, {}};
    for (const auto& c : chain.level(i).cells()) a.map.emplace(c.id, c.id);
    out.anchors.push_back(std::move(a));
  }
  return out;
}

AutomorphismPrefix with_induced_anchors(const GoodMeasureChain& chain, Anchor top_anchor) {
  const std::size_t j = top_anchor.level;
  const auto& P = chain.level(j);
  // Running ancestors of every top cell and of its image.
  std::vector<CellId> from, to;
  for (const auto& c : P.cells()) {
    from.push_back(c.id);
    to.push_back(top_anchor.map.at(c.id));
  }
  std::vector<Anchor> lower;
  for (std::size_t i = j; i-- > 0;) {
    const auto& parents = chain.parent_map(i);
    for (auto& c : from) c = parents.at(c);
    for (auto& c : to) c = parents.at(c);
    Anchor a{i, {}};
    bool ok = true;
    for (std::size_t k = 0; k < from.size() && ok; ++k) {
      const auto [it, fresh] = a.map.emplace(from[k], to[k]);
      ok = fresh || it->second == to[k];
    }
    if (ok) {
      std::set<CellId> images;
      for (const auto& [x, y] : a.map) images.insert(y);
      ok = images.size() == a.map.size();
    }
    if (ok) lower.push_back(std::move(a));
  }
  AutomorphismPrefix out;
  out.anchors.assign(lower.rbegin(), lower.rend());
  out.anchors.push_back(std::move(top_anchor));
  return out;
}

bool verify_prefix(const GoodMeasureChain& chain, const AutomorphismPrefix& sigma) {
  if (sigma.anchors.empty()) return false;
  for (std::size_t k = 0; k < sigma.anchors.size(); ++k) {
    const Anchor& a = sigma.anchors[k];
    if (a.level > chain.top()) return false;
    if (k > 0 && sigma.anchors[k - 1].level >= a.level) return false;
    const auto& P = chain.level(a.level);
    if (a.map.size() != P.size()) return false;
    std::set<CellId> images;
    for (const auto& c : P.cells()) {
      const auto it = a.map.find(c.id);
      if (it == a.map.end() || !P.contains(it->second)) return false;
      if (!(P.weight(it->second) == c.weight)) return false;
      images.insert(it->second);
    }
    if (images.size() != P.size()) return false;
    if (k == 0) continue;
    const Anchor& below = sigma.anchors[k - 1];
    for (const auto& [x, y] : a.map) {
      const CellId px = chain.project(x, a.level, below.level);
      if (chain.project(y, a.level, below.level) != below.map.at(px)) return false;
    }
  }
  return true;
}

namespace {

std::vector<CellId> fiber_by_weight(const GoodMeasureChain& chain, const std::set<CellId>& cells,
                                    std::size_t from_level, std::size_t to_level) {
  const auto& P = chain.level(to_level);
  std::vector<CellId> out;
  for (const auto& c : P.cells()) {
    if (cells.count(chain.project(c.id, to_level, from_level)) > 0) out.push_back(c.id);
  }
  std::stable_sort(out.begin(), out.end(), [&](const CellId& a, const CellId& b) {
    return P.weight(a) > P.weight(b);
  });
  return out;
}

// Pairs each piece's fibers at `level` through a common refinement, giving a
// balanced matrix whose rows over D only reach columns over R; then turns it
// into a permutation.
AutomorphismPrefix realize(GoodMeasureChain& chain,
                           const std::vector<std::pair<std::set<CellId>, std::set<CellId>>>& pieces,
                           std::size_t piece_level, std::size_t level) {
  const auto& P = chain.level(level);
  Entries M;
  for (const auto& [D, R] : pieces) {
    auto X = fiber_by_weight(chain, D, piece_level, level);
    auto Y = fiber_by_weight(chain, R, piece_level, level);
    // Cells on both sides stay put; equal weights pair off directly. Only
    // the remainder needs refining, which keeps the cycle split small.
    std::set<CellId> in_y(Y.begin(), Y.end());
    std::vector<CellId> moved;
    for (const auto& x : X) {
      if (in_y.erase(x) > 0) {
        M[{x, x}] += P.weight(x);
      } else {
        moved.push_back(x);
      }
    }
    std::erase_if(Y, [&](const CellId& y) { return in_y.count(y) == 0; });
    std::map<std::string, std::vector<CellId>> free_y;
    for (auto it = Y.rbegin(); it != Y.rend(); ++it) {
      free_y[P.weight(*it).to_string()].push_back(*it);
    }
    X.clear();
    for (const auto& x : moved) {
      auto& ys = free_y[P.weight(x).to_string()];
      if (ys.empty()) {
        X.push_back(x);
        continue;
      }
      M[{x, ys.back()}] += P.weight(x);
      in_y.erase(ys.back());
      ys.pop_back();
    }
    std::erase_if(Y, [&](const CellId& y) { return in_y.count(y) == 0; });
    if (X.empty() && Y.empty()) continue;
    std::vector<ExactValue> wx, wy;
    for (const auto& x : X) wx.push_back(P.weight(x));
    for (const auto& y : Y) wy.push_back(P.weight(y));
    const CommonRefinement cr = common_refinement(wx, wy, chain.V());
    std::vector<std::size_t> ox(cr.parts.size()), oy(cr.parts.size());
    for (std::size_t i = 0; i < cr.left_blocks.size(); ++i) {
      for (auto s : cr.left_blocks[i]) ox[s] = i;
    }
    for (std::size_t i = 0; i < cr.right_blocks.size(); ++i) {
      for (auto s : cr.right_blocks[i]) oy[s] = i;
    }
    for (std::size_t s = 0; s < cr.parts.size(); ++s) M[{X[ox[s]], Y[oy[s]]}] += cr.parts[s];
  }
  if (is_cycle_object(M)) return with_induced_anchors(chain, Anchor{level, cycle_permutation(M)});
  const CycleObject co = to_cycle_object(chain, BalancedMatrix{level, std::move(M)});
  return with_induced_anchors(chain, Anchor{co.C.level, cycle_permutation(co.C.entries)});
}

}  // namespace

AutomorphismPrefix extend_partial_isomorphism(GoodMeasureChain& chain,
                                              const PartialIsomorphism& f) {
  const auto& P = chain.level(f.level);
  std::set<CellId> dom, ran;
  std::vector<std::pair<std::set<CellId>, std::set<CellId>>> pieces;
  for (const auto& [D, R] : f.pieces) {
    ExactValue md, mr;
    for (const auto& c : D) {
      md += P.weight(c);
      if (!dom.insert(c).second) {
        throw Error(ErrorCode::InvalidInput, "pieces overlap at '" + c + "'");
      }
    }
    for (const auto& c : R) {
      mr += P.weight(c);
      if (!ran.insert(c).second) {
        throw Error(ErrorCode::InvalidInput, "images overlap at '" + c + "'");
      }
    }
    if (!(md == mr)) {
      throw Error(ErrorCode::WeightMismatch,
                  "piece of mass " + md.to_string() + " mapped to mass " + mr.to_string());
    }
    if (!D.empty()) pieces.emplace_back(D, R);
  }
  std::set<CellId> rest_d, rest_r;
  for (const auto& c : P.cells()) {
    if (dom.count(c.id) == 0) rest_d.insert(c.id);
    if (ran.count(c.id) == 0) rest_r.insert(c.id);
  }
  if (!rest_d.empty()) pieces.emplace_back(std::move(rest_d), std::move(rest_r));
  return realize(chain, pieces, f.level, chain.top());
}

AutomorphismPrefix extend_prefix(GoodMeasureChain& chain, const AutomorphismPrefix& sigma,
                                 std::size_t to_depth) {
  if (to_depth < sigma.depth()) {
    throw Error(ErrorCode::PreconditionFailed, "cannot extend a prefix to a shallower depth");
  }
  if (to_depth == sigma.depth()) return sigma;
  ensure_depth(chain, to_depth);
  std::vector<std::pair<std::set<CellId>, std::set<CellId>>> pieces;
  for (const auto& [x, y] : sigma.top().map) pieces.push_back({{x}, {y}});
  return realize(chain, pieces, sigma.depth(), to_depth);
}

}  // namespace cantor
