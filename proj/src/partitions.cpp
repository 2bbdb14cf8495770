#include "cantor/partitions.hpp"

#include "cantor/error.hpp"

#include <set>

namespace cantor {

WeightedPartition::WeightedPartition(std::vector<Cell> cells)
    : cells_(std::move(cells)) {
  if (cells_.empty()) {
    throw Error(ErrorCode::InvalidInput, "a partition needs at least one cell");
  }
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const Cell& c = cells_[i];
    if (!index_.emplace(c.id, i).second) {
      throw Error(ErrorCode::InvalidInput, "duplicate cell id '" + c.id + "'");
    }
    if (c.weight.sign() <= 0) {
      throw Error(ErrorCode::InvalidInput,
                  "cell '" + c.id + "' has non-positive weight " + c.weight.to_string());
    }
    total_ += c.weight;
  }
}

WeightedPartition WeightedPartition::unit() {
  return WeightedPartition({Cell{"r", ExactValue(1)}});
}

WeightedPartition WeightedPartition::from_weights(
    const std::string& prefix, const std::vector<ExactValue>& weights) {
  std::vector<Cell> cells;
  cells.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cells.push_back({prefix + "/" + std::to_string(i), weights[i]});
  }
  return WeightedPartition(std::move(cells));
}

std::size_t WeightedPartition::index_of(const CellId& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) {
    throw Error(ErrorCode::InvalidInput, "unknown cell '" + id + "'");
  }
  return it->second;
}

std::vector<ExactValue> WeightedPartition::weights() const {
  std::vector<ExactValue> out;
  out.reserve(cells_.size());
  for (const auto& c : cells_) out.push_back(c.weight);
  return out;
}

void WeightedPartition::require_in(const GroupDescriptor& V) const {
  for (const auto& c : cells_) {
    if (!member(c.weight, V)) {
      throw Error(ErrorCode::NotInV,
                  "weight " + c.weight.to_string() + " of cell '" + c.id + "'");
    }
  }
}

const CellId& PartitionMorphism::operator()(const CellId& c) const {
  const auto it = map.find(c);
  if (it == map.end()) {
    throw Error(ErrorCode::InvalidInput, "cell '" + c + "' is not in the domain");
  }
  return it->second;
}

bool verify_morphism(const PartitionMorphism& m) {
  if (m.map.size() != m.source.size()) return false;
  std::map<CellId, ExactValue> mass;
  for (const auto& c : m.source.cells()) {
    const auto it = m.map.find(c.id);
    if (it == m.map.end() || !m.target.contains(it->second)) return false;
    mass[it->second] += c.weight;
  }
  if (mass.size() != m.target.size()) return false;
  for (const auto& c : m.target.cells()) {
    if (!(mass[c.id] == c.weight)) return false;
  }
  return true;
}

PartitionMorphism identity_morphism(const WeightedPartition& P) {
  PartitionMorphism m{P, P, {}};
  for (const auto& c : P.cells()) m.map.emplace(c.id, c.id);
  return m;
}

PartitionMorphism compose(const PartitionMorphism& outer,
                          const PartitionMorphism& inner) {
  if (!(inner.target == outer.source)) {
    throw Error(ErrorCode::InvalidInput, "morphisms are not composable");
  }
  PartitionMorphism m{inner.source, outer.target, {}};
  for (const auto& [from, mid] : inner.map) m.map.emplace(from, outer(mid));
  return m;
}

std::vector<std::vector<CellId>> fibers(const PartitionMorphism& m) {
  std::vector<std::vector<CellId>> out(m.target.size());
  for (const auto& c : m.source.cells()) {
    out[m.target.index_of(m(c.id))].push_back(c.id);
  }
  return out;
}

namespace {

// Induction on k + l over the prefixes left[0..k) and right[0..l).
CommonRefinement refine(std::vector<ExactValue> left, std::vector<ExactValue> right) {
  const std::size_t k = left.size();
  const std::size_t l = right.size();
  CommonRefinement out;
  if (k == 1) {
    out.parts = right;
    out.left_blocks.emplace_back();
    for (std::size_t j = 0; j < l; ++j) {
      out.left_blocks[0].push_back(j);
      out.right_blocks.push_back({j});
    }
    return out;
  }
  if (l == 1) {
    out.parts = left;
    out.right_blocks.emplace_back();
    for (std::size_t i = 0; i < k; ++i) {
      out.right_blocks[0].push_back(i);
      out.left_blocks.push_back({i});
    }
    return out;
  }
  const ExactValue x = left.back();
  const ExactValue y = right.back();
  if (x == y) {
    left.pop_back();
    right.pop_back();
    out = refine(std::move(left), std::move(right));
    const std::size_t s = out.parts.size();
    out.parts.push_back(x);
    out.left_blocks.push_back({s});
    out.right_blocks.push_back({s});
  } else if (x > y) {
    left.back() = x - y;
    right.pop_back();
    out = refine(std::move(left), std::move(right));
    const std::size_t s = out.parts.size();
    out.parts.push_back(y);
    out.left_blocks[k - 1].push_back(s);
    out.right_blocks.push_back({s});
  } else {
    right.back() = y - x;
    left.pop_back();
    out = refine(std::move(left), std::move(right));
    const std::size_t s = out.parts.size();
    out.parts.push_back(x);
    out.left_blocks.push_back({s});
    out.right_blocks[l - 1].push_back(s);
  }
  return out;
}

void require_positive_in(const std::vector<ExactValue>& xs, const GroupDescriptor& V) {
  if (xs.empty()) throw Error(ErrorCode::InvalidInput, "empty tuple");
  for (const auto& x : xs) {
    if (x.sign() <= 0 || !member(x, V)) {
      throw Error(ErrorCode::NotInV, x.to_string());
    }
  }
}

}  // namespace

CommonRefinement common_refinement(const std::vector<ExactValue>& left,
                                   const std::vector<ExactValue>& right,
                                   const GroupDescriptor& V) {
  require_positive_in(left, V);
  require_positive_in(right, V);
  const ExactValue zl = sum(left);
  const ExactValue zr = sum(right);
  if (!(zl == zr)) {
    throw Error(ErrorCode::SumMismatch, zl.to_string() + " vs " + zr.to_string());
  }
  return refine(left, right);
}

Amalgam amalgamate(const PartitionMorphism& f1, const PartitionMorphism& f2,
                   const GroupDescriptor& V) {
  if (!(f1.target == f2.target)) {
    throw Error(ErrorCode::InvalidInput, "amalgamation needs a common target");
  }
  if (!verify_morphism(f1) || !verify_morphism(f2)) {
    throw Error(ErrorCode::InvalidInput, "amalgamation needs valid morphisms");
  }
  const WeightedPartition& A = f1.source;
  const WeightedPartition& B = f2.source;
  const auto fib1 = fibers(f1);
  const auto fib2 = fibers(f2);

  // Children of each A cell: (weight, B cell) in part order.
  std::vector<std::vector<std::pair<ExactValue, CellId>>> children(A.size());
  for (std::size_t t = 0; t < fib1.size(); ++t) {
    std::vector<ExactValue> w1, w2;
    for (const auto& c : fib1[t]) w1.push_back(A.weight(c));
    for (const auto& c : fib2[t]) w2.push_back(B.weight(c));
    const CommonRefinement cr = common_refinement(w1, w2, V);
    std::vector<std::size_t> owner1(cr.parts.size()), owner2(cr.parts.size());
    for (std::size_t i = 0; i < cr.left_blocks.size(); ++i) {
      for (std::size_t s : cr.left_blocks[i]) owner1[s] = i;
    }
    for (std::size_t j = 0; j < cr.right_blocks.size(); ++j) {
      for (std::size_t s : cr.right_blocks[j]) owner2[s] = j;
    }
    for (std::size_t s = 0; s < cr.parts.size(); ++s) {
      children[A.index_of(fib1[t][owner1[s]])].emplace_back(cr.parts[s],
                                                             fib2[t][owner2[s]]);
    }
  }

  std::vector<WeightedPartition::Cell> cells;
  std::map<CellId, CellId> to_a, to_b;
  std::set<CellId> used;
  for (std::size_t i = 0; i < A.size(); ++i) {
    const CellId& a = A.cells()[i].id;
    for (std::size_t k = 0; k < children[i].size(); ++k) {
      CellId id = children[i].size() == 1 ? a : a + "/" + std::to_string(k);
      // Foreign ids such as "x" next to "x/0" can collide; chain ids never do.
      while (used.count(id) > 0) id += "'";
      used.insert(id);
      cells.push_back({id, children[i][k].first});
      to_a.emplace(id, a);
      to_b.emplace(id, children[i][k].second);
    }
  }
  WeightedPartition G(std::move(cells));
  return Amalgam{G, PartitionMorphism{G, A, std::move(to_a)},
                 PartitionMorphism{G, B, std::move(to_b)}};
}

Split split_cell(const WeightedPartition& P, const CellId& cell,
                 const std::vector<ExactValue>& parts, const GroupDescriptor& V) {
  const std::size_t at = P.index_of(cell);
  require_positive_in(parts, V);
  const ExactValue total = sum(parts);
  if (!(total == P.cells()[at].weight)) {
    throw Error(ErrorCode::SumMismatch, "parts sum to " + total.to_string() +
                                            ", cell '" + cell + "' has weight " +
                                            P.cells()[at].weight.to_string());
  }
  if (parts.size() == 1) return Split{P, identity_morphism(P)};

  std::vector<WeightedPartition::Cell> cells;
  std::map<CellId, CellId> map;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto& c = P.cells()[i];
    if (i != at) {
      cells.push_back(c);
      map.emplace(c.id, c.id);
      continue;
    }
    for (std::size_t k = 0; k < parts.size(); ++k) {
      CellId id = cell + "/" + std::to_string(k);
      if (P.contains(id)) {
        throw Error(ErrorCode::InvalidInput, "child id '" + id + "' already in use");
      }
      cells.push_back({id, parts[k]});
      map.emplace(id, cell);
    }
  }
  WeightedPartition R(std::move(cells));
  return Split{R, PartitionMorphism{R, P, std::move(map)}};
}

}  // namespace cantor
