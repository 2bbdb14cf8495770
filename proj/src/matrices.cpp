#include "cantor/matrices.hpp"

#include "cantor/error.hpp"

#include <algorithm>

namespace cantor {

ExactValue BalancedMatrix::at(const CellId& from, const CellId& to) const {
  const auto it = entries.find({from, to});
  return it == entries.end() ? ExactValue(0) : it->second;
}

Entries CycleMatrix::entries() const {
  Entries out;
  for (std::size_t t = 0; t < vertices.size(); ++t) {
    out[{vertices[t], vertices[(t + 1) % vertices.size()]}] += weight;
  }
  return out;
}

namespace {

Entries without_zeros(const Entries& A) {
  Entries out;
  for (const auto& [k, v] : A) {
    if (!v.is_zero()) out.emplace(k, v);
  }
  return out;
}

struct Sums {
  std::map<CellId, ExactValue> row, col;
};

Sums sums(const Entries& A) {
  Sums s;
  for (const auto& [k, v] : A) {
    s.row[k.first] += v;
    s.col[k.second] += v;
  }
  return s;
}

}  // namespace

bool is_equi_summed(const Entries& A) {
  for (const auto& [k, v] : A) {
    if (v.sign() < 0) return false;
  }
  const Sums s = sums(A);
  for (const auto& [p, r] : s.row) {
    const auto it = s.col.find(p);
    if (!(r == (it == s.col.end() ? ExactValue(0) : it->second))) return false;
  }
  for (const auto& [p, c] : s.col) {
    const auto it = s.row.find(p);
    if (!(c == (it == s.row.end() ? ExactValue(0) : it->second))) return false;
  }
  return true;
}

bool validate(const Entries& A, const WeightedPartition& P, const GroupDescriptor& V) {
  for (const auto& [k, v] : A) {
    if (!P.contains(k.first) || !P.contains(k.second)) return false;
    if (!member(v, V)) return false;
  }
  if (!is_equi_summed(A)) return false;
  const Sums s = sums(A);
  ExactValue total;
  for (const auto& c : P.cells()) {
    const auto it = s.row.find(c.id);
    if (it == s.row.end() || !(it->second == c.weight)) return false;
    total += it->second;
  }
  return total == ExactValue(1);
}

bool validate(const BalancedMatrix& A, const GoodMeasureChain& chain) {
  if (A.level > chain.top()) return false;
  return validate(A.entries, chain.level(A.level), chain.V());
}

bool is_cycle_object(const Entries& A) {
  std::map<CellId, int> count;
  for (const auto& [k, v] : A) {
    if (!v.is_zero()) ++count[k.first];
  }
  for (const auto& [k, v] : A) {
    if (count[k.first] != 1) return false;
  }
  return true;
}

std::map<CellId, CellId> cycle_permutation(const Entries& A) {
  if (!is_cycle_object(A)) {
    throw Error(ErrorCode::NotCycleObject, "a row has more than one nonzero entry");
  }
  std::map<CellId, CellId> out;
  for (const auto& [k, v] : A) {
    if (!v.is_zero()) out.emplace(k.first, k.second);
  }
  return out;
}

bool verify_matrix_morphism(const MatrixMorphism& m) {
  const PartitionMorphism& p = m.underlying;
  if (!verify_morphism(p)) return false;
  Entries pushed;
  for (const auto& [k, v] : m.source) {
    if (!p.source.contains(k.first) || !p.source.contains(k.second)) return false;
    pushed[{p(k.first), p(k.second)}] += v;
  }
  for (const auto& [k, v] : m.target) {
    if (!p.target.contains(k.first) || !p.target.contains(k.second)) return false;
  }
  return without_zeros(pushed) == without_zeros(m.target);
}

std::vector<CycleMatrix> cycle_decompose(const Entries& A) {
  if (!is_equi_summed(A)) {
    throw Error(ErrorCode::NotEquiSummed, "row and column sums differ");
  }
  std::map<CellId, std::map<CellId, ExactValue>> rest;
  for (const auto& [k, v] : without_zeros(A)) rest[k.first][k.second] = v;

  std::vector<CycleMatrix> out;
  while (!rest.empty()) {
    // Walk smallest successors from the smallest vertex until a vertex repeats.
    std::vector<CellId> path;
    std::map<CellId, std::size_t> pos;
    CellId cur = rest.begin()->first;
    while (pos.count(cur) == 0) {
      pos.emplace(cur, path.size());
      path.push_back(cur);
      cur = rest.at(cur).begin()->first;
    }
    CycleMatrix cycle{{path.begin() + static_cast<std::ptrdiff_t>(pos.at(cur)), path.end()},
                      ExactValue(0)};
    const auto& vs = cycle.vertices;
    cycle.weight = rest.at(vs[0]).at(vs[1 % vs.size()]);
    for (std::size_t t = 1; t < vs.size(); ++t) {
      cycle.weight = std::min(cycle.weight, rest.at(vs[t]).at(vs[(t + 1) % vs.size()]));
    }
    for (std::size_t t = 0; t < vs.size(); ++t) {
      auto& row = rest.at(vs[t]);
      auto it = row.find(vs[(t + 1) % vs.size()]);
      it->second -= cycle.weight;
      if (it->second.is_zero()) row.erase(it);
      if (row.empty()) rest.erase(vs[t]);
    }
    out.push_back(std::move(cycle));
  }
  return out;
}

namespace {

// Owner indices of every part on both sides of a common refinement.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> owners(const CommonRefinement& cr) {
  std::vector<std::size_t> l(cr.parts.size()), r(cr.parts.size());
  for (std::size_t i = 0; i < cr.left_blocks.size(); ++i) {
    for (auto s : cr.left_blocks[i]) l[s] = i;
  }
  for (std::size_t j = 0; j < cr.right_blocks.size(); ++j) {
    for (auto s : cr.right_blocks[j]) r[s] = j;
  }
  return {l, r};
}

using Shares = std::map<CellId, std::map<CellId, ExactValue>>;

// Splits each fiber cell's mass across the entries of one row (or column) of
// A: shares[y][other] sums to mu(y) over `other` and to a entry over y.
void distribute(const std::vector<CellId>& fiber, const WeightedPartition& R,
                const std::vector<std::pair<CellId, ExactValue>>& line,
                const GroupDescriptor& V, Shares& shares) {
  std::vector<ExactValue> wf, wl;
  for (const auto& y : fiber) wf.push_back(R.weight(y));
  for (const auto& [other, a] : line) wl.push_back(a);
  const CommonRefinement cr = common_refinement(wf, wl, V);
  const auto [of, ol] = owners(cr);
  for (std::size_t s = 0; s < cr.parts.size(); ++s) {
    shares[fiber[of[s]]][line[ol[s]].first] += cr.parts[s];
  }
}

}  // namespace

Entries lift(const Entries& A, const PartitionMorphism& p, const GroupDescriptor& V) {
  if (!verify_morphism(p)) throw Error(ErrorCode::InvalidInput, "lift along an invalid morphism");
  const WeightedPartition& P = p.target;
  const WeightedPartition& R = p.source;
  const Entries a = without_zeros(A);
  const auto fib = fibers(p);
  std::map<CellId, std::vector<std::pair<CellId, ExactValue>>> rows, cols;
  for (const auto& [k, v] : a) {
    if (!P.contains(k.first) || !P.contains(k.second)) {
      throw Error(ErrorCode::InvalidInput, "matrix index outside the partition");
    }
    rows[k.first].emplace_back(k.second, v);
    cols[k.second].emplace_back(k.first, v);
  }
  Shares out_share, in_share;  // [y][x'] and [y'][x]
  for (std::size_t t = 0; t < P.size(); ++t) {
    const CellId& x = P.cells()[t].id;
    if (rows.count(x) == 0 || cols.count(x) == 0) {
      throw Error(ErrorCode::InvalidInput, "matrix has an empty row at '" + x + "'");
    }
    distribute(fib[t], R, rows[x], V, out_share);
    distribute(fib[t], R, cols[x], V, in_share);
  }
  Entries B;
  for (const auto& [k, v] : a) {
    const auto& [x, x2] = k;
    std::vector<CellId> ys, ys2;
    std::vector<ExactValue> wl, wr;
    for (const auto& y : fib[P.index_of(x)]) {
      const auto it = out_share[y].find(x2);
      if (it != out_share[y].end()) {
        ys.push_back(y);
        wl.push_back(it->second);
      }
    }
    for (const auto& y2 : fib[P.index_of(x2)]) {
      const auto it = in_share[y2].find(x);
      if (it != in_share[y2].end()) {
        ys2.push_back(y2);
        wr.push_back(it->second);
      }
    }
    const CommonRefinement cr = common_refinement(wl, wr, V);
    const auto [ol, orr] = owners(cr);
    for (std::size_t s = 0; s < cr.parts.size(); ++s) B[{ys[ol[s]], ys2[orr[s]]}] += cr.parts[s];
  }
  return B;
}

Entries lift_cycle(const Entries& A, const PartitionMorphism& p, const GroupDescriptor& V) {
  if (!is_cycle_object(A)) {
    throw Error(ErrorCode::NotCycleObject, "lift_cycle needs one nonzero entry per row");
  }
  return lift(A, p, V);
}

BalancedMatrix lift_to(const GoodMeasureChain& chain, const BalancedMatrix& A,
                       std::size_t to_level) {
  if (to_level == A.level) return A;
  return BalancedMatrix{to_level,
                        lift(A.entries, chain.projection(to_level, A.level), chain.V())};
}

CycleSplit cycle_split(const Entries& A, const WeightedPartition& P) {
  const auto cycles = cycle_decompose(A);
  std::map<CellId, std::vector<std::size_t>> through;
  for (std::size_t k = 0; k < cycles.size(); ++k) {
    for (const auto& v : cycles[k].vertices) through[v].push_back(k);
  }
  // child[(cell, cycle)] = id of the child cell.
  std::map<std::pair<CellId, std::size_t>, CellId> child;
  std::vector<WeightedPartition::Cell> cells;
  std::map<CellId, CellId> proj;
  for (const auto& c : P.cells()) {
    const auto it = through.find(c.id);
    if (it == through.end()) {
      throw Error(ErrorCode::InvalidInput, "no cycle passes through '" + c.id + "'");
    }
    const auto& ks = it->second;
    for (std::size_t n = 0; n < ks.size(); ++n) {
      const CellId id = ks.size() == 1 ? c.id : c.id + "/" + std::to_string(n);
      child.emplace(std::make_pair(c.id, ks[n]), id);
      cells.push_back({id, cycles[ks[n]].weight});
      proj.emplace(id, c.id);
    }
  }
  Entries C;
  for (std::size_t k = 0; k < cycles.size(); ++k) {
    const auto& vs = cycles[k].vertices;
    for (std::size_t t = 0; t < vs.size(); ++t) {
      C.emplace(std::make_pair(child.at({vs[t], k}), child.at({vs[(t + 1) % vs.size()], k})),
                cycles[k].weight);
    }
  }
  WeightedPartition Q(std::move(cells));
  return CycleSplit{Q, std::move(C), PartitionMorphism{Q, P, std::move(proj)}};
}

CycleObject to_cycle_object(GoodMeasureChain& chain, const BalancedMatrix& A) {
  if (!validate(A, chain)) throw Error(ErrorCode::InvalidInput, "matrix is not in M_V");
  if (is_cycle_object(A.entries)) {
    return CycleObject{A, MatrixMorphism{identity_morphism(chain.level(A.level)), A.entries,
                                         A.entries}};
  }
  const std::size_t top = chain.top();
  const BalancedMatrix B = lift_to(chain, A, top);
  if (is_cycle_object(B.entries)) {
    return CycleObject{B, MatrixMorphism{chain.projection(top, A.level), B.entries, A.entries}};
  }
  CycleSplit cs = cycle_split(B.entries, chain.level(top));
  const std::size_t n = chain.append(cs.proj);
  return CycleObject{BalancedMatrix{n, cs.C},
                     MatrixMorphism{chain.projection(n, A.level), cs.C, A.entries}};
}

ReverseProjection reverse_projection(GoodMeasureChain& chain, const MatrixMorphism& p,
                                     std::size_t a_level) {
  if (!verify_matrix_morphism(p) || !(p.underlying.target == chain.level(a_level))) {
    throw Error(ErrorCode::InvalidInput, "p is not a balanced morphism onto the chain level");
  }
  const WeightedPartition& PB = p.underlying.source;
  if (!validate(p.source, PB, chain.V())) {
    throw Error(ErrorCode::InvalidInput, "source matrix is not in M_V");
  }
  CycleSplit cs = is_cycle_object(p.source)
                      ? CycleSplit{PB, p.source, identity_morphism(PB)}
                      : cycle_split(p.source, PB);
  const PartitionMorphism challenge = compose(p.underlying, cs.proj);
  absorb_morphism(chain, challenge, a_level);
  const LedgerEntry& entry = *chain.find_ledger(morphism_key(challenge, a_level));
  const PartitionMorphism r0{chain.level(entry.stage), cs.partition, entry.lift};
  Entries C = lift_cycle(cs.C, r0, chain.V());
  return ReverseProjection{BalancedMatrix{entry.stage, C},
                           MatrixMorphism{compose(cs.proj, r0), C, p.source}};
}

Entries transport_masses(const GoodMeasureChain& chain, const AutomorphismPrefix& sigma,
                         std::size_t level) {
  const std::size_t j = sigma.depth();
  if (j < level) {
    throw Error(ErrorCode::DepthTooShallow, "prefix depth " + std::to_string(j) +
                                                " is below level " + std::to_string(level));
  }
  Entries M;
  for (const auto& c : chain.level(j).cells()) {
    M[{chain.project(c.id, j, level), chain.project(sigma.top().map.at(c.id), j, level)}] +=
        c.weight;
  }
  return M;
}

bool compatible(const GoodMeasureChain& chain, const AutomorphismPrefix& sigma,
                const BalancedMatrix& A) {
  return transport_masses(chain, sigma, A.level) == without_zeros(A.entries);
}

AutomorphismPrefix compatible_witness(GoodMeasureChain& chain, const BalancedMatrix& A) {
  const CycleObject co = to_cycle_object(chain, A);
  PartialIsomorphism f{co.C.level, {}};
  for (const auto& [x, y] : cycle_permutation(co.C.entries)) f.pieces.push_back({{x}, {y}});
  return extend_partial_isomorphism(chain, f);
}

bool in_morphism_neighbourhood(const GoodMeasureChain& chain,
                               const AutomorphismPrefix& sigma_g, const PartitionMorphism& p,
                               std::size_t b_level, std::size_t a_level) {
  const std::size_t n = sigma_g.depth();
  if (n < b_level || n < a_level) {
    throw Error(ErrorCode::DepthTooShallow, "prefix is shallower than the morphism levels");
  }
  if (!(p.source == chain.level(b_level)) || !(p.target == chain.level(a_level))) {
    throw Error(ErrorCode::InvalidInput, "morphism is not between the given levels");
  }
  for (const auto& [x, y] : sigma_g.top().map) {
    if (chain.project(y, n, a_level) != p(chain.project(x, n, b_level))) return false;
  }
  return true;
}

namespace {

std::set<CellId> image(const GoodMeasureChain& chain, const AutomorphismPrefix& sigma,
                       const ClopenSet& S, bool inverse) {
  const ClopenSet lifted = lift_set(chain, S, sigma.depth());
  std::map<CellId, CellId> map = sigma.top().map;
  if (inverse) {
    std::map<CellId, CellId> inv;
    for (const auto& [x, y] : map) inv.emplace(y, x);
    map.swap(inv);
  }
  std::set<CellId> out;
  for (const auto& c : lifted.cells) out.insert(map.at(c));
  return out;
}

}  // namespace

bool conjugate_transport_check(GoodMeasureChain& chain, const AutomorphismPrefix& sigma_f,
                               const AutomorphismPrefix& sigma_g, const BalancedMatrix& B,
                               const PartitionMorphism& p, const BalancedMatrix& A) {
  if (!compatible(chain, sigma_f, B)) {
    throw Error(ErrorCode::PreconditionFailed, "f is not compatible with B");
  }
  if (!in_morphism_neighbourhood(chain, sigma_g, p, B.level, A.level)) {
    throw Error(ErrorCode::PreconditionFailed, "g is not in [p]");
  }
  AutomorphismPrefix f = sigma_f;
  AutomorphismPrefix g = sigma_g;
  Entries masses;
  for (const auto& alpha : chain.level(A.level).cells()) {
    const ClopenSet s1{g.depth(), image(chain, g, ClopenSet{A.level, {alpha.id}}, true)};
    if (f.depth() < s1.level) f = extend_prefix(chain, f, s1.level);
    const ClopenSet s2{f.depth(), image(chain, f, s1, false)};
    if (g.depth() < s2.level) g = extend_prefix(chain, g, s2.level);
    const ClopenSet s3{g.depth(), image(chain, g, s2, false)};
    for (const auto& c : s3.cells) {
      masses[{alpha.id, chain.project(c, s3.level, A.level)}] += chain.level(s3.level).weight(c);
    }
  }
  return masses == without_zeros(A.entries);
}

}  // namespace cantor
