#include "cantor/cycles.hpp"

#include "cantor/error.hpp"
#include "cantor/partitions.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace cantor {

namespace {

bool entry_less(const TupleEntry& a, const TupleEntry& b) {
  if (a.weight != b.weight) return a.weight < b.weight;
  return a.length < b.length;
}

ExactValue entry_mass(const TupleEntry& e) {
  return e.weight * Rational(static_cast<long long>(e.length));
}

}  // namespace

CycleTuple::CycleTuple(std::vector<TupleEntry> entries) {
  std::vector<std::size_t> position;
  *this = sorted(std::move(entries), position);
}

CycleTuple CycleTuple::sorted(std::vector<TupleEntry> entries,
                              std::vector<std::size_t>& position) {
  for (const auto& e : entries) {
    if (e.length == 0) throw Error(ErrorCode::InvalidInput, "cycle length must be positive");
    if (e.weight.sign() <= 0) {
      throw Error(ErrorCode::InvalidInput, "cycle weight must be positive");
    }
  }
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return entry_less(entries[a], entries[b]);
  });
  CycleTuple out;
  position.assign(entries.size(), 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    position[order[k]] = k;
    out.mass_ += entry_mass(entries[order[k]]);
    out.entries_.push_back(std::move(entries[order[k]]));
  }
  return out;
}

void CycleTuple::require_in(const GroupDescriptor& V) const {
  for (const auto& e : entries_) {
    if (!member(e.weight, V)) {
      throw Error(ErrorCode::NotInV, "weight " + e.weight.to_string() + " is not in V");
    }
  }
  if (mass_ > ExactValue(1)) {
    throw Error(ErrorCode::MassOverflow, "mass " + mass_.to_string() + " exceeds 1");
  }
  if (!member(mass_, V)) {
    throw Error(ErrorCode::NotInV, "mass " + mass_.to_string() + " is not in V");
  }
}

std::string CycleTuple::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i > 0) out += ",";
    out += "(" + entries_[i].weight.to_string() + "," + std::to_string(entries_[i].length) + ")";
  }
  return out + ")";
}

CycleTuple tuple_sum(const CycleTuple& c, const CycleTuple& d) {
  std::vector<TupleEntry> all = c.entries();
  all.insert(all.end(), d.entries().begin(), d.entries().end());
  CycleTuple out(std::move(all));
  if (out.mass() > ExactValue(1)) {
    throw Error(ErrorCode::MassOverflow, "sum has mass " + out.mass().to_string());
  }
  return out;
}

CycleTuple tuple_scale(std::size_t n, const CycleTuple& c, const GroupDescriptor& V) {
  std::vector<TupleEntry> all;
  for (std::size_t k = 0; k < n; ++k) all.insert(all.end(), c.entries().begin(), c.entries().end());
  CycleTuple out(std::move(all));
  if (out.mass() > ExactValue(1)) {
    throw Error(ErrorCode::MassOverflow, "scaled mass " + out.mass().to_string() + " exceeds 1");
  }
  if (!member(out.mass(), V)) {
    throw Error(ErrorCode::NotInV, "scaled mass " + out.mass().to_string() + " is not in V");
  }
  return out;
}

TupleMorphism identity_tuple_morphism(const CycleTuple& c) {
  TupleMorphism m;
  for (std::size_t i = 0; i < c.size(); ++i) m.blocks.push_back({i});
  return m;
}

bool verify_tuple_morphism(const TupleMorphism& m, const CycleTuple& src,
                           const CycleTuple& tgt) {
  if (src.mass() != tgt.mass()) {
    throw Error(ErrorCode::MassMismatch,
                "masses " + src.mass().to_string() + " and " + tgt.mass().to_string() + " differ");
  }
  if (m.blocks.size() != tgt.size()) return false;
  std::vector<bool> seen(src.size(), false);
  for (std::size_t j = 0; j < tgt.size(); ++j) {
    ExactValue total;
    for (const auto i : m.blocks[j]) {
      if (i >= src.size() || seen[i]) return false;
      seen[i] = true;
      if (src[i].length % tgt[j].length != 0) return false;
      total += entry_mass(src[i]);
    }
    if (total != entry_mass(tgt[j])) return false;
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

TupleMorphism compose(const TupleMorphism& outer, const TupleMorphism& inner) {
  TupleMorphism out;
  for (const auto& block : outer.blocks) {
    std::vector<std::size_t> merged;
    for (const auto b : block) {
      merged.insert(merged.end(), inner.blocks.at(b).begin(), inner.blocks.at(b).end());
    }
    std::sort(merged.begin(), merged.end());
    out.blocks.push_back(std::move(merged));
  }
  return out;
}

TupleSearch find_tuple_morphism(const CycleTuple& src, const CycleTuple& tgt,
                                std::size_t effort) {
  if (src.mass() != tgt.mass()) {
    throw Error(ErrorCode::MassMismatch,
                "masses " + src.mass().to_string() + " and " + tgt.mass().to_string() + " differ");
  }
  const std::size_t m = src.size();
  const std::size_t l = tgt.size();
  std::vector<ExactValue> capacity;
  for (const auto& e : tgt.entries()) capacity.push_back(entry_mass(e));
  std::vector<ExactValue> remaining = capacity;
  std::vector<ExactValue> contribution;
  for (const auto& e : src.entries()) contribution.push_back(entry_mass(e));
  std::vector<std::size_t> assign(m, 0);

  TupleSearch result;
  bool aborted = false;
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (++result.nodes > effort) {
      aborted = true;
      return false;
    }
    if (i == m) {
      return std::all_of(remaining.begin(), remaining.end(),
                         [](const ExactValue& r) { return r.is_zero(); });
    }
    for (std::size_t j = 0; j < l; ++j) {
      if (src[i].length % tgt[j].length != 0) continue;
      if (contribution[i] > remaining[j]) continue;
      // Untouched identical targets are interchangeable; try only the first.
      if (remaining[j] == capacity[j] && j > 0 && tgt[j] == tgt[j - 1] &&
          remaining[j - 1] == capacity[j - 1]) {
        continue;
      }
      remaining[j] -= contribution[i];
      assign[i] = j;
      if (go(i + 1)) return true;
      remaining[j] += contribution[i];
      if (aborted) return false;
    }
    return false;
  };

  if (go(0)) {
    TupleMorphism found;
    found.blocks.resize(l);
    for (std::size_t i = 0; i < m; ++i) found.blocks[assign[i]].push_back(i);
    result.morphism = std::move(found);
  }
  result.exhausted = !aborted;
  return result;
}

ProductLift ring_product_lift(const CycleTuple& c, const CycleTuple& d,
                              const GroupDescriptor& V) {
  if (classify(V).ring_like != Tri::yes) {
    throw Error(ErrorCode::NotRingLike, "V is not known to be ring-like");
  }
  if (c.mass() != ExactValue(1) || d.mass() != ExactValue(1)) {
    throw Error(ErrorCode::PreconditionFailed, "both tuples must have mass 1");
  }
  std::vector<TupleEntry> entries;
  for (const auto& ci : c.entries()) {
    for (const auto& dj : d.entries()) {
      entries.push_back({ci.weight * dj.weight, ci.length * dj.length});
    }
  }
  std::vector<std::size_t> position;
  ProductLift out;
  out.u = CycleTuple::sorted(std::move(entries), position);
  out.onto_c.blocks.resize(c.size());
  out.onto_d.blocks.resize(d.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      const std::size_t k = position[i * d.size() + j];
      out.onto_c.blocks[i].push_back(k);
      out.onto_d.blocks[j].push_back(k);
    }
  }
  for (auto& b : out.onto_c.blocks) std::sort(b.begin(), b.end());
  for (auto& b : out.onto_d.blocks) std::sort(b.begin(), b.end());
  return out;
}

TupleAmalgam qlike_amalgamate(const CycleTuple& B0, const TupleMorphism& p0,
                              const CycleTuple& B1, const TupleMorphism& p1,
                              const CycleTuple& A, const GroupDescriptor& V) {
  if (classify(V).q_like != Tri::yes) throw Error(ErrorCode::NotQLike, "V is not Q-like");
  if (!verify_tuple_morphism(p0, B0, A)) {
    throw Error(ErrorCode::InvalidInput, "p0 is not a morphism B0 -> A");
  }
  if (!verify_tuple_morphism(p1, B1, A)) {
    throw Error(ErrorCode::InvalidInput, "p1 is not a morphism B1 -> A");
  }

  std::vector<TupleEntry> entries;
  std::vector<std::size_t> over0, over1;  // B0 / B1 entry under each C entry
  for (std::size_t j = 0; j < A.size(); ++j) {
    const std::size_t k = A[j].length;
    // Share of each A-vertex covered by a cycle of winding w and weight x: w x.
    std::vector<ExactValue> left, right;
    for (const auto i : p0.blocks[j]) {
      left.push_back(B0[i].weight * Rational(static_cast<long long>(B0[i].length / k)));
    }
    for (const auto i : p1.blocks[j]) {
      right.push_back(B1[i].weight * Rational(static_cast<long long>(B1[i].length / k)));
    }
    const CommonRefinement cr = common_refinement(left, right, V);
    std::vector<std::size_t> left_of(cr.parts.size()), right_of(cr.parts.size());
    for (std::size_t b = 0; b < cr.left_blocks.size(); ++b) {
      for (const auto s : cr.left_blocks[b]) left_of[s] = p0.blocks[j][b];
    }
    for (std::size_t b = 0; b < cr.right_blocks.size(); ++b) {
      for (const auto s : cr.right_blocks[b]) right_of[s] = p1.blocks[j][b];
    }
    for (std::size_t s = 0; s < cr.parts.size(); ++s) {
      const std::size_t w0 = B0[left_of[s]].length / k;
      const std::size_t w1 = B1[right_of[s]].length / k;
      const std::size_t wind = std::lcm(w0, w1);
      entries.push_back({cr.parts[s] / Rational(static_cast<long long>(wind)), wind * k});
      over0.push_back(left_of[s]);
      over1.push_back(right_of[s]);
    }
  }

  std::vector<std::size_t> position;
  TupleAmalgam out;
  out.C = CycleTuple::sorted(std::move(entries), position);
  out.q0.blocks.resize(B0.size());
  out.q1.blocks.resize(B1.size());
  for (std::size_t s = 0; s < position.size(); ++s) {
    out.q0.blocks[over0[s]].push_back(position[s]);
    out.q1.blocks[over1[s]].push_back(position[s]);
  }
  for (auto& b : out.q0.blocks) std::sort(b.begin(), b.end());
  for (auto& b : out.q1.blocks) std::sort(b.begin(), b.end());
  if (!verify_tuple_morphism(out.q0, out.C, B0) || !verify_tuple_morphism(out.q1, out.C, B1) ||
      compose(p0, out.q0) != compose(p1, out.q1)) {
    throw std::logic_error("amalgam square does not commute");
  }
  return out;
}

std::string_view to_string(RokhlinVerdict::Certificate c) noexcept {
  switch (c) {
    case RokhlinVerdict::Certificate::ring_like: return "ring_like";
    case RokhlinVerdict::Certificate::prime_exponent: return "prime_exponent";
    case RokhlinVerdict::Certificate::q_like: return "q_like";
    case RokhlinVerdict::Certificate::contains_rationals: return "contains_rationals";
    case RokhlinVerdict::Certificate::none: return "none";
  }
  return "none";
}

RokhlinVerdict rokhlin_decide(const GroupDescriptor& V) {
  RokhlinVerdict out;
  if (V.purely_rational()) {
    for (const auto& [p, e] : V.rational_component().exceptions()) {
      if (!e.is_infinite() && e.value() >= 1) {
        out.strong_rokhlin = out.rokhlin = Tri::no;
        out.certificate = RokhlinVerdict::Certificate::prime_exponent;
        out.prime = p;
        out.exponent = e.value();
        return out;
      }
    }
    out.strong_rokhlin = out.rokhlin = Tri::yes;
    out.certificate = RokhlinVerdict::Certificate::ring_like;
    return out;
  }
  if (classify(V).q_like == Tri::yes) {
    out.strong_rokhlin = out.rokhlin = Tri::yes;
    out.certificate = RokhlinVerdict::Certificate::q_like;
  } else if (V.rational_component().is_rationals()) {
    out.strong_rokhlin = out.rokhlin = Tri::no;
    out.certificate = RokhlinVerdict::Certificate::contains_rationals;
  }
  return out;
}

namespace {

ExactValue unit_fraction(std::uint64_t n) {
  return ExactValue(Rational(1, static_cast<long long>(n)));
}

}  // namespace

std::vector<ClosureViolation> divisibility_closure_check(const GroupDescriptor& V,
                                                         std::size_t samples) {
  std::vector<std::uint64_t> Q;
  for (std::uint64_t n = 1; n <= samples; ++n) {
    if (member(unit_fraction(n), V)) Q.push_back(n);
  }
  std::vector<ClosureViolation> out;
  for (std::size_t a = 0; a < Q.size(); ++a) {
    for (std::size_t b = a; b < Q.size(); ++b) {
      if (!member(unit_fraction(Q[a] * Q[b]), V)) {
        out.push_back({ClosureViolation::Kind::product, Q[a], Q[b], {}});
      }
    }
  }
  if (samples == 0) return out;
  for (const auto& v : enumerate(V, samples)) {
    for (const auto n : Q) {
      if (n == 1) continue;
      if (!member(v / Rational(static_cast<long long>(n)), V)) {
        out.push_back({ClosureViolation::Kind::quotient, n, 0, v});
      }
    }
  }
  return out;
}

DichotomyVerdict dichotomy_analyze(const GroupDescriptor& V, const ExactValue& b,
                                   std::uint64_t n, const ExactValue& c) {
  DichotomyVerdict out;
  if (classify(V).q_like == Tri::yes) return out;

  const auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::PreconditionFailed, what);
  };
  const Rational inv_n(1, static_cast<long long>(n > 0 ? n : 1));
  require(member(b, V), "b in V");
  require(b < ExactValue(1), "b < 1");
  require(n > 1, "n > 1");
  const ExactValue b_over_n = b * inv_n;
  require(!member(b_over_n, V), "b/n not in V");
  require(member(c, V), "c in V");
  require(b_over_n <= c && c <= ExactValue(inv_n), "b/n <= c <= 1/n");
  require(c.is_rational(), "c rational");

  out.kind = DichotomyVerdict::Kind::no_rokhlin;
  out.a = c * Rational(static_cast<long long>(n));
  out.scaled = scale_value_set(V, out.a);
  const ExactValue v = b / out.a.rational_part();
  out.violation = {ClosureViolation::Kind::quotient, n, 0, v};
  if (!member(v, *out.scaled) || !member(ExactValue(inv_n), *out.scaled) ||
      member(v * inv_n, *out.scaled)) {
    throw std::logic_error("scaled value set does not exhibit the expected violation");
  }
  return out;
}

}  // namespace cantor
