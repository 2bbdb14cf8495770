#include "cantor/composite.hpp"

#include "cantor/error.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace cantor {

namespace {

bool separable(const GroupDescriptor& V) {
  return V.rational_component().is_integers() && !V.irrational_components().empty();
}

}  // namespace

CompositeMeasure weighted_sum(std::vector<Component> parts) {
  if (parts.empty()) throw Error(ErrorCode::InvalidInput, "a composite needs a component");
  Rational total;
  std::set<std::string> symbols;
  CompositeMeasure out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].scale <= 0) throw Error(ErrorCode::InvalidInput, "scales must be positive");
    total += parts[i].scale;
    for (const auto& [name, ref] : parts[i].chain.V().symbols()) {
      if (!symbols.insert(name).second) {
        throw Error(ErrorCode::InvalidInput, "symbol '" + name + "' is shared by two components");
      }
    }
    if (!separable(parts[i].chain.V())) {
      if (out.carrier_) {
        throw Error(ErrorCode::InvalidInput,
                    "components " + std::to_string(*out.carrier_) + " and " + std::to_string(i) +
                        " are not separable by their symbols");
      }
      out.carrier_ = i;
    }
  }
  if (total != 1) {
    throw Error(ErrorCode::SumMismatch, "scales sum to " + ExactValue(total).to_string());
  }
  out.components_ = std::move(parts);
  return out;
}

ExactValue CompositeMeasure::measure(const CompositeSet& U) const {
  if (U.size() != components_.size()) {
    throw Error(ErrorCode::InvalidInput, "a composite set needs one clopen set per component");
  }
  ExactValue total;
  for (std::size_t i = 0; i < U.size(); ++i) {
    total += cantor::measure(components_[i].chain, U[i]) * components_[i].scale;
  }
  return total;
}

std::vector<std::vector<ExactValue>> CompositeMeasure::decompositions(const ExactValue& x) const {
  const std::size_t n = components_.size();
  // Symbols of x must all belong to some component.
  for (const auto& t : x.terms()) {
    const bool known = std::any_of(components_.begin(), components_.end(), [&](const Component& c) {
      return c.chain.V().find(t.symbol->name()) != nullptr;
    });
    if (!known) return {};
  }

  // Candidate values for each separable component.
  std::vector<std::vector<ExactValue>> candidates(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (carrier_ && *carrier_ == i) continue;
    const auto& V = components_[i].chain.V();
    ExactValue y;
    for (const auto& comp : V.irrational_components()) {
      const Rational c = x.coefficient(comp.symbol->name()) / components_[i].scale;
      if (!comp.coefficients.contains(c)) return {};
      y += ExactValue::symbol(comp.symbol, c);
    }
    if (y.is_zero()) {
      candidates[i] = {ExactValue(0), ExactValue(1)};
    } else {
      // y is irrational, so exactly one integer r has r + y in [0, 1].
      const ExactValue v = y + ExactValue(Rational(-y.floor()));
      if (!cantor::member(v, V)) return {};
      candidates[i] = {v};
    }
  }

  std::vector<std::vector<ExactValue>> out;
  std::vector<ExactValue> pick(n);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == n) {
      ExactValue rest = x;
      for (std::size_t k = 0; k < n; ++k) {
        if (!carrier_ || *carrier_ != k) rest -= pick[k] * components_[k].scale;
      }
      if (carrier_) {
        const Component& c = components_[*carrier_];
        pick[*carrier_] = rest / c.scale;
        if (!cantor::member(pick[*carrier_], c.chain.V())) return;
      } else if (!rest.is_zero()) {
        return;
      }
      out.push_back(pick);
      return;
    }
    if (carrier_ && *carrier_ == i) return go(i + 1);
    for (const auto& v : candidates[i]) {
      pick[i] = v;
      go(i + 1);
    }
  };
  go(0);
  return out;
}

namespace {

// Some choice of one value per target from `options` summing to `total`.
bool can_sum(const std::vector<std::set<ExactValue>>& options, const ExactValue& total,
             std::size_t t = 0, const ExactValue& acc = ExactValue(0)) {
  if (t == options.size()) return acc == total;
  for (const auto& v : options[t]) {
    const ExactValue next = acc + v;
    if (next > total) continue;
    if (can_sum(options, total, t + 1, next)) return true;
  }
  return false;
}

}  // namespace

MaximalityResult maximality_refute(CompositeMeasure& m, const std::vector<ExactValue>& targets) {
  if (targets.empty()) throw Error(ErrorCode::InvalidInput, "no targets");
  for (const auto& t : targets) {
    if (t.sign() <= 0) throw Error(ErrorCode::InvalidInput, "targets must be positive");
  }
  const ExactValue total = sum(targets);
  if (total != ExactValue(1)) {
    throw Error(ErrorCode::SumMismatch, "targets sum to " + total.to_string());
  }
  std::vector<std::vector<std::vector<ExactValue>>> options;
  for (const auto& t : targets) {
    auto d = m.decompositions(t);
    if (d.empty()) {
      throw Error(ErrorCode::NotAValue, t.to_string() + " is not a clopen value");
    }
    options.push_back(std::move(d));
  }

  const std::size_t n = m.size();
  std::vector<std::size_t> choice(targets.size(), 0);
  std::vector<ExactValue> used(n);
  std::function<bool(std::size_t)> go = [&](std::size_t t) -> bool {
    if (t == targets.size()) {
      return std::all_of(used.begin(), used.end(), [](const ExactValue& u) { return u == 1; });
    }
    for (std::size_t k = 0; k < options[t].size(); ++k) {
      bool fits = true;
      for (std::size_t i = 0; i < n; ++i) {
        used[i] += options[t][k][i];
        fits = fits && used[i] <= ExactValue(1);
      }
      choice[t] = k;
      if (fits && go(t + 1)) return true;
      for (std::size_t i = 0; i < n; ++i) used[i] -= options[t][k][i];
    }
    return false;
  };

  MaximalityResult out;
  if (!go(0)) {
    RefutationCertificate cert;
    cert.component = n;  // joint failure unless one component fails alone
    // Symbol-bearing components first: their contributions are pinned by the
    // target's coefficients, which makes the sharper certificate.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i) {
      if (!m.components()[i].chain.V().purely_rational()) order.push_back(i);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (m.components()[i].chain.V().purely_rational()) order.push_back(i);
    }
    for (const std::size_t i : order) {
      std::vector<std::set<ExactValue>> scaled(targets.size());
      for (std::size_t t = 0; t < targets.size(); ++t) {
        for (const auto& d : options[t]) scaled[t].insert(d[i] * m.components()[i].scale);
      }
      if (can_sum(scaled, ExactValue(m.components()[i].scale))) continue;
      cert.component = i;
      cert.required = m.components()[i].scale;
      for (std::size_t t = 0; t < targets.size(); ++t) {
        std::vector<std::pair<std::string, Rational>> coeffs;
        for (const auto& comp : m.components()[i].chain.V().irrational_components()) {
          coeffs.emplace_back(comp.symbol->name(), targets[t].coefficient(comp.symbol->name()));
        }
        cert.coefficients.push_back(std::move(coeffs));
        cert.options.emplace_back(scaled[t].begin(), scaled[t].end());
      }
      break;
    }
    out.certificate = std::move(cert);
    return out;
  }

  out.feasible = true;
  out.partition.assign(targets.size(), CompositeSet(n));
  for (std::size_t t = 0; t < targets.size(); ++t) {
    std::vector<ExactValue> row;
    for (std::size_t i = 0; i < n; ++i) {
      row.push_back(options[t][choice[t]][i] * m.components()[i].scale);
    }
    out.contributions.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < n; ++i) {
    GoodMeasureChain& chain = m.components()[i].chain;
    std::vector<ExactValue> parts;
    std::vector<std::size_t> owner;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const ExactValue& v = options[t][choice[t]][i];
      if (v.is_zero()) continue;
      parts.push_back(v);
      owner.push_back(t);
    }
    const std::size_t stage = maximal_partition_witness(chain, parts);
    const auto& lift =
        chain.find_ledger(object_key(WeightedPartition::from_weights("m", parts)))->lift;
    for (std::size_t t = 0; t < targets.size(); ++t) out.partition[t][i] = ClopenSet{stage, {}};
    for (const auto& [cell, image] : lift) {
      const std::size_t k = std::stoul(image.substr(image.rfind('/') + 1));
      out.partition[owner[k]][i].cells.insert(cell);
    }
  }
  return out;
}

std::vector<AutomorphismPrefix> partial_isomorphism_extend_composite(
    CompositeMeasure& m, const CompositePartialIsomorphism& f) {
  const std::size_t n = m.size();
  std::vector<std::vector<std::pair<ClopenSet, ClopenSet>>> per(n);
  for (const auto& [from, to] : f.pieces) {
    if (from.component >= n || to.component >= n) {
      throw Error(ErrorCode::InvalidInput, "no such component");
    }
    if (from.component != to.component) {
      throw Error(ErrorCode::ComponentMixing,
                  "piece moves component " + std::to_string(from.component) + " into " +
                      std::to_string(to.component));
    }
    const auto& chain = m.components()[from.component].chain;
    if (measure(chain, from.set) != measure(chain, to.set)) {
      throw Error(ErrorCode::WeightMismatch, "piece changes measure");
    }
    per[from.component].push_back({from.set, to.set});
  }
  std::vector<AutomorphismPrefix> out;
  for (std::size_t i = 0; i < n; ++i) {
    GoodMeasureChain& chain = m.components()[i].chain;
    if (per[i].empty()) {
      out.push_back(identity_prefix(chain, chain.top()));
      continue;
    }
    std::size_t level = 0;
    for (const auto& [D, R] : per[i]) level = std::max({level, D.level, R.level});
    PartialIsomorphism g{level, {}};
    for (const auto& [D, R] : per[i]) {
      g.pieces.push_back({lift_set(chain, D, level).cells, lift_set(chain, R, level).cells});
    }
    out.push_back(extend_partial_isomorphism(chain, g));
  }
  return out;
}

}  // namespace cantor
