#include "cantor/io.hpp"

#include "cantor/error.hpp"

#include <cstdio>

namespace cantor::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

std::string text(const Json& j, const char* what) {
  if (!j.is_string()) bad(std::string(what) + " must be a string");
  return j.get<std::string>();
}

std::uint64_t natural(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    bad(std::string(what) + " must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

const Json& array(const Json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be an array");
  return j;
}

Json to_json(Exponent e) {
  if (e.is_infinite()) return "inf";
  return e.value();
}

Exponent exponent_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return Exponent::infinite();
    if (s == "0") return Exponent::finite(0);
    bad("exponent must be a natural number or \"inf\"");
  }
  const auto n = natural(j, "exponent");
  if (n > 64) bad("exponent too large");
  return Exponent::finite(static_cast<unsigned>(n));
}

Json to_json(const IrrationalSymbol::Source& source) {
  if (const auto* s = std::get_if<SqrtEnclosure>(&source)) {
    return {{"kind", "sqrt"}, {"radicand", s->radicand.str()}, {"shift", to_string(s->shift)}};
  }
  const auto& d = std::get<DigitsEnclosure>(source);
  return {{"kind", "digits"}, {"base", d.base}, {"digits", d.digits}};
}

IrrationalSymbol::Source source_from_json(const Json& j) {
  const auto kind = text(field(j, "kind"), "enclosure kind");
  if (kind == "sqrt") {
    const Rational r = rational_from_json(field(j, "radicand"));
    if (denominator(r) != 1) bad("radicand must be an integer");
    const Rational shift = j.contains("shift") ? rational_from_json(j["shift"]) : Rational(0);
    return SqrtEnclosure{numerator(r), shift};
  }
  if (kind == "digits") {
    const auto base = natural(field(j, "base"), "base");
    if (base < 2 || base > 36) bad("base must lie in 2..36");
    return DigitsEnclosure{static_cast<unsigned>(base), text(field(j, "digits"), "digits")};
  }
  bad("unknown enclosure kind '" + kind + "'");
}

}  // namespace

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad(std::string("expected an object holding '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

std::string canonical(const Json& j) { return j.dump(2) + "\n"; }

Json parse(const std::string& bytes) {
  try {
    return Json::parse(bytes);
  } catch (const Json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Rational(j.get<std::uint64_t>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  bad("expected a rational as a string or integer");
}

Json to_json(const ExactValue& v) {
  Json out = {{"q", to_string(v.rational_part())}};
  if (!v.is_rational()) {
    Json irr = Json::object();
    for (const auto& t : v.terms()) irr[t.symbol->name()] = to_string(t.coeff);
    out["irr"] = std::move(irr);
  }
  return out;
}

ExactValue value_from_json(const Json& j, const Symbols& symbols) {
  if (!j.is_object()) return ExactValue(rational_from_json(j));
  ExactValue v(j.contains("q") ? rational_from_json(j["q"]) : Rational(0));
  if (j.contains("irr")) {
    const Json& irr = j["irr"];
    if (!irr.is_object()) bad("'irr' must be an object");
    for (const auto& [name, coeff] : irr.items()) {
      const auto it = symbols.find(name);
      if (it == symbols.end()) bad("unknown symbol '" + name + "'");
      v += ExactValue::symbol(it->second, rational_from_json(coeff));
    }
  }
  return v;
}

Json to_json(const RationalGroup& G) {
  Json exceptions = Json::object();
  for (const auto& [p, e] : G.exceptions()) exceptions[std::to_string(p)] = to_json(e);
  return {{"default", G.default_exponent().is_infinite() ? "inf" : "0"},
          {"exceptions", std::move(exceptions)}};
}

RationalGroup rational_group_from_json(const Json& j) {
  const Exponent d = j.contains("default") ? exponent_from_json(j["default"]) : Exponent();
  std::map<std::uint64_t, Exponent> exceptions;
  if (j.contains("exceptions")) {
    const Json& e = j["exceptions"];
    if (!e.is_object()) bad("'exceptions' must be an object");
    for (const auto& [key, value] : e.items()) {
      std::uint64_t p = 0;
      try {
        std::size_t used = 0;
        p = std::stoull(key, &used);
        if (used != key.size()) bad("prime key '" + key + "' is not a number");
      } catch (const std::logic_error&) {
        bad("prime key '" + key + "' is not a number");
      }
      exceptions[p] = exponent_from_json(value);
    }
  }
  return RationalGroup(d, std::move(exceptions));
}

Json to_json(const GroupDescriptor& V) {
  Json irrationals = Json::array();
  for (const auto& c : V.irrational_components()) {
    irrationals.push_back({{"name", c.symbol->name()},
                           {"enclosure", to_json(c.symbol->source())},
                           {"coefficients", to_json(c.coefficients)}});
  }
  return {{"rational", to_json(V.rational_component())}, {"irrationals", std::move(irrationals)}};
}

GroupDescriptor descriptor_from_json(const Json& j) {
  if (!j.is_object()) bad("a descriptor must be an object");
  const RationalGroup G0 =
      j.contains("rational") ? rational_group_from_json(j["rational"]) : RationalGroup();
  std::vector<IrrationalComponent> irrationals;
  if (j.contains("irrationals")) {
    for (const auto& s : array(j["irrationals"], "'irrationals'")) {
      auto symbol = IrrationalSymbol::make(text(field(s, "name"), "symbol name"),
                                           source_from_json(field(s, "enclosure")));
      const RationalGroup coeffs = s.contains("coefficients")
                                       ? rational_group_from_json(s["coefficients"])
                                       : RationalGroup();
      irrationals.push_back({std::move(symbol), coeffs});
    }
  }
  return GroupDescriptor(G0, std::move(irrationals));
}

Json to_json(const WeightedPartition& P) {
  Json cells = Json::array();
  for (const auto& c : P.cells()) cells.push_back({{"id", c.id}, {"w", to_json(c.weight)}});
  return {{"cells", std::move(cells)}, {"total", to_json(P.total())}};
}

WeightedPartition partition_from_json(const Json& j, const Symbols& symbols) {
  std::vector<WeightedPartition::Cell> cells;
  for (const auto& c : array(field(j, "cells"), "'cells'")) {
    cells.push_back({text(field(c, "id"), "cell id"), value_from_json(field(c, "w"), symbols)});
  }
  WeightedPartition P(std::move(cells));
  if (j.contains("total") && value_from_json(j["total"], symbols) != P.total()) {
    bad("stored total disagrees with the cell weights");
  }
  return P;
}

Json to_json(const std::map<CellId, CellId>& map) {
  Json out = Json::object();
  for (const auto& [from, to] : map) out[from] = to;
  return {{"map", std::move(out)}};
}

std::map<CellId, CellId> map_from_json(const Json& j) {
  const Json& m = field(j, "map");
  if (!m.is_object()) bad("'map' must be an object");
  std::map<CellId, CellId> out;
  for (const auto& [from, to] : m.items()) out[from] = text(to, "map target");
  return out;
}

Json to_json(const GoodMeasureChain& chain) {
  Json levels = Json::array();
  for (const auto& P : chain.levels()) levels.push_back(to_json(P));
  Json links = Json::array();
  for (std::size_t n = 0; n < chain.top(); ++n) links.push_back(to_json(chain.parent_map(n)));
  Json ledger = Json::array();
  for (const auto& e : chain.ledger()) {
    ledger.push_back({{"kind", std::string(to_string(e.kind))},
                      {"key", e.key},
                      {"stage", e.stage},
                      {"lift", to_json(e.lift)}});
  }
  return {{"descriptor", to_json(chain.V())},
          {"levels", std::move(levels)},
          {"links", std::move(links)},
          {"ledger", std::move(ledger)},
          {"schedule_height", chain.schedule_height()}};
}

GoodMeasureChain chain_from_json(const Json& j) {
  GroupDescriptor V = descriptor_from_json(field(j, "descriptor"));
  const Symbols symbols = V.symbols();
  std::vector<WeightedPartition> levels;
  for (const auto& P : array(field(j, "levels"), "'levels'")) {
    levels.push_back(partition_from_json(P, symbols));
  }
  std::vector<std::map<CellId, CellId>> links;
  for (const auto& m : array(field(j, "links"), "'links'")) links.push_back(map_from_json(m));
  std::vector<LedgerEntry> ledger;
  for (const auto& e : array(field(j, "ledger"), "'ledger'")) {
    LedgerEntry entry;
    const auto kind = text(field(e, "kind"), "ledger kind");
    if (kind == "object") {
      entry.kind = LedgerEntry::Kind::object;
    } else if (kind == "morphism") {
      entry.kind = LedgerEntry::Kind::morphism;
    } else {
      bad("unknown ledger kind '" + kind + "'");
    }
    entry.key = text(field(e, "key"), "ledger key");
    entry.stage = natural(field(e, "stage"), "ledger stage");
    entry.lift = map_from_json(field(e, "lift"));
    ledger.push_back(std::move(entry));
  }
  const auto h = j.contains("schedule_height") ? natural(j["schedule_height"], "schedule_height") : 0;
  return GoodMeasureChain::restore(std::move(V), std::move(levels), std::move(links),
                                   std::move(ledger), h);
}

Json to_json(const BalancedMatrix& A) {
  Json entries = Json::array();
  for (const auto& [key, w] : A.entries) {
    entries.push_back({{"from", key.first}, {"to", key.second}, {"w", to_json(w)}});
  }
  return {{"level", A.level}, {"entries", std::move(entries)}};
}

BalancedMatrix matrix_from_json(const Json& j, const Symbols& symbols) {
  BalancedMatrix A;
  A.level = j.contains("level") ? natural(j["level"], "level") : 0;
  for (const auto& e : array(field(j, "entries"), "'entries'")) {
    const ExactValue w = value_from_json(field(e, "w"), symbols);
    if (w.is_zero()) continue;
    const auto key = std::make_pair(text(field(e, "from"), "from"), text(field(e, "to"), "to"));
    if (!A.entries.emplace(key, w).second) {
      bad("duplicate entry (" + key.first + ", " + key.second + ")");
    }
  }
  return A;
}

Json to_json(const std::vector<CycleMatrix>& cycles) {
  Json out = Json::array();
  for (const auto& c : cycles) out.push_back({{"vertices", c.vertices}, {"w", to_json(c.weight)}});
  return out;
}

Json to_json(const AutomorphismPrefix& sigma) {
  Json anchors = Json::array();
  for (const auto& a : sigma.anchors) {
    anchors.push_back({{"level", a.level}, {"map", to_json(a.map)["map"]}});
  }
  return {{"anchors", std::move(anchors)}};
}

AutomorphismPrefix prefix_from_json(const Json& j) {
  AutomorphismPrefix sigma;
  for (const auto& a : array(field(j, "anchors"), "'anchors'")) {
    sigma.anchors.push_back({natural(field(a, "level"), "anchor level"), map_from_json(a)});
  }
  if (sigma.anchors.empty()) bad("a prefix needs an anchor");
  return sigma;
}

Json to_json(const CycleTuple& c) {
  Json out = Json::array();
  for (const auto& e : c.entries()) out.push_back({{"w", to_json(e.weight)}, {"n", e.length}});
  return out;
}

CycleTuple tuple_from_json(const Json& j, const Symbols& symbols) {
  std::vector<TupleEntry> entries;
  for (const auto& e : array(j, "a cycle tuple")) {
    entries.push_back({value_from_json(field(e, "w"), symbols), natural(field(e, "n"), "n")});
  }
  return CycleTuple(std::move(entries));
}

Json to_json(const TupleMorphism& m) { return {{"blocks", m.blocks}}; }

TupleMorphism tuple_morphism_from_json(const Json& j) {
  TupleMorphism m;
  for (const auto& block : array(field(j, "blocks"), "'blocks'")) {
    std::vector<std::size_t> b;
    for (const auto& i : array(block, "a block")) b.push_back(natural(i, "block index"));
    m.blocks.push_back(std::move(b));
  }
  return m;
}

Json to_json(const RokhlinVerdict& r) {
  auto verdict = [](Tri t) { return t == Tri::undecided ? std::string("unknown") : std::string(to_string(t)); };
  Json out = {{"strong_rokhlin", verdict(r.strong_rokhlin)},
              {"rokhlin", verdict(r.rokhlin)},
              {"certificate", std::string(to_string(r.certificate))}};
  if (r.certificate == RokhlinVerdict::Certificate::prime_exponent) {
    out["prime"] = r.prime;
    out["exponent"] = r.exponent;
  }
  return out;
}

Json to_json(const ClosureViolation& v) {
  Json out = {{"kind", v.kind == ClosureViolation::Kind::product ? "product" : "quotient"},
              {"n", v.n}};
  if (v.kind == ClosureViolation::Kind::product) {
    out["m"] = v.m;
  } else {
    out["v"] = to_json(v.v);
  }
  return out;
}

}  // namespace cantor::io
