#pragma once

// Canonical JSON for every artifact. Objects have sorted keys, numbers are
// integers only, and exact values are lowest-terms strings, so equal inputs
// always serialize to equal bytes.

#include "cantor/chain.hpp"
#include "cantor/composite.hpp"
#include "cantor/cycles.hpp"
#include "cantor/matrices.hpp"

#include <json.hpp>

#include <map>
#include <string>

namespace cantor::io {

using Json = nlohmann::json;
using Symbols = std::map<std::string, SymbolRef>;

/// Two-space indented dump with a trailing newline.
std::string canonical(const Json& j);
/// Throws InvalidInput on malformed text.
Json parse(const std::string& text);

/// j[key]; throws InvalidInput when j is not an object or lacks the key.
const Json& field(const Json& j, const char* key);

/// FNV-1a 64 of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);

/// {"q": "a/b", "irr": {"alpha": "c/d"}}; "irr" only when non-empty.
Json to_json(const ExactValue& v);
/// Also accepts a bare rational string or integer.
ExactValue value_from_json(const Json& j, const Symbols& symbols);

Json to_json(const RationalGroup& G);
RationalGroup rational_group_from_json(const Json& j);

Json to_json(const GroupDescriptor& V);
GroupDescriptor descriptor_from_json(const Json& j);

Json to_json(const WeightedPartition& P);
WeightedPartition partition_from_json(const Json& j, const Symbols& symbols);

Json to_json(const std::map<CellId, CellId>& map);
std::map<CellId, CellId> map_from_json(const Json& j);

/// descriptor, levels, links (links[n]: P_{n+1} -> P_n), ledger and
/// schedule height.
Json to_json(const GoodMeasureChain& chain);
/// Re-verifies every invariant; throws InvalidInput.
GoodMeasureChain chain_from_json(const Json& j);

Json to_json(const BalancedMatrix& A);
BalancedMatrix matrix_from_json(const Json& j, const Symbols& symbols);
Json to_json(const std::vector<CycleMatrix>& cycles);

Json to_json(const AutomorphismPrefix& sigma);
AutomorphismPrefix prefix_from_json(const Json& j);

Json to_json(const CycleTuple& c);
CycleTuple tuple_from_json(const Json& j, const Symbols& symbols);
Json to_json(const TupleMorphism& m);
TupleMorphism tuple_morphism_from_json(const Json& j);

Json to_json(const RokhlinVerdict& r);
Json to_json(const ClosureViolation& v);

}  // namespace cantor::io
