#pragma once

#include "cantor/values.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cantor {

/// `length` cells in one cycle, each carrying `weight`.
struct TupleEntry {
  ExactValue weight;
  std::size_t length = 1;

  friend bool operator==(const TupleEntry&, const TupleEntry&) = default;
};

/// A multiset of cycles ((v_1, n_1), ..., (v_m, n_m)), kept sorted by weight
/// and then length.
class CycleTuple {
 public:
  CycleTuple() = default;
  /// Throws InvalidInput on a non-positive weight or zero length.
  explicit CycleTuple(std::vector<TupleEntry> entries);
  /// Also reports where each input entry landed: entries()[position[k]] is
  /// the k-th input entry.
  static CycleTuple sorted(std::vector<TupleEntry> entries, std::vector<std::size_t>& position);

  const std::vector<TupleEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const TupleEntry& operator[](std::size_t i) const { return entries_[i]; }
  /// sum n_i v_i.
  const ExactValue& mass() const noexcept { return mass_; }

  /// Throws NotInV if a weight or the mass lies outside V, MassOverflow if
  /// the mass exceeds 1.
  void require_in(const GroupDescriptor& V) const;

  std::string to_string() const;
  friend bool operator==(const CycleTuple&, const CycleTuple&) = default;

 private:
  std::vector<TupleEntry> entries_;
  ExactValue mass_;
};

/// blocks[j] lists the source entries sent onto target entry j.
struct TupleMorphism {
  std::vector<std::vector<std::size_t>> blocks;

  friend bool operator==(const TupleMorphism&, const TupleMorphism&) = default;
};

/// Concatenation. Throws MassOverflow if the mass exceeds 1.
CycleTuple tuple_sum(const CycleTuple& c, const CycleTuple& d);
/// n-fold concatenation. Throws MassOverflow, or NotInV if n * mass is not in V.
CycleTuple tuple_scale(std::size_t n, const CycleTuple& c, const GroupDescriptor& V);

TupleMorphism identity_tuple_morphism(const CycleTuple& c);

/// Throws MassMismatch when the masses differ.
bool verify_tuple_morphism(const TupleMorphism& m, const CycleTuple& src, const CycleTuple& tgt);

/// outer o inner for inner: C -> B and outer: B -> A.
TupleMorphism compose(const TupleMorphism& outer, const TupleMorphism& inner);

struct TupleSearch {
  std::optional<TupleMorphism> morphism;
  /// True when the whole search tree was visited within the effort bound.
  bool exhausted = false;
  std::size_t nodes = 0;
};

/// Lexicographically least morphism src -> tgt (by the target assigned to
/// each source entry in order), visiting at most `effort` nodes. Throws
/// MassMismatch.
TupleSearch find_tuple_morphism(const CycleTuple& src, const CycleTuple& tgt,
                                std::size_t effort = 1'000'000);

struct ProductLift {
  CycleTuple u;
  TupleMorphism onto_c;
  TupleMorphism onto_d;
};

/// u = ((v_i w_j, n_i m_j)). Throws NotRingLike, or PreconditionFailed unless
/// both masses are 1.
ProductLift ring_product_lift(const CycleTuple& c, const CycleTuple& d,
                              const GroupDescriptor& V);

struct TupleAmalgam {
  CycleTuple C;
  TupleMorphism q0;  // C -> B0
  TupleMorphism q1;  // C -> B1
};

/// Amalgam of p0: B0 -> A and p1: B1 -> A, built cycle by cycle over A. Each
/// pair of cycles over the same A-cycle of length k meets in a cycle whose
/// length is k times the lcm of their winding numbers. Throws NotQLike, or
/// InvalidInput if p0 or p1 does not verify.
TupleAmalgam qlike_amalgamate(const CycleTuple& B0, const TupleMorphism& p0,
                              const CycleTuple& B1, const TupleMorphism& p1,
                              const CycleTuple& A, const GroupDescriptor& V);

struct RokhlinVerdict {
  enum class Certificate { ring_like, prime_exponent, q_like, contains_rationals, none };

  Tri strong_rokhlin = Tri::undecided;
  Tri rokhlin = Tri::undecided;
  Certificate certificate = Certificate::none;
  /// Set for prime_exponent: the smallest prime with 1 <= n_p < inf.
  std::uint64_t prime = 0;
  unsigned exponent = 0;
};

std::string_view to_string(RokhlinVerdict::Certificate c) noexcept;

RokhlinVerdict rokhlin_decide(const GroupDescriptor& V);

struct ClosureViolation {
  enum class Kind { product, quotient };
  Kind kind = Kind::product;
  /// product: 1/n, 1/m in V but 1/(nm) not. quotient: v in V, 1/n in V, v/n not.
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  ExactValue v;
};

/// Checks n, m in {1..samples} with 1/n, 1/m in V and v in enumerate(V, samples).
std::vector<ClosureViolation> divisibility_closure_check(const GroupDescriptor& V,
                                                         std::size_t samples);

struct DichotomyVerdict {
  enum class Kind { strong_rokhlin_all, no_rokhlin };
  Kind kind = Kind::strong_rokhlin_all;
  /// Set for no_rokhlin: a = n c, V_a, and the failing quotient in V_a.
  ExactValue a;
  std::optional<GroupDescriptor> scaled;
  ClosureViolation violation;
};

/// Throws PreconditionFailed naming the first failing requirement.
DichotomyVerdict dichotomy_analyze(const GroupDescriptor& V, const ExactValue& b,
                                   std::uint64_t n, const ExactValue& c);

}  // namespace cantor
