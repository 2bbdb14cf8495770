#pragma once

#include "cantor/partitions.hpp"

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace cantor {

struct LedgerEntry {
  enum class Kind { object, morphism };
  Kind kind = Kind::object;
  /// Canonical text of the challenge; equal keys are the same challenge.
  std::string key;
  /// Level whose cells carry the lift.
  std::size_t stage = 0;
  /// Object: P_stage -> target. Morphism: P_stage -> challenge source.
  std::map<CellId, CellId> lift;
};

std::string_view to_string(LedgerEntry::Kind kind) noexcept;

/// A union of cells of one level.
struct ClopenSet {
  std::size_t level = 0;
  std::set<CellId> cells;

  friend bool operator==(const ClopenSet&, const ClopenSet&) = default;
};

/// A weight-preserving permutation of the cells of one level.
struct Anchor {
  std::size_t level = 0;
  std::map<CellId, CellId> map;

  friend bool operator==(const Anchor&, const Anchor&) = default;
};

/// Finite approximation of a measure-preserving homeomorphism: permutations
/// at increasing levels, each inducing the ones below it. Levels between
/// anchors are those the permutation above does not respect.
struct AutomorphismPrefix {
  std::vector<Anchor> anchors;

  std::size_t depth() const { return anchors.back().level; }
  const Anchor& top() const { return anchors.back(); }
  /// nullptr if there is no anchor at `level`.
  const Anchor* at(std::size_t level) const;
};

/// Finite prefix ((P_n, mu_n), pi_n) of a Fraisse sequence for a group-like V.
/// Levels are append-only.
class GoodMeasureChain {
 public:
  /// Level 0 is the one-cell partition. Throws NotGroupLike.
  explicit GoodMeasureChain(GroupDescriptor V);

  const GroupDescriptor& V() const noexcept { return V_; }
  std::size_t top() const noexcept { return levels_.size() - 1; }
  std::size_t size() const noexcept { return levels_.size(); }
  const std::vector<WeightedPartition>& levels() const noexcept { return levels_; }
  const WeightedPartition& level(std::size_t n) const;
  /// pi_n : P_{n+1} -> P_n.
  PartitionMorphism link(std::size_t n) const;
  const std::map<CellId, CellId>& parent_map(std::size_t n) const;
  const std::vector<LedgerEntry>& ledger() const noexcept { return ledger_; }
  std::size_t schedule_height() const noexcept { return schedule_height_; }

  /// pi^j_i applied to one cell of P_j.
  CellId project(const CellId& cell, std::size_t j, std::size_t i) const;
  /// pi^j_i as a morphism P_j -> P_i.
  PartitionMorphism projection(std::size_t j, std::size_t i) const;

  /// Appends link.source as a new top level. The link must be a valid
  /// morphism onto the current top with weights in V.
  std::size_t append(const PartitionMorphism& link);
  /// Splits one top cell (see split_cell) and appends the result.
  std::size_t split_top(const CellId& cell, const std::vector<ExactValue>& parts);

  const LedgerEntry* find_ledger(const std::string& key) const;
  void record(LedgerEntry entry);
  void set_schedule_height(std::size_t h) { schedule_height_ = h; }

  /// Rebuilds a chain from stored parts, re-verifying every invariant.
  static GoodMeasureChain restore(GroupDescriptor V,
                                  std::vector<WeightedPartition> levels,
                                  std::vector<std::map<CellId, CellId>> parents,
                                  std::vector<LedgerEntry> ledger,
                                  std::size_t schedule_height);

  /// Full invariant check: links verify, level 0 is the unit, weights in V.
  bool valid() const;

 private:
  GroupDescriptor V_;
  std::vector<WeightedPartition> levels_;
  std::vector<std::map<CellId, CellId>> parents_;  // parents_[n]: P_{n+1} -> P_n
  std::vector<LedgerEntry> ledger_;
  std::size_t schedule_height_ = 0;
};

GoodMeasureChain new_chain(const GroupDescriptor& V);

/// Absorbs an object of total mass 1; returns the stage carrying its lift.
std::size_t absorb_object(GoodMeasureChain& chain, const WeightedPartition& target);

/// Absorbs challenge: A -> P_level; afterwards challenge o r = pi^stage_level
/// for the recorded lift r. Throws InvalidChallenge or NotInV.
std::size_t absorb_morphism(GoodMeasureChain& chain, const PartitionMorphism& challenge,
                            std::size_t level);

/// Ledger key of an object challenge.
std::string object_key(const WeightedPartition& target);

/// Ledger key of a morphism challenge onto `level`.
std::string morphism_key(const PartitionMorphism& challenge, std::size_t level);

/// Absorbs every object and single-split morphism challenge of height up to
/// `budget` that has not been absorbed yet. Budget 0 throws PreconditionFailed.
void run_schedule(GoodMeasureChain& chain, std::size_t budget);

ExactValue measure(const GoodMeasureChain& chain, const ClopenSet& U);

/// U as a union of cells of P_level (level >= U.level).
ClopenSet lift_set(const GoodMeasureChain& chain, const ClopenSet& U, std::size_t level);

/// The same set at the shallowest level where it is a union of cells.
ClopenSet canonical(const GoodMeasureChain& chain, const ClopenSet& U);

/// W' inside W with measure(W') = measure(U). Throws NotSmaller.
ClopenSet subset_witness(GoodMeasureChain& chain, const ClopenSet& U, const ClopenSet& W);

/// Realizes `targets` as a clopen partition; returns the stage of the lift.
std::size_t maximal_partition_witness(GoodMeasureChain& chain,
                                      const std::vector<ExactValue>& targets);

/// Some v in V with 0 < v < w (V infinite, 0 < w <= 1).
ExactValue smaller_element(const GroupDescriptor& V, const ExactValue& w);

/// Splits every top cell into two parts of V until top() >= depth.
void ensure_depth(GoodMeasureChain& chain, std::size_t depth);

/// A weight-preserving bijection between two families of disjoint clopen
/// pieces, all unions of cells of one level.
struct PartialIsomorphism {
  std::size_t level = 0;
  std::vector<std::pair<std::set<CellId>, std::set<CellId>>> pieces;
};

AutomorphismPrefix identity_prefix(const GoodMeasureChain& chain, std::size_t depth);

/// sigma with sigma[D] = R for every piece. Throws WeightMismatch.
AutomorphismPrefix extend_partial_isomorphism(GoodMeasureChain& chain,
                                              const PartialIsomorphism& f);

/// sigma continued to an anchor at depth >= to_depth that induces sigma's
/// anchors. Lands exactly on to_depth when the fibers there can be matched.
AutomorphismPrefix extend_prefix(GoodMeasureChain& chain, const AutomorphismPrefix& sigma,
                                 std::size_t to_depth);

/// Anchors of the permutation `top_anchor` induced on every lower level.
AutomorphismPrefix with_induced_anchors(const GoodMeasureChain& chain, Anchor top_anchor);

/// Every anchor is a weight-preserving bijection and induces the anchors below.
bool verify_prefix(const GoodMeasureChain& chain, const AutomorphismPrefix& sigma);

}  // namespace cantor
