#pragma once

#include "cantor/values.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace cantor {

using CellId = std::string;

/// A finite clopen partition together with positive cell weights.
class WeightedPartition {
 public:
  struct Cell {
    CellId id;
    ExactValue weight;
  };

  WeightedPartition() = default;
  /// Throws InvalidInput on an empty list, a duplicate id or a non-positive
  /// weight.
  explicit WeightedPartition(std::vector<Cell> cells);

  /// The one-cell partition {"r"} of mass 1.
  static WeightedPartition unit();
  /// Cells named prefix/0, prefix/1, ... in order.
  static WeightedPartition from_weights(const std::string& prefix,
                                        const std::vector<ExactValue>& weights);

  const std::vector<Cell>& cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }
  const ExactValue& total() const noexcept { return total_; }

  bool contains(const CellId& id) const { return index_.count(id) > 0; }
  /// Throws InvalidInput for an unknown id.
  std::size_t index_of(const CellId& id) const;
  const ExactValue& weight(const CellId& id) const {
    return cells_[index_of(id)].weight;
  }
  std::vector<ExactValue> weights() const;

  /// Throws NotInV naming the first cell whose weight is outside V.
  void require_in(const GroupDescriptor& V) const;

  friend bool operator==(const WeightedPartition& a, const WeightedPartition& b) {
    return a.cells_.size() == b.cells_.size() &&
           std::equal(a.cells_.begin(), a.cells_.end(), b.cells_.begin(),
                      [](const Cell& x, const Cell& y) {
                        return x.id == y.id && x.weight == y.weight;
                      });
  }

 private:
  std::vector<Cell> cells_;
  ExactValue total_;
  std::map<CellId, std::size_t> index_;
};

/// A cell map source -> target. Validity (surjective and mass-preserving) is
/// checked by verify_morphism, not on construction.
struct PartitionMorphism {
  WeightedPartition source;
  WeightedPartition target;
  std::map<CellId, CellId> map;

  const CellId& operator()(const CellId& c) const;
};

bool verify_morphism(const PartitionMorphism& m);

PartitionMorphism identity_morphism(const WeightedPartition& P);

/// outer o inner. Throws InvalidInput unless inner.target == outer.source.
PartitionMorphism compose(const PartitionMorphism& outer,
                          const PartitionMorphism& inner);

/// Preimages of every target cell, in target order; each fiber lists source
/// cells in source order.
std::vector<std::vector<CellId>> fibers(const PartitionMorphism& m);

/// z_1..z_m with two block decompositions: sum over left_blocks[i] is left[i],
/// sum over right_blocks[j] is right[j]. Block indices are 0-based.
struct CommonRefinement {
  std::vector<ExactValue> parts;
  std::vector<std::vector<std::size_t>> left_blocks;
  std::vector<std::vector<std::size_t>> right_blocks;
};

/// Refines two tuples with the same sum by repeatedly comparing their last
/// entries. Throws SumMismatch, NotInV, or InvalidInput on empty tuples.
CommonRefinement common_refinement(const std::vector<ExactValue>& left,
                                   const std::vector<ExactValue>& right,
                                   const GroupDescriptor& V);

struct Amalgam {
  WeightedPartition G;
  PartitionMorphism p1;  // G -> source(f1)
  PartitionMorphism p2;  // G -> source(f2)
};

/// Completes the square f1 o p1 = f2 o p2, fiber by fiber over the common
/// target. Cells of G are named after the source(f1) cells they refine.
Amalgam amalgamate(const PartitionMorphism& f1, const PartitionMorphism& f2,
                   const GroupDescriptor& V);

struct Split {
  WeightedPartition R;
  PartitionMorphism pi;  // R -> P
};

/// Replaces `cell` by children cell/0, cell/1, ... with the given weights.
/// A single part leaves P unchanged.
Split split_cell(const WeightedPartition& P, const CellId& cell,
                 const std::vector<ExactValue>& parts, const GroupDescriptor& V);

}  // namespace cantor
