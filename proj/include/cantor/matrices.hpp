#pragma once

#include "cantor/chain.hpp"

#include <map>
#include <utility>
#include <vector>

namespace cantor {

/// Nonzero entries a_{p,p'} keyed by (p, p').
using Entries = std::map<std::pair<CellId, CellId>, ExactValue>;

/// A matrix indexed by the cells of chain level `level`.
struct BalancedMatrix {
  std::size_t level = 0;
  Entries entries;

  ExactValue at(const CellId& from, const CellId& to) const;
  friend bool operator==(const BalancedMatrix&, const BalancedMatrix&) = default;
};

/// Directed cycle v_0 -> v_1 -> ... -> v_0 with every entry equal to weight.
struct CycleMatrix {
  std::vector<CellId> vertices;
  ExactValue weight;

  Entries entries() const;
};

/// underlying: P_B -> P_A with a_{p,p'} = sum of b_{q,q'} over the fibers.
struct MatrixMorphism {
  PartitionMorphism underlying;
  Entries source;  // B
  Entries target;  // A
};

/// Nonnegative, row sum = column sum at every index.
bool is_equi_summed(const Entries& A);

/// All five conditions against an explicit index partition: entries in V,
/// equi-summed, total 1, row sums equal the cell weights, no zero row.
bool validate(const Entries& A, const WeightedPartition& P, const GroupDescriptor& V);
bool validate(const BalancedMatrix& A, const GoodMeasureChain& chain);

/// Exactly one nonzero entry in every row.
bool is_cycle_object(const Entries& A);

/// The permutation p -> p' given by the unique nonzero entry of each row.
std::map<CellId, CellId> cycle_permutation(const Entries& A);

bool verify_matrix_morphism(const MatrixMorphism& m);

/// Sum of simple cycle matrices equal to A. Throws NotEquiSummed.
std::vector<CycleMatrix> cycle_decompose(const Entries& A);

/// B on p.source with p a balanced morphism B -> A. For A in C_V this is the
/// per-edge refinement of consecutive fibers.
Entries lift(const Entries& A, const PartitionMorphism& p, const GroupDescriptor& V);

/// lift() restricted to A in C_V. Throws NotCycleObject.
Entries lift_cycle(const Entries& A, const PartitionMorphism& p, const GroupDescriptor& V);

/// A lifted along pi^to_level_{A.level}.
BalancedMatrix lift_to(const GoodMeasureChain& chain, const BalancedMatrix& A,
                       std::size_t to_level);

/// Splits each cell of P into one child per cycle through it.
struct CycleSplit {
  WeightedPartition partition;
  Entries C;
  PartitionMorphism proj;  // children -> P
};
CycleSplit cycle_split(const Entries& A, const WeightedPartition& P);

struct CycleObject {
  BalancedMatrix C;
  MatrixMorphism proj;  // C -> A
};

/// C in C_V on a chain level projecting onto A. A at a lower level is lifted
/// to the top first; a new level is appended unless A is already in C_V.
CycleObject to_cycle_object(GoodMeasureChain& chain, const BalancedMatrix& A);

struct ReverseProjection {
  BalancedMatrix C;
  MatrixMorphism r;  // C -> B
};

/// For p: B -> A with A on chain level a_level, C on a chain level n and
/// r: C -> B with p o r = pi^n_{a_level}.
ReverseProjection reverse_projection(GoodMeasureChain& chain, const MatrixMorphism& p,
                                     std::size_t a_level);

/// mu(sigma[p] n p') summed at sigma's top anchor, for all p, p' in P_level.
Entries transport_masses(const GoodMeasureChain& chain, const AutomorphismPrefix& sigma,
                         std::size_t level);

/// Throws DepthTooShallow if sigma.depth() < A.level.
bool compatible(const GoodMeasureChain& chain, const AutomorphismPrefix& sigma,
                const BalancedMatrix& A);

AutomorphismPrefix compatible_witness(GoodMeasureChain& chain, const BalancedMatrix& A);

/// g in [p] at finite level: sigma_g sends every cell of its top anchor that
/// lies in r (a cell of P_B = level b_level) into p(r) (a cell of a_level).
bool in_morphism_neighbourhood(const GoodMeasureChain& chain,
                               const AutomorphismPrefix& sigma_g, const PartitionMorphism& p,
                               std::size_t b_level, std::size_t a_level);

/// compatible(g f g^-1, A) for f compatible with B and g in [p], where
/// p: P_B -> P_A is a balanced morphism B -> A between chain levels. Images of
/// the cells of P_A are pushed through g^-1, f and g, extending the prefixes
/// as needed.
bool conjugate_transport_check(GoodMeasureChain& chain, const AutomorphismPrefix& sigma_f,
                               const AutomorphismPrefix& sigma_g, const BalancedMatrix& B,
                               const PartitionMorphism& p, const BalancedMatrix& A);

}  // namespace cantor
