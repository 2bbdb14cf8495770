#pragma once

#include "cantor/chain.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cantor {

struct Component {
  GoodMeasureChain chain;
  Rational scale;
};

/// A clopen set of the composite space: one set per component.
using CompositeSet = std::vector<ClopenSet>;

/// Disjoint union of chains, component i carrying mass scale_i.
///
/// Only coefficient-separable sums are accepted: symbol sets are pairwise
/// disjoint, and every component but at most one (the carrier) has integer
/// rational part and at least one symbol. A value then splits into
/// per-component contributions in at most 2^k ways, k the number of
/// separable components whose symbol coefficients vanish.
class CompositeMeasure {
 public:
  const std::vector<Component>& components() const noexcept { return components_; }
  std::vector<Component>& components() noexcept { return components_; }
  std::size_t size() const noexcept { return components_.size(); }

  /// sum of scale_i * mu_i(U_i).
  ExactValue measure(const CompositeSet& U) const;

  /// Every way of writing x = sum scale_i v_i with v_i in V_i; each entry
  /// lists the unscaled v_i.
  std::vector<std::vector<ExactValue>> decompositions(const ExactValue& x) const;
  bool member(const ExactValue& x) const { return !decompositions(x).empty(); }

 private:
  friend CompositeMeasure weighted_sum(std::vector<Component> parts);
  std::vector<Component> components_;
  std::optional<std::size_t> carrier_;
};

/// Throws SumMismatch unless the scales sum to 1, InvalidInput for a
/// non-positive scale or a sum outside the separable class.
CompositeMeasure weighted_sum(std::vector<Component> parts);

struct RefutationCertificate {
  /// Component whose mass cannot be distributed over the targets; size() of
  /// the composite when only the combination fails.
  std::size_t component = 0;
  /// Per target: its coefficients on the component's symbols and the scaled
  /// contributions of the component it admits.
  std::vector<std::vector<std::pair<std::string, Rational>>> coefficients;
  std::vector<std::vector<ExactValue>> options;
  /// The component's scale, which the chosen contributions must add up to.
  Rational required;
};

struct MaximalityResult {
  bool feasible = false;
  /// Feasible: the scaled contribution of each component to each target, and
  /// the realizing partition as per-target composite sets.
  std::vector<std::vector<ExactValue>> contributions;
  std::vector<CompositeSet> partition;
  /// Infeasible: the failing constraint.
  std::optional<RefutationCertificate> certificate;
};

/// Realizes `targets` as a clopen partition or proves it impossible. Throws
/// SumMismatch, InvalidInput for a non-positive target, NotAValue for a
/// target outside the composite values set.
MaximalityResult maximality_refute(CompositeMeasure& m, const std::vector<ExactValue>& targets);

struct CompositePiece {
  std::size_t component = 0;
  ClopenSet set;
};

struct CompositePartialIsomorphism {
  std::vector<std::pair<CompositePiece, CompositePiece>> pieces;
};

/// One prefix per component; components without pieces get the identity.
/// Throws ComponentMixing for a piece that changes component, WeightMismatch.
std::vector<AutomorphismPrefix> partial_isomorphism_extend_composite(
    CompositeMeasure& m, const CompositePartialIsomorphism& f);

}  // namespace cantor
