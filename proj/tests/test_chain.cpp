#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cantor/chain.hpp"
#include "cantor/error.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

using namespace cantor;
using namespace cantor::testing;

namespace {

std::vector<ClopenSet> all_subsets(const GoodMeasureChain& chain, std::size_t level) {
  const auto& cells = chain.level(level).cells();
  std::vector<ClopenSet> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << cells.size()); ++mask) {
    ClopenSet U{level, {}};
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (mask & (std::size_t{1} << i)) U.cells.insert(cells[i].id);
    }
    out.push_back(std::move(U));
  }
  return out;
}

bool is_subset(const GoodMeasureChain& chain, const ClopenSet& inner, const ClopenSet& outer) {
  const ClopenSet lifted = lift_set(chain, outer, inner.level);
  return std::includes(lifted.cells.begin(), lifted.cells.end(), inner.cells.begin(),
                       inner.cells.end());
}

}  // namespace

TEST_CASE("new_chain") {
  CHECK(new_chain(dyadic()).size() == 1);
  CHECK(new_chain(all_rationals()).level(0) == WeightedPartition::unit());
  CHECK_THROWS_WITH_AS(new_chain(GroupDescriptor()), doctest::Contains("NotGroupLike"), Error);
  CHECK_THROWS_WITH_AS(new_chain(two_cubed()), doctest::Contains("NotGroupLike"), Error);
}

TEST_CASE("absorb_object") {
  auto chain = new_chain(dyadic());
  const auto halves = WeightedPartition::from_weights("t", {q(1, 2), q(1, 2)});
  const auto stage = absorb_object(chain, halves);
  CHECK(stage == 1);
  CHECK(chain.level(1).weights() == halves.weights());
  CHECK(chain.valid());

  // The current top again: no new level.
  CHECK(absorb_object(chain, chain.level(chain.top())) == chain.top());
  CHECK(chain.size() == 2);
  // Same challenge twice: ledger hit.
  const auto ledger_size = chain.ledger().size();
  CHECK(absorb_object(chain, halves) == stage);
  CHECK(chain.ledger().size() == ledger_size);

  CHECK_THROWS_WITH_AS(
      absorb_object(chain, WeightedPartition::from_weights("t", {q(1, 3), q(1, 3), q(1, 3)})),
      doctest::Contains("NotInV"), Error);
}

TEST_CASE("absorb_object lift is a valid morphism") {
  auto chain = new_chain(triadic());
  const auto target = WeightedPartition::from_weights("t", {q(2, 9), q(4, 9), q(1, 3)});
  absorb_object(chain, WeightedPartition::from_weights("s", {q(1, 3), q(2, 3)}));
  const auto stage = absorb_object(chain, target);
  const auto* e = chain.find_ledger(chain.ledger().back().key);
  REQUIRE(e != nullptr);
  CHECK(verify_morphism(PartitionMorphism{chain.level(stage), target, e->lift}));
}

TEST_CASE("absorb_morphism") {
  auto chain = new_chain(dyadic());
  absorb_object(chain, WeightedPartition::from_weights("t", {q(1, 2), q(1, 2)}));
  const auto P1 = chain.level(1);

  SUBCASE("identity challenge") {
    const auto stage = absorb_morphism(chain, identity_morphism(P1), 1);
    CHECK(stage == 1);
  }
  SUBCASE("split one cell") {
    const auto s = split_cell(P1, P1.cells()[0].id, {q(1, 4), q(1, 4)}, dyadic());
    const auto stage = absorb_morphism(chain, s.pi, 1);
    CHECK(stage == 2);
    const auto& e = chain.ledger().back();
    for (const auto& c : chain.level(stage).cells()) {
      CHECK(s.pi(e.lift.at(c.id)) == chain.project(c.id, stage, 1));
    }
  }
  SUBCASE("quarters onto halves") {
    const auto A = WeightedPartition::from_weights("a", {q(1, 4), q(1, 4), q(1, 2)});
    const PartitionMorphism challenge{
        A, P1, {{"a/0", P1.cells()[0].id}, {"a/1", P1.cells()[0].id}, {"a/2", P1.cells()[1].id}}};
    const auto stage = absorb_morphism(chain, challenge, 1);
    CHECK(chain.level(stage).size() >= 3);
    const auto& e = chain.ledger().back();
    const PartitionMorphism r{chain.level(stage), A, e.lift};
    CHECK(verify_morphism(r));
    CHECK(compose(challenge, r).map == chain.projection(stage, 1).map);
  }
  SUBCASE("invalid challenge") {
    const auto A = WeightedPartition::from_weights("a", {q(1, 4), q(3, 4)});
    const PartitionMorphism bad{A, P1, {{"a/0", P1.cells()[0].id}, {"a/1", P1.cells()[1].id}}};
    CHECK_THROWS_WITH_AS(absorb_morphism(chain, bad, 1), doctest::Contains("InvalidChallenge"),
                         Error);
  }
  CHECK(chain.valid());
}

TEST_CASE("run_schedule") {
  auto chain = new_chain(dyadic());
  CHECK_THROWS_AS(run_schedule(chain, 0), Error);
  run_schedule(chain, 1);
  bool unit = false, halves = false;
  for (const auto& e : chain.ledger()) {
    unit = unit || e.key == "object:o/0=1;";
    halves = halves || e.key == "object:o/0=1/2;o/1=1/2;";
  }
  CHECK(unit);
  CHECK(halves);
  CHECK(chain.valid());

  SUBCASE("idempotent") {
    const auto before = chain.levels();
    const auto ledger = chain.ledger().size();
    run_schedule(chain, 1);
    CHECK(chain.levels() == before);
    CHECK(chain.ledger().size() == ledger);
  }
  SUBCASE("growing the budget extends") {
    const auto before = chain.levels();
    run_schedule(chain, 3);
    REQUIRE(chain.size() >= before.size());
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(chain.level(i) == before[i]);
    auto direct = new_chain(dyadic());
    run_schedule(direct, 3);
    CHECK(direct.levels() == chain.levels());
  }
}

TEST_CASE("Fraisse absorption holds for every ledger entry") {
  for (const auto& V : {dyadic(), triadic(), z_alpha()}) {
    auto chain = new_chain(V);
    run_schedule(chain, 2);
    CHECK(chain.valid());
    for (const auto& e : chain.ledger()) {
      const auto& P = chain.level(e.stage);
      CHECK(e.lift.size() == P.size());
    }
  }
}

TEST_CASE("measure") {
  auto chain = new_chain(dyadic());
  absorb_object(chain, WeightedPartition::from_weights("t", {q(1, 4), q(1, 4), q(1, 2)}));
  CHECK(measure(chain, ClopenSet{1, {}}) == q(0));
  for (std::size_t level = 0; level <= chain.top(); ++level) {
    ClopenSet all{level, {}};
    for (const auto& c : chain.level(level).cells()) all.cells.insert(c.id);
    CHECK(measure(chain, all) == q(1));
  }
  const auto& c = chain.level(1).cells()[2];
  CHECK(measure(chain, ClopenSet{1, {c.id}}) == c.weight);
}

TEST_CASE("canonical and lift_set round trip") {
  auto chain = new_chain(dyadic());
  run_schedule(chain, 3);
  for (std::size_t level = 0; level <= chain.top(); ++level) {
    for (const auto& U : all_subsets(chain, level)) {
      const auto lifted = lift_set(chain, U, chain.top());
      const auto back = canonical(chain, lifted);
      CHECK(back.level <= level);
      CHECK(measure(chain, back) == measure(chain, U));
      CHECK(lift_set(chain, back, chain.top()) == lifted);
    }
  }
}

TEST_CASE("subset_witness examples") {
  SUBCASE("quarter inside a half") {
    auto chain = new_chain(dyadic());
    absorb_object(chain, WeightedPartition::from_weights("t", {q(1, 4), q(1, 4), q(1, 2)}));
    const ClopenSet U{1, {chain.level(1).cells()[0].id}};
    const ClopenSet W{1, {chain.level(1).cells()[2].id}};
    const auto Wp = subset_witness(chain, U, W);
    CHECK(measure(chain, Wp) == q(1, 4));
    CHECK(is_subset(chain, Wp, W));
    CHECK_THROWS_WITH_AS(subset_witness(chain, W, U), doctest::Contains("NotSmaller"), Error);
    CHECK_THROWS_WITH_AS(subset_witness(chain, W, W), doctest::Contains("NotSmaller"), Error);
  }
  SUBCASE("a third of the whole space") {
    auto chain = new_chain(triadic());
    absorb_object(chain, WeightedPartition::from_weights("t", {q(1, 3), q(2, 3)}));
    const ClopenSet U{1, {chain.level(1).cells()[0].id}};
    const ClopenSet W{0, {"r"}};
    const auto Wp = subset_witness(chain, U, W);
    CHECK(measure(chain, Wp) == q(1, 3));
  }
}

TEST_CASE("goodness at finite level") {
  for (const auto& V : {dyadic(), triadic()}) {
    auto base = new_chain(V);
    run_schedule(base, 3);
    for (std::size_t lu = 0; lu <= base.top(); ++lu) {
      for (std::size_t lw = 0; lw <= base.top(); ++lw) {
        for (const auto& U : all_subsets(base, lu)) {
          for (const auto& W : all_subsets(base, lw)) {
            if (!(measure(base, U) < measure(base, W))) continue;
            auto chain = base;
            const auto Wp = subset_witness(chain, U, W);
            CHECK(measure(chain, Wp) == measure(chain, U));
            CHECK(is_subset(chain, Wp, W));
            CHECK(chain.valid());
          }
        }
      }
    }
  }
}

TEST_CASE("maximal_partition_witness") {
  auto dy = new_chain(dyadic());
  CHECK_NOTHROW(maximal_partition_witness(dy, {q(1, 2), q(1, 2)}));
  CHECK_THROWS_WITH_AS(maximal_partition_witness(dy, {q(1, 3), q(2, 3)}),
                       doctest::Contains("NotInV"), Error);
  CHECK_THROWS_WITH_AS(maximal_partition_witness(dy, {q(1, 2), q(1, 4)}),
                       doctest::Contains("SumMismatch"), Error);
  auto tri = new_chain(triadic());
  const auto stage = maximal_partition_witness(tri, {q(1, 3), q(1, 3), q(1, 3)});
  const auto target = WeightedPartition::from_weights("m", {q(1, 3), q(1, 3), q(1, 3)});
  CHECK(verify_morphism(PartitionMorphism{tri.level(stage), target, tri.ledger().back().lift}));
}

TEST_CASE("no atoms: every cell splits inside V") {
  for (const auto& V : {dyadic(), triadic(), dyadic_third(), z_alpha()}) {
    auto chain = new_chain(V);
    run_schedule(chain, 2);
    ensure_depth(chain, chain.top() + 2);
    for (const auto& c : chain.level(chain.top()).cells()) {
      const auto v = smaller_element(V, c.weight);
      CHECK(v.sign() > 0);
      CHECK(v < c.weight);
      CHECK(member(v, V));
      CHECK(member(c.weight - v, V));
    }
    CHECK(chain.valid());
  }
}

TEST_CASE("extend_partial_isomorphism") {
  auto chain = new_chain(dyadic());
  absorb_object(chain, WeightedPartition::from_weights("t", {q(1, 2), q(1, 2)}));
  absorb_object(chain, WeightedPartition::from_weights("u", {q(1, 4), q(3, 4)}));
  const auto& P1 = chain.level(1);
  const CellId a = P1.cells()[0].id;
  const CellId b = P1.cells()[1].id;

  SUBCASE("identity") {
    const auto sigma = extend_partial_isomorphism(chain, {1, {{{a}, {a}}, {{b}, {b}}}});
    CHECK(verify_prefix(chain, sigma));
    for (const auto& [x, y] : sigma.top().map) CHECK(x == y);
  }
  SUBCASE("swap two halves") {
    const auto sigma = extend_partial_isomorphism(chain, {1, {{{a}, {b}}}});
    CHECK(verify_prefix(chain, sigma));
    REQUIRE(sigma.at(1) != nullptr);
    CHECK(sigma.at(1)->map.at(a) == b);
    CHECK(sigma.at(1)->map.at(b) == a);
    CHECK(sigma.depth() >= 2);
  }
  SUBCASE("weights differ") {
    CHECK_THROWS_WITH_AS(
        extend_partial_isomorphism(chain, {2, {{{chain.level(2).cells()[0].id}, {b}}}}),
        doctest::Contains("WeightMismatch"), Error);
  }
}

TEST_CASE("random partial isomorphisms extend") {
  Rng rng(9);
  for (const auto& V : {dyadic(), triadic(), z_alpha()}) {
    auto base = new_chain(V);
    run_schedule(base, 2);
    for (int n = 0; n < 10; ++n) {
      auto chain = base;
      const std::size_t level = uniform(rng, 1, chain.top());
      const auto& cells = chain.level(level).cells();
      // Pair up cells of equal weight at random.
      std::map<std::string, std::vector<CellId>> by_weight;
      for (const auto& c : cells) by_weight[c.weight.to_string()].push_back(c.id);
      PartialIsomorphism f{level, {}};
      for (auto& [w, ids] : by_weight) {
        auto shuffled = ids;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        for (std::size_t i = 0; i < ids.size(); ++i) {
          if (uniform(rng, 0, 2) > 0) f.pieces.push_back({{ids[i]}, {shuffled[i]}});
        }
      }
      // Drop pieces whose image is already used by an earlier piece.
      std::set<CellId> used;
      PartialIsomorphism g{level, {}};
      for (const auto& piece : f.pieces) {
        if (used.insert(*piece.second.begin()).second) g.pieces.push_back(piece);
      }
      const auto sigma = extend_partial_isomorphism(chain, g);
      CHECK(verify_prefix(chain, sigma));
      for (const auto& [D, R] : g.pieces) {
        const auto image = [&] {
          std::set<CellId> out;
          for (const auto& c : lift_set(chain, ClopenSet{level, D}, sigma.depth()).cells) {
            out.insert(sigma.top().map.at(c));
          }
          return ClopenSet{sigma.depth(), out};
        }();
        CHECK(image == lift_set(chain, ClopenSet{level, R}, sigma.depth()));
      }
    }
  }
}

TEST_CASE("extend_prefix") {
  auto chain = new_chain(dyadic());
  run_schedule(chain, 3);
  SUBCASE("identity stays identity") {
    const auto id = identity_prefix(chain, 1);
    const auto ext = extend_prefix(chain, id, chain.top() + 1);
    CHECK(ext.depth() == chain.top());
    for (const auto& [x, y] : ext.top().map) CHECK(x == y);
  }
  SUBCASE("no-op") {
    const auto id = identity_prefix(chain, 2);
    CHECK(extend_prefix(chain, id, 2).anchors == id.anchors);
  }
  SUBCASE("transposition extended") {
    const auto& P1 = chain.level(1);
    REQUIRE(P1.size() == 2);
    const auto sigma = extend_partial_isomorphism(
        chain, {1, {{{P1.cells()[0].id}, {P1.cells()[1].id}}}});
    const auto ext = extend_prefix(chain, sigma, chain.top() + 1);
    CHECK(ext.depth() >= chain.top() - 1);
    CHECK(verify_prefix(chain, ext));
    REQUIRE(ext.at(1) != nullptr);
    CHECK(ext.at(1)->map == sigma.at(1)->map);
    CHECK_THROWS_AS(extend_prefix(chain, ext, 0), Error);
  }
}
