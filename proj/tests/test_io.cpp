#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cantor/error.hpp"
#include "cantor/io.hpp"
#include "fixtures.hpp"
#include "matrix_generators.hpp"
#include "tuple_generators.hpp"

using namespace cantor;
using namespace cantor::testing;
using io::Json;
using io::Symbols;

namespace {

GoodMeasureChain built(const GroupDescriptor& V, std::size_t budget) {
  auto chain = new_chain(V);
  run_schedule(chain, budget);
  return chain;
}

}  // namespace

TEST_CASE("fnv1a") {
  CHECK(io::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(io::fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(io::fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("values") {
  const Symbols symbols{{"alpha", sqrt2_minus_one()}};
  CHECK(io::canonical(io::to_json(q(3, 6))) == "{\n  \"q\": \"1/2\"\n}\n");
  const ExactValue v = q(1, 9) + alpha(-2, 3);
  const Json j = io::to_json(v);
  CHECK(j["irr"]["alpha"] == "-2/3");
  CHECK(io::value_from_json(j, symbols) == v);
  CHECK(io::value_from_json(Json("2/4"), symbols) == q(1, 2));
  CHECK(io::value_from_json(Json(3), symbols) == q(3));
  CHECK_THROWS_WITH_AS(io::value_from_json(Json::parse(R"({"q":"0","irr":{"beta":"1"}})"), symbols),
                       doctest::Contains("InvalidInput"), Error);
  CHECK_THROWS_AS(io::value_from_json(Json("1/0"), symbols), Error);
  CHECK_THROWS_AS(io::value_from_json(Json(0.5), symbols), Error);
}

TEST_CASE("descriptors") {
  SUBCASE("documented schema") {
    const auto V = io::descriptor_from_json(Json::parse(
        R"({"rational":{"default":"0","exceptions":{"2":3,"5":"inf"}},"irrationals":[]})"));
    CHECK(V.rational_component().exponent(2) == Exponent::finite(3));
    CHECK(V.rational_component().exponent(5) == Exponent::infinite());
    CHECK(V.rational_component().exponent(3) == Exponent::finite(0));
  }
  SUBCASE("round trips") {
    const GroupDescriptor cases[] = {
        dyadic(), triadic(), all_rationals(), two_cubed(), five_squared(), z_alpha(),
        GroupDescriptor(RationalGroup::rationals(),
                        {{IrrationalSymbol::make("e", DigitsEnclosure{10, "71828182845904523536"}),
                          RationalGroup(Exponent::finite(0), {{2, Exponent::infinite()}})}})};
    for (const auto& V : cases) {
      const std::string once = io::canonical(io::to_json(V));
      const auto back = io::descriptor_from_json(io::parse(once));
      CHECK(back.rational_component() == V.rational_component());
      CHECK(io::canonical(io::to_json(back)) == once);
    }
  }
  SUBCASE("invalid") {
    CHECK_THROWS_AS(io::descriptor_from_json(Json::parse(R"({"rational":{"default":"2"}})")),
                    Error);
    CHECK_THROWS_AS(io::descriptor_from_json(Json::parse(R"({"rational":{"exceptions":{"4":1}}})")),
                    Error);
    CHECK_THROWS_AS(io::descriptor_from_json(Json::parse(
                        R"({"irrationals":[{"name":"a","enclosure":{"kind":"sqrt","radicand":4}}]})")),
                    Error);
    CHECK_THROWS_AS(io::parse("{\"rational\": "), Error);
  }
}

TEST_CASE("partitions and maps") {
  const Symbols symbols{{"alpha", sqrt2_minus_one()}};
  const WeightedPartition P({{"a", alpha()}, {"b", q(1) - alpha()}});
  const Json j = io::to_json(P);
  CHECK(io::partition_from_json(j, symbols) == P);
  Json broken = j;
  broken["total"] = "1/2";
  CHECK_THROWS_AS(io::partition_from_json(broken, symbols), Error);
  const std::map<CellId, CellId> m{{"x", "a"}, {"y", "a"}};
  CHECK(io::map_from_json(io::to_json(m)) == m);
}

TEST_CASE("chain snapshots round trip byte for byte") {
  for (const auto& V : {dyadic(), triadic(), z_alpha()}) {
    const auto chain = built(V, 3);
    const std::string once = io::canonical(io::to_json(chain));
    const auto back = io::chain_from_json(io::parse(once));
    CHECK(back.size() == chain.size());
    CHECK(back.ledger().size() == chain.ledger().size());
    CHECK(io::canonical(io::to_json(back)) == once);
    // Resuming the same schedule from the snapshot is a no-op.
    auto resumed = back;
    run_schedule(resumed, 3);
    CHECK(io::canonical(io::to_json(resumed)) == once);
    // Rebuilding from scratch reproduces the bytes.
    CHECK(io::canonical(io::to_json(built(V, 3))) == once);
  }
}

TEST_CASE("corrupted snapshots are rejected") {
  const auto chain = built(dyadic(), 3);
  const std::string once = io::canonical(io::to_json(chain));
  CHECK_THROWS_AS(io::chain_from_json(io::parse(once.substr(0, once.size() / 2))), Error);

  Json j = io::parse(once);
  j["levels"][1]["cells"][0]["w"] = {{"q", "1/3"}};
  j["levels"][1]["total"] = {{"q", "1"}};
  CHECK_THROWS_AS(io::chain_from_json(j), Error);

  j = io::parse(once);
  j["links"].erase(0);
  CHECK_THROWS_AS(io::chain_from_json(j), Error);

  j = io::parse(once);
  j.erase("descriptor");
  CHECK_THROWS_AS(io::chain_from_json(j), Error);
}

TEST_CASE("matrices, prefixes and tuples round trip") {
  Rng rng(11);
  auto chain = built(dyadic(), 3);
  const Symbols none;
  for (int n = 0; n < 20; ++n) {
    const BalancedMatrix A = random_balanced(rng, chain, uniform(rng, 0, chain.top()));
    const Json j = io::to_json(A);
    CHECK(io::matrix_from_json(j, none) == A);
    CHECK(io::canonical(io::to_json(io::matrix_from_json(j, none))) == io::canonical(j));
    const auto sigma = compatible_witness(chain, A);
    const auto back = io::prefix_from_json(io::to_json(sigma));
    CHECK(back.anchors == sigma.anchors);
  }
  const auto pool = rational_pool(12);
  for (int n = 0; n < 50; ++n) {
    const CycleTuple c = random_tuple(rng, q(1), 4, 3, pool);
    CHECK(io::tuple_from_json(io::to_json(c), none) == c);
    const auto m = identity_tuple_morphism(c);
    CHECK(io::tuple_morphism_from_json(io::to_json(m)) == m);
  }
  CHECK_THROWS_AS(io::matrix_from_json(Json::parse(
                      R"({"level":0,"entries":[{"from":"r","to":"r","w":"1"},{"from":"r","to":"r","w":"1"}]})"),
                                       none),
                  Error);
}
