#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cantor/cycles.hpp"
#include "cantor/error.hpp"
#include "fixtures.hpp"
#include "tuple_generators.hpp"

using namespace cantor;
using namespace cantor::testing;

namespace {

CycleTuple tup(std::vector<TupleEntry> e) { return CycleTuple(std::move(e)); }

// Every assignment of source entries to target entries, checked directly.
bool morphism_exists(const CycleTuple& src, const CycleTuple& tgt) {
  const std::size_t m = src.size(), l = tgt.size();
  std::vector<std::size_t> assign(m, 0);
  while (true) {
    TupleMorphism t;
    t.blocks.resize(l);
    for (std::size_t i = 0; i < m; ++i) t.blocks[assign[i]].push_back(i);
    if (verify_tuple_morphism(t, src, tgt)) return true;
    std::size_t i = 0;
    while (i < m && ++assign[i] == l) assign[i++] = 0;
    if (i == m) return false;
  }
}

}  // namespace

TEST_CASE("CycleTuple is canonical") {
  const auto a = tup({{q(1, 2), 1}, {q(1, 4), 2}});
  const auto b = tup({{q(1, 4), 2}, {q(1, 2), 1}});
  CHECK(a == b);
  CHECK(a.mass() == q(1));
  CHECK(a[0].weight == q(1, 4));
  CHECK(a.to_string() == "((1/4,2),(1/2,1))");
  CHECK_THROWS_AS(tup({{q(0), 1}}), Error);
  CHECK_THROWS_AS(tup({{q(1, 2), 0}}), Error);
  CHECK_THROWS_WITH_AS(tup({{q(1, 3), 1}}).require_in(dyadic()), doctest::Contains("NotInV"),
                       Error);
  CHECK_THROWS_WITH_AS(tup({{q(1, 2), 3}}).require_in(dyadic()),
                       doctest::Contains("MassOverflow"), Error);
}

TEST_CASE("tuple_sum and tuple_scale") {
  const auto half = tup({{q(1, 2), 1}});
  CHECK(tuple_sum(half, half) == tup({{q(1, 2), 1}, {q(1, 2), 1}}));
  CHECK(tuple_sum(half, half).mass() == q(1));
  CHECK(tuple_scale(2, tup({{q(1, 4), 2}}), dyadic()) == tup({{q(1, 4), 2}, {q(1, 4), 2}}));
  CHECK_THROWS_WITH_AS(tuple_sum(half, tup({{q(3, 4), 1}})), doctest::Contains("MassOverflow"),
                       Error);
  CHECK_THROWS_WITH_AS(tuple_scale(3, tup({{q(1, 2), 1}}), dyadic()),
                       doctest::Contains("MassOverflow"), Error);
  // 3 * 1/9 = 1/3 is not a dyadic value.
  CHECK_THROWS_WITH_AS(tuple_scale(3, tup({{q(1, 9), 1}}), dyadic()),
                       doctest::Contains("NotInV"), Error);
}

TEST_CASE("verify_tuple_morphism") {
  const auto src = tup({{q(1, 4), 2}, {q(1, 4), 2}});
  CHECK(verify_tuple_morphism(identity_tuple_morphism(src), src, src));
  CHECK(verify_tuple_morphism(TupleMorphism{{{0, 1}}}, src, tup({{q(1, 2), 2}})));
  CHECK_FALSE(
      verify_tuple_morphism(TupleMorphism{{{0}}}, tup({{q(1, 3), 3}}), tup({{q(1, 2), 2}})));
  // Index listed twice, or missing.
  CHECK_FALSE(verify_tuple_morphism(TupleMorphism{{{0, 0}}}, src, tup({{q(1, 2), 2}})));
  CHECK_FALSE(verify_tuple_morphism(TupleMorphism{{{0}}}, src, tup({{q(1, 2), 2}})));
  CHECK_THROWS_WITH_AS(
      verify_tuple_morphism(TupleMorphism{{{0}}}, tup({{q(1, 4), 1}}), tup({{q(1, 2), 1}})),
      doctest::Contains("MassMismatch"), Error);
}

TEST_CASE("find_tuple_morphism examples") {
  const auto src = tup({{q(1, 4), 2}, {q(1, 4), 2}});
  const auto same = find_tuple_morphism(src, src);
  REQUIRE(same.morphism);
  CHECK(*same.morphism == identity_tuple_morphism(src));

  const auto merged = find_tuple_morphism(src, tup({{q(1, 2), 2}}));
  REQUIRE(merged.morphism);
  CHECK(merged.morphism->blocks == std::vector<std::vector<std::size_t>>{{0, 1}});

  const auto none = find_tuple_morphism(tup({{q(1, 3), 3}}), tup({{q(1, 2), 2}}));
  CHECK_FALSE(none.morphism);
  CHECK(none.exhausted);

  CHECK_THROWS_WITH_AS(find_tuple_morphism(tup({{q(1, 4), 1}}), tup({{q(1, 2), 1}})),
                       doctest::Contains("MassMismatch"), Error);
}

TEST_CASE("find_tuple_morphism effort bound") {
  std::vector<TupleEntry> many;
  for (int i = 0; i < 12; ++i) many.push_back({q(1, 12), 1});
  const auto src = tup(many);
  const auto tgt = tup({{q(1, 2), 1}, {q(1, 2), 1}});
  const auto limited = find_tuple_morphism(src, tgt, 5);
  CHECK_FALSE(limited.exhausted);
  CHECK(limited.nodes == 6);
  const auto full = find_tuple_morphism(src, tgt);
  REQUIRE(full.morphism);
  CHECK(verify_tuple_morphism(*full.morphism, src, tgt));
}

TEST_CASE("find_tuple_morphism agrees with exhaustive assignment") {
  Rng rng(17);
  const auto pool = rational_pool(6);
  int found = 0;
  for (int n = 0; n < 300; ++n) {
    const ExactValue mass = pool[uniform(rng, 0, pool.size() - 1)];
    const auto src = random_tuple(rng, mass, 5, 4, pool);
    const auto tgt = random_tuple(rng, mass, 3, 4, pool);
    const auto res = find_tuple_morphism(src, tgt);
    REQUIRE(res.exhausted);
    CHECK(res.morphism.has_value() == morphism_exists(src, tgt));
    if (res.morphism) {
      ++found;
      CHECK(verify_tuple_morphism(*res.morphism, src, tgt));
    }
  }
  CHECK(found > 0);
}

TEST_CASE("morphisms compose") {
  Rng rng(23);
  const auto pool = rational_pool(5);
  for (int n = 0; n < 100; ++n) {
    const auto A = random_tuple(rng, q(1), 2, 2, pool);
    const auto B = random_cover(rng, A, 4, 2, pool);
    const auto C = random_cover(rng, B.source, 6, 2, pool);
    REQUIRE(verify_tuple_morphism(B.map, B.source, A));
    REQUIRE(verify_tuple_morphism(C.map, C.source, B.source));
    CHECK(verify_tuple_morphism(compose(B.map, C.map), C.source, A));
  }
}

TEST_CASE("ring_product_lift") {
  SUBCASE("unit tuple") {
    const auto one = tup({{q(1), 1}});
    const auto r = ring_product_lift(one, one, dyadic());
    CHECK(r.u == one);
  }
  SUBCASE("dyadic halves") {
    const auto c = tup({{q(1, 2), 2}});
    const auto r = ring_product_lift(c, c, dyadic());
    CHECK(r.u == tup({{q(1, 4), 4}}));
    CHECK(verify_tuple_morphism(r.onto_c, r.u, c));
    CHECK(verify_tuple_morphism(r.onto_d, r.u, c));
  }
  SUBCASE("halves and thirds over Q") {
    const auto c = tup({{q(1, 2), 2}});
    const auto d = tup({{q(1, 3), 3}});
    const auto r = ring_product_lift(c, d, all_rationals());
    CHECK(r.u == tup({{q(1, 6), 6}}));
    CHECK(verify_tuple_morphism(r.onto_c, r.u, c));
    CHECK(verify_tuple_morphism(r.onto_d, r.u, d));
  }
  SUBCASE("errors") {
    const auto c = tup({{q(1, 2), 2}});
    CHECK_THROWS_WITH_AS(ring_product_lift(c, c, two_cubed()), doctest::Contains("NotRingLike"),
                         Error);
    CHECK_THROWS_WITH_AS(ring_product_lift(c, c, z_alpha()), doctest::Contains("NotRingLike"),
                         Error);
    CHECK_THROWS_AS(ring_product_lift(tup({{q(1, 2), 1}}), c, dyadic()), Error);
  }
  SUBCASE("random pairs") {
    Rng rng(4);
    const std::vector<ExactValue> pool{q(1, 2), q(1, 4), q(3, 4), q(1, 8), q(3, 8), q(5, 8)};
    for (int n = 0; n < 100; ++n) {
      const auto c = random_tuple(rng, q(1), 4, 3, pool);
      const auto d = random_tuple(rng, q(1), 4, 3, pool);
      const auto r = ring_product_lift(c, d, sixadic());
      CHECK(r.u.mass() == q(1));
      CHECK(verify_tuple_morphism(r.onto_c, r.u, c));
      CHECK(verify_tuple_morphism(r.onto_d, r.u, d));
    }
  }
}

TEST_CASE("qlike_amalgamate examples") {
  const auto Q = all_rationals();
  SUBCASE("identical legs") {
    const auto A = tup({{q(1, 3), 3}});
    const auto id = identity_tuple_morphism(A);
    const auto am = qlike_amalgamate(A, id, A, id, A, Q);
    CHECK(am.C == A);
    CHECK(am.q0 == id);
    CHECK(am.q1 == id);
  }
  SUBCASE("two refinements of one self-loop") {
    const auto A = tup({{q(1), 1}});
    const auto B0 = tup({{q(1, 2), 1}, {q(1, 2), 1}});
    const auto B1 = tup({{q(1, 4), 1}, {q(3, 4), 1}});
    const TupleMorphism p0{{{0, 1}}}, p1{{{0, 1}}};
    const auto am = qlike_amalgamate(B0, p0, B1, p1, A, Q);
    CHECK(am.C == tup({{q(1, 4), 1}, {q(1, 4), 1}, {q(1, 2), 1}}));
    CHECK(verify_tuple_morphism(am.q0, am.C, B0));
    CHECK(verify_tuple_morphism(am.q1, am.C, B1));
    CHECK(compose(p0, am.q0) == compose(p1, am.q1));
  }
  SUBCASE("winding numbers meet in their lcm") {
    const auto A = tup({{q(1, 2), 2}});
    const auto B0 = tup({{q(1, 4), 4}});  // winding 2
    const auto B1 = tup({{q(1, 6), 6}});  // winding 3
    const auto am = qlike_amalgamate(B0, {{{0}}}, B1, {{{0}}}, A, Q);
    CHECK(am.C == tup({{q(1, 12), 12}}));
    CHECK(verify_tuple_morphism(am.q0, am.C, B0));
    CHECK(verify_tuple_morphism(am.q1, am.C, B1));
  }
  SUBCASE("errors") {
    const auto A = tup({{q(1), 1}});
    const auto id = identity_tuple_morphism(A);
    CHECK_THROWS_WITH_AS(qlike_amalgamate(A, id, A, id, A, dyadic()),
                         doctest::Contains("NotQLike"), Error);
    const auto B = tup({{q(1, 3), 3}});
    CHECK_THROWS_WITH_AS(qlike_amalgamate(B, {{{0}}}, A, id, tup({{q(1, 2), 2}}), Q),
                         doctest::Contains("InvalidInput"), Error);
  }
}

TEST_CASE("qlike_amalgamate squares commute on random cospans") {
  Rng rng(31);
  const auto pool = rational_pool(6);
  for (int n = 0; n < 150; ++n) {
    const auto A = random_tuple(rng, pool[uniform(rng, 0, pool.size() - 1)], 3, 3, pool);
    const auto b0 = random_cover(rng, A, 4, 3, pool);
    const auto b1 = random_cover(rng, A, 4, 3, pool);
    const auto am = qlike_amalgamate(b0.source, b0.map, b1.source, b1.map, A, all_rationals());
    CHECK(verify_tuple_morphism(am.q0, am.C, b0.source));
    CHECK(verify_tuple_morphism(am.q1, am.C, b1.source));
    CHECK(compose(b0.map, am.q0) == compose(b1.map, am.q1));
  }
}

TEST_CASE("rokhlin_decide") {
  const auto yes = [](const GroupDescriptor& V) {
    const auto r = rokhlin_decide(V);
    return r.strong_rokhlin == Tri::yes && r.rokhlin == Tri::yes;
  };
  CHECK(yes(dyadic()));
  CHECK(yes(triadic()));
  CHECK(yes(sixadic()));
  CHECK(yes(all_rationals()));
  CHECK(rokhlin_decide(dyadic()).certificate == RokhlinVerdict::Certificate::ring_like);

  const auto two = rokhlin_decide(two_cubed());
  CHECK(two.rokhlin == Tri::no);
  CHECK(two.strong_rokhlin == Tri::no);
  CHECK(two.certificate == RokhlinVerdict::Certificate::prime_exponent);
  CHECK(two.prime == 2);
  CHECK(two.exponent == 3);

  const auto third = rokhlin_decide(dyadic_third());
  CHECK(third.rokhlin == Tri::no);
  CHECK(third.prime == 3);
  CHECK(third.exponent == 1);

  const auto five = rokhlin_decide(five_squared());
  CHECK(five.rokhlin == Tri::no);
  CHECK(five.prime == 5);
  CHECK(five.exponent == 2);

  const GroupDescriptor q_alpha(RationalGroup::rationals(),
                                {IrrationalComponent{sqrt2_minus_one(), RationalGroup::rationals()}});
  CHECK(rokhlin_decide(q_alpha).certificate == RokhlinVerdict::Certificate::q_like);
  CHECK(yes(q_alpha));
  const GroupDescriptor q_plus_z_alpha(
      RationalGroup::rationals(),
      {IrrationalComponent{sqrt2_minus_one(), RationalGroup::integers()}});
  CHECK(rokhlin_decide(q_plus_z_alpha).rokhlin == Tri::no);
  CHECK(rokhlin_decide(q_plus_z_alpha).certificate ==
        RokhlinVerdict::Certificate::contains_rationals);
  CHECK(rokhlin_decide(z_alpha()).rokhlin == Tri::undecided);
}

TEST_CASE("divisibility_closure_check") {
  CHECK(divisibility_closure_check(dyadic(), 40).empty());
  CHECK(divisibility_closure_check(all_rationals(), 12).empty());
  const auto third = divisibility_closure_check(dyadic_third(), 40);
  CHECK(std::any_of(third.begin(), third.end(), [](const ClosureViolation& v) {
    return v.kind == ClosureViolation::Kind::product && v.n == 3 && v.m == 3;
  }));
  CHECK_FALSE(divisibility_closure_check(two_cubed(), 8).empty());
  CHECK_FALSE(divisibility_closure_check(five_squared(), 25).empty());
}

TEST_CASE("decision agrees with closure and product lifts") {
  Rng rng(2);
  const std::vector<ExactValue> pool{q(1, 2), q(1, 4), q(3, 4), q(1, 3), q(2, 3), q(1, 6)};
  for (const auto& V : {dyadic(), triadic(), sixadic(), all_rationals(), two_cubed(),
                        dyadic_third(), five_squared()}) {
    const auto r = rokhlin_decide(V);
    if (r.rokhlin == Tri::no) {
      CHECK_FALSE(divisibility_closure_check(V, 32).empty());
      continue;
    }
    std::vector<ExactValue> in_v;
    for (const auto& v : pool) {
      if (member(v, V)) in_v.push_back(v);
    }
    for (int n = 0; n < 20; ++n) {
      const auto c = random_tuple(rng, q(1), 3, 3, in_v);
      const auto d = random_tuple(rng, q(1), 3, 3, in_v);
      const auto lift = ring_product_lift(c, d, V);
      CHECK(verify_tuple_morphism(lift.onto_c, lift.u, c));
      CHECK(verify_tuple_morphism(lift.onto_d, lift.u, d));
    }
  }
}

TEST_CASE("sums of common lifts are common lifts") {
  Rng rng(12);
  const auto pool = rational_pool(4);
  for (int n = 0; n < 50; ++n) {
    const auto A1 = random_tuple(rng, q(1, 2), 2, 2, pool);
    const auto A2 = random_tuple(rng, q(1, 2), 2, 2, pool);
    const auto x1 = random_cover(rng, A1, 3, 2, pool), y1 = random_cover(rng, A1, 3, 2, pool);
    const auto x2 = random_cover(rng, A2, 3, 2, pool), y2 = random_cover(rng, A2, 3, 2, pool);
    const auto m1 = qlike_amalgamate(x1.source, x1.map, y1.source, y1.map, A1, all_rationals());
    const auto m2 = qlike_amalgamate(x2.source, x2.map, y2.source, y2.map, A2, all_rationals());
    const auto C = tuple_sum(m1.C, m2.C);
    const auto X = tuple_sum(x1.source, x2.source);
    const auto Y = tuple_sum(y1.source, y2.source);
    CHECK(find_tuple_morphism(C, X).morphism.has_value());
    CHECK(find_tuple_morphism(C, Y).morphism.has_value());
  }
}

TEST_CASE("dichotomy_analyze") {
  SUBCASE("Q-like V") {
    const auto r = dichotomy_analyze(all_rationals(), q(1, 2), 2, q(1, 2));
    CHECK(r.kind == DichotomyVerdict::Kind::strong_rokhlin_all);
  }
  SUBCASE("thirds of a dyadic-third set") {
    const auto r = dichotomy_analyze(dyadic_third(), q(1, 3), 9, q(1, 12));
    CHECK(r.kind == DichotomyVerdict::Kind::no_rokhlin);
    CHECK(r.a == q(3, 4));
    REQUIRE(r.scaled);
    CHECK(r.violation.v == q(4, 9));
    CHECK(r.violation.n == 9);
    CHECK(member(q(4, 9), *r.scaled));
    CHECK_FALSE(member(q(4, 81), *r.scaled));
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_WITH_AS(dichotomy_analyze(dyadic_third(), q(1, 2), 2, q(1, 4)),
                         doctest::Contains("b/n not in V"), Error);
    CHECK_THROWS_WITH_AS(dichotomy_analyze(dyadic_third(), q(1, 9), 9, q(1, 12)),
                         doctest::Contains("b in V"), Error);
    CHECK_THROWS_WITH_AS(dichotomy_analyze(dyadic_third(), q(1, 3), 9, q(1, 6)),
                         doctest::Contains("b/n <= c <= 1/n"), Error);
    CHECK_THROWS_WITH_AS(dichotomy_analyze(dyadic_third(), q(1, 3), 1, q(1, 6)),
                         doctest::Contains("n > 1"), Error);
  }
}
