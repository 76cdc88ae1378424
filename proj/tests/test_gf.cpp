#include "bsieve/gf.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace bsieve;

TEST_CASE("first irreducible polynomials in counting order") {
    // frozen small cases, coefficient vectors low-degree-first
    CHECK(find_irreducible(2, 1) == std::vector<std::uint32_t>{0, 1});            // x
    CHECK(find_irreducible(2, 2) == std::vector<std::uint32_t>{1, 1, 1});         // x^2+x+1
    CHECK(find_irreducible(2, 3) == std::vector<std::uint32_t>{1, 1, 0, 1});      // x^3+x+1
    CHECK(find_irreducible(2, 4) == std::vector<std::uint32_t>{1, 1, 0, 0, 1});   // x^4+x+1
    CHECK(find_irreducible(3, 1) == std::vector<std::uint32_t>{0, 1});            // x
    CHECK(find_irreducible(3, 2) == std::vector<std::uint32_t>{1, 0, 1});         // x^2+1
    CHECK(find_irreducible(5, 2) == std::vector<std::uint32_t>{2, 0, 1});         // x^2+2
}

TEST_CASE("modulus of every level is monic of degree a*k and has no small-field roots") {
    for (auto [p, a] : {std::pair<std::uint32_t, int>{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
        FieldTower tw(p, a);
        for (int k : {1, 2, 3}) {
            tw.ensure_level(k);
            const auto& m = tw.modulus(k);
            REQUIRE((int)m.size() == a * k + 1);
            CHECK(m[a * k] == 1);
        }
    }
}

TEST_CASE("field axioms on sampled elements") {
    for (auto [p, a] : {std::pair<std::uint32_t, int>{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
        FieldTower tw(p, a);
        for (int k : {1, 2, 3}) {
            tw.ensure_level(k);
            std::uint64_t sz = tw.field_size(k).convert_to<std::uint64_t>();
            RngStream rng(17, p * 100 + a, k);
            for (int trial = 0; trial < 25; ++trial) {
                auto x = tw.from_rank(k, rng.below(sz));
                auto y = tw.from_rank(k, rng.below(sz));
                auto z = tw.from_rank(k, rng.below(sz));
                CHECK(tw.add(x, y) == tw.add(y, x));
                CHECK(tw.mul(x, y) == tw.mul(y, x));
                CHECK(tw.mul(tw.mul(x, y), z) == tw.mul(x, tw.mul(y, z)));
                CHECK(tw.mul(x, tw.add(y, z)) == tw.add(tw.mul(x, y), tw.mul(x, z)));
                CHECK(tw.add(x, tw.neg(x)).is_zero());
                CHECK(tw.sub(x, y) == tw.add(x, tw.neg(y)));
                if (!x.is_zero()) {
                    CHECK(tw.mul(x, tw.inv(x)) == tw.one(k));
                    // Fermat: x^{q^k} = x
                    std::uint64_t qk = 1;
                    for (int i = 0; i < k; ++i) qk *= tw.q();
                    CHECK(tw.pow(x, qk) == x);
                }
                REQUIRE((int)x.c.size() == a * k);
            }
        }
    }
}

TEST_CASE("frobenius is an F_q-automorphism of order k") {
    for (auto [p, a] : {std::pair<std::uint32_t, int>{2, 1}, {3, 1}, {2, 2}}) {
        FieldTower tw(p, a);
        for (int k : {2, 3, 4}) {
            tw.ensure_level(k);
            std::uint64_t sz = tw.field_size(k).convert_to<std::uint64_t>();
            RngStream rng(31, p * 10 + a, k);
            for (int trial = 0; trial < 20; ++trial) {
                auto x = tw.from_rank(k, rng.below(sz));
                auto y = tw.from_rank(k, rng.below(sz));
                CHECK(tw.frobenius(tw.add(x, y)) == tw.add(tw.frobenius(x), tw.frobenius(y)));
                CHECK(tw.frobenius(tw.mul(x, y)) == tw.mul(tw.frobenius(x), tw.frobenius(y)));
                CHECK(tw.frobenius_pow(x, k) == x);
                CHECK(tw.frobenius(x) == tw.pow(x, tw.q()));
            }
            // fixed points of frobenius are exactly the embedded base field
            std::set<std::uint64_t> fixed;
            for (std::uint64_t r = 0; r < sz; ++r) {
                auto x = tw.from_rank(k, r);
                if (tw.frobenius(x) == x) fixed.insert(r);
            }
            CHECK(fixed.size() == tw.q());
            for (std::uint64_t r = 0; r < tw.q(); ++r) {
                auto img = tw.embed(tw.from_rank(1, r), k);
                CHECK(fixed.count(tw.rank_of(img)) == 1);
            }
        }
    }
}

TEST_CASE("embedding is a field homomorphism hitting a root of the base modulus") {
    for (auto [p, a] : {std::pair<std::uint32_t, int>{2, 1}, {3, 1}, {2, 2}}) {
        FieldTower tw(p, a);
        for (int k : {2, 3}) {
            tw.ensure_level(k);
            CHECK(tw.embed(tw.zero(1), k).is_zero());
            CHECK(tw.embed(tw.one(1), k) == tw.one(k));
            RngStream rng(47, p, k);
            for (int trial = 0; trial < 20; ++trial) {
                auto x = tw.from_rank(1, rng.below(tw.q()));
                auto y = tw.from_rank(1, rng.below(tw.q()));
                CHECK(tw.embed(tw.add(x, y), k) == tw.add(tw.embed(x, k), tw.embed(y, k)));
                CHECK(tw.embed(tw.mul(x, y), k) == tw.mul(tw.embed(x, k), tw.embed(y, k)));
            }
            // the generator image must satisfy the base modulus
            auto g = tw.embed(tw.generator(1), k);
            const auto& m1 = tw.modulus(1);
            FieldElement acc = tw.zero(k);
            for (int i = (int)m1.size() - 1; i >= 0; --i) {
                acc = tw.mul(acc, g);
                acc = tw.add(acc, tw.from_int(k, m1[i]));
            }
            CHECK(acc.is_zero());
        }
    }
}

TEST_CASE("embeddings compose along the tower") {
    for (auto [p, a] : {std::pair<std::uint32_t, int>{2, 1}, {3, 1}, {2, 2}}) {
        FieldTower tw(p, a);
        for (auto [k, km] : {std::pair<int, int>{2, 4}, {2, 6}, {3, 6}}) {
            tw.ensure_level(k);
            tw.ensure_level(km);
            for (std::uint64_t r = 0; r < tw.q(); ++r) {
                auto x = tw.from_rank(1, r);
                CHECK(tw.embed(tw.embed(x, k), km) == tw.embed(x, km));
            }
        }
    }
}

TEST_CASE("frobenius orbit of the level generator has full size") {
    FieldTower tw(2, 1);
    for (int k : {2, 3, 4, 5}) {
        tw.ensure_level(k);
        auto t = tw.generator(k);
        auto x = tw.frobenius(t);
        int orbit = 1;
        while (!(x == t)) {
            x = tw.frobenius(x);
            ++orbit;
            REQUIRE(orbit <= k);
        }
        CHECK(orbit == k);
    }
}

TEST_CASE("level budget and error paths") {
    FieldTower tw(2, 1, 1u << 10);
    CHECK_THROWS_AS(tw.ensure_level(11), SieveError);  // 2^11 over budget
    tw.ensure_level(10);
    CHECK_THROWS_AS(tw.inv(tw.zero(1)), SieveError);
    tw.ensure_level(2);
    tw.ensure_level(3);
    CHECK_THROWS_AS(tw.add(tw.zero(2), tw.zero(3)), SieveError);  // level mismatch
    FieldTower t2(2, 1);
    CHECK_THROWS_AS(t2.embed(t2.zero(2), 3), SieveError);  // 2 does not divide 3
    CHECK_THROWS_AS(FieldTower(4, 1), SieveError);         // 4 not prime
}
