#include <catch2/catch_amalgamated.hpp>

#include "bsieve/linalg.hpp"

#include <set>

using namespace bsieve;

namespace {

SchemeDesc proj_space(int n) { return SchemeDesc{n, {}, {}, std::nullopt}; }

std::vector<HomPoly> fat_point_gens(FieldTower& tw) {
    return {parse_form(tw, "x1^2", 3), parse_form(tw, "x1*x2", 3), parse_form(tw, "x2^2", 3)};
}

}  // namespace

TEST_CASE("ideal slices have the expected dimensions and members") {
    FieldTower tw(2, 1);

    SECTION("principal ideal in two variables") {
        std::vector<HomPoly> gens{parse_form(tw, "x0", 2)};
        auto sl = ideal_slice(tw, gens, 1, 2);
        CHECK(sl.ambient_dim == 3);
        CHECK(sl.dim == 2);  // x0^2, x0*x1
        REQUIRE(sl.basis.size() == 2);
        for (const auto& pv : sl.prov) CHECK(pv.gen_idx == 0);
        CHECK(slice_contains(tw, sl, parse_form(tw, "x0^2 + x0*x1", 2)));
        CHECK(!slice_contains(tw, sl, parse_form(tw, "x1^2", 2)));
    }
    SECTION("no generators: the full space of forms") {
        auto sl = ideal_slice(tw, {}, 2, 3);
        CHECK(sl.full);
        CHECK(sl.dim == 10);
        CHECK(sl.ambient_dim == 10);
        CHECK(slice_contains(tw, sl, parse_form(tw, "x0^3 + x1*x2^2", 3)));
    }
    SECTION("first infinitesimal neighborhood of a point") {
        auto gens = fat_point_gens(tw);
        CHECK(ideal_slice(tw, gens, 2, 1).dim == 0);
        CHECK(ideal_slice(tw, gens, 2, 2).dim == 3);
        auto sl3 = ideal_slice(tw, gens, 2, 3);
        CHECK(sl3.dim == 7);
        CHECK(slice_contains(tw, sl3, parse_form(tw, "x2^3", 3)));
        CHECK(slice_contains(tw, sl3, parse_form(tw, "x0*x1*x2", 3)));
        CHECK(!slice_contains(tw, sl3, parse_form(tw, "x0^3", 3)));
        CHECK(!slice_contains(tw, sl3, parse_form(tw, "x0^2*x1", 3)));
    }
    SECTION("every basis element vanishes on the generators' zero locus") {
        auto gens = fat_point_gens(tw);
        auto sl = ideal_slice(tw, gens, 2, 4);
        SchemeDesc V = proj_space(2);
        V.closed_eqs = gens;
        for (const auto& P : closed_points(tw, V, 2))
            for (const auto& b : sl.basis)
                CHECK(evaluate(tw, b, P.rep, P.degree).is_zero());
    }
    SECTION("count of slice elements") {
        FieldTower t9(3, 2);  // q = 9
        std::vector<HomPoly> gens{parse_form(t9, "x0", 2)};
        auto sl = ideal_slice(t9, gens, 1, 3);
        CHECK(sl.dim == 3);
        CHECK(sl.count(t9) == 729);  // 9^3
    }
}

TEST_CASE("stabilization degree of slice multiplication") {
    FieldTower tw(2, 1);

    SECTION("no generators stabilize immediately") {
        auto st = stabilization_c(tw, {}, 2, 4);
        CHECK(st.c == 0);
        for (int d = 0; d <= 4; ++d) {
            MonomialBasis mb(3, d);
            CHECK(st.dims[d] == (int)mb.size());
        }
        for (bool m : st.matches) CHECK(m);
    }
    SECTION("principal ideal stabilizes right after its generator degree") {
        // at d = 0 the slice is zero while the degree-1 slice is not, so the
        // multiplication condition fails exactly once, at d = 0
        std::vector<HomPoly> gens{parse_form(tw, "x0", 2)};
        auto st = stabilization_c(tw, gens, 1, 4);
        CHECK(st.c == 1);
        CHECK(st.dims == std::vector<int>{0, 1, 2, 3, 4});
        CHECK(!st.matches[0]);
        CHECK(st.matches[1]);
        CHECK(st.matches[2]);
    }
    SECTION("a reduced point needs one degree") {
        std::vector<HomPoly> gens{parse_form(tw, "x0", 3), parse_form(tw, "x1", 3)};
        auto st = stabilization_c(tw, gens, 2, 4);
        CHECK(st.c == 1);
        CHECK(st.dims == std::vector<int>{0, 2, 5, 9, 14});  // C(d+2,2) - 1 for d >= 1
        CHECK(!st.matches[0]);
        CHECK(st.matches[1]);
    }
    SECTION("the fat point needs two degrees") {
        auto st = stabilization_c(tw, fat_point_gens(tw), 2, 6);
        CHECK(st.c == 2);
        CHECK(st.dims == std::vector<int>{0, 0, 3, 7, 12, 18, 25});  // C(d+2,2) - 3 for d >= 2
        CHECK(st.matches[0]);   // 0 -> 0
        CHECK(!st.matches[1]);  // 0 vs 3
        CHECK(st.matches[2]);
    }
    SECTION("window shorter than the generators is rejected") {
        try {
            stabilization_c(tw, fat_point_gens(tw), 2, 2);
            FAIL("expected a config error");
        } catch (const SieveError& e) {
            CHECK(e.kind == ErrKind::config);
        }
    }
    SECTION("mixed generator degrees stabilize at the largest one") {
        // an ideal generated in degrees <= g always satisfies the condition
        // from g onward, so c never exceeds the largest generator degree
        std::vector<HomPoly> gens{parse_form(tw, "x0", 3), parse_form(tw, "x1^2", 3)};
        auto st = stabilization_c(tw, gens, 2, 4);
        CHECK(st.c == 2);
        CHECK(st.dims == std::vector<int>{0, 1, 4, 8, 13});
        CHECK(!st.matches[0]);
        CHECK(!st.matches[1]);
        CHECK(st.matches[2]);
        CHECK(st.matches[3]);
    }
}

TEST_CASE("local target sizes follow the jet-cardinality law") {
    FieldTower tw(2, 1);

    SECTION("point off the vanishing locus: full jet space") {
        SchemeDesc U = proj_space(1);
        std::vector<HomPoly> z{parse_form(tw, "x0", 2)};
        auto P = make_closed_point(tw, {tw.one(1), tw.one(1)}, 1);
        auto js = jet_space(tw, P, U, z);
        CHECK(!js.on_v);
        CHECK(js.dim_kappa == 2);       // 1 + m with m = 1
        CHECK(js.cardinality == 4);     // q^{(m+1) deg} = 2^2
    }
    SECTION("no subscheme at all: full jet space everywhere") {
        SchemeDesc U = proj_space(2);
        for (const auto& P : closed_points(tw, U, 2)) {
            auto js = jet_space(tw, P, U, {});
            CHECK(js.dim_kappa == 3);
            CHECK(js.cardinality == int_pow(Int(2), 3 * (std::uint64_t)P.degree));
        }
    }
    SECTION("transverse line: one constrained direction") {
        SchemeDesc U = proj_space(2);
        std::vector<HomPoly> z{parse_form(tw, "x1", 3)};
        auto P = make_closed_point(tw, {tw.one(1), tw.zero(1), tw.zero(1)}, 1);
        auto js = jet_space(tw, P, U, z);
        CHECK(js.on_v);
        CHECK(js.e == 1);
        CHECK(js.dim_kappa == 1);    // m - e = 2 - 1
        CHECK(js.cardinality == 2);  // q^{(m-e) deg} = 2^1
        // the constrained direction has zero value coordinate
        for (const auto& row : js.module_basis) CHECK(row[0].is_zero());
    }
    SECTION("fat point: only the zero germ survives") {
        SchemeDesc U = proj_space(2);
        auto P = make_closed_point(tw, {tw.one(1), tw.zero(1), tw.zero(1)}, 1);
        auto js = jet_space(tw, P, U, fat_point_gens(tw));
        CHECK(js.on_v);
        CHECK(js.e == 2);
        CHECK(js.dim_kappa == 0);
        CHECK(js.cardinality == 1);
        CHECK(js.module_basis.empty());
    }
    SECTION("crossing lines: node vs smooth point") {
        SchemeDesc U = proj_space(2);
        std::vector<HomPoly> z{parse_form(tw, "x1*x2", 3)};
        auto node = make_closed_point(tw, {tw.one(1), tw.zero(1), tw.zero(1)}, 1);
        auto jn = jet_space(tw, node, U, z);
        CHECK(jn.cardinality == 1);  // e = m = 2
        auto off = make_closed_point(tw, {tw.one(1), tw.one(1), tw.zero(1)}, 1);
        auto jo = jet_space(tw, off, U, z);
        CHECK(jo.e == 1);
        CHECK(jo.cardinality == 2);
    }
    SECTION("degree-2 point on a smooth conic") {
        SchemeDesc U = proj_space(2);
        std::vector<HomPoly> z{parse_form(tw, "x0*x2 + x1^2", 3)};
        SchemeDesc V = U;
        V.closed_eqs = z;
        bool found = false;
        for (const auto& P : closed_points(tw, V, 2)) {
            if (P.degree != 2) continue;
            found = true;
            auto js = jet_space(tw, P, U, z);
            CHECK(js.e == 1);
            CHECK(js.dim_kappa == 1);
            CHECK(js.cardinality == 4);  // q^{(m-e) deg} = 2^{1*2}
        }
        CHECK(found);
    }
}

TEST_CASE("evaluation map: rank, surjectivity, kernel/image counting") {
    FieldTower tw(2, 1);

    SECTION("forms of degree 6 surject onto jets at the three rational points") {
        SchemeDesc U = proj_space(1);
        auto pts = closed_points(tw, U, 1);
        REQUIRE(pts.size() == 3);
        auto sl = ideal_slice(tw, {}, 1, 6);
        auto em = eval_map(tw, sl, {}, pts, U, {});
        CHECK(em.domain_dim_q == 7);
        CHECK(em.target_dim_q == 6);  // three blocks of (1+m) = 2 each
        CHECK(em.rank == 6);
        CHECK(em.surjective);
        CHECK(em.kernel_size() == 2);
        CHECK(em.domain_size() == em.kernel_size() * em.image_size());
    }
    SECTION("surjectivity threshold for the same targets") {
        SchemeDesc U = proj_space(1);
        auto pts = closed_points(tw, U, 1);
        auto stab = stabilization_c(tw, {}, 1, 4);
        int least = -1;
        for (int d = 1; d <= 8; ++d) {
            auto sl = ideal_slice(tw, {}, 1, d);
            auto em = eval_map(tw, sl, {}, pts, U, {});
            if (em.surjective && least < 0) least = d;
            if (d >= stab.c + em.target_dim_q) CHECK(em.surjective);
        }
        CHECK(least > 0);
        CHECK(least <= stab.c + 6);
    }
    SECTION("value prescriptions at marked points with a disjoint subscheme") {
        SchemeDesc U = proj_space(2);
        std::vector<HomPoly> z{parse_form(tw, "x0", 3), parse_form(tw, "x1", 3)};
        auto stab = stabilization_c(tw, z, 2, 5);
        CHECK(stab.c == 1);
        std::vector<ClosedPoint> ys{
            make_closed_point(tw, {tw.one(1), tw.zero(1), tw.zero(1)}, 1),
            make_closed_point(tw, {tw.one(1), tw.one(1), tw.zero(1)}, 1)};
        for (int d = 1; d <= 5; ++d) {
            auto sl = ideal_slice(tw, z, 2, d);
            auto em = eval_map(tw, sl, ys, {}, U, z);
            CHECK(em.target_dim_q == 2);
            if (d >= stab.c + em.target_dim_q) CHECK(em.surjective);
            CHECK(em.domain_size() == em.kernel_size() * em.image_size());
        }
    }
    SECTION("a marked point on the subscheme is a hypothesis violation") {
        SchemeDesc U = proj_space(2);
        std::vector<HomPoly> z{parse_form(tw, "x0", 3), parse_form(tw, "x1", 3)};
        auto sl = ideal_slice(tw, z, 2, 2);
        auto on_z = make_closed_point(tw, {tw.zero(1), tw.zero(1), tw.one(1)}, 1);
        try {
            eval_map(tw, sl, {on_z}, {}, U, z);
            FAIL("expected a hypothesis error");
        } catch (const SieveError& e) {
            CHECK(e.kind == ErrKind::hypothesis);
        }
    }
    SECTION("no targets at all: trivially surjective, kernel is everything") {
        auto sl = ideal_slice(tw, {}, 1, 3);
        auto em = eval_map(tw, sl, {}, {}, proj_space(1), {});
        CHECK(em.surjective);
        CHECK(em.rank == 0);
        CHECK(em.kernel_size() == 16);  // 2^4
    }
    SECTION("jets at points on the subscheme target the constrained module") {
        SchemeDesc U = proj_space(2);
        std::vector<HomPoly> z{parse_form(tw, "x1", 3)};
        SchemeDesc V = U;
        V.closed_eqs = z;
        auto vpts = closed_points(tw, V, 1);
        REQUIRE(vpts.size() == 3);
        auto stab = stabilization_c(tw, z, 2, 4);
        for (int d = 3; d <= 5; ++d) {
            auto sl = ideal_slice(tw, z, 2, d);
            auto em = eval_map(tw, sl, {}, vpts, U, z);
            CHECK(em.target_dim_q == 3);  // (m - e) = 1 per point
            if (d >= stab.c + em.target_dim_q) CHECK(em.surjective);
        }
    }
}

TEST_CASE("image enumeration and the two evaluation paths agree") {
    FieldTower tw(2, 1);
    SchemeDesc U = proj_space(1);
    auto pts = closed_points(tw, U, 1);
    auto sl = ideal_slice(tw, {}, 1, 4);
    auto em = eval_map(tw, sl, {}, pts, U, {});

    SECTION("image walk visits exactly the image, once each") {
        std::set<std::vector<std::uint32_t>> seen;
        for_each_image_vector(em, 1u << 20, [&](const std::vector<std::uint32_t>& v) {
            CHECK(seen.insert(v).second);
        });
        CHECK(Int((std::uint64_t)seen.size()) == em.image_size());
        CHECK(seen.count(std::vector<std::uint32_t>(em.total_width_p, 0)) == 1);
        for (const auto& r : em.rows) CHECK(seen.count(r) == 1);
    }
    SECTION("cap guard") {
        try {
            for_each_image_vector(em, 3, [](const std::vector<std::uint32_t>&) {});
            FAIL("expected a budget error");
        } catch (const SieveError& e) {
            CHECK(e.kind == ErrKind::budget);
        }
    }
    SECTION("matrix application equals direct evaluation of the assembled form") {
        RngStream rng(17, 0, 0);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<std::uint32_t> digits(em.domain_dim_p);
            for (auto& x : digits) x = (std::uint32_t)rng.below(2);
            auto via_matrix = apply_eval_map(em, digits);
            HomPoly f = slice_element(tw, sl, digits);
            std::vector<std::uint32_t> direct(em.total_width_p, 0);
            for (const auto& blk : em.blocks) {
                auto jet = jet_at(tw, f, blk.P, blk.jet.T);
                int coord_len = blk.P.degree;  // a = 1
                for (int cc = 0; cc < blk.kappa_coords; ++cc)
                    for (int i = 0; i < coord_len; ++i)
                        direct[blk.offset_p + cc * coord_len + i] = jet[cc].c[i];
            }
            CHECK(via_matrix == direct);
        }
    }
}

TEST_CASE("assembling slice elements from digit vectors") {
    FieldTower tw(2, 1);
    auto sl = ideal_slice(tw, {parse_form(tw, "x0", 2)}, 1, 2);
    REQUIRE(sl.dim == 2);

    std::vector<std::uint32_t> zero(2, 0);
    CHECK(slice_element(tw, sl, zero).is_zero());

    std::vector<std::uint32_t> e0{1, 0};
    HomPoly f = slice_element(tw, sl, e0);
    CHECK(f.coeffs == sl.basis[0].coeffs);

    std::vector<std::uint32_t> both{1, 1};
    HomPoly g = slice_element(tw, sl, both);
    CHECK(g.coeffs == hom_add(tw, sl.basis[0], sl.basis[1]).coeffs);

    SECTION("over a degree-2 base field the generator scales basis elements") {
        FieldTower t4(2, 2);
        auto s4 = ideal_slice(t4, {parse_form(t4, "x0", 2)}, 1, 1);
        REQUIRE(s4.dim == 1);
        std::vector<std::uint32_t> gen_digit{0, 1};  // gamma^1 * basis[0]
        HomPoly h = slice_element(t4, s4, gen_digit);
        CHECK(h.coeffs == hom_scale(t4, s4.basis[0], t4.generator(1)).coeffs);
    }
}
