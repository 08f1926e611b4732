#include <catch2/catch_amalgamated.hpp>

#include "bandcoh/catalog.hpp"
#include "bandcoh/springer.hpp"

using namespace bandcoh;

namespace {

Perm inversion(const FiniteGroup& A) {
    Perm p(A.order());
    for (int x = 0; x < A.order(); ++x) p[x] = A.inv(x);
    return p;
}

GammaGroup c4_with_inversion() {
    return make_gamma_group(cyclic(2), cyclic(4), {identity_perm(4), inversion(cyclic(4))});
}

GammaGroup c4_trivial_gamma2() { return trivial_action_group(cyclic(2), cyclic(4)); }

EquivariantSpace regular_space(const GammaGroup& G) {
    // X = G with right translation; s(x) = sigma_s(x)
    const FiniteGroup& C = G.carrier;
    const int n = C.order(), ns = G.gamma.order();
    std::vector<int> ra(n * n), ga(n * ns);
    for (int x = 0; x < n; ++x) {
        for (int g = 0; g < n; ++g) ra[x * n + g] = C.mul(x, g);
        for (int s = 0; s < ns; ++s) ga[x * ns + s] = G.act(s, x);
    }
    return make_equivariant_space(G, n, std::move(ra), std::move(ga));
}

EquivariantSpace point_space(const GammaGroup& G) {
    std::vector<int> ra(G.carrier.order(), 0), ga(G.gamma.order(), 0);
    return make_equivariant_space(G, 1, std::move(ra), std::move(ga));
}

}  // namespace

TEST_CASE("space validation") {
    SECTION("regular and point spaces validate") {
        REQUIRE_NOTHROW(regular_space(c4_with_inversion()));
        REQUIRE_NOTHROW(point_space(c4_with_inversion()));
    }
    SECTION("incompatible actions are rejected") {
        auto G = c4_with_inversion();
        std::vector<int> ra(4 * 4), ga(4 * 2);
        for (int x = 0; x < 4; ++x) {
            for (int g = 0; g < 4; ++g) ra[x * 4 + g] = G.carrier.mul(x, g);
            ga[x * 2 + 0] = x;
            ga[x * 2 + 1] = x;  // trivial gamma action breaks compatibility
        }
        REQUIRE_THROWS_AS(make_equivariant_space(G, 4, ra, ga), not_homomorphism);
    }
    SECTION("non-transitive actions are rejected") {
        auto G = trivial_action_group(cyclic(1), cyclic(2));
        // two points with trivial G-action on both
        std::vector<int> ra = {0, 0, 1, 1}, ga = {0, 1};
        REQUIRE_THROWS_AS(make_equivariant_space(G, 2, ra, ga), not_homomorphism);
    }
}

TEST_CASE("stabilizers") {
    SECTION("right translation has trivial stabilizers") {
        auto sp = regular_space(c4_with_inversion());
        REQUIRE(stabilizer(sp, 0).order() == 1);
    }
    SECTION("a single point is stabilized by everything") {
        auto sp = point_space(c4_with_inversion());
        REQUIRE(stabilizer(sp, 0).order() == 4);
    }
    SECTION("S3 on three points has order-2 stabilizers") {
        auto G = trivial_action_group(cyclic(1), s3());
        int refl = -1;
        for (int x = 1; x < 6; ++x)
            if (s3().element_order(x) == 2) {
                refl = x;
                break;
            }
        auto sp = coset_space(G, subgroup_generated(s3(), {refl}).members, {0});
        REQUIRE(sp.points == 3);
        REQUIRE(stabilizer(sp, 0).order() == 2);
    }
}

TEST_CASE("springer cocycle") {
    SECTION("gamma-fixed point gives the trivial pair") {
        auto sp = point_space(c4_with_inversion());
        auto sc = springer_cocycle(sp, 0);
        REQUIRE(sc.data.transporter == std::vector<int>{0, 0});
        REQUIRE(sc.cocycle.g == trivial_grid(2));
    }
    SECTION("torsor case: trivial stabilizer, unique cocycle") {
        auto sp = regular_space(c4_with_inversion());
        auto sc = springer_cocycle(sp, 0);
        REQUIRE(sc.band.kernel.order() == 1);
        REQUIRE(is_cocycle(sc.band, sc.cocycle).ok);
    }
    SECTION("C4 mod center under inversion: h lands in the order-2 stabilizer") {
        auto G = c4_with_inversion();
        auto sp = coset_space(G, {0, 2}, {0, 0});
        REQUIRE(sp.points == 2);
        auto sc = springer_cocycle(sp, 0);
        REQUIRE(sc.data.stab.order() == 2);
        REQUIRE(is_cocycle(sc.band, sc.cocycle).ok);
    }
}

TEST_CASE("springer class") {
    SECTION("fixed point implies neutral") {
        auto cls = springer_class(point_space(c4_with_inversion()));
        REQUIRE(cls.neutral);
    }
    SECTION("torsor case: unique neutral class of the trivial band") {
        auto cls = springer_class(regular_space(c4_with_inversion()));
        REQUIRE(cls.h2.count() == 1);
        REQUIRE(cls.neutral);
    }
    SECTION("a genuinely non-neutral space") {
        // trivial gamma action on C4, X = {0,2}\\C4 twisted by the generator:
        // the transporter defect generates H^2(C2, C2)
        auto sp = coset_space(c4_trivial_gamma2(), {0, 2}, {0, 1});
        REQUIRE_FALSE(has_gamma_fixed_point(sp));
        auto cls = springer_class(sp);
        REQUIRE_FALSE(cls.neutral);
        REQUIRE(cls.h2.count() == 2);
    }
    SECTION("fixed-point-free but neutral") {
        // inversion action on C4, same cosets, twist by the generator
        auto sp = coset_space(c4_with_inversion(), {0, 2}, {0, 1});
        REQUIRE_FALSE(has_gamma_fixed_point(sp));
        auto cls = springer_class(sp);
        REQUIRE(cls.neutral);
    }
}

TEST_CASE("equivariant lifts match neutrality") {
    SECTION("fixed point: the trivial witness works") {
        auto lift = has_equivariant_lift(point_space(c4_with_inversion()));
        REQUIRE(lift.has_value());
        REQUIRE(lift->transporter == std::vector<int>{0, 0});
    }
    SECTION("non-neutral class has no witness") {
        auto sp = coset_space(c4_trivial_gamma2(), {0, 2}, {0, 1});
        REQUIRE_FALSE(has_equivariant_lift(sp).has_value());
    }
    SECTION("neutral twisted space has a witness refining the transporter") {
        auto sp = coset_space(c4_with_inversion(), {0, 2}, {0, 1});
        auto lift = has_equivariant_lift(sp);
        REQUIRE(lift.has_value());
        // witness transporters still transport
        for (int s = 0; s < 2; ++s)
            REQUIRE(sp.act_g(sp.act_s(s, 0), lift->transporter[s]) == 0);
    }
}
