#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <set>

#include "bandcoh/catalog.hpp"
#include "bandcoh/group.hpp"

using namespace bandcoh;

namespace {
std::vector<FiniteGroup> sweep_groups() {
    std::vector<FiniteGroup> out;
    for (auto& ng : catalog_upto(8)) out.push_back(ng.group);
    return out;
}
}  // namespace

TEST_CASE("make_group validates and caches inverses") {
    SECTION("trivial group") {
        FiniteGroup G = make_group({{0}});
        REQUIRE(G.order() == 1);
        REQUIRE(G.mul(0, 0) == 0);
    }
    SECTION("C2") {
        FiniteGroup G = make_group({{0, 1}, {1, 0}});
        REQUIRE(G.order() == 2);
        REQUIRE(G.inv(1) == 1);
    }
    SECTION("non-associative 3x3 table is rejected") {
        // (1*1)*2 = 2*2 = 0 but 1*(1*2) = 1*0 = 1
        REQUIRE_THROWS_AS(make_group({{0, 1, 2}, {1, 2, 0}, {2, 1, 0}}), not_associative);
    }
    SECTION("latin square without identity is rejected") {
        REQUIRE_THROWS_AS(make_group({{0, 2, 1}, {2, 1, 0}, {1, 0, 2}}), no_identity);
    }
}

TEST_CASE("identity relabeling") {
    // Z/3 written with the neutral element at index 2
    FiniteGroup G = make_group({{1, 2, 0}, {2, 0, 1}, {0, 1, 2}});
    REQUIRE(G.order() == 3);
    REQUIRE(G.mul(0, 0) == 0);
    REQUIRE(G.element_order(1) == 3);
}

TEST_CASE("center") {
    REQUIRE(center(s3()).order() == 1);
    REQUIRE(center(cyclic(4)).order() == 4);
    REQUIRE(center(d4()).order() == 2);
    REQUIRE(center(q8()).order() == 2);
}

TEST_CASE("derived subgroup") {
    REQUIRE(derived_subgroup(cyclic(6)).order() == 1);
    auto dS3 = derived_subgroup(s3());
    REQUIRE(dS3.order() == 3);
    auto dQ8 = derived_subgroup(q8());
    REQUIRE(dQ8.order() == 2);
    REQUIRE(dQ8.members == center(q8()).members);
}

namespace {
// independent oracle: all identity-fixing permutations that are homomorphisms
int brute_force_aut_count(const FiniteGroup& G) {
    int n = G.order();
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    int count = 0;
    do {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a)
            for (int b = 0; b < n && ok; ++b) ok = p[G.mul(a, b)] == G.mul(p[a], p[b]);
        if (ok) ++count;
    } while (std::next_permutation(p.begin() + 1, p.end()));
    return count;
}
}  // namespace

TEST_CASE("automorphism enumeration") {
    REQUIRE(automorphisms(make_group({{0}})).size() == 1);
    REQUIRE(automorphisms(cyclic(4)).size() == 2);
    REQUIRE(automorphisms(q8()).size() == 24);

    SECTION("agrees with brute force on every group of order <= 8") {
        for (const auto& G : sweep_groups()) {
            auto auts = automorphisms(G);
            REQUIRE(static_cast<int>(auts.size()) == brute_force_aut_count(G));
            REQUIRE(auts[0] == identity_perm(G.order()));
            std::set<Perm> set(auts.begin(), auts.end());
            for (const auto& f : auts) {
                REQUIRE(set.count(inverse_perm(f)) == 1);
                for (const auto& g : auts) REQUIRE(set.count(compose(f, g)) == 1);
            }
        }
    }
    SECTION("tiny budget is an explicit error") {
        Budget tight;
        tight.max_aut_candidates = 1;
        REQUIRE_THROWS_AS(automorphisms(q8(), tight), budget_exceeded);
    }
}

TEST_CASE("inner automorphisms and outer classes") {
    SECTION("central element gives the identity automorphism") {
        auto G = cyclic(6);
        REQUIRE(inner_automorphism_table(G, 3) == identity_perm(6));
    }
    SECTION("S3 transposition gives an order-2 automorphism") {
        auto G = s3();
        int transposition = -1;
        for (int x = 1; x < 6; ++x)
            if (G.element_order(x) == 2) {
                transposition = x;
                break;
            }
        auto f = inner_automorphism_table(G, transposition);
        REQUIRE(f != identity_perm(6));
        REQUIRE(compose(f, f) == identity_perm(6));
    }
    SECTION("S3 has trivial Out, C4 has two classes") {
        REQUIRE(outer_classes(s3()).cosets.size() == 1);
        REQUIRE(outer_classes(cyclic(4)).cosets.size() == 2);
        auto oc = outer_classes(cyclic(6));
        REQUIRE(oc.cosets.size() == oc.auts.size());  // Inn trivial
    }
}

TEST_CASE("quotients") {
    auto G = d4();
    SECTION("by the whole group and by the trivial subgroup") {
        std::vector<int> all(G.order());
        std::iota(all.begin(), all.end(), 0);
        auto [Q1, p1] = quotient(G, Subgroup{G, all});
        REQUIRE(Q1.order() == 1);
        auto [Q2, p2] = quotient(G, Subgroup{G, {0}});
        REQUIRE(Q2.order() == G.order());
        REQUIRE(isomorphic(Q2, G));
    }
    SECTION("D4 mod center is abelian of order 4") {
        auto [Q, p] = quotient(G, center(G));
        REQUIRE(Q.order() == 4);
        REQUIRE(Q.abelian());
        REQUIRE(isomorphic(Q, klein4()));
    }
    SECTION("non-normal subgroup is rejected") {
        auto S3 = s3();
        int t = -1;
        for (int x = 1; x < 6; ++x)
            if (S3.element_order(x) == 2) t = x;
        REQUIRE_THROWS_AS(quotient(S3, subgroup_generated(S3, {t})), not_normal);
    }
}

TEST_CASE("Inn(G) matches G mod center across the sweep") {
    for (const auto& G : sweep_groups()) {
        auto oc = outer_classes(G);
        auto [Q, p] = quotient(G, center(G));
        REQUIRE(static_cast<int>(oc.cosets[0].size()) == Q.order());
    }
}

TEST_CASE("nilpotency data") {
    SECTION("trivial group") {
        auto nd = nilpotency_data(make_group({{0}}), 2);
        REQUIRE(nd.is_p_group);
        REQUIRE(nd.is_nilpotent);
        REQUIRE(nd.series.size() == 1);
    }
    SECTION("Q8 at p=2") {
        auto nd = nilpotency_data(q8(), 2);
        REQUIRE(nd.is_p_group);
        REQUIRE(nd.is_nilpotent);
        REQUIRE(nd.series.size() == 3);
        for (size_t i = 0; i + 1 < nd.series.size(); ++i)
            REQUIRE(nd.series[i].order() > nd.series[i + 1].order());
        for (const auto& S : nd.series) REQUIRE(is_normal(S));
        REQUIRE(nd.series.back().order() == 1);
    }
    SECTION("S3 at p=2") {
        auto nd = nilpotency_data(s3(), 2);
        REQUIRE_FALSE(nd.is_p_group);
        REQUIRE_FALSE(nd.is_nilpotent);
        REQUIRE(nd.series.back().order() > 1);
    }
}

TEST_CASE("semidirect products") {
    SECTION("trivial twist is the direct product") {
        auto G = semidirect_product(cyclic(3), cyclic(2), {identity_perm(3), identity_perm(3)});
        REQUIRE(G.order() == 6);
        REQUIRE(G.abelian());
    }
    SECTION("C3 by C2 inversion is S3") {
        Perm inv = {0, 2, 1};
        auto G = semidirect_product(cyclic(3), cyclic(2), {identity_perm(3), inv});
        REQUIRE(isomorphic(G, s3()));
    }
    SECTION("C4 by C2 inversion is D4") {
        Perm inv = {0, 3, 2, 1};
        auto G = semidirect_product(cyclic(4), cyclic(2), {identity_perm(4), inv});
        REQUIRE(isomorphic(G, d4()));
    }
    SECTION("non-homomorphic phi is rejected") {
        Perm inv = {0, 3, 2, 1};
        REQUIRE_THROWS_AS(semidirect_product(cyclic(4), cyclic(3), {identity_perm(4), inv, inv}),
                          not_homomorphism);
    }
}

TEST_CASE("center and derived subgroup are normal across the sweep") {
    for (const auto& G : sweep_groups()) {
        REQUIRE(is_normal(center(G)));
        REQUIRE(is_normal(derived_subgroup(G)));
        auto [Qc, pc] = quotient(G, center(G));
        auto [Qd, pd] = quotient(G, derived_subgroup(G));
        REQUIRE(Qd.abelian());
    }
}

TEST_CASE("catalog constructions have the expected shapes") {
    REQUIRE(dihedral(4).order() == 8);
    REQUIRE(dicyclic(2).order() == 8);
    REQUIRE(alternating4().order() == 12);
    REQUIRE_FALSE(isomorphic(d4(), q8()));
    // Q8 has a unique involution, D4 has five
    int inv_d4 = 0, inv_q8 = 0;
    for (int x = 1; x < 8; ++x) {
        inv_d4 += d4().element_order(x) == 2;
        inv_q8 += q8().element_order(x) == 2;
    }
    REQUIRE(inv_d4 == 5);
    REQUIRE(inv_q8 == 1);
    // all catalog entries of equal order are pairwise non-isomorphic
    for (int n : {4, 6, 8, 12}) {
        auto gs = groups_of_order(n);
        for (size_t i = 0; i < gs.size(); ++i)
            for (size_t j = i + 1; j < gs.size(); ++j)
                REQUIRE_FALSE(isomorphic(gs[i].group, gs[j].group));
    }
}
