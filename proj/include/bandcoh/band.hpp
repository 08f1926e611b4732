#pragma once

// Finite abstract kernels: a group A together with a homomorphism
// kappa: Gamma -> Out(A), stored concretely through a chosen set-section
// into Aut(A). Everything downstream (cocycles, H^2, obstruction) works with
// the section; Out-class identity is derived on demand, never stored.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "gamma.hpp"
#include "group.hpp"

namespace bandcoh {

/// Abstract kernel (Gamma, A, kappa) with kappa given by a section
/// f0: Gamma -> Aut(A), homomorphic modulo inner automorphisms, f0_1 = id.
struct Band {
    FiniteGroup gamma;
    FiniteGroup kernel;         // A
    std::vector<Perm> section;  // f0, one automorphism table per gamma element

    // caches built at validation time
    std::vector<Perm> auts;              // Aut(A), sorted, identity first
    std::vector<int> inner_aut_of;       // element a -> index of int(a) in auts
    std::vector<int> z_members;          // center of A
    std::vector<std::vector<int>> defect_witness;  // (s,t) -> least a with
                                                   // int(a) = f_s f_t f_st^-1

    int aut_index(const Perm& f) const {
        auto it = std::lower_bound(auts.begin(), auts.end(), f);
        if (it == auts.end() || *it != f) throw error("Internal", "automorphism not in Aut(A)");
        return static_cast<int>(it - auts.begin());
    }
    const Perm& f0(int s) const { return section[s]; }
};

/// Section of automorphisms, one per gamma element.
using Section = std::vector<Perm>;

/// least a with int(a) = f, if f is inner
inline std::optional<int> inner_witness(const FiniteGroup& A, const Perm& f) {
    for (int a = 0; a < A.order(); ++a)
        if (inner_automorphism_table(A, a) == f) return a;
    return std::nullopt;
}

inline Band make_band(const FiniteGroup& gamma, const FiniteGroup& A, const Section& section,
                      const Budget& budget = default_budget()) {
    Band B;
    B.gamma = gamma;
    B.kernel = A;
    B.section = section;
    if (static_cast<int>(section.size()) != gamma.order())
        throw not_outer_homomorphism("section has wrong length");
    for (int s = 0; s < gamma.order(); ++s)
        if (!is_bijection(section[s], A.order()) || !is_hom_table(A, A, section[s]))
            throw not_outer_homomorphism("section value at " + std::to_string(s) +
                                         " is not an automorphism");
    if (section[0] != identity_perm(A.order()))
        throw not_outer_homomorphism("section at the identity must be the identity");

    B.auts = automorphisms(A, budget);
    B.inner_aut_of.resize(A.order());
    for (int a = 0; a < A.order(); ++a)
        B.inner_aut_of[a] = B.aut_index(inner_automorphism_table(A, a));
    B.z_members = center(A).members;

    const int ng = gamma.order();
    B.defect_witness.assign(ng, std::vector<int>(ng, -1));
    for (int s = 0; s < ng; ++s)
        for (int t = 0; t < ng; ++t) {
            Perm defect = compose(compose(section[s], section[t]),
                                  inverse_perm(section[gamma.mul(s, t)]));
            auto w = inner_witness(A, defect);
            if (!w)
                throw not_outer_homomorphism("f(" + std::to_string(s) + ")f(" + std::to_string(t) +
                                             ")f(" + std::to_string(gamma.mul(s, t)) +
                                             ")^-1 is not inner");
            B.defect_witness[s][t] = *w;
        }
    return B;
}

/// All sections f with f_s in f0_s Inn(A) and f_1 = id, deduplicated (inner
/// twists by elements of the same Z(A)-coset agree). Twists are ordered by the
/// twisting element's index, which fixes the iteration order everywhere.
inline std::vector<Section> lifts_of_kappa(const Band& B,
                                           const Budget& budget = default_budget()) {
    const int ng = B.gamma.order();
    // per gamma element, the coset of automorphisms in twist-element order
    std::vector<std::vector<Perm>> coset(ng);
    coset[0] = {identity_perm(B.kernel.order())};
    for (int s = 1; s < ng; ++s) {
        std::set<Perm> seen;
        for (int a = 0; a < B.kernel.order(); ++a) {
            Perm f = compose(inner_automorphism_table(B.kernel, a), B.section[s]);
            if (seen.insert(f).second) coset[s].push_back(f);
        }
    }
    long long total = 1;
    for (int s = 1; s < ng; ++s) {
        total *= static_cast<long long>(coset[s].size());
        if (total > budget.max_enumeration)
            throw budget_exceeded("lift space exceeds enumeration budget");
    }
    std::vector<Section> out;
    out.reserve(total);
    std::vector<size_t> idx(ng, 0);
    while (true) {
        Section f(ng);
        for (int s = 0; s < ng; ++s) f[s] = coset[s][idx[s]];
        out.push_back(std::move(f));
        int s = 1;
        for (; s < ng; ++s) {
            if (++idx[s] < coset[s].size()) break;
            idx[s] = 0;
        }
        if (s >= ng) break;
    }
    return out;
}

inline bool is_homomorphic_section(const Band& B, const Section& f) {
    for (int s = 0; s < B.gamma.order(); ++s)
        for (int t = 0; t < B.gamma.order(); ++t)
            if (compose(f[s], f[t]) != f[B.gamma.mul(s, t)]) return false;
    return true;
}

/// Z(A) as a Gamma-module; the action is the same for every lift of kappa
/// since inner automorphisms fix the center pointwise (asserted).
inline GammaModule center_module(const Band& B) {
    for (int z : B.z_members)
        for (int a = 0; a < B.kernel.order(); ++a)
            if (B.kernel.conj(a, z) != z) throw error("Internal", "center not central");
    auto [zg, incl] = sub_gamma_group(
        GammaGroup{B.gamma, B.kernel, B.section}, B.z_members);
    GammaModule m;
    m.gamma = zg.gamma;
    m.carrier = zg.carrier;
    m.action = zg.action;
    return m;
}

/// First homomorphic lift of kappa in lift order, if one exists.
inline std::optional<Section> is_representable(const Band& B,
                                               const Budget& budget = default_budget()) {
    for (const auto& f : lifts_of_kappa(B, budget))
        if (is_homomorphic_section(B, f)) return f;
    return std::nullopt;
}

/// Isomorphism of bands: alpha: A1 -> A2 with alpha f1_s alpha^-1 in the
/// Inn-coset of f2_s for every s.
struct BandIso {
    Perm alpha;
};

inline std::optional<BandIso> band_isomorphic(const Band& B1, const Band& B2,
                                              const Budget& budget = default_budget()) {
    if (!(B1.gamma == B2.gamma)) return std::nullopt;
    if (B1.kernel.order() != B2.kernel.order()) return std::nullopt;
    std::optional<BandIso> found;
    try {
        detail::for_each_isomorphism(B1.kernel, B2.kernel, budget, [&](const Perm& alpha) {
            Perm ai = inverse_perm(alpha);
            for (int s = 0; s < B1.gamma.order(); ++s) {
                Perm conj = compose(alpha, compose(B1.section[s], ai));
                Perm diff = compose(conj, inverse_perm(B2.section[s]));
                if (!inner_witness(B2.kernel, diff)) return;
            }
            found = BandIso{alpha};
            throw detail_stop{};
        });
    } catch (const detail_stop&) {
    }
    return found;
}

/// A/[A,A] as a Gamma-module; all lifts act identically on the quotient since
/// inner automorphisms become trivial there (asserted).
inline GammaModule abelianization_module(const Band& B) {
    auto D = derived_subgroup(B.kernel);
    auto [Q, proj] = quotient(B.kernel, D);
    for (int a = 0; a < B.kernel.order(); ++a)  // int(a) must project to id
        for (int x = 0; x < B.kernel.order(); ++x)
            if (proj.map[B.kernel.conj(a, x)] != proj.map[x])
                throw error("Internal", "inner automorphism acts on the abelianization");
    std::vector<Perm> act(B.gamma.order(), Perm(Q.order(), -1));
    for (int s = 0; s < B.gamma.order(); ++s)
        for (int x = 0; x < B.kernel.order(); ++x)
            act[s][proj.map[x]] = proj.map[B.section[s][x]];
    return make_gamma_module(B.gamma, Q, act);
}

/// Order of the image of kappa inside Out(A).
inline int kappa_image_order(const Band& B) {
    // walk the subgroup of Out generated by the section's outer classes
    auto oc = outer_classes(B.kernel);
    std::set<int> image;  // coset ids
    std::vector<Perm> frontier = {identity_perm(B.kernel.order())};
    image.insert(oc.coset_of[B.aut_index(frontier[0])]);
    std::vector<Perm> reps = {frontier[0]};
    while (!frontier.empty()) {
        Perm f = frontier.back();
        frontier.pop_back();
        for (int s = 0; s < B.gamma.order(); ++s) {
            Perm g = compose(f, B.section[s]);
            int c = oc.coset_of[B.aut_index(g)];
            if (image.insert(c).second) {
                frontier.push_back(g);
            }
        }
    }
    return static_cast<int>(image.size());
}

}  // namespace bandcoh
