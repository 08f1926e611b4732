#pragma once

// Finite model of the band of stabilizers: a Gamma-group G acting transitively
// on the right of a finite Gamma-set X, compatibly. A base point x gives the
// stabilizer band with the cocycle (f, h) built from a transporter, the class
// of which is independent of every choice; neutrality is equivalent to the
// existence of a cocycle refinement of the transporter.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "band.hpp"
#include "errors.hpp"
#include "gamma.hpp"
#include "group.hpp"
#include "h2.hpp"

namespace bandcoh {

/// A transitive right G-set with a compatible Gamma-action.
struct EquivariantSpace {
    GammaGroup G;
    int points = 0;
    std::vector<int> right_action;  // [x * |G| + g] = x.g
    std::vector<int> gamma_action;  // [x * |Gamma| + s] = s(x)

    int act_g(int x, int g) const { return right_action[x * G.carrier.order() + g]; }
    int act_s(int s, int x) const { return gamma_action[x * G.gamma.order() + s]; }
};

/// Validates all space axioms eagerly: group action, transitivity, Gamma
/// action, and the compatibility s(x.g) = s(x).sigma_s(g).
inline EquivariantSpace make_equivariant_space(GammaGroup G, int points,
                                               std::vector<int> right_action,
                                               std::vector<int> gamma_action) {
    EquivariantSpace sp{std::move(G), points, std::move(right_action), std::move(gamma_action)};
    const int nG = sp.G.carrier.order(), ns = sp.G.gamma.order();
    if (points < 1) throw parse_error("space needs at least one point");
    if (static_cast<int>(sp.right_action.size()) != points * nG ||
        static_cast<int>(sp.gamma_action.size()) != points * ns)
        throw parse_error("action tables have wrong shapes");
    for (int v : sp.right_action)
        if (v < 0 || v >= points) throw parse_error("right action value out of range");
    for (int v : sp.gamma_action)
        if (v < 0 || v >= points) throw parse_error("gamma action value out of range");

    for (int x = 0; x < points; ++x) {
        if (sp.act_g(x, 0) != x) throw not_homomorphism("x.1 != x");
        for (int g = 0; g < nG; ++g)
            for (int h = 0; h < nG; ++h)
                if (sp.act_g(sp.act_g(x, g), h) != sp.act_g(x, sp.G.carrier.mul(g, h)))
                    throw not_homomorphism("(x.g).h != x.(gh)");
    }
    {
        std::set<int> orbit = {0};
        std::vector<int> todo = {0};
        while (!todo.empty()) {
            int x = todo.back();
            todo.pop_back();
            for (int g = 0; g < nG; ++g)
                if (orbit.insert(sp.act_g(x, g)).second) todo.push_back(sp.act_g(x, g));
        }
        if (static_cast<int>(orbit.size()) != points)
            throw not_homomorphism("the G-action is not transitive");
    }
    for (int x = 0; x < points; ++x) {
        if (sp.act_s(0, x) != x) throw not_homomorphism("identity does not fix X");
        for (int s = 0; s < ns; ++s)
            for (int t = 0; t < ns; ++t)
                if (sp.act_s(sp.G.gamma.mul(s, t), x) != sp.act_s(s, sp.act_s(t, x)))
                    throw not_homomorphism("gamma action is not an action");
    }
    for (int s = 0; s < ns; ++s)
        for (int x = 0; x < points; ++x)
            for (int g = 0; g < nG; ++g)
                if (sp.act_s(s, sp.act_g(x, g)) != sp.act_g(sp.act_s(s, x), sp.G.act(s, g)))
                    throw not_homomorphism("s(x.g) != s(x).sigma_s(g) at s=" + std::to_string(s));
    return sp;
}

inline Subgroup stabilizer(const EquivariantSpace& sp, int x) {
    std::vector<int> members;
    for (int g = 0; g < sp.G.carrier.order(); ++g)
        if (sp.act_g(x, g) == x) members.push_back(g);
    return Subgroup{sp.G.carrier, members};
}

inline bool has_gamma_fixed_point(const EquivariantSpace& sp) {
    for (int x = 0; x < sp.points; ++x) {
        bool fixed = true;
        for (int s = 1; s < sp.G.gamma.order() && fixed; ++s) fixed = sp.act_s(s, x) == x;
        if (fixed) return true;
    }
    return false;
}

/// Base point, stabilizer and the deterministic transporter g_s (the least
/// group element with s(x).g_s = x).
struct SpringerData {
    int base = 0;
    Subgroup stab;
    std::vector<int> transporter;
    std::vector<int> h_labels;  // stabilizer members, for label translation
};

/// The stabilizer band at x with its cocycle (f, h):
///   f_s = int(g_s)^-1 o sigma_s restricted to H,
///   h_{s,t} = g_s^-1 sigma_s(g_t)^-1 g_{st}.
struct SpringerCocycle {
    Band band;  // on the stabilizer, in its own labels
    Cocycle cocycle;
    SpringerData data;
};

inline SpringerCocycle springer_cocycle(const EquivariantSpace& sp, int x) {
    const FiniteGroup& G = sp.G.carrier;
    const int ns = sp.G.gamma.order();
    SpringerData d;
    d.base = x;
    d.stab = stabilizer(sp, x);
    d.transporter.assign(ns, -1);
    for (int s = 0; s < ns; ++s) {
        int sx = sp.act_s(s, x);
        for (int g = 0; g < G.order(); ++g)
            if (sp.act_g(sx, g) == x) {
                d.transporter[s] = g;
                break;
            }
        if (d.transporter[s] < 0)
            throw error("Internal", "no transporter despite transitivity");
    }
    if (d.transporter[0] != 0) throw error("Internal", "transporter at 1 should be the identity");
    d.h_labels = d.stab.members;

    std::map<int, int> hidx;
    for (size_t i = 0; i < d.stab.members.size(); ++i)
        hidx[d.stab.members[i]] = static_cast<int>(i);
    const int nh = d.stab.order();

    Section f(ns, Perm(nh, -1));
    for (int s = 0; s < ns; ++s) {
        int gs = d.transporter[s];
        for (int i = 0; i < nh; ++i) {
            int img = G.mul(G.mul(G.inv(gs), sp.G.act(s, d.stab.members[i])), gs);
            auto it = hidx.find(img);
            if (it == hidx.end())
                throw error("Internal", "f_s does not preserve the stabilizer");
            f[s][i] = it->second;
        }
    }
    std::vector<int> h(ns * ns, 0);
    for (int s = 0; s < ns; ++s)
        for (int t = 0; t < ns; ++t) {
            int v = G.mul(G.mul(G.inv(d.transporter[s]), G.inv(sp.G.act(s, d.transporter[t]))),
                          d.transporter[sp.G.gamma.mul(s, t)]);
            auto it = hidx.find(v);
            if (it == hidx.end()) throw error("Internal", "h value is not in the stabilizer");
            h[s * ns + t] = it->second;
        }

    SpringerCocycle out;
    out.band = make_band(sp.G.gamma, subgroup_as_group(d.stab).first, f);
    out.cocycle = Cocycle{f, h};
    out.data = std::move(d);
    auto check = is_cocycle(out.band, out.cocycle);
    if (!check) throw error("Internal", "springer pair fails is_cocycle: " + check.violation);
    return out;
}

/// The class of the stabilizer cocycle at the least base point; every other
/// base point is checked to give the same class under the canonical
/// conjugation isomorphism of stabilizers.
struct SpringerClass {
    SpringerCocycle at_base;
    H2Classes h2;
    int class_index = 0;
    bool neutral = false;
};

inline SpringerClass springer_class(const EquivariantSpace& sp,
                                    const Budget& budget = default_budget()) {
    SpringerClass out;
    out.at_base = springer_cocycle(sp, 0);
    out.h2 = h2_classes(out.at_base.band, budget);
    out.class_index = out.h2.class_of(out.at_base.cocycle);
    out.neutral = out.h2.classes()[out.class_index].neutral;

    const FiniteGroup& G = sp.G.carrier;
    for (int x = 1; x < sp.points; ++x) {
        auto other = springer_cocycle(sp, x);
        // conjugation by a transporter t with x.t = base identifies Stab(x)
        // with Stab(base)
        int t = -1;
        for (int g = 0; g < G.order(); ++g)
            if (sp.act_g(x, g) == 0) {
                t = g;
                break;
            }
        std::map<int, int> base_idx;
        for (size_t i = 0; i < out.at_base.data.h_labels.size(); ++i)
            base_idx[out.at_base.data.h_labels[i]] = static_cast<int>(i);
        const int nh = static_cast<int>(other.data.h_labels.size());
        Perm psi(nh, -1);
        for (int i = 0; i < nh; ++i) {
            int img = G.mul(G.mul(G.inv(t), other.data.h_labels[i]), t);
            auto it = base_idx.find(img);
            if (it == base_idx.end())
                throw error("Internal", "stabilizers are not conjugate by the transporter");
            psi[i] = it->second;
        }
        Perm psi_inv = inverse_perm(psi);
        Cocycle moved;
        moved.f.resize(sp.G.gamma.order());
        for (int s = 0; s < sp.G.gamma.order(); ++s)
            moved.f[s] = compose(psi, compose(other.cocycle.f[s], psi_inv));
        moved.g.resize(other.cocycle.g.size());
        for (size_t i = 0; i < other.cocycle.g.size(); ++i) moved.g[i] = psi[other.cocycle.g[i]];
        auto check = is_cocycle(out.at_base.band, moved);
        if (!check)
            throw error("Internal", "transported cocycle invalid: " + check.violation);
        if (out.h2.class_of(moved) != out.class_index)
            throw error("Internal", "springer class depends on the base point");
    }
    return out;
}

/// A refinement of the transporter witnessing neutrality: g'_s = g_s u_s with
/// u valued in the stabilizer and trivial coboundary, so s -> g'_s^-1 is a
/// 1-cocycle of G.
struct EquivariantLift {
    std::vector<int> transporter;     // g'
    NonabelianOneCocycle one_cocycle;  // s -> g'_s^-1
};

inline std::optional<EquivariantLift> has_equivariant_lift(const EquivariantSpace& sp,
                                                           const Budget& budget =
                                                               default_budget()) {
    auto sc = springer_cocycle(sp, 0);
    const FiniteGroup& G = sp.G.carrier;
    const int ns = sp.G.gamma.order();
    const auto& H = sc.data.stab.members;
    long long space = 1;
    for (int s = 1; s < ns; ++s) {
        space *= static_cast<long long>(H.size());
        if (space > budget.max_enumeration)
            throw budget_exceeded("lift witness space exceeds budget");
    }
    std::optional<EquivariantLift> found;
    std::vector<size_t> pick(ns, 0);
    while (!found) {
        std::vector<int> gp(ns);
        for (int s = 0; s < ns; ++s) gp[s] = G.mul(sc.data.transporter[s], H[pick[s]]);
        bool ok = gp[0] == 0;
        for (int s = 0; s < ns && ok; ++s)
            for (int t = 0; t < ns && ok; ++t)
                ok = G.mul(G.mul(G.inv(gp[s]), G.inv(sp.G.act(s, gp[t]))),
                           gp[sp.G.gamma.mul(s, t)]) == 0;
        if (ok) {
            EquivariantLift lift;
            lift.transporter = gp;
            lift.one_cocycle.values.resize(ns);
            for (int s = 0; s < ns; ++s) lift.one_cocycle.values[s] = G.inv(gp[s]);
            if (!is_one_cocycle(sp.G, lift.one_cocycle.values))
                throw error("Internal", "trivialized transporter is not a 1-cocycle");
            found = lift;
            break;
        }
        int s = 1;
        for (; s < ns; ++s) {
            if (++pick[s] < H.size()) break;
            pick[s] = 0;
        }
        if (s >= ns) break;
    }
    // the witness exists exactly when the springer class is neutral
    auto cls = springer_class(sp, budget);
    if (cls.neutral != found.has_value())
        throw error("Internal", "lift verdict disagrees with class neutrality");
    return found;
}

/// Coset space H\G with the twisted action s(Hg) = H c_s sigma_s(g); the
/// constructor validates that (H, c) actually yields a space.
inline EquivariantSpace coset_space(const GammaGroup& G, const std::vector<int>& h_members,
                                    const std::vector<int>& twist) {
    const FiniteGroup& C = G.carrier;
    const int ns = G.gamma.order();
    Subgroup H{C, h_members};
    // cosets Hg labeled by least member
    std::vector<int> coset_of(C.order(), -1);
    std::vector<int> reps;
    for (int x = 0; x < C.order(); ++x) {
        if (coset_of[x] >= 0) continue;
        int c = static_cast<int>(reps.size());
        reps.push_back(x);
        for (int h : h_members) coset_of[C.mul(h, x)] = c;
    }
    const int pts = static_cast<int>(reps.size());
    std::vector<int> ra(pts * C.order());
    for (int p = 0; p < pts; ++p)
        for (int g = 0; g < C.order(); ++g) ra[p * C.order() + g] = coset_of[C.mul(reps[p], g)];
    std::vector<int> ga(pts * ns);
    for (int p = 0; p < pts; ++p)
        for (int s = 0; s < ns; ++s)
            ga[p * ns + s] = coset_of[C.mul(twist[s], G.act(s, reps[p]))];
    return make_equivariant_space(G, pts, std::move(ra), std::move(ga));
}

}  // namespace bandcoh
