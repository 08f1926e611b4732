#pragma once

// The nonabelian 2-cocycle calculus for a finite band (Gamma, A, kappa):
// validation, equivalence, enumeration of H^2 classes, neutral classes, the
// obstruction class in H^3 of the center, the central H^2-action, the
// abelianization map, and the lifting machinery.
//
// Enumeration works in the normal form f = f0 (the band's stored section):
// every class has a representative with that exact section, its g is then
// determined up to Z(A) per pair, and two such cocycles are equivalent exactly
// when their central parts differ by a coboundary. The central action is
// therefore structural; the output classes are indexed by H^2(Gamma, Z_L).

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "band.hpp"
#include "errors.hpp"
#include "gamma.hpp"
#include "group.hpp"

namespace bandcoh {

/// Nonabelian 2-cocycle: a lift f of kappa and a 2-cochain g over A with
///   f_s o f_t = int(g_{s,t}) o f_{st}
///   f_s(g_{t,u}) g_{s,tu} = g_{s,t} g_{st,u}
/// normalized so f_1 = id and g vanishes when either argument is 1.
struct Cocycle {
    Section f;
    std::vector<int> g;  // row-major grid, g[s*ng + t]

    int gat(int ng, int s, int t) const { return g[s * ng + t]; }

    bool operator==(const Cocycle& o) const { return f == o.f && g == o.g; }
};

inline std::vector<int> trivial_grid(int ng) { return std::vector<int>(ng * ng, 0); }

struct CocycleCheck {
    bool ok = true;
    std::string violation;  // empty when ok

    explicit operator bool() const { return ok; }
};

/// Checks both cocycle identities on all tuples; reports the first violation.
inline CocycleCheck is_cocycle(const Band& B, const Cocycle& c) {
    const int ng = B.gamma.order();
    const FiniteGroup& A = B.kernel;
    auto fail = [](std::string msg) { return CocycleCheck{false, std::move(msg)}; };

    if (static_cast<int>(c.f.size()) != ng || static_cast<int>(c.g.size()) != ng * ng)
        return fail("wrong shapes");
    if (c.f[0] != identity_perm(A.order())) return fail("f_1 is not the identity");
    for (int s = 0; s < ng; ++s) {
        if (!is_bijection(c.f[s], A.order()) || !is_hom_table(A, A, c.f[s]))
            return fail("f_" + std::to_string(s) + " is not an automorphism");
        Perm diff = compose(c.f[s], inverse_perm(B.section[s]));
        if (!inner_witness(A, diff))
            return fail("f_" + std::to_string(s) + " does not lift kappa");
    }
    for (int s = 0; s < ng; ++s)
        for (int t = 0; t < ng; ++t)
            if ((s == 0 || t == 0) && c.gat(ng, s, t) != 0)
                return fail("g is not normalized at (" + std::to_string(s) + "," +
                            std::to_string(t) + ")");
    for (int s = 0; s < ng; ++s)
        for (int t = 0; t < ng; ++t) {
            Perm lhs = compose(c.f[s], c.f[t]);
            Perm rhs = compose(inner_automorphism_table(A, c.gat(ng, s, t)),
                               c.f[B.gamma.mul(s, t)]);
            if (lhs != rhs)
                return fail("f_s f_t != int(g_{s,t}) f_{st} at (" + std::to_string(s) + "," +
                            std::to_string(t) + ")");
        }
    for (int s = 0; s < ng; ++s)
        for (int t = 0; t < ng; ++t)
            for (int u = 0; u < ng; ++u) {
                int lhs = A.mul(c.f[s][c.gat(ng, t, u)], c.gat(ng, s, B.gamma.mul(t, u)));
                int rhs = A.mul(c.gat(ng, s, t), c.gat(ng, B.gamma.mul(s, t), u));
                if (lhs != rhs)
                    return fail("g-associativity fails at (" + std::to_string(s) + "," +
                                std::to_string(t) + "," + std::to_string(u) + ")");
            }
    return {};
}

/// The h-transform: f'_s = int(h_s) o f_s, g'_{s,t} = h_s f_s(h_t) g_{s,t} h_{st}^-1.
/// Transforms of cocycles are cocycles; h must be normalized (h_1 = 1).
inline Cocycle transform(const Band& B, const Cocycle& c, const std::vector<int>& h) {
    const int ng = B.gamma.order();
    const FiniteGroup& A = B.kernel;
    Cocycle out;
    out.f.resize(ng);
    out.g.assign(ng * ng, 0);
    for (int s = 0; s < ng; ++s)
        out.f[s] = compose(inner_automorphism_table(A, h[s]), c.f[s]);
    for (int s = 0; s < ng; ++s)
        for (int t = 0; t < ng; ++t) {
            int v = A.mul(A.mul(h[s], c.f[s][h[t]]), c.gat(ng, s, t));
            out.g[s * ng + t] = A.mul(v, A.inv(h[B.gamma.mul(s, t)]));
        }
    return out;
}

/// Least-lex witness h with transform(B, c1, h) == c2, by exhaustive search
/// over normalized h (h_1 = 1).
inline std::optional<std::vector<int>> equivalent(const Band& B, const Cocycle& c1,
                                                  const Cocycle& c2,
                                                  const Budget& budget = default_budget()) {
    const int ng = B.gamma.order();
    const int na = B.kernel.order();
    long long space = 1;
    for (int s = 1; s < ng; ++s) {
        space *= na;
        if (space > budget.max_enumeration)
            throw budget_exceeded("equivalence witness space exceeds budget");
    }
    std::vector<int> h(ng, 0);
    while (true) {
        bool match = true;
        for (int s = 0; s < ng && match; ++s)
            match = compose(inner_automorphism_table(B.kernel, h[s]), c1.f[s]) == c2.f[s];
        if (match && transform(B, c1, h).g == c2.g) return h;
        int s = 1;
        for (; s < ng; ++s) {
            if (++h[s] < na) break;
            h[s] = 0;
        }
        if (s >= ng) break;
    }
    return std::nullopt;
}

namespace detail {

// grid of A-elements -> normalized slot cochain with values relabeled into a
// subgroup/quotient module; `label` maps an A element to the module label
template <typename Label>
AbelianCochain grid_to_cochain(int ng, int degree, const std::vector<int>& grid, Label&& label) {
    const int nfree = ng - 1;
    long long n = 1;
    for (int i = 0; i < degree; ++i) n *= nfree;
    AbelianCochain out{degree, std::vector<int>(n, 0)};
    if (degree == 2) {
        for (int s = 1; s < ng; ++s)
            for (int t = 1; t < ng; ++t)
                out.values[(s - 1) + (t - 1) * nfree] = label(grid[s * ng + t]);
    } else if (degree == 3) {
        for (int s = 1; s < ng; ++s)
            for (int t = 1; t < ng; ++t)
                for (int u = 1; u < ng; ++u)
                    out.values[(s - 1) + (t - 1) * nfree + (u - 1) * nfree * nfree] =
                        label(grid[(s * ng + t) * ng + u]);
    } else {
        throw error("Internal", "unsupported grid degree");
    }
    return out;
}

}  // namespace detail

/// Internals shared by the H^2 operations for one band.
class H2Context {
public:
    explicit H2Context(Band band, Budget budget = default_budget())
        : B_(std::move(band)), budget_(budget) {
        zmod_ = center_module(B_);
        zcx_ = std::make_shared<BarComplex>(zmod_, budget_);
        ng_ = B_.gamma.order();
        // z-label of an A element (position among the sorted center members)
        zlabel_.assign(B_.kernel.order(), -1);
        for (size_t i = 0; i < B_.z_members.size(); ++i)
            zlabel_[B_.z_members[i]] = static_cast<int>(i);
    }

    const Band& band() const { return B_; }
    const GammaModule& z_module() const { return zmod_; }
    const std::shared_ptr<BarComplex>& z_complex() const { return zcx_; }

    int z_label(int a) const {
        if (zlabel_[a] < 0) throw error("Internal", "element is not central");
        return zlabel_[a];
    }
    int z_element(int label) const { return B_.z_members[label]; }

    /// the 3-cochain d g for a defect solution g of a lift f (values central)
    std::vector<int> dg_grid(const Section& f, const std::vector<int>& g) const {
        std::vector<int> out(ng_ * ng_ * ng_, 0);
        const FiniteGroup& A = B_.kernel;
        for (int s = 0; s < ng_; ++s)
            for (int t = 0; t < ng_; ++t)
                for (int u = 0; u < ng_; ++u) {
                    int v = A.mul(f[s][g[t * ng_ + u]], g[s * ng_ + B_.gamma.mul(t, u)]);
                    v = A.mul(v, A.inv(g[B_.gamma.mul(s, t) * ng_ + u]));
                    v = A.mul(v, A.inv(g[s * ng_ + t]));
                    if (zlabel_[v] < 0)
                        throw error("Internal", "defect-solution coboundary is not central");
                    out[(s * ng_ + t) * ng_ + u] = v;
                }
        return out;
    }

    /// -[dg] as a normalized 3-cochain over the center module
    AbelianCochain obstruction_cochain(const Section& f, const std::vector<int>& g) const {
        auto dg = dg_grid(f, g);
        AbelianCochain c = detail::grid_to_cochain(ng_, 3, dg, [&](int a) { return z_label(a); });
        return zcx_->neg(c);  // the obstruction is minus the class of dg
    }

    /// defect witnesses of a lift (least element with int(a) = f_s f_t f_st^-1)
    std::vector<int> defect_grid(const Section& f) const {
        std::vector<int> w(ng_ * ng_, 0);
        for (int s = 0; s < ng_; ++s)
            for (int t = 0; t < ng_; ++t) {
                Perm defect =
                    compose(compose(f[s], f[t]), inverse_perm(f[B_.gamma.mul(s, t)]));
                auto a = inner_witness(B_.kernel, defect);
                if (!a) throw error("Internal", "lift defect is not inner");
                w[s * ng_ + t] = *a;
            }
        return w;
    }

    /// multiply a central slot-cochain into a grid of A elements
    std::vector<int> shift_grid(const std::vector<int>& g, const AbelianCochain& zeta) const {
        std::vector<int> out = g;
        const int nfree = ng_ - 1;
        for (int s = 1; s < ng_; ++s)
            for (int t = 1; t < ng_; ++t)
                out[s * ng_ + t] = B_.kernel.mul(
                    g[s * ng_ + t], z_element(zeta.values[(s - 1) + (t - 1) * nfree]));
        return out;
    }

private:
    Band B_;
    Budget budget_;
    GammaModule zmod_;
    std::shared_ptr<BarComplex> zcx_;
    std::vector<int> zlabel_;
    int ng_;
};

/// One H^2 class: canonical cocycle representative plus the neutral flag.
struct H2Class {
    Cocycle rep;
    bool neutral = false;
};

/// Full classification of H^2 for one band.
class H2Classes {
public:
    const Band& band() const { return ctx_->band(); }
    const std::vector<H2Class>& classes() const { return classes_; }
    bool empty() const { return classes_.empty(); }
    long long count() const { return static_cast<long long>(classes_.size()); }
    long long neutral_count() const {
        long long n = 0;
        for (const auto& c : classes_) n += c.neutral;
        return n;
    }
    const H2Context& context() const { return *ctx_; }

    /// class index of an arbitrary valid cocycle of this band
    int class_of(const Cocycle& c) const {
        auto check = is_cocycle(ctx_->band(), c);
        if (!check) throw not_cocycle("class_of: " + check.violation);
        if (classes_.empty()) throw error("Internal", "band has no classes");
        // bring f to the band's section, then read off the central part
        const Band& B = ctx_->band();
        const int ng = B.gamma.order();
        std::vector<int> h(ng, 0);
        for (int s = 1; s < ng; ++s) {
            Perm diff = compose(B.section[s], inverse_perm(c.f[s]));
            auto a = inner_witness(B.kernel, diff);
            if (!a) throw not_cocycle("cocycle lift does not match the band");
            h[s] = *a;
        }
        Cocycle base_form = transform(B, c, h);
        AbelianCochain zeta{2, {}};
        {
            const int nfree = ng - 1;
            zeta.values.assign(static_cast<size_t>(nfree) * nfree, 0);
            for (int s = 1; s < ng; ++s)
                for (int t = 1; t < ng; ++t) {
                    int diff = B.kernel.mul(base_form.gat(ng, s, t),
                                            B.kernel.inv(base_g_[s * ng + t]));
                    zeta.values[(s - 1) + (t - 1) * nfree] = ctx_->z_label(diff);
                }
        }
        int zid = ctx_->z_complex()->class_of(zeta);
        return class_by_zid_.at(zid);
    }

    /// the central H^2(Gamma, Z_L)-action: zeta . [f, g] = [f, zeta g]
    int center_action(const AbelianCochain& zeta, int class_index) const {
        const auto& rep = classes_[class_index].rep;
        Cocycle shifted = rep;
        shifted.g = ctx_->shift_grid(rep.g, zeta);
        return class_of(shifted);
    }

    friend H2Classes h2_classes(const Band&, const Budget&);

private:
    std::shared_ptr<H2Context> ctx_;
    std::vector<int> base_g_;              // the chosen base cocycle grid (f = f0)
    std::vector<H2Class> classes_;         // ordered by canonical representative
    std::map<int, int> class_by_zid_;      // H^2(Z_L) class id -> position in classes_
};

/// Enumerates all H^2 classes of a band, with neutral classes marked.
inline H2Classes h2_classes(const Band& B, const Budget& budget = default_budget()) {
    H2Classes out;
    out.ctx_ = std::make_shared<H2Context>(B, budget);
    const H2Context& ctx = *out.ctx_;
    const int ng = B.gamma.order();
    const int na = B.kernel.order();

    // base defect solution for the band's own section; H^2 is empty exactly
    // when its coboundary cannot be cancelled by a central 2-cochain
    std::vector<int> w = ctx.defect_grid(B.section);
    AbelianCochain target =
        ctx.z_complex()->neg(detail::grid_to_cochain(ng, 3, ctx.dg_grid(B.section, w),
                                                     [&](int a) { return ctx.z_label(a); }));
    auto z0 = ctx.z_complex()->coboundary_witness(target);
    if (!z0) return out;  // obstruction is nonzero

    out.base_g_ = ctx.shift_grid(w, *z0);
    {
        Cocycle base{B.section, out.base_g_};
        auto check = is_cocycle(B, base);
        if (!check) throw error("Internal", "base cocycle invalid: " + check.violation);
    }

    // classes are in bijection with H^2(Gamma, Z_L)
    const auto& zh = ctx.z_complex()->h(2);
    long long hspace = 1;  // h-orbit size for canonicalization
    for (int s = 1; s < ng; ++s) hspace *= na;
    const bool canonical_scan = hspace <= 100000;

    std::vector<std::pair<Cocycle, int>> reps;  // (canonical rep, z class id)
    for (size_t zi = 0; zi < zh.representatives.size(); ++zi) {
        Cocycle c{B.section, ctx.shift_grid(out.base_g_, zh.representatives[zi])};
        Cocycle best = c;
        if (canonical_scan) {
            std::vector<int> h(ng, 0);
            while (true) {
                Cocycle cand = transform(B, c, h);
                if (std::make_pair(cand.f, cand.g) < std::make_pair(best.f, best.g)) best = cand;
                int s = 1;
                for (; s < ng; ++s) {
                    if (++h[s] < na) break;
                    h[s] = 0;
                }
                if (s >= ng) break;
            }
        }
        reps.emplace_back(std::move(best), static_cast<int>(zi));
    }
    std::sort(reps.begin(), reps.end(), [](const auto& a, const auto& b) {
        return std::make_pair(a.first.f, a.first.g) < std::make_pair(b.first.f, b.first.g);
    });
    for (size_t i = 0; i < reps.size(); ++i) {
        out.classes_.push_back(H2Class{reps[i].first, false});
        out.class_by_zid_[reps[i].second] = static_cast<int>(i);
    }

    // neutral classes: exactly those hit by (f', 1) for a homomorphic lift f'
    for (const auto& f : lifts_of_kappa(B, budget)) {
        if (!is_homomorphic_section(B, f)) continue;
        Cocycle neutral{f, trivial_grid(ng)};
        out.classes_[out.class_of(neutral)].neutral = true;
    }
    return out;
}

/// Classes reachable from a fixed neutral class by the central action through
/// the connecting map image delta(H^1(Gamma, A/Z(A))). The base point is the
/// class of (f*, 1) for the first homomorphic lift f*, which also provides
/// the Gamma-group structure behind delta.
inline std::vector<int> delta_orbit_of_neutral(const H2Classes& h2,
                                               const Budget& budget = default_budget()) {
    const Band& B = h2.band();
    auto hom = is_representable(B, budget);
    if (!hom) throw error("Internal", "delta orbit requires a representable band");
    int base = h2.class_of(Cocycle{*hom, trivial_grid(B.gamma.order())});
    GammaGroup AG{B.gamma, B.kernel, *hom};
    auto cq = CentralQuotient::build(AG, B.z_members);
    auto h1 = h1_nonabelian(cq.Q, budget);
    std::set<int> got;
    for (const auto& y : h1.reps) {
        auto d = connecting_delta_cochain(cq, y);
        got.insert(h2.center_action(d, base));
    }
    return std::vector<int>(got.begin(), got.end());
}

inline std::vector<int> neutral_class_indices(const H2Classes& h2) {
    std::vector<int> out;
    for (size_t i = 0; i < h2.classes().size(); ++i)
        if (h2.classes()[i].neutral) out.push_back(static_cast<int>(i));
    return out;
}

// -- obstruction ------------------------------------------------------------------

/// The obstruction class -[dg] in H^3(Gamma, Z_L), with its vanishing test.
struct Obstruction {
    GammaModule z_module;
    std::shared_ptr<BarComplex> complex;
    AbelianCochain cocycle;  // normalized 3-cocycle representing the class
    bool zero = false;
};

inline Obstruction obstruction(const Band& B, const Budget& budget = default_budget()) {
    H2Context ctx(B, budget);
    Obstruction out;
    out.z_module = ctx.z_module();
    out.complex = ctx.z_complex();
    out.cocycle = ctx.obstruction_cochain(B.section, ctx.defect_grid(B.section));
    if (!out.complex->is_cocycle(out.cocycle))
        throw error("Internal", "obstruction cochain is not a 3-cocycle");
    out.zero = out.complex->is_coboundary(out.cocycle);
    return out;
}

/// Recomputes the obstruction cochain from a different lift and a different
/// defect solution (central shifts), for choice-independence checks.
inline AbelianCochain obstruction_variant(const H2Context& ctx, const Section& f,
                                          const std::vector<int>& central_shift_grid) {
    auto w = ctx.defect_grid(f);
    const auto& A = ctx.band().kernel;
    const int ng = static_cast<int>(f.size());
    std::vector<int> g = w;
    for (int s = 1; s < ng; ++s)
        for (int t = 1; t < ng; ++t)
            g[s * ng + t] = A.mul(w[s * ng + t], central_shift_grid[s * ng + t]);
    return ctx.obstruction_cochain(f, g);
}

// -- abelianization ----------------------------------------------------------------

/// ab^2: project a class through A ->> A/[A,A]; the result is a class of the
/// abelianization module. Pass the complex of abelianization_module(B).
inline int ab2(const Band& B, const Cocycle& c, BarComplex& ab_complex) {
    auto check = is_cocycle(B, c);
    if (!check) throw not_cocycle("ab2: " + check.violation);
    auto D = derived_subgroup(B.kernel);
    auto [Q, proj] = quotient(B.kernel, D);
    if (!(Q == ab_complex.module().carrier))
        throw error("Internal", "ab2 passed a complex for the wrong module");
    const int ng = B.gamma.order();
    AbelianCochain bar =
        detail::grid_to_cochain(ng, 2, c.g, [&](int a) { return proj.map[a]; });
    if (!ab_complex.is_cocycle(bar))
        throw error("Internal", "projected cochain is not an abelian 2-cocycle");
    return ab_complex.class_of(bar);
}

// -- lifting machinery --------------------------------------------------------------

/// Result of pulling a band back along alpha: B_big -> A.
struct BandLift {
    Band lifted;              // band on B_big with section j~ f'
    Section compatible_on_a;  // the matching lift j f on the A side
};

/// Finite form of the five-condition lifting construction: given a band on A
/// with lift f, a compatible candidate section f' on B_big and a subgroup M of
/// A/Z(A), decide the quotient-band obstruction and produce the lifted band.
/// Throws condition_failed(i) naming the first precondition that fails.
inline BandLift lift_band_along(const GroupHom& alpha, const Band& B, const Section& f,
                                const Section& f_prime, const std::vector<int>& m_classes,
                                const Budget& budget = default_budget()) {
    const FiniteGroup& A = B.kernel;
    const FiniteGroup& Big = alpha.source;
    const int ng = B.gamma.order();

    // condition (1): f' consists of automorphisms compatible with f along alpha
    if (static_cast<int>(f_prime.size()) != ng) throw condition_failed(1, "f' has wrong length");
    for (int s = 0; s < ng; ++s) {
        if (!is_bijection(f_prime[s], Big.order()) || !is_hom_table(Big, Big, f_prime[s]))
            throw condition_failed(1, "f'_" + std::to_string(s) + " is not an automorphism");
        for (int x = 0; x < Big.order(); ++x)
            if (alpha.map[f_prime[s][x]] != f[s][alpha.map[x]])
                throw condition_failed(1, "alpha f' != f alpha at s=" + std::to_string(s));
    }
    if (f_prime[0] != identity_perm(Big.order()))
        throw condition_failed(1, "f'_1 is not the identity");

    // A/Z(A) and the subgroup M
    auto ZA = center(A);
    auto [QZ, projz] = quotient(A, ZA);
    std::vector<int> m_sorted = m_classes;
    std::sort(m_sorted.begin(), m_sorted.end());
    m_sorted.erase(std::unique(m_sorted.begin(), m_sorted.end()), m_sorted.end());
    if (m_sorted.empty() || m_sorted.front() < 0 || m_sorted.back() >= QZ.order())
        throw condition_failed(2, "M is not a subgroup of A/Z(A)");
    Subgroup M{QZ, m_sorted};
    {
        std::set<int> mm(m_sorted.begin(), m_sorted.end());
        for (int x : m_sorted)
            for (int y : m_sorted)
                if (!mm.count(QZ.mul(x, y)))
                    throw condition_failed(2, "M is not a subgroup of A/Z(A)");
    }

    // condition (2): each m in M lifts to a unique automorphism of B_big
    // compatible with alpha; also the image of B_big/Z in A/Z must sit
    // normally inside M so that the quotient C exists
    auto big_auts = automorphisms(Big, budget);
    std::map<int, Perm> tilde;  // m (QZ label) -> unique automorphism of B_big
    for (int m : m_sorted) {
        int a = -1;  // least A-preimage of the class m
        for (int x = 0; x < A.order(); ++x)
            if (projz.map[x] == m) {
                a = x;
                break;
            }
        Perm target = inner_automorphism_table(A, a);
        std::optional<Perm> unique;
        for (const auto& tau : big_auts) {
            bool compat = true;
            for (int x = 0; x < Big.order() && compat; ++x)
                compat = alpha.map[tau[x]] == target[alpha.map[x]];
            if (compat) {
                if (unique) throw condition_failed(2, "lift of int(m) is not unique");
                unique = tau;
            }
        }
        if (!unique) throw condition_failed(2, "int(m) does not lift to B_big");
        tilde[m] = *unique;
    }
    std::set<int> image;  // of B_big/Z(B_big) -> M
    for (int x = 0; x < Big.order(); ++x) image.insert(projz.map[alpha.map[x]]);
    for (int i : image)
        if (!M.contains(i))
            throw condition_failed(2, "image of B_big does not land in M");
    for (int m : m_sorted)
        for (int i : image)
            if (!image.count(QZ.mul(QZ.mul(m, i), QZ.inv(m))))
                throw condition_failed(2, "image of B_big is not normal in M");

    // condition (3): all defects of f lie in M
    std::vector<int> defect_class(ng * ng, -1);
    for (int s = 0; s < ng; ++s)
        for (int t = 0; t < ng; ++t) {
            Perm defect = compose(compose(f[s], f[t]), inverse_perm(f[B.gamma.mul(s, t)]));
            auto wit = inner_witness(A, defect);
            if (!wit) throw condition_failed(3, "lift defect is not inner");
            defect_class[s * ng + t] = projz.map[*wit];
            if (!M.contains(defect_class[s * ng + t]))
                throw condition_failed(3, "defect at (" + std::to_string(s) + "," +
                                              std::to_string(t) + ") is not in M");
        }

    // condition (4): conjugation by f_s preserves M
    for (int s = 0; s < ng; ++s)
        for (int m : m_sorted) {
            int a = -1;
            for (int x = 0; x < A.order(); ++x)
                if (projz.map[x] == m) {
                    a = x;
                    break;
                }
            if (!M.contains(projz.map[f[s][a]]))
                throw condition_failed(4, "f_" + std::to_string(s) + " does not preserve M");
        }

    // quotient group C = M / image, with the induced Gamma-band structure
    auto [Mg, mincl] = subgroup_as_group(M);
    std::vector<int> m_index(QZ.order(), -1);
    for (int i = 0; i < Mg.order(); ++i) m_index[mincl.map[i]] = i;
    std::vector<int> image_in_m;
    for (int i : image) image_in_m.push_back(m_index[i]);
    std::sort(image_in_m.begin(), image_in_m.end());
    auto [C, cproj] = quotient(Mg, Subgroup{Mg, image_in_m});

    Section csec(ng);
    for (int s = 0; s < ng; ++s) {
        Perm cs(C.order(), -1);
        for (int i = 0; i < Mg.order(); ++i) {
            int m = mincl.map[i];
            int a = -1;
            for (int x = 0; x < A.order(); ++x)
                if (projz.map[x] == m) {
                    a = x;
                    break;
                }
            int image = cproj.map[m_index[projz.map[f[s][a]]]];
            int at = cproj.map[i];
            if (cs[at] >= 0 && cs[at] != image)
                throw condition_failed(4, "f_" + std::to_string(s) + " is not well-defined on C");
            cs[at] = image;
        }
        if (!is_bijection(cs, C.order()))
            throw condition_failed(4, "f_" + std::to_string(s) + " does not act on C");
        csec[s] = cs;
    }
    Band CB = make_band(B.gamma, C, csec, budget);
    std::vector<int> gbar(ng * ng, 0);
    for (int s = 0; s < ng; ++s)
        for (int t = 0; t < ng; ++t)
            gbar[s * ng + t] = cproj.map[m_index[defect_class[s * ng + t]]];
    Cocycle cbar{csec, gbar};
    {
        auto check = is_cocycle(CB, cbar);
        if (!check) throw error("Internal", "quotient cocycle invalid: " + check.violation);
    }

    // condition (5): the class of (int f, gbar) in H^2 of the quotient band is
    // neutral; decided by the classification machinery on C
    auto ch2 = h2_classes(CB, budget);
    if (ch2.empty() || !ch2.classes()[ch2.class_of(cbar)].neutral)
        throw condition_failed(5, "quotient class is not neutral");

    // extract a trivializing witness: jbar with transform(cbar, jbar) = (hom, 1)
    std::vector<int> jbar;
    for (const auto& fl : lifts_of_kappa(CB, budget)) {
        if (!is_homomorphic_section(CB, fl)) continue;
        auto wit = equivalent(CB, cbar, Cocycle{fl, trivial_grid(ng)}, budget);
        if (wit) {
            jbar = *wit;
            break;
        }
    }
    if (jbar.empty())
        throw error("Internal", "neutral class without a trivializing witness");

    // lift jbar through C <- M <- A/Z and apply the unique automorphism lifts
    BandLift out;
    Section lifted(ng);
    out.compatible_on_a.resize(ng);
    for (int s = 0; s < ng; ++s) {
        int mc = -1;  // least member of M mapping to jbar_s in C
        for (int i = 0; i < Mg.order(); ++i)
            if (cproj.map[i] == jbar[s]) {
                mc = mincl.map[i];
                break;
            }
        lifted[s] = compose(tilde.at(mc), f_prime[s]);
        int a = -1;
        for (int x = 0; x < A.order(); ++x)
            if (projz.map[x] == mc) {
                a = x;
                break;
            }
        out.compatible_on_a[s] = compose(inner_automorphism_table(A, a), f[s]);
    }
    out.lifted = make_band(B.gamma, Big, lifted, budget);
    return out;
}

// -- nilpotent representability ------------------------------------------------------

namespace detail {

// witness h trivializing a cocycle of a nilpotent p-group band with
// gcd(p, |Gamma|) = 1: recursion along centers, solving one abelian
// coboundary equation per layer (solvable by coprime vanishing)
inline std::vector<int> trivialize_nilpotent(const Band& B, const Cocycle& c,
                                             const Budget& budget) {
    const FiniteGroup& A = B.kernel;
    const int ng = B.gamma.order();
    if (A.order() == 1) return std::vector<int>(ng, 0);

    if (A.abelian()) {
        // f is a homomorphism (Inn trivial); g is an abelian 2-cocycle whose
        // class vanishes, so one coboundary correction kills it
        GammaModule m = make_gamma_module(B.gamma, A, c.f);
        BarComplex cx(m, budget);
        AbelianCochain gbar = grid_to_cochain(ng, 2, c.g, [](int a) { return a; });
        auto h = cx.coboundary_witness(cx.neg(gbar));
        if (!h) throw error("Internal", "coprime abelian class failed to vanish");
        std::vector<int> out(ng, 0);
        for (int s = 1; s < ng; ++s) out[s] = h->values[s - 1];
        return out;
    }

    // quotient by the center and recurse
    auto Z = center(A);
    auto [Q, proj] = quotient(A, Z);
    Section qsec(ng);
    for (int s = 0; s < ng; ++s) {
        Perm qs(Q.order(), -1);
        for (int x = 0; x < A.order(); ++x) qs[proj.map[x]] = proj.map[c.f[s][x]];
        qsec[s] = qs;
    }
    Band QB = make_band(B.gamma, Q, qsec, budget);
    std::vector<int> qg(ng * ng);
    for (int i = 0; i < ng * ng; ++i) qg[i] = proj.map[c.g[i]];
    auto hbar = trivialize_nilpotent(QB, Cocycle{qsec, qg}, budget);

    // lift hbar (least preimages) and apply; the residue is central
    std::vector<int> h1(ng, 0);
    for (int s = 1; s < ng; ++s)
        for (int x = 0; x < A.order(); ++x)
            if (proj.map[x] == hbar[s]) {
                h1[s] = x;
                break;
            }
    Cocycle c1 = transform(B, c, h1);
    for (int v : c1.g)
        if (!center(A).contains(v))
            throw error("Internal", "residual cochain is not central");
    // f1 is now a homomorphism; kill the central 2-cocycle in one step
    auto [zmodg, zincl] = sub_gamma_group(GammaGroup{B.gamma, A, c1.f}, Z.members);
    GammaModule zmod;
    zmod.gamma = zmodg.gamma;
    zmod.carrier = zmodg.carrier;
    zmod.action = zmodg.action;
    std::vector<int> zlabel(A.order(), -1);
    for (size_t i = 0; i < Z.members.size(); ++i) zlabel[Z.members[i]] = static_cast<int>(i);
    BarComplex cx(zmod, budget);
    AbelianCochain gbar = grid_to_cochain(ng, 2, c1.g, [&](int a) { return zlabel[a]; });
    auto hz = cx.coboundary_witness(cx.neg(gbar));
    if (!hz) throw error("Internal", "central layer class failed to vanish");
    std::vector<int> h2v(ng, 0);
    for (int s = 1; s < ng; ++s) h2v[s] = Z.members[hz->values[s - 1]];

    std::vector<int> out(ng, 0);
    for (int s = 0; s < ng; ++s) out[s] = A.mul(h2v[s], h1[s]);
    return out;
}

}  // namespace detail

/// Constructive homomorphic lift for a nilpotent p-group kernel with
/// gcd(p, |Gamma|) = 1, by induction along the central series. Also checks
/// |H^2| = 1 when the classification fits the budget.
inline Section representability_nilpotent(const Band& B, const Budget& budget = default_budget()) {
    int n = B.kernel.order();
    if (n > 1) {
        int p = 2;
        while (n % p != 0) ++p;
        for (int m = n; m > 1; m /= p)
            if (m % p != 0) throw hypothesis_violated("kernel is not a p-group");
        if (B.gamma.order() % p == 0)
            throw hypothesis_violated("p divides |Gamma|; coprimality is required");
    }

    // a cocycle always exists here (the obstruction lives in a trivial group)
    H2Context ctx(B, budget);
    auto w = ctx.defect_grid(B.section);
    auto target = ctx.z_complex()->neg(detail::grid_to_cochain(
        B.gamma.order(), 3, ctx.dg_grid(B.section, w), [&](int a) { return ctx.z_label(a); }));
    auto z0 = ctx.z_complex()->coboundary_witness(target);
    if (!z0) throw error("Internal", "obstruction failed to vanish in the coprime case");
    Cocycle c{B.section, ctx.shift_grid(w, *z0)};

    auto h = detail::trivialize_nilpotent(B, c, budget);
    Cocycle trivial = transform(B, c, h);
    if (trivial.g != trivial_grid(B.gamma.order()))
        throw error("Internal", "trivialization left a nonzero cochain");
    if (!is_homomorphic_section(B, trivial.f))
        throw error("Internal", "trivialized lift is not homomorphic");
    try {
        auto h2 = h2_classes(B, budget);
        if (h2.count() != 1 || h2.neutral_count() != 1)
            throw error("Internal", "coprime nilpotent band has more than one class");
    } catch (const budget_exceeded&) {
        // classification assert skipped beyond budget; the lift stands
    }
    return trivial.f;
}

/// Representability transfer along alpha: B_big -> A with alpha(Z) central,
/// compatible lifts with matching defects, and a homomorphic correction
/// i * f_prime on the source. Returns the homomorphic lift (alpha o i) * f.
inline Section lift_representability_transfer(const GroupHom& alpha, const Band& B_big,
                                              const Section& f_prime, const Band& B,
                                              const Section& f, const std::vector<int>& i) {
    const FiniteGroup& Big = B_big.kernel;
    const FiniteGroup& A = B.kernel;
    const int ng = B.gamma.order();
    if (!(B_big.gamma == B.gamma)) throw hypothesis_violated("bands live over different groups");
    for (int z : center(Big).members)
        if (!center(A).contains(alpha.map[z]))
            throw hypothesis_violated("alpha does not send center to center");
    for (int s = 0; s < ng; ++s)
        for (int x = 0; x < Big.order(); ++x)
            if (alpha.map[f_prime[s][x]] != f[s][alpha.map[x]])
                throw hypothesis_violated("lifts are not compatible along alpha");
    for (int s = 0; s < ng; ++s)
        for (int t = 0; t < ng; ++t) {
            Perm dbig = compose(compose(f_prime[s], f_prime[t]),
                                inverse_perm(f_prime[B.gamma.mul(s, t)]));
            auto b = inner_witness(Big, dbig);
            if (!b) throw hypothesis_violated("source defect is not inner");
            Perm da = compose(compose(f[s], f[t]), inverse_perm(f[B.gamma.mul(s, t)]));
            if (da != inner_automorphism_table(A, alpha.map[*b]))
                throw hypothesis_violated("defects do not match through alpha");
        }
    Section corrected(ng);
    for (int s = 0; s < ng; ++s)
        corrected[s] = compose(inner_automorphism_table(Big, i[s]), f_prime[s]);
    if (!is_homomorphic_section(B_big, corrected))
        throw hypothesis_violated("i f' is not homomorphic");

    Section out(ng);
    for (int s = 0; s < ng; ++s)
        out[s] = compose(inner_automorphism_table(A, alpha.map[i[s]]), f[s]);
    if (!is_homomorphic_section(B, out))
        throw error("Internal", "transferred lift is not homomorphic");
    return out;
}

}  // namespace bandcoh
