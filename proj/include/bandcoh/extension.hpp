#pragma once

// Independent group-extension oracle: extensions 1 -> A -> E -> Gamma -> 1
// built and classified directly from raw multiplication tables. This is the
// ground truth that band_h2 is cross-validated against, so the enumeration
// and classification here never call the equivalence or enumeration machinery
// of h2.hpp; shared code is limited to group_core and the Cocycle record.
//
// Candidate laws are (a,s)(b,t) = (a f_s(b) g_{s,t}, st). The search prunes
// with two consequences of associativity of that law (the instances with an
// identity component: ((1,s)(1,t))(c,u) against (1,s)((1,t)(c,u)) and c = 1),
// and every completed table still runs the full group-axiom validation, so
// exactly the group laws survive. Classification is by table relabelings
// theta_h(a,s) = (a h_s, s), which are precisely the E-isomorphisms that
// restrict to the identity on A and induce the identity on Gamma.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "band.hpp"
#include "errors.hpp"
#include "group.hpp"
#include "h2.hpp"

namespace bandcoh {

/// An extension of Gamma by A on the carrier A x Gamma, index (a,s) = a*ng+s.
struct Extension {
    FiniteGroup E;
    GroupHom iota;  // A -> E, a -> (a, 1)
    GroupHom pi;    // E -> Gamma, (a, s) -> s
    int na = 0, ng = 0;

    int pair(int a, int s) const { return a * ng + s; }
    int a_part(int e) const { return e / ng; }
    int s_part(int e) const { return e % ng; }
};

/// Builds the extension table of a cocycle and validates the group axioms on
/// the result (a safety net on top of the cocycle identities).
inline Extension extension_from_cocycle(const Band& B, const Cocycle& c) {
    {
        auto check = is_cocycle(B, c);
        if (!check) throw not_cocycle("extension_from_cocycle: " + check.violation);
    }
    const int na = B.kernel.order(), ng = B.gamma.order();
    Extension e;
    e.na = na;
    e.ng = ng;
    std::vector<std::vector<int>> rows(na * ng, std::vector<int>(na * ng));
    for (int a = 0; a < na; ++a)
        for (int s = 0; s < ng; ++s)
            for (int b = 0; b < na; ++b)
                for (int t = 0; t < ng; ++t) {
                    int prod_a = B.kernel.mul(B.kernel.mul(a, c.f[s][b]), c.gat(ng, s, t));
                    rows[e.pair(a, s)][e.pair(b, t)] = e.pair(prod_a, B.gamma.mul(s, t));
                }
    e.E = make_group(rows);

    Perm im(na), pm(na * ng);
    for (int a = 0; a < na; ++a) im[a] = e.pair(a, 0);
    for (int x = 0; x < na * ng; ++x) pm[x] = e.s_part(x);
    e.iota = make_hom(B.kernel, e.E, im);
    e.pi = make_hom(e.E, B.gamma, pm);
    return e;
}

/// The canonical set-section s -> (1, s).
inline std::vector<int> canonical_section(const Extension& e) {
    std::vector<int> sec(e.ng);
    for (int s = 0; s < e.ng; ++s) sec[s] = e.pair(0, s);
    return sec;
}

/// Factor data of a section: f_s = conjugation by sec(s) on iota(A) and
/// g_{s,t} = sec(s) sec(t) sec(st)^-1, read back through iota.
inline Cocycle cocycle_from_extension(const Extension& e, const std::vector<int>& sec) {
    const int ng = e.ng, na = e.na;
    if (static_cast<int>(sec.size()) != ng) throw not_section("section has wrong length");
    for (int s = 0; s < ng; ++s)
        if (e.pi.map[sec[s]] != s) throw not_section("pi(sec(s)) != s at " + std::to_string(s));
    if (sec[0] != 0) throw not_section("sec(1) must be the identity");

    Cocycle c;
    c.f.assign(ng, Perm(na));
    c.g.assign(ng * ng, 0);
    for (int s = 0; s < ng; ++s)
        for (int a = 0; a < na; ++a) {
            int conj = e.E.conj(sec[s], e.pair(a, 0));
            if (e.s_part(conj) != 0) throw not_section("conjugation leaves iota(A)");
            c.f[s][a] = e.a_part(conj);
        }
    for (int s = 0; s < ng; ++s)
        for (int t = 0; t < ng; ++t) {
            int prod = e.E.mul(sec[s], sec[t]);
            int defect = e.E.mul(prod, e.E.inv(sec[e.pi.map[prod]]));
            if (e.s_part(defect) != 0) throw not_section("factor value leaves iota(A)");
            c.g[s * ng + t] = e.a_part(defect);
        }
    return c;
}

/// Factor data of an arbitrary section (sec(1) may be anything in iota(A)'s
/// coset of the identity); the result need not be normalized.
struct RawFactorSet {
    std::vector<Perm> f;
    std::vector<int> g;
};

inline RawFactorSet raw_factors(const Extension& e, const std::vector<int>& sec) {
    const int ng = e.ng, na = e.na;
    for (int s = 0; s < ng; ++s)
        if (e.pi.map[sec[s]] != s) throw not_section("pi(sec(s)) != s at " + std::to_string(s));
    RawFactorSet r;
    r.f.assign(ng, Perm(na));
    r.g.assign(ng * ng, 0);
    for (int s = 0; s < ng; ++s)
        for (int a = 0; a < na; ++a) {
            int conj = e.E.conj(sec[s], e.pair(a, 0));
            if (e.s_part(conj) != 0) throw not_section("conjugation leaves iota(A)");
            r.f[s][a] = e.a_part(conj);
        }
    for (int s = 0; s < ng; ++s)
        for (int t = 0; t < ng; ++t) {
            int prod = e.E.mul(sec[s], sec[t]);
            int defect = e.E.mul(prod, e.E.inv(sec[e.pi.map[prod]]));
            if (e.s_part(defect) != 0) throw not_section("factor value leaves iota(A)");
            r.g[s * ng + t] = e.a_part(defect);
        }
    return r;
}

/// Normalized cocycle of the class behind a raw factor set: replace the
/// section by sec'(s) = sec(s) sec(1)^-1, which fixes sec'(1) = 1 and hence
/// f'_1 = id and identity values on all degenerate pairs.
inline Cocycle normalize_factors(const Extension& e, const std::vector<int>& sec) {
    std::vector<int> fixed(sec.size());
    int shift = e.E.inv(sec[0]);
    for (size_t s = 0; s < sec.size(); ++s) fixed[s] = e.E.mul(sec[s], shift);
    return cocycle_from_extension(e, fixed);
}

/// The abstract kernel of an extension: kappa from conjugation by any section.
inline Band induced_kernel(const Extension& e, const Budget& budget = default_budget()) {
    auto c = cocycle_from_extension(e, canonical_section(e));
    FiniteGroup A = [&] {
        // iota(A) as a group in A-labels: recover from the table through iota
        std::vector<std::vector<int>> rows(e.na, std::vector<int>(e.na));
        for (int a = 0; a < e.na; ++a)
            for (int b = 0; b < e.na; ++b)
                rows[a][b] = e.a_part(e.E.mul(e.pair(a, 0), e.pair(b, 0)));
        return make_group(rows);
    }();
    FiniteGroup gamma = e.pi.target;
    return make_band(gamma, A, c.f, budget);
}

/// Homomorphic section of pi, if one exists (exhaustive over normalized
/// sections).
inline std::optional<std::vector<int>> splits(const Extension& e,
                                              const Budget& budget = default_budget()) {
    const int ng = e.ng, na = e.na;
    long long space = 1;
    for (int s = 1; s < ng; ++s) {
        space *= na;
        if (space > budget.max_enumeration) throw budget_exceeded("section space exceeds budget");
    }
    std::vector<int> y(ng, 0);  // sec(s) = (y_s, s)
    while (true) {
        bool hom = true;
        for (int s = 0; s < ng && hom; ++s)
            for (int t = 0; t < ng && hom; ++t)
                hom = e.E.mul(e.pair(y[s], s), e.pair(y[t], t)) ==
                      e.pair(y[e.pi.target.mul(s, t)], e.pi.target.mul(s, t));
        if (hom) {
            std::vector<int> sec(ng);
            for (int s = 0; s < ng; ++s) sec[s] = e.pair(y[s], s);
            return sec;
        }
        int s = 1;
        for (; s < ng; ++s) {
            if (++y[s] < na) break;
            y[s] = 0;
        }
        if (s >= ng) break;
    }
    return std::nullopt;
}

/// One equivalence class of extensions inducing the given kernel.
struct OracleClass {
    Extension rep;
    Cocycle rep_data;               // factor data of the representative
    bool split = false;
    std::vector<int> canonical_key;  // canonical form under theta relabelings
};

struct OracleResult {
    std::vector<OracleClass> classes;

    long long count() const { return static_cast<long long>(classes.size()); }
    long long split_count() const {
        long long n = 0;
        for (const auto& c : classes) n += c.split;
        return n;
    }
    /// index of the class containing an extension on the standard carrier
    int match(const Extension& e) const;
};

namespace oracle_detail {

// encode factor data for canonical comparison
inline std::vector<int> encode(const Cocycle& c) {
    std::vector<int> key;
    for (const auto& f : c.f) key.insert(key.end(), f.begin(), f.end());
    key.insert(key.end(), c.g.begin(), c.g.end());
    return key;
}

// factor data of the theta_h relabeling of an extension table, computed by
// raw table arithmetic: theta(a,s) = (a h_s, s)
inline Cocycle relabeled_data(const Extension& e, const FiniteGroup& gamma,
                              const std::vector<int>& h) {
    const int ng = e.ng, na = e.na;
    Cocycle c;
    c.f.assign(ng, Perm(na));
    c.g.assign(ng * ng, 0);
    for (int s = 0; s < ng; ++s) {
        int es = e.pair(h[s], s);
        int esi = e.E.inv(es);
        for (int a = 0; a < na; ++a)
            c.f[s][a] = e.a_part(e.E.mul(e.E.mul(es, e.pair(a, 0)), esi));
    }
    for (int s = 0; s < ng; ++s)
        for (int t = 0; t < ng; ++t) {
            int prod = e.E.mul(e.pair(h[s], s), e.pair(h[t], t));
            int st = gamma.mul(s, t);
            int defect = e.E.mul(prod, e.E.inv(e.pair(h[st], st)));
            c.g[s * ng + t] = e.a_part(defect);
        }
    return c;
}

// least encoded factor data over all theta relabelings; for an abelian A the
// conjugation part is relabeling-invariant, so only the g-part is scanned
inline std::vector<int> canonical_key(const Extension& e, const FiniteGroup& gamma,
                                      const Budget& budget) {
    const int ng = e.ng, na = e.na;
    long long space = 1;
    for (int s = 1; s < ng; ++s) {
        space *= na;
        if (space > budget.max_enumeration)
            throw budget_exceeded("relabeling space exceeds budget");
    }
    const bool a_abelian = [&] {
        for (int a = 0; a < na; ++a)
            for (int b = a + 1; b < na; ++b)
                if (e.E.mul(e.pair(a, 0), e.pair(b, 0)) != e.E.mul(e.pair(b, 0), e.pair(a, 0)))
                    return false;
        return true;
    }();
    std::vector<int> h(ng, 0);
    std::vector<int> best;
    std::vector<int> f_prefix;
    if (a_abelian) {
        Cocycle c0 = relabeled_data(e, gamma, h);
        for (const auto& f : c0.f) f_prefix.insert(f_prefix.end(), f.begin(), f.end());
    }
    while (true) {
        std::vector<int> key;
        if (a_abelian) {
            key = f_prefix;
            const int nsq = ng * ng;
            key.reserve(key.size() + nsq);
            for (int s = 0; s < ng; ++s)
                for (int t = 0; t < ng; ++t) {
                    int prod = e.E.mul(e.pair(h[s], s), e.pair(h[t], t));
                    int st = gamma.mul(s, t);
                    key.push_back(e.a_part(e.E.mul(prod, e.E.inv(e.pair(h[st], st)))));
                }
        } else {
            key = encode(relabeled_data(e, gamma, h));
        }
        if (best.empty() || key < best) best = std::move(key);
        int s = 1;
        for (; s < ng; ++s) {
            if (++h[s] < na) break;
            h[s] = 0;
        }
        if (s >= ng) break;
    }
    return best;
}

}  // namespace oracle_detail

inline int OracleResult::match(const Extension& e) const {
    if (classes.empty()) throw error("Internal", "no oracle classes to match against");
    const FiniteGroup& gamma = classes[0].rep.pi.target;
    auto key = oracle_detail::canonical_key(e, gamma, default_budget());
    for (size_t i = 0; i < classes.size(); ++i)
        if (classes[i].canonical_key == key) return static_cast<int>(i);
    throw error("Internal", "extension matches no oracle class");
}

/// Enumerates all extensions of Gamma by A inducing the band's kernel, up to
/// extension equivalence. Factor pairs (f, g) range over all sections f in
/// the Inn-cosets of kappa and all g whose candidate law survives the pruning
/// and the full group-axiom validation.
inline OracleResult enumerate_extensions(const Band& B, const Budget& budget = default_budget()) {
    const FiniteGroup& A = B.kernel;
    const FiniteGroup& gamma = B.gamma;
    const int na = A.order(), ng = gamma.order();

    OracleResult out;
    std::map<std::vector<int>, int> classes_by_key;

    // nondegenerate pairs in a deterministic order
    std::vector<std::pair<int, int>> pairs;
    for (int s = 1; s < ng; ++s)
        for (int t = 1; t < ng; ++t) pairs.emplace_back(s, t);

    for (const auto& f : lifts_of_kappa(B, budget)) {
        // pruning family 1: associativity of ((1,s)(1,t))(c,1) forces
        // int(g_{s,t}) f_{st} = f_s f_t, so candidates live in a Z(A)-coset
        std::vector<std::vector<int>> candidates(ng * ng);
        bool feasible = true;
        for (auto [s, t] : pairs) {
            Perm target = compose(compose(f[s], f[t]), inverse_perm(f[gamma.mul(s, t)]));
            for (int x = 0; x < na; ++x)
                if (inner_automorphism_table(A, x) == target) candidates[s * ng + t].push_back(x);
            if (candidates[s * ng + t].empty()) feasible = false;
        }
        if (!feasible) continue;

        std::vector<int> g(ng * ng, 0);
        // builds the candidate table, keeps it when it is a group law
        auto try_complete = [&](const std::vector<int>& gfull) {
            std::vector<std::vector<int>> rows(na * ng, std::vector<int>(na * ng));
            auto pr = [ng](int a, int s2) { return a * ng + s2; };
            for (int a = 0; a < na; ++a)
                for (int s2 = 0; s2 < ng; ++s2)
                    for (int b = 0; b < na; ++b)
                        for (int t2 = 0; t2 < ng; ++t2)
                            rows[pr(a, s2)][pr(b, t2)] =
                                pr(A.mul(A.mul(a, f[s2][b]), gfull[s2 * ng + t2]),
                                   gamma.mul(s2, t2));
            Extension e;
            try {
                e.na = na;
                e.ng = ng;
                e.E = make_group(rows);
            } catch (const not_associative&) {
                return;
            } catch (const no_identity&) {
                return;
            } catch (const no_inverse&) {
                return;
            }
            Perm im(na), pm(na * ng);
            for (int a = 0; a < na; ++a) im[a] = e.pair(a, 0);
            for (int x = 0; x < na * ng; ++x) pm[x] = e.s_part(x);
            e.iota = make_hom(A, e.E, im);
            e.pi = make_hom(e.E, gamma, pm);
            auto key = oracle_detail::canonical_key(e, gamma, budget);
            if (!classes_by_key.count(key)) {
                classes_by_key[key] = static_cast<int>(out.classes.size());
                OracleClass oc;
                oc.rep = e;
                oc.rep_data = Cocycle{f, gfull};
                oc.split = splits(e, budget).has_value();
                oc.canonical_key = key;
                out.classes.push_back(std::move(oc));
            }
        };
        if (pairs.empty()) {  // trivial gamma
            try_complete(g);
            continue;
        }
        std::vector<size_t> pick(pairs.size(), 0);
        size_t depth = 0;
        long long visited = 0;
        auto scalar_ok = [&](size_t upto) {
            // pruning family 2: associativity of (1,s)(1,t)(1,u) at the A part
            // for triples whose four g-values are already assigned
            auto assigned = [&](int s, int t) {
                if (s == 0 || t == 0) return true;
                size_t k = static_cast<size_t>(s - 1) * (ng - 1) + (t - 1);
                return k <= upto;
            };
            for (int s = 1; s < ng; ++s)
                for (int t = 1; t < ng; ++t)
                    for (int u = 1; u < ng; ++u) {
                        int st = gamma.mul(s, t), tu = gamma.mul(t, u);
                        if (!assigned(s, t) || !assigned(t, u) || !assigned(st, u) ||
                            !assigned(s, tu))
                            continue;
                        int lhs = A.mul(f[s][g[t * ng + u]], g[s * ng + tu]);
                        int rhs = A.mul(g[s * ng + t], g[st * ng + u]);
                        if (lhs != rhs) return false;
                    }
            return true;
        };
        while (true) {
            if (pick[depth] == candidates[pairs[depth].first * ng + pairs[depth].second].size()) {
                if (depth == 0) break;
                pick[depth] = 0;
                ++pick[--depth];
                continue;
            }
            auto [s, t] = pairs[depth];
            g[s * ng + t] = candidates[s * ng + t][pick[depth]];
            if (++visited > budget.max_enumeration)
                throw budget_exceeded("extension search exceeded budget");
            if (!scalar_ok(depth)) {
                ++pick[depth];
                continue;
            }
            if (depth + 1 < pairs.size()) {
                ++depth;
                continue;
            }
            // complete assignment: build the table and validate the axioms
            std::vector<std::vector<int>> rows(na * ng, std::vector<int>(na * ng));
            auto pr = [ng](int a, int s2) { return a * ng + s2; };
            for (int a = 0; a < na; ++a)
                for (int s2 = 0; s2 < ng; ++s2)
                    for (int b = 0; b < na; ++b)
                        for (int t2 = 0; t2 < ng; ++t2)
                            rows[pr(a, s2)][pr(b, t2)] =
                                pr(A.mul(A.mul(a, f[s2][b]), g[s2 * ng + t2]),
                                   gamma.mul(s2, t2));
            bool is_group = true;
            try {
                FiniteGroup E = make_group(rows);
                Extension e;
                e.na = na;
                e.ng = ng;
                e.E = E;
                Perm im(na), pm(na * ng);
                for (int a = 0; a < na; ++a) im[a] = e.pair(a, 0);
                for (int x = 0; x < na * ng; ++x) pm[x] = e.s_part(x);
                e.iota = make_hom(A, e.E, im);
                e.pi = make_hom(e.E, gamma, pm);
                auto key = oracle_detail::canonical_key(e, gamma, budget);
                if (!classes_by_key.count(key)) {
                    classes_by_key[key] = static_cast<int>(out.classes.size());
                    OracleClass oc;
                    oc.rep = e;
                    oc.rep_data = Cocycle{f, g};
                    oc.split = splits(e, budget).has_value();
                    oc.canonical_key = key;
                    out.classes.push_back(std::move(oc));
                }
            } catch (const error& err) {
                if (std::string(err.code()) == "BudgetExceeded") throw;
                is_group = false;  // not a group law; discard
            }
            (void)is_group;
            ++pick[depth];
        }
    }
    // deterministic order: sort classes by canonical key
    std::sort(out.classes.begin(), out.classes.end(),
              [](const OracleClass& a, const OracleClass& b) {
                  return a.canonical_key < b.canonical_key;
              });
    return out;
}

}  // namespace bandcoh
