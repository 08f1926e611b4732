#pragma once

// Equivariant cohomology of a finite group Gamma: abelian H^n (n <= 3) over
// the normalized bar complex, nonabelian Z^1/H^1, twisting by 1-cocycles, the
// connecting map into H^2 of a central subgroup, and torsor translation.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "group.hpp"
#include "modlin.hpp"

namespace bandcoh {

/// A finite group with a Gamma-action by automorphisms (left action).
struct GammaGroup {
    FiniteGroup gamma;
    FiniteGroup carrier;
    std::vector<Perm> action;  // per gamma element, automorphism table of carrier

    int act(int s, int x) const { return action[s][x]; }
};

/// Same data with an abelian carrier.
struct GammaModule : GammaGroup {};

inline void validate_action(const FiniteGroup& gamma, const FiniteGroup& carrier,
                            const std::vector<Perm>& action) {
    if (static_cast<int>(action.size()) != gamma.order())
        throw not_homomorphism("action has wrong length");
    if (action[0] != identity_perm(carrier.order()))
        throw not_homomorphism("action of identity is not the identity");
    for (int s = 0; s < gamma.order(); ++s) {
        if (!is_bijection(action[s], carrier.order()) || !is_hom_table(carrier, carrier, action[s]))
            throw not_homomorphism("action of " + std::to_string(s) + " is not an automorphism");
        for (int t = 0; t < gamma.order(); ++t)
            if (compose(action[s], action[t]) != action[gamma.mul(s, t)])
                throw not_homomorphism("action(" + std::to_string(s) + ")action(" +
                                       std::to_string(t) + ") != action(" + std::to_string(s) +
                                       "*" + std::to_string(t) + ")");
    }
}

inline GammaGroup make_gamma_group(FiniteGroup gamma, FiniteGroup carrier,
                                   std::vector<Perm> action) {
    validate_action(gamma, carrier, action);
    return GammaGroup{std::move(gamma), std::move(carrier), std::move(action)};
}

inline GammaModule make_gamma_module(FiniteGroup gamma, FiniteGroup carrier,
                                     std::vector<Perm> action) {
    if (!carrier.abelian()) throw not_homomorphism("module carrier must be abelian");
    validate_action(gamma, carrier, action);
    GammaModule m;
    m.gamma = std::move(gamma);
    m.carrier = std::move(carrier);
    m.action = std::move(action);
    return m;
}

inline GammaGroup trivial_action_group(const FiniteGroup& gamma, const FiniteGroup& carrier) {
    return GammaGroup{gamma, carrier,
                      std::vector<Perm>(gamma.order(), identity_perm(carrier.order()))};
}

/// Elements of the carrier fixed by every action map.
inline std::vector<int> fixed_points(const GammaGroup& M) {
    std::vector<int> out;
    for (int x = 0; x < M.carrier.order(); ++x) {
        bool fixed = true;
        for (int s = 1; s < M.gamma.order() && fixed; ++s) fixed = M.act(s, x) == x;
        if (fixed) out.push_back(x);
    }
    return out;
}

/// Quotient Gamma-group by an action-stable normal subgroup (given by members).
inline std::pair<GammaGroup, GroupHom> quotient_gamma_group(const GammaGroup& M,
                                                            const std::vector<int>& members) {
    Subgroup N{M.carrier, members};
    for (int s = 0; s < M.gamma.order(); ++s)
        for (int x : members)
            if (!N.contains(M.act(s, x)))
                throw not_normal("subgroup is not stable under the Gamma-action");
    auto [Q, proj] = quotient(M.carrier, N);
    std::vector<Perm> qact(M.gamma.order(), Perm(Q.order(), -1));
    for (int s = 0; s < M.gamma.order(); ++s)
        for (int x = 0; x < M.carrier.order(); ++x) qact[s][proj.map[x]] = proj.map[M.act(s, x)];
    GammaGroup MQ{M.gamma, Q, qact};
    validate_action(MQ.gamma, MQ.carrier, MQ.action);
    return {MQ, proj};
}

/// Gamma-group structure on an action-stable subgroup, in subgroup labels.
inline std::pair<GammaGroup, GroupHom> sub_gamma_group(const GammaGroup& M,
                                                       const std::vector<int>& members) {
    Subgroup S{M.carrier, members};
    auto [H, incl] = subgroup_as_group(S);
    std::vector<Perm> act(M.gamma.order());
    for (int s = 0; s < M.gamma.order(); ++s) act[s] = restrict_to_subgroup(S, M.action[s]);
    GammaGroup MS{M.gamma, H, act};
    validate_action(MS.gamma, MS.carrier, MS.action);
    return {MS, incl};
}

// -- normalized bar complex ----------------------------------------------------

/// Normalized cochain: one carrier element per nondegenerate argument tuple.
struct AbelianCochain {
    int degree = 0;
    std::vector<int> values;

    bool operator==(const AbelianCochain& o) const {
        return degree == o.degree && values == o.values;
    }
    bool operator<(const AbelianCochain& o) const { return values < o.values; }
};

/// Bar-resolution cohomology of a GammaModule for degrees 0..3.
///
/// Cocycle and coboundary spaces are handled per prime through LocalSmith;
/// nothing here enumerates a full cochain space. Explicit sets (coboundary
/// spaces for canonical representatives) are materialized only under budget.
class BarComplex {
public:
    explicit BarComplex(GammaModule m, Budget budget = default_budget())
        : M_(std::move(m)), basis_(AbelianBasis::build(M_.carrier)), budget_(budget) {
        ng_ = M_.gamma.order();
        nfree_ = ng_ - 1;
    }

    const GammaModule& module() const { return M_; }
    const AbelianBasis& basis() const { return basis_; }

    long long slots(int n) const {
        long long r = 1;
        for (int i = 0; i < n; ++i) r *= nfree_;
        return r;
    }

    // slot <-> argument tuple (entries are gamma elements, never the identity)
    std::vector<int> tuple_of(int n, long long slot) const {
        std::vector<int> t(n);
        for (int i = 0; i < n; ++i) {
            t[i] = static_cast<int>(slot % nfree_) + 1;
            slot /= nfree_;
        }
        return t;
    }
    long long slot_of(const std::vector<int>& t) const {
        long long s = 0;
        for (int i = static_cast<int>(t.size()) - 1; i >= 0; --i) s = s * nfree_ + (t[i] - 1);
        return s;
    }

    AbelianCochain zero(int n) const { return AbelianCochain{n, std::vector<int>(slots(n), 0)}; }

    /// cochain value at an arbitrary tuple; identity if any argument is 1
    int value_at(const AbelianCochain& c, const std::vector<int>& args) const {
        for (int a : args)
            if (a == 0) return 0;
        if (args.empty()) return c.values[0];
        return c.values[slot_of(args)];
    }

    AbelianCochain add(const AbelianCochain& a, const AbelianCochain& b) const {
        AbelianCochain r = a;
        for (size_t i = 0; i < r.values.size(); ++i)
            r.values[i] = M_.carrier.mul(r.values[i], b.values[i]);
        return r;
    }
    AbelianCochain neg(const AbelianCochain& a) const {
        AbelianCochain r = a;
        for (auto& v : r.values) v = M_.carrier.inv(v);
        return r;
    }

    /// d c, evaluated directly from the standard alternating formula
    AbelianCochain coboundary(const AbelianCochain& c) const {
        const int n = c.degree;
        AbelianCochain out = zero(n + 1);
        for (long long os = 0; os < slots(n + 1); ++os) {
            std::vector<int> t = tuple_of(n + 1, os);
            int v = M_.act(t[0], value_at(c, {t.begin() + 1, t.end()}));
            int sign = -1;
            for (int i = 1; i <= n; ++i) {
                std::vector<int> merged;
                merged.reserve(n);
                for (int j = 0; j < i - 1; ++j) merged.push_back(t[j]);
                merged.push_back(M_.gamma.mul(t[i - 1], t[i]));
                for (int j = i + 1; j <= n; ++j) merged.push_back(t[j]);
                int term = value_at(c, merged);
                v = M_.carrier.mul(v, sign < 0 ? M_.carrier.inv(term) : term);
                sign = -sign;
            }
            int last = value_at(c, {t.begin(), t.end() - 1});
            v = M_.carrier.mul(v, sign < 0 ? M_.carrier.inv(last) : last);
            out.values[os] = v;
        }
        return out;
    }

    bool is_cocycle(const AbelianCochain& c) const {
        auto d = coboundary(c);
        return std::all_of(d.values.begin(), d.values.end(), [](int v) { return v == 0; });
    }

    /// witness x with d x = c, when one exists
    std::optional<AbelianCochain> coboundary_witness(const AbelianCochain& c) const {
        const int n = c.degree;
        if (n == 0) return std::nullopt;
        AbelianCochain x = zero(n - 1);
        for (int p : basis_.primes()) {
            const auto& sys = smith(n - 1, p);
            auto b = to_coords(c, p);
            auto sol = sys.solve(b);
            if (!sol) return std::nullopt;
            add_coords(x, p, *sol);
        }
        if (basis_.primes().empty()) {  // trivial module: only the zero cochain exists
            for (int v : c.values)
                if (v != 0) return std::nullopt;
        }
        return x;
    }

    bool is_coboundary(const AbelianCochain& c) const { return coboundary_witness(c).has_value(); }

    bool class_equal(const AbelianCochain& a, const AbelianCochain& b) const {
        return is_coboundary(add(a, neg(b)));
    }

    struct Hn {
        long long order = 1;
        std::vector<AbelianCochain> representatives;  // canonical, index = class id
        // per prime: every cocycle coordinate vector -> per-prime class id,
        // and the map from per-prime class tuples to the class index
        std::vector<std::map<ModVec, int>> lookup;
        std::map<std::vector<int>, int> by_prime_classes;
    };

    /// |H^n| without enumerating any cochain space
    long long h_order(int n) const {
        long long lg = 1;
        for (int p : basis_.primes()) {
            int zl = kernel_log(n, p);
            int bl = image_log(n, p);
            for (int i = 0; i < zl - bl; ++i) {
                lg *= p;
                if (lg > (1LL << 62) / 2) throw budget_exceeded("H^n order overflows");
            }
        }
        return lg;
    }

    /// full class list with canonical representatives (budget-guarded)
    const Hn& h(int n) const {
        auto it = hn_.find(n);
        if (it != hn_.end()) return it->second;
        Hn result;
        result.order = h_order(n);

        // per-prime class representatives via coset search inside ker d_n
        std::vector<std::vector<ModVec>> prime_reps;   // [prime][class] coord vectors
        std::vector<std::vector<ModVec>> prime_bsets;  // materialized coboundary sets
        for (int p : basis_.primes()) {
            auto [reps, bset, lut] = prime_classes(n, p);
            prime_reps.push_back(std::move(reps));
            prime_bsets.push_back(std::move(bset));
            result.lookup.push_back(std::move(lut));
        }
        // combine primes: every tuple of per-prime classes is one class
        std::vector<size_t> idx(prime_reps.size(), 0);
        std::vector<std::pair<AbelianCochain, std::vector<int>>> combined;
        while (true) {
            AbelianCochain rep = zero(n);
            std::vector<int> prime_ids(prime_reps.size());
            for (size_t q = 0; q < prime_reps.size(); ++q) {
                add_coords(rep, basis_.primes()[q], prime_reps[q][idx[q]]);
                prime_ids[q] = static_cast<int>(idx[q]);
            }
            combined.emplace_back(canonicalize(rep, prime_bsets), std::move(prime_ids));
            size_t q = 0;
            for (; q < prime_reps.size(); ++q) {
                if (++idx[q] < prime_reps[q].size()) break;
                idx[q] = 0;
            }
            if (q == prime_reps.size()) break;
        }
        std::sort(combined.begin(), combined.end());
        for (size_t i = 0; i < combined.size(); ++i) {
            result.representatives.push_back(combined[i].first);
            result.by_prime_classes[combined[i].second] = static_cast<int>(i);
        }
        if (static_cast<long long>(result.representatives.size()) != result.order)
            throw error("Internal", "class enumeration disagrees with computed |H^n|");
        return hn_.emplace(n, std::move(result)).first->second;
    }

    /// class index of a cocycle within h(n), by per-prime table lookup
    int class_of(const AbelianCochain& c) const {
        if (!is_cocycle(c)) throw not_cocycle("class_of applied to a non-cocycle");
        const Hn& H = h(c.degree);
        std::vector<int> prime_ids(basis_.primes().size());
        for (size_t q = 0; q < basis_.primes().size(); ++q) {
            auto it = H.lookup[q].find(to_coords(c, basis_.primes()[q]));
            if (it == H.lookup[q].end())
                throw error("Internal", "cocycle missing from the class table");
            prime_ids[q] = it->second;
        }
        auto it = H.by_prime_classes.find(prime_ids);
        if (it == H.by_prime_classes.end())
            throw error("Internal", "class tuple missing from the index");
        return it->second;
    }

private:
    // coordinates of a cochain restricted to the p-part, slot-major
    ModVec to_coords(const AbelianCochain& c, int p) const {
        const auto& fs = basis_.factors_of(p);
        ModVec v(c.values.size() * fs.size());
        for (size_t s = 0; s < c.values.size(); ++s) {
            const auto& co = basis_.coords(c.values[s]);
            for (size_t f = 0; f < fs.size(); ++f) v[s * fs.size() + f] = co[fs[f]];
        }
        return v;
    }
    // add a p-part coordinate vector into an element cochain
    void add_coords(AbelianCochain& c, int p, const ModVec& v) const {
        const auto& fs = basis_.factors_of(p);
        std::vector<int> co(basis_.factor_count(), 0);
        for (size_t s = 0; s < c.values.size(); ++s) {
            std::fill(co.begin(), co.end(), 0);
            for (size_t f = 0; f < fs.size(); ++f)
                co[fs[f]] = static_cast<int>(v[s * fs.size() + f]);
            c.values[s] = M_.carrier.mul(c.values[s], basis_.element(co));
        }
    }

    // integer matrix of d_n on the p-part, rows: slots(n+1) x k, cols: slots(n) x k
    const LocalSmith& smith(int n, int p) const {
        auto key = std::make_pair(n, p);
        auto it = smith_.find(key);
        if (it != smith_.end()) return *it->second;

        const auto& fs = basis_.factors_of(p);
        const int k = static_cast<int>(fs.size());
        const long long rs = slots(n + 1) * k, cs = slots(n) * k;
        if (rs * cs > budget_.max_enumeration)
            throw budget_exceeded("coboundary matrix too large");
        ModMat A(rs, ModVec(cs, 0));

        // action matrices on the p-part
        std::vector<ModMat> act(ng_);
        for (int s = 0; s < ng_; ++s) {
            act[s].assign(k, ModVec(k, 0));
            for (int j = 0; j < k; ++j) {
                const auto& co = basis_.coords(M_.act(s, basis_.factors()[fs[j]].gen));
                for (int i = 0; i < k; ++i) act[s][i][j] = co[fs[i]];
            }
        }
        auto add_block = [&](long long orow, long long ocol, const ModMat* mat, int sign) {
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) {
                    int64_t v = mat ? (*mat)[i][j] : (i == j ? 1 : 0);
                    A[orow * k + i][ocol * k + j] += sign * v;
                }
        };
        for (long long os = 0; os < slots(n + 1); ++os) {
            std::vector<int> t = tuple_of(n + 1, os);
            if (n == 0) {
                add_block(os, 0, &act[t[0]], +1);
                add_block(os, 0, nullptr, -1);
                continue;
            }
            add_block(os, slot_of({t.begin() + 1, t.end()}), &act[t[0]], +1);
            int sign = -1;
            for (int i = 1; i <= n; ++i) {
                int prod = M_.gamma.mul(t[i - 1], t[i]);
                if (prod != 0) {
                    std::vector<int> merged;
                    for (int j = 0; j < i - 1; ++j) merged.push_back(t[j]);
                    merged.push_back(prod);
                    for (int j = i + 1; j <= n; ++j) merged.push_back(t[j]);
                    add_block(os, slot_of(merged), nullptr, sign);
                }
                sign = -sign;
            }
            add_block(os, slot_of({t.begin(), t.end() - 1}), nullptr, sign);
        }

        std::vector<int> row_exp(rs), col_exp(cs);
        for (long long s = 0; s < slots(n + 1); ++s)
            for (int f = 0; f < k; ++f) row_exp[s * k + f] = basis_.factors()[fs[f]].exp;
        for (long long s = 0; s < slots(n); ++s)
            for (int f = 0; f < k; ++f) col_exp[s * k + f] = basis_.factors()[fs[f]].exp;

        auto owned = std::make_unique<LocalSmith>(p, basis_.max_exp(p), A, row_exp, col_exp);
        return *smith_.emplace(key, std::move(owned)).first->second;
    }

    int kernel_log(int n, int p) const { return smith(n, p).kernel_log_size(); }
    int image_log(int n, int p) const {  // log_p |B^n| = log|C^{n-1}| - log|Z^{n-1}|
        if (n == 0) return 0;
        const auto& fs = basis_.factors_of(p);
        int dom = 0;
        for (long long s = 0; s < slots(n - 1); ++s)
            for (int f : fs) dom += basis_.factors()[f].exp;
        return dom - kernel_log(n - 1, p);
    }

    // per-prime representatives of ker/im, the materialized im-set, and the
    // full map cocycle -> class id
    std::tuple<std::vector<ModVec>, std::vector<ModVec>, std::map<ModVec, int>> prime_classes(
        int n, int p) const {
        const auto& fs = basis_.factors_of(p);
        const int k = static_cast<int>(fs.size());
        std::vector<int64_t> moduli(slots(n) * k);
        for (long long s = 0; s < slots(n); ++s)
            for (int f = 0; f < k; ++f) {
                int64_t m = 1;
                for (int i = 0; i < basis_.factors()[fs[f]].exp; ++i) m *= p;
                moduli[s * k + f] = m;
            }
        // coboundary set
        std::vector<ModVec> bgens;
        if (n > 0) {
            // d_{n-1} applied to each basis cochain of C^{n-1}
            for (long long s = 0; s < slots(n - 1); ++s)
                for (int f = 0; f < k; ++f) {
                    AbelianCochain e = zero(n - 1);
                    std::vector<int> co(basis_.factor_count(), 0);
                    co[fs[f]] = 1;
                    e.values[s] = basis_.element(co);
                    bgens.push_back(to_coords(coboundary(e), p));
                }
        }
        auto bset = span_subgroup(bgens, moduli, budget_.max_materialized);

        // materialize the cocycle set and partition it into cosets of the
        // coboundary set; the least member of each coset is its representative
        auto zgens = smith(n, p).kernel_generators();
        auto zset = span_subgroup(zgens, moduli, budget_.max_materialized);
        std::map<ModVec, int> lut;
        std::vector<ModVec> reps;
        for (const auto& z : zset) {
            if (lut.count(z)) continue;
            int cls = static_cast<int>(reps.size());
            ModVec least = z;
            std::vector<ModVec> coset;
            coset.reserve(bset.size());
            for (const auto& b : bset) {
                ModVec y(z.size());
                for (size_t j = 0; j < z.size(); ++j) y[j] = (z[j] + b[j]) % moduli[j];
                if (y < least) least = y;
                coset.push_back(std::move(y));
            }
            for (auto& y : coset) lut.emplace(std::move(y), cls);
            reps.push_back(std::move(least));
        }
        // renumber so class ids follow the sorted representative order
        std::vector<int> order(reps.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return reps[a] < reps[b]; });
        std::vector<int> rank(reps.size());
        for (size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
        std::vector<ModVec> sorted_reps(reps.size());
        for (size_t i = 0; i < reps.size(); ++i) sorted_reps[rank[i]] = reps[i];
        for (auto& kv : lut) kv.second = rank[kv.second];
        return {sorted_reps, bset, lut};
    }

    // global least-lex member of the class of rep (element-index order), when
    // the full coboundary set fits the budget; otherwise rep is already the
    // per-prime canonical choice and is returned unchanged
    AbelianCochain canonicalize(const AbelianCochain& rep,
                                const std::vector<std::vector<ModVec>>& prime_bsets) const {
        long long total = 1;
        for (const auto& bs : prime_bsets) {
            total *= static_cast<long long>(bs.size());
            if (total > budget_.max_materialized) return rep;
        }
        AbelianCochain best = rep;
        std::vector<size_t> idx(prime_bsets.size(), 0);
        while (true) {
            AbelianCochain cand = rep;
            for (size_t q = 0; q < prime_bsets.size(); ++q)
                add_coords(cand, basis_.primes()[q], prime_bsets[q][idx[q]]);
            if (cand.values < best.values) best = cand;
            size_t q = 0;
            for (; q < prime_bsets.size(); ++q) {
                if (++idx[q] < prime_bsets[q].size()) break;
                idx[q] = 0;
            }
            if (q == prime_bsets.size()) break;
        }
        return best;
    }

    GammaModule M_;
    AbelianBasis basis_;
    Budget budget_;
    int ng_, nfree_;
    // lazily filled caches; the complex is logically immutable but not
    // safe for concurrent first use from multiple threads
    mutable std::map<std::pair<int, int>, std::unique_ptr<LocalSmith>> smith_;
    mutable std::map<int, Hn> hn_;
};

/// Bundled result of the H^n computation for a module.
struct HnResult {
    long long order;
    std::vector<AbelianCochain> representatives;
    std::shared_ptr<BarComplex> complex;

    int class_of(const AbelianCochain& c) const { return complex->class_of(c); }
};

inline HnResult h_n(const GammaModule& M, int n, const Budget& budget = default_budget()) {
    if (n < 0 || n > 3) throw error("Internal", "h_n supports degrees 0..3");
    auto cx = std::make_shared<BarComplex>(M, budget);
    const auto& H = cx->h(n);
    return HnResult{H.order, H.representatives, cx};
}

// -- nonabelian degree one ------------------------------------------------------

/// A map Gamma -> carrier with a_{st} = a_s * (s . a_t); a_1 = identity.
struct NonabelianOneCocycle {
    std::vector<int> values;  // indexed by gamma element

    bool operator==(const NonabelianOneCocycle& o) const { return values == o.values; }
    bool operator<(const NonabelianOneCocycle& o) const { return values < o.values; }
};

inline bool is_one_cocycle(const GammaGroup& M, const std::vector<int>& a) {
    if (static_cast<int>(a.size()) != M.gamma.order() || a[0] != 0) return false;
    for (int s = 0; s < M.gamma.order(); ++s)
        for (int t = 0; t < M.gamma.order(); ++t)
            if (a[M.gamma.mul(s, t)] != M.carrier.mul(a[s], M.act(s, a[t]))) return false;
    return true;
}

/// All 1-cocycles, by choosing generator values and propagating along words.
inline std::vector<NonabelianOneCocycle> z1_nonabelian(const GammaGroup& M,
                                                       const Budget& budget = default_budget()) {
    const auto gens = small_generating_set(M.gamma);
    const auto words = generator_words(M.gamma, gens);
    std::vector<NonabelianOneCocycle> out;
    if (gens.empty()) {
        out.push_back(NonabelianOneCocycle{{0}});
        return out;
    }
    long long space = 1;
    for (size_t i = 0; i < gens.size(); ++i) {
        space *= M.carrier.order();
        if (space > budget.max_enumeration) throw budget_exceeded("Z^1 space exceeds budget");
    }
    std::vector<int> choice(gens.size(), 0);
    while (true) {
        std::vector<int> a(M.gamma.order(), -1);
        a[0] = 0;
        for (size_t i = 1; i < words.order.size(); ++i) {
            int x = words.order[i];
            int p = words.parent[x];
            a[x] = M.carrier.mul(a[p], M.act(p, choice[words.via_gen[x]]));
        }
        if (is_one_cocycle(M, a)) out.push_back(NonabelianOneCocycle{a});
        size_t i = 0;
        for (; i < gens.size(); ++i) {
            if (++choice[i] < M.carrier.order()) break;
            choice[i] = 0;
        }
        if (i == gens.size()) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// H^1 classes: orbits of Z^1 under a_s -> m^-1 a_s (s.m), least-lex reps.
struct H1Result {
    std::vector<NonabelianOneCocycle> cocycles;  // all of Z^1, sorted
    std::vector<int> class_of;                   // parallel to cocycles
    std::vector<NonabelianOneCocycle> reps;      // canonical rep per class

    int class_index(const NonabelianOneCocycle& c) const {
        auto it = std::lower_bound(cocycles.begin(), cocycles.end(), c);
        if (it == cocycles.end() || !(*it == c)) throw not_cocycle("not a 1-cocycle of this group");
        return class_of[it - cocycles.begin()];
    }
};

inline H1Result h1_nonabelian(const GammaGroup& M, const Budget& budget = default_budget()) {
    H1Result r;
    r.cocycles = z1_nonabelian(M, budget);
    r.class_of.assign(r.cocycles.size(), -1);
    auto find = [&](const NonabelianOneCocycle& c) {
        auto it = std::lower_bound(r.cocycles.begin(), r.cocycles.end(), c);
        return static_cast<int>(it - r.cocycles.begin());
    };
    for (size_t i = 0; i < r.cocycles.size(); ++i) {
        if (r.class_of[i] >= 0) continue;
        int cls = static_cast<int>(r.reps.size());
        NonabelianOneCocycle best = r.cocycles[i];
        for (int m = 0; m < M.carrier.order(); ++m) {
            NonabelianOneCocycle tw;
            tw.values.resize(M.gamma.order());
            for (int s = 0; s < M.gamma.order(); ++s)
                tw.values[s] =
                    M.carrier.mul(M.carrier.mul(M.carrier.inv(m), r.cocycles[i].values[s]),
                                  M.act(s, m));
            int j = find(tw);
            r.class_of[j] = cls;
            if (tw < best) best = tw;
        }
        r.reps.push_back(best);
    }
    return r;
}

// -- twisting -------------------------------------------------------------------

/// Twist the action by a cocycle valued in Aut(carrier): new action
/// s -> a_s o old_s. The cocycle condition a_{st} = a_s o (old_s a_t old_s^-1)
/// makes the result homomorphic; both are verified.
inline GammaGroup twist_gamma_group(const GammaGroup& M, const std::vector<Perm>& a) {
    if (static_cast<int>(a.size()) != M.gamma.order())
        throw not_cocycle("twisting cocycle has wrong length");
    const int n = M.carrier.order();
    if (a[0] != identity_perm(n)) throw not_cocycle("twisting cocycle is not normalized");
    for (const Perm& f : a)
        if (!is_bijection(f, n) || !is_hom_table(M.carrier, M.carrier, f))
            throw not_cocycle("twisting value is not an automorphism");
    for (int s = 0; s < M.gamma.order(); ++s)
        for (int t = 0; t < M.gamma.order(); ++t) {
            Perm conj = compose(M.action[s], compose(a[t], inverse_perm(M.action[s])));
            if (a[M.gamma.mul(s, t)] != compose(a[s], conj))
                throw not_cocycle("twisting values fail the cocycle identity at (" +
                                  std::to_string(s) + "," + std::to_string(t) + ")");
        }
    std::vector<Perm> twisted(M.gamma.order());
    for (int s = 0; s < M.gamma.order(); ++s) twisted[s] = compose(a[s], M.action[s]);
    return make_gamma_group(M.gamma, M.carrier, twisted);
}

/// Twist by a 1-cocycle of carrier elements acting by conjugation.
inline GammaGroup twist_by_inner(const GammaGroup& M, const std::vector<int>& a) {
    std::vector<Perm> perms(M.gamma.order());
    for (int s = 0; s < M.gamma.order(); ++s)
        perms[s] = inner_automorphism_table(M.carrier, a[s]);
    return twist_gamma_group(M, perms);
}

// -- connecting map and translation ----------------------------------------------

/// Context for a central, action-stable subgroup Z of a Gamma-group M.
struct CentralQuotient {
    GammaGroup M;
    std::vector<int> z_members;
    GammaGroup Q;          // M / Z
    GroupHom proj;         // carrier -> Q carrier
    GammaModule z_module;  // Z in its own labels
    GroupHom z_incl;

    static CentralQuotient build(const GammaGroup& M, const std::vector<int>& z_members) {
        Subgroup Z{M.carrier, z_members};
        for (int z : z_members)
            for (int x = 0; x < M.carrier.order(); ++x)
                if (M.carrier.mul(z, x) != M.carrier.mul(x, z))
                    throw not_normal("subgroup is not central");
        CentralQuotient c;
        c.M = M;
        c.z_members = z_members;
        auto [Q, proj] = quotient_gamma_group(M, z_members);
        c.Q = std::move(Q);
        c.proj = std::move(proj);
        auto [zg, incl] = sub_gamma_group(M, z_members);
        GammaModule zm;
        zm.gamma = zg.gamma;
        zm.carrier = zg.carrier;
        zm.action = zg.action;
        if (!zm.carrier.abelian()) throw not_normal("central subgroup must be abelian");
        c.z_module = std::move(zm);
        c.z_incl = std::move(incl);
        return c;
    }

    int z_label(int parent_elem) const {
        for (size_t i = 0; i < z_members.size(); ++i)
            if (z_members[i] == parent_elem) return static_cast<int>(i);
        throw error("Internal", "element not in central subgroup");
    }
};

/// The 2-cocycle delta(c) of Z measuring the lift defect of a 1-cocycle of M/Z.
/// Any set-lift gives the same class; `lift_greatest` selects an alternative
/// lift so callers can assert that independence.
inline AbelianCochain connecting_delta_cochain(const CentralQuotient& cq,
                                               const NonabelianOneCocycle& cbar,
                                               bool lift_greatest = false) {
    const auto& M = cq.M;
    if (!is_one_cocycle(cq.Q, cbar.values)) throw not_cocycle("input is not a 1-cocycle of M/Z");
    const int ng = M.gamma.order();
    std::vector<int> lift(ng, -1);
    for (int s = 0; s < ng; ++s) {
        for (int x = 0; x < M.carrier.order(); ++x)
            if (cq.proj.map[x] == cbar.values[s]) {
                lift[s] = x;
                if (!lift_greatest) break;
            }
    }
    lift[0] = 0;
    const int nfree = ng - 1;
    AbelianCochain out{2, std::vector<int>(static_cast<size_t>(nfree) * nfree, 0)};
    for (int s = 1; s < ng; ++s)
        for (int t = 1; t < ng; ++t) {
            int v = M.carrier.mul(M.carrier.mul(lift[s], M.act(s, lift[t])),
                                  M.carrier.inv(lift[M.gamma.mul(s, t)]));
            out.values[(s - 1) + (t - 1) * nfree] = cq.z_label(v);
        }
    return out;
}

/// Translation by a 1-cocycle P of Q = M/Z: the twisted quotient group and the
/// translated cocycle s -> c_s * P_s^-1, which is a cocycle of the twist.
struct TauResult {
    GammaGroup twisted_q;
    NonabelianOneCocycle translated;
};

inline TauResult tau_translation(const CentralQuotient& cq, const NonabelianOneCocycle& P,
                                 const NonabelianOneCocycle& x) {
    if (!is_one_cocycle(cq.Q, P.values)) throw not_cocycle("P is not a 1-cocycle of M/Z");
    if (!is_one_cocycle(cq.Q, x.values)) throw not_cocycle("x is not a 1-cocycle of M/Z");
    TauResult r;
    r.twisted_q = twist_by_inner(cq.Q, P.values);
    r.translated.values.resize(cq.Q.gamma.order());
    for (int s = 0; s < cq.Q.gamma.order(); ++s)
        r.translated.values[s] = cq.Q.carrier.mul(x.values[s], cq.Q.carrier.inv(P.values[s]));
    if (!is_one_cocycle(r.twisted_q, r.translated.values))
        throw error("Internal", "translated cochain is not a cocycle of the twist");
    return r;
}

}  // namespace bandcoh
