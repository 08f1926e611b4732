#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace bandcoh {

// Element image table of a map between groups (index -> index).
using Perm = std::vector<int>;

/// A finite group given by its full multiplication table.
/// Elements are 0..order-1 and the identity is always element 0.
class FiniteGroup {
public:
    FiniteGroup() : n_(1), mult_(1, 0), inv_(1, 0) {}

    FiniteGroup(int n, std::vector<int> mult, std::vector<int> inv)
        : n_(n), mult_(std::move(mult)), inv_(std::move(inv)) {}

    int order() const { return n_; }
    int mul(int a, int b) const { return mult_[static_cast<size_t>(a) * n_ + b]; }
    int inv(int a) const { return inv_[a]; }
    int identity() const { return 0; }

    int power(int a, long long e) const {
        if (e < 0) return power(inv_[a], -e);
        int r = 0, b = a;
        while (e > 0) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    int element_order(int a) const {
        int r = a, k = 1;
        while (r != 0) {
            r = mul(r, a);
            ++k;
        }
        return k;
    }

    int conj(int a, int x) const { return mul(mul(a, x), inv_[a]); }
    int commutator(int a, int b) const { return mul(mul(a, b), inv_[mul(b, a)]); }

    bool abelian() const {
        for (int a = 0; a < n_; ++a)
            for (int b = a + 1; b < n_; ++b)
                if (mul(a, b) != mul(b, a)) return false;
        return true;
    }

    const std::vector<int>& table() const { return mult_; }

    bool operator==(const FiniteGroup& o) const { return n_ == o.n_ && mult_ == o.mult_; }

private:
    int n_;
    std::vector<int> mult_;  // flattened n x n
    std::vector<int> inv_;
};

/// Validates a raw multiplication table and returns the group.
/// The identity is relabeled to index 0 if it sits elsewhere.
inline FiniteGroup make_group(const std::vector<std::vector<int>>& rows) {
    const int n = static_cast<int>(rows.size());
    if (n < 1) throw no_identity("empty table");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw parse_error("row " + std::to_string(i) + " has length " +
                              std::to_string(rows[i].size()) + ", expected " + std::to_string(n));
        for (int j = 0; j < n; ++j)
            if (rows[i][j] < 0 || rows[i][j] >= n)
                throw parse_error("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") out of range");
    }

    // locate a two-sided identity
    int e = -1;
    for (int c = 0; c < n && e < 0; ++c) {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a) ok = rows[c][a] == a && rows[a][c] == a;
        if (ok) e = c;
    }
    if (e < 0) throw no_identity("no two-sided identity element");

    // relabel so the identity is 0 (swap labels 0 <-> e)
    std::vector<int> lab(n);
    std::iota(lab.begin(), lab.end(), 0);
    std::swap(lab[0], lab[e]);
    std::vector<int> mult(static_cast<size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) mult[static_cast<size_t>(a) * n + b] = lab[rows[lab[a]][lab[b]]];

    auto mul = [&](int a, int b) { return mult[static_cast<size_t>(a) * n + b]; };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (mul(mul(a, b), c) != mul(a, mul(b, c)))
                    throw not_associative("(" + std::to_string(a) + "*" + std::to_string(b) +
                                          ")*" + std::to_string(c) + " != " + std::to_string(a) +
                                          "*(" + std::to_string(b) + "*" + std::to_string(c) + ")");

    std::vector<int> inv(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            if (mul(a, b) == 0 && mul(b, a) == 0) {
                inv[a] = b;
                break;
            }
        if (inv[a] < 0) throw no_inverse("element " + std::to_string(a) + " has no inverse");
    }
    return FiniteGroup(n, std::move(mult), std::move(inv));
}

/// A homomorphism between two concrete groups, stored as an image table.
struct GroupHom {
    FiniteGroup source;
    FiniteGroup target;
    Perm map;

    int operator()(int x) const { return map[x]; }
};

inline bool is_hom_table(const FiniteGroup& G, const FiniteGroup& H, const Perm& f) {
    if (static_cast<int>(f.size()) != G.order()) return false;
    for (int x : f)
        if (x < 0 || x >= H.order()) return false;
    if (f[0] != 0) return false;
    for (int a = 0; a < G.order(); ++a)
        for (int b = 0; b < G.order(); ++b)
            if (f[G.mul(a, b)] != H.mul(f[a], f[b])) return false;
    return true;
}

inline GroupHom make_hom(const FiniteGroup& G, const FiniteGroup& H, Perm f) {
    if (!is_hom_table(G, H, f)) {
        // name the first violating pair for diagnostics
        for (int a = 0; a < G.order(); ++a)
            for (int b = 0; b < G.order(); ++b)
                if (f[G.mul(a, b)] != H.mul(f[a], f[b]))
                    throw not_homomorphism("map(" + std::to_string(a) + "*" + std::to_string(b) +
                                           ") != map(" + std::to_string(a) + ")*map(" +
                                           std::to_string(b) + ")");
        throw not_homomorphism("ill-typed map");
    }
    return GroupHom{G, H, std::move(f)};
}

inline bool is_bijection(const Perm& f, int n) {
    if (static_cast<int>(f.size()) != n) return false;
    std::vector<char> seen(n, 0);
    for (int x : f) {
        if (x < 0 || x >= n || seen[x]) return false;
        seen[x] = 1;
    }
    return true;
}

inline Perm compose(const Perm& f, const Perm& g) {  // (f . g)(x) = f(g(x))
    Perm r(g.size());
    for (size_t i = 0; i < g.size(); ++i) r[i] = f[g[i]];
    return r;
}

inline Perm inverse_perm(const Perm& f) {
    Perm r(f.size());
    for (size_t i = 0; i < f.size(); ++i) r[f[i]] = static_cast<int>(i);
    return r;
}

inline Perm identity_perm(int n) {
    Perm r(n);
    std::iota(r.begin(), r.end(), 0);
    return r;
}

/// A subgroup, stored as the sorted list of member indices of its parent.
struct Subgroup {
    FiniteGroup parent;
    std::vector<int> members;  // sorted, contains 0

    int order() const { return static_cast<int>(members.size()); }
    bool contains(int x) const { return std::binary_search(members.begin(), members.end(), x); }
};

inline Subgroup subgroup_generated(const FiniteGroup& G, const std::vector<int>& gens) {
    std::set<int> got = {0};
    std::vector<int> todo = {0};
    for (int g : gens)
        if (got.insert(g).second) todo.push_back(g);
    while (!todo.empty()) {
        int x = todo.back();
        todo.pop_back();
        for (int g : gens) {
            for (int y : {G.mul(x, g), G.mul(g, x)})
                if (got.insert(y).second) todo.push_back(y);
        }
        if (got.insert(G.inv(x)).second) todo.push_back(G.inv(x));
    }
    return Subgroup{G, std::vector<int>(got.begin(), got.end())};
}

inline bool is_normal(const Subgroup& N) {
    const FiniteGroup& G = N.parent;
    for (int g = 0; g < G.order(); ++g)
        for (int x : N.members)
            if (!N.contains(G.conj(g, x))) return false;
    return true;
}

/// {z in G : zx = xz for all x}
inline Subgroup center(const FiniteGroup& G) {
    std::vector<int> zs;
    for (int z = 0; z < G.order(); ++z) {
        bool central = true;
        for (int x = 0; x < G.order() && central; ++x) central = G.mul(z, x) == G.mul(x, z);
        if (central) zs.push_back(z);
    }
    return Subgroup{G, std::move(zs)};
}

/// Subgroup generated by all commutators; G/result is the maximal abelian quotient.
inline Subgroup derived_subgroup(const FiniteGroup& G) {
    std::vector<int> comms;
    for (int a = 0; a < G.order(); ++a)
        for (int b = 0; b < G.order(); ++b) comms.push_back(G.commutator(a, b));
    return subgroup_generated(G, comms);
}

/// Coset group G/N with cosets labeled by their least member, sorted by that
/// label. Returns the quotient together with the projection homomorphism.
inline std::pair<FiniteGroup, GroupHom> quotient(const FiniteGroup& G, const Subgroup& N) {
    if (!is_normal(N)) throw not_normal("subgroup is not normal in its parent");
    const int n = G.order();
    std::vector<int> coset_of(n, -1);
    std::vector<int> reps;  // least member of each coset, in discovery order = sorted
    for (int x = 0; x < n; ++x) {
        if (coset_of[x] >= 0) continue;
        int c = static_cast<int>(reps.size());
        reps.push_back(x);
        for (int h : N.members) coset_of[G.mul(x, h)] = c;
    }
    const int q = static_cast<int>(reps.size());
    std::vector<std::vector<int>> rows(q, std::vector<int>(q));
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) rows[a][b] = coset_of[G.mul(reps[a], reps[b])];
    FiniteGroup Q = make_group(rows);
    // reps[0] = 0 since the identity coset is found first, so no relabeling happened
    return {Q, GroupHom{G, Q, coset_of}};
}

/// x -> a x a^-1
inline Perm inner_automorphism_table(const FiniteGroup& G, int a) {
    Perm f(G.order());
    for (int x = 0; x < G.order(); ++x) f[x] = G.conj(a, x);
    return f;
}

// -- automorphism machinery ---------------------------------------------------

// BFS word structure: elements factored over a generating sequence, so an
// image tuple for the generators determines a candidate endomorphism in O(n).
struct GenWords {
    std::vector<int> gens;
    std::vector<int> order;    // elements in BFS order, order[0] = 0
    std::vector<int> parent;   // parent[e] and...
    std::vector<int> via_gen;  // ...index into gens with e = parent * gens[via]
};

inline std::vector<int> small_generating_set(const FiniteGroup& G) {
    std::vector<int> gens;
    Subgroup got = subgroup_generated(G, {});
    for (int x = 1; x < G.order(); ++x) {
        if (got.contains(x)) continue;
        gens.push_back(x);
        got = subgroup_generated(G, gens);
        if (got.order() == G.order()) break;
    }
    return gens;
}

inline GenWords generator_words(const FiniteGroup& G, const std::vector<int>& gens) {
    GenWords w;
    w.gens = gens;
    w.parent.assign(G.order(), -1);
    w.via_gen.assign(G.order(), -1);
    std::vector<char> seen(G.order(), 0);
    seen[0] = 1;
    w.order.push_back(0);
    for (size_t i = 0; i < w.order.size(); ++i) {
        int x = w.order[i];
        for (size_t k = 0; k < gens.size(); ++k) {
            int y = G.mul(x, gens[k]);
            if (!seen[y]) {
                seen[y] = 1;
                w.parent[y] = x;
                w.via_gen[y] = static_cast<int>(k);
                w.order.push_back(y);
            }
        }
    }
    return w;
}

// Builds the hom determined by generator images along the BFS words; returns
// the full image table (no validity promised).
inline Perm extend_by_words(const FiniteGroup& G, const FiniteGroup& H, const GenWords& w,
                            const std::vector<int>& images) {
    Perm f(G.order(), -1);
    f[0] = 0;
    for (size_t i = 1; i < w.order.size(); ++i) {
        int x = w.order[i];
        f[x] = H.mul(f[w.parent[x]], images[w.via_gen[x]]);
    }
    return f;
}

namespace detail {

template <typename Fn>
void for_each_isomorphism(const FiniteGroup& G, const FiniteGroup& H, const Budget& budget,
                          Fn&& fn) {
    if (G.order() != H.order()) return;
    auto gens = small_generating_set(G);
    auto words = generator_words(G, gens);
    if (gens.empty()) {  // trivial group
        fn(Perm{0});
        return;
    }
    // candidate images per generator: same element order (cheap fingerprint)
    std::vector<std::vector<int>> cands(gens.size());
    for (size_t k = 0; k < gens.size(); ++k) {
        int ord = G.element_order(gens[k]);
        for (int y = 0; y < H.order(); ++y)
            if (H.element_order(y) == ord) cands[k].push_back(y);
        if (cands[k].empty()) return;
    }
    long long tried = 0;
    std::vector<int> images(gens.size());
    std::vector<size_t> idx(gens.size(), 0);
    size_t depth = 0;
    while (true) {
        if (idx[depth] == cands[depth].size()) {
            if (depth == 0) break;
            idx[depth] = 0;
            ++idx[--depth];
            continue;
        }
        images[depth] = cands[depth][idx[depth]];
        if (++tried > budget.max_aut_candidates)
            throw budget_exceeded("isomorphism search exceeded " +
                                  std::to_string(budget.max_aut_candidates) + " candidates");
        if (depth + 1 < gens.size()) {
            ++depth;
            continue;
        }
        Perm f = extend_by_words(G, H, words, images);
        bool ok = is_bijection(f, H.order());
        for (int a = 0; a < G.order() && ok; ++a)
            for (int b = 0; b < G.order() && ok; ++b) ok = f[G.mul(a, b)] == H.mul(f[a], f[b]);
        if (ok) fn(f);
        ++idx[depth];
    }
}

}  // namespace detail

/// The full automorphism group as image tables, sorted lexicographically
/// (so the identity automorphism comes first).
inline std::vector<Perm> automorphisms(const FiniteGroup& G,
                                       const Budget& budget = default_budget()) {
    std::vector<Perm> out;
    detail::for_each_isomorphism(G, G, budget, [&](const Perm& f) { out.push_back(f); });
    std::sort(out.begin(), out.end());
    return out;
}

struct detail_stop {};

inline std::optional<Perm> find_isomorphism(const FiniteGroup& G, const FiniteGroup& H,
                                            const Budget& budget = default_budget()) {
    // cheap invariant screen before the backtracking search
    if (G.order() != H.order()) return std::nullopt;
    std::map<int, int> og, oh;
    for (int x = 0; x < G.order(); ++x) {
        og[G.element_order(x)]++;
        oh[H.element_order(x)]++;
    }
    if (og != oh) return std::nullopt;
    std::optional<Perm> best;
    try {
        detail::for_each_isomorphism(G, H, budget, [&](const Perm& f) {
            if (!best) best = f;
            throw detail_stop{};
        });
    } catch (const detail_stop&) {
    }
    return best;
}

inline bool isomorphic(const FiniteGroup& G, const FiniteGroup& H,
                       const Budget& budget = default_budget()) {
    return find_isomorphism(G, H, budget).has_value();
}

/// Partition of Aut(G) into Inn(G)-cosets.
struct OuterClasses {
    std::vector<Perm> auts;                 // sorted automorphism list
    std::vector<std::vector<int>> cosets;   // indices into auts, each sorted; coset 0 = Inn
    std::vector<int> coset_of;              // aut index -> coset index
};

inline OuterClasses outer_classes(const FiniteGroup& G, const Budget& budget = default_budget()) {
    OuterClasses oc;
    oc.auts = automorphisms(G, budget);
    std::map<Perm, int> index;
    for (size_t i = 0; i < oc.auts.size(); ++i) index[oc.auts[i]] = static_cast<int>(i);
    std::vector<int> inn;
    {
        std::set<int> got;
        for (int a = 0; a < G.order(); ++a) got.insert(index.at(inner_automorphism_table(G, a)));
        inn.assign(got.begin(), got.end());
    }
    oc.coset_of.assign(oc.auts.size(), -1);
    for (size_t i = 0; i < oc.auts.size(); ++i) {
        if (oc.coset_of[i] >= 0) continue;
        int c = static_cast<int>(oc.cosets.size());
        std::set<int> members;
        for (int j : inn) members.insert(index.at(compose(oc.auts[i], oc.auts[j])));
        // i itself lies in its coset since Inn contains the identity
        oc.cosets.emplace_back(members.begin(), members.end());
        for (int m : oc.cosets.back()) oc.coset_of[m] = c;
    }
    return oc;
}

/// p-group / nilpotency report via the descending central series
/// G = S_0, S_{i+1} = [S_i, G], listed until it stabilizes.
struct NilpotencyData {
    bool is_p_group = false;
    bool is_nilpotent = false;
    std::vector<Subgroup> series;
};

inline bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

inline NilpotencyData nilpotency_data(const FiniteGroup& G, int p) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    NilpotencyData nd;
    int m = G.order();
    while (m % p == 0) m /= p;
    nd.is_p_group = (m == 1);

    Subgroup cur = subgroup_generated(G, [&] {
        std::vector<int> all(G.order());
        std::iota(all.begin(), all.end(), 0);
        return all;
    }());
    nd.series.push_back(cur);
    while (cur.order() > 1) {
        std::vector<int> comms;
        for (int x : cur.members)
            for (int g = 0; g < G.order(); ++g) comms.push_back(G.commutator(x, g));
        Subgroup next = subgroup_generated(G, comms);
        if (next.order() == cur.order()) break;  // stabilized above the identity
        nd.series.push_back(next);
        cur = next;
    }
    nd.is_nilpotent = nd.series.back().order() == 1;
    return nd;
}

/// Group on A x Gamma with (a,s)(b,t) = (a phi_s(b), st); phi must be a
/// homomorphism Gamma -> Aut(A) given by image tables.
inline FiniteGroup semidirect_product(const FiniteGroup& A, const FiniteGroup& Gamma,
                                      const std::vector<Perm>& phi) {
    const int na = A.order(), ns = Gamma.order();
    if (static_cast<int>(phi.size()) != ns) throw not_homomorphism("phi has wrong length");
    for (const Perm& f : phi)
        if (!is_bijection(f, na)) throw not_homomorphism("phi value is not a bijection of A");
    if (phi[0] != identity_perm(na)) throw not_homomorphism("phi(identity) != identity");
    for (int s = 0; s < ns; ++s) {
        if (!is_hom_table(A, A, phi[s])) throw not_homomorphism("phi value is not an automorphism");
        for (int t = 0; t < ns; ++t)
            if (compose(phi[s], phi[t]) != phi[Gamma.mul(s, t)])
                throw not_homomorphism("phi(" + std::to_string(s) + ")phi(" + std::to_string(t) +
                                       ") != phi(" + std::to_string(s) + "*" + std::to_string(t) +
                                       ")");
    }
    auto id = [ns](int a, int s) { return a * ns + s; };
    std::vector<std::vector<int>> rows(static_cast<size_t>(na) * ns,
                                       std::vector<int>(static_cast<size_t>(na) * ns));
    for (int a = 0; a < na; ++a)
        for (int s = 0; s < ns; ++s)
            for (int b = 0; b < na; ++b)
                for (int t = 0; t < ns; ++t)
                    rows[id(a, s)][id(b, t)] = id(A.mul(a, phi[s][b]), Gamma.mul(s, t));
    return make_group(rows);
}

/// Extracts a subgroup as a standalone group (members relabeled 0..k-1 in
/// sorted order) together with the inclusion back into the parent.
inline std::pair<FiniteGroup, GroupHom> subgroup_as_group(const Subgroup& S) {
    const FiniteGroup& G = S.parent;
    std::map<int, int> idx;
    for (size_t i = 0; i < S.members.size(); ++i) idx[S.members[i]] = static_cast<int>(i);
    const int k = S.order();
    std::vector<std::vector<int>> rows(k, std::vector<int>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            int prod = G.mul(S.members[i], S.members[j]);
            auto it = idx.find(prod);
            if (it == idx.end()) throw not_normal("member set is not closed under multiplication");
            rows[i][j] = it->second;
        }
    FiniteGroup H = make_group(rows);
    Perm incl(k);
    for (int i = 0; i < k; ++i) incl[i] = S.members[i];
    return {H, GroupHom{H, G, incl}};
}

/// Restriction of an automorphism of G to an invariant subgroup, expressed in
/// the subgroup's own labels.
inline Perm restrict_to_subgroup(const Subgroup& S, const Perm& f) {
    std::map<int, int> idx;
    for (size_t i = 0; i < S.members.size(); ++i) idx[S.members[i]] = static_cast<int>(i);
    Perm r(S.members.size());
    for (size_t i = 0; i < S.members.size(); ++i) {
        auto it = idx.find(f[S.members[i]]);
        if (it == idx.end()) throw not_homomorphism("subgroup is not invariant under the map");
        r[i] = it->second;
    }
    return r;
}

}  // namespace bandcoh
