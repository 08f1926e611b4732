#pragma once

// Constructions of standard small groups and the named catalog (complete up to
// isomorphism for orders 1..15) that drives sweeps. Order 16 is derived from
// the extension machinery in io.hpp rather than hardcoded here.

#include <string>
#include <vector>

#include "errors.hpp"
#include "group.hpp"

namespace bandcoh {

inline FiniteGroup cyclic(int n) {
    std::vector<std::vector<int>> rows(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rows[i][j] = (i + j) % n;
    return make_group(rows);
}

inline FiniteGroup direct_product(const FiniteGroup& G, const FiniteGroup& H) {
    const int ng = G.order(), nh = H.order();
    auto id = [nh](int g, int h) { return g * nh + h; };
    std::vector<std::vector<int>> rows(ng * nh, std::vector<int>(ng * nh));
    for (int a = 0; a < ng; ++a)
        for (int b = 0; b < nh; ++b)
            for (int c = 0; c < ng; ++c)
                for (int d = 0; d < nh; ++d) rows[id(a, b)][id(c, d)] = id(G.mul(a, c), H.mul(b, d));
    return make_group(rows);
}

/// r^a s^b with s r s = r^-1; index = a + n*b. Order 2n.
inline FiniteGroup dihedral(int n) {
    auto id = [n](int a, int b) { return a + n * b; };
    std::vector<std::vector<int>> rows(2 * n, std::vector<int>(2 * n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < 2; ++d) {
                    int i = b ? (a - c + n) % n : (a + c) % n;
                    rows[id(a, b)][id(c, d)] = id(i, b ^ d);
                }
    return make_group(rows);
}

/// a^i b^j with a^{2m}=1, b^2=a^m, b a b^-1 = a^-1; index = i + 2m*j. Order 4m.
inline FiniteGroup dicyclic(int m) {
    const int n = 2 * m;
    auto id = [n](int i, int j) { return i + n * j; };
    std::vector<std::vector<int>> rows(2 * n, std::vector<int>(2 * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < 2; ++l) {
                    int exp, flip;
                    if (j == 0) {
                        exp = (i + k) % n;
                        flip = l;
                    } else if (l == 0) {
                        exp = (i - k + n) % n;
                        flip = 1;
                    } else {
                        exp = (i - k + m + 2 * n) % n;
                        flip = 0;
                    }
                    rows[id(i, j)][id(k, l)] = id(exp, flip);
                }
    return make_group(rows);
}

inline FiniteGroup klein4() { return direct_product(cyclic(2), cyclic(2)); }
inline FiniteGroup s3() { return dihedral(3); }
inline FiniteGroup d4() { return dihedral(4); }
inline FiniteGroup q8() { return dicyclic(2); }

/// Closure of permutation generators (one-line notation, 0-based) into a
/// multiplication table; the identity permutation becomes element 0.
inline FiniteGroup group_from_permutations(int degree, const std::vector<Perm>& gens,
                                           int max_order = 4096) {
    for (const Perm& g : gens)
        if (!is_bijection(g, degree)) throw parse_error("generator is not a permutation");
    std::vector<Perm> elems = {identity_perm(degree)};
    std::map<Perm, int> index = {{elems[0], 0}};
    for (size_t i = 0; i < elems.size(); ++i) {
        for (const Perm& g : gens) {
            Perm h = compose(elems[i], g);
            if (index.emplace(h, static_cast<int>(elems.size())).second) {
                elems.push_back(h);
                if (static_cast<int>(elems.size()) > max_order)
                    throw budget_exceeded("permutation closure exceeds " +
                                          std::to_string(max_order) + " elements");
            }
        }
    }
    const int n = static_cast<int>(elems.size());
    std::vector<std::vector<int>> rows(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) rows[a][b] = index.at(compose(elems[a], elems[b]));
    return make_group(rows);
}

inline FiniteGroup alternating4() {
    return group_from_permutations(4, {{1, 2, 0, 3}, {1, 0, 3, 2}});
}

struct NamedGroup {
    std::string name;
    FiniteGroup group;
};

/// All groups of the given order up to isomorphism, for 1 <= order <= 15.
inline std::vector<NamedGroup> groups_of_order(int n) {
    switch (n) {
        case 1: return {{"C1", cyclic(1)}};
        case 2: return {{"C2", cyclic(2)}};
        case 3: return {{"C3", cyclic(3)}};
        case 4: return {{"C4", cyclic(4)}, {"C2xC2", klein4()}};
        case 5: return {{"C5", cyclic(5)}};
        case 6: return {{"C6", cyclic(6)}, {"S3", s3()}};
        case 7: return {{"C7", cyclic(7)}};
        case 8:
            return {{"C8", cyclic(8)},
                    {"C4xC2", direct_product(cyclic(4), cyclic(2))},
                    {"C2xC2xC2", direct_product(klein4(), cyclic(2))},
                    {"D4", d4()},
                    {"Q8", q8()}};
        case 9: return {{"C9", cyclic(9)}, {"C3xC3", direct_product(cyclic(3), cyclic(3))}};
        case 10: return {{"C10", cyclic(10)}, {"D5", dihedral(5)}};
        case 11: return {{"C11", cyclic(11)}};
        case 12:
            return {{"C12", cyclic(12)},
                    {"C6xC2", direct_product(cyclic(6), cyclic(2))},
                    {"D6", dihedral(6)},
                    {"A4", alternating4()},
                    {"Dic3", dicyclic(3)}};
        case 13: return {{"C13", cyclic(13)}};
        case 14: return {{"C14", cyclic(14)}, {"D7", dihedral(7)}};
        case 15: return {{"C15", cyclic(15)}};
        default:
            throw budget_exceeded("group catalog covers orders 1..15 (order 16 is derived in io)");
    }
}

inline std::vector<NamedGroup> catalog_upto(int max_order) {
    std::vector<NamedGroup> out;
    for (int n = 1; n <= max_order && n <= 15; ++n)
        for (auto& g : groups_of_order(n)) out.push_back(g);
    return out;
}

}  // namespace bandcoh
