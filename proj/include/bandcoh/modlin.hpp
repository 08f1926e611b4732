#pragma once

// Coordinates and linear algebra for finite abelian groups, split by prime.
// Systems over Z/p^e products are solved through a local Smith normal form
// modulo p^E (E = largest exponent in play), which keeps every intermediate
// entry reduced and avoids integer blowup entirely.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "group.hpp"

namespace bandcoh {

struct CyclicFactor {
    int gen;    // element of the ambient group
    int order;  // prime power p^exp
    int prime;
    int exp;
};

/// Cyclic decomposition of an abelian group with coordinate tables both ways.
class AbelianBasis {
public:
    static AbelianBasis build(const FiniteGroup& M);

    const FiniteGroup& group() const { return M_; }
    const std::vector<CyclicFactor>& factors() const { return factors_; }
    int factor_count() const { return static_cast<int>(factors_.size()); }

    const std::vector<int>& coords(int elem) const { return coords_[elem]; }
    int element(const std::vector<int>& c) const {
        int x = 0;
        for (size_t i = 0; i < factors_.size(); ++i)
            x = M_.mul(x, M_.power(factors_[i].gen, ((c[i] % factors_[i].order) + factors_[i].order) %
                                                        factors_[i].order));
        return x;
    }

    /// distinct primes dividing |M|, ascending
    const std::vector<int>& primes() const { return primes_; }
    /// factor indices belonging to prime p
    const std::vector<int>& factors_of(int p) const { return by_prime_.at(p); }
    int max_exp(int p) const { return max_exp_.at(p); }

private:
    FiniteGroup M_;
    std::vector<CyclicFactor> factors_;
    std::vector<std::vector<int>> coords_;
    std::vector<int> primes_;
    std::map<int, std::vector<int>> by_prime_;
    std::map<int, int> max_exp_;
};

namespace detail {

// basis of an abelian p-group given as a member list inside M
inline void p_group_basis(const FiniteGroup& M, std::vector<int> members, int p,
                          std::vector<std::pair<int, int>>& out) {
    if (members.size() <= 1) return;
    Subgroup H{M, members};
    auto [Hg, incl] = subgroup_as_group(H);
    // element of maximal order generates a direct summand
    int g = 0, best = 1;
    for (int x = 0; x < Hg.order(); ++x)
        if (Hg.element_order(x) > best) best = Hg.element_order(x), g = x;
    std::vector<std::pair<int, int>> rest;  // basis of H/<g> in quotient labels
    auto [Q, proj] = quotient(Hg, subgroup_generated(Hg, {g}));
    {
        std::vector<int> qmembers(Q.order());
        std::iota(qmembers.begin(), qmembers.end(), 0);
        std::vector<std::pair<int, int>> qbasis;
        p_group_basis(Q, qmembers, p, qbasis);
        // lift each quotient generator to an element of the same order
        for (auto [qb, qord] : qbasis) {
            int lift = -1;
            for (int x = 0; x < Hg.order(); ++x)
                if (proj.map[x] == qb && Hg.element_order(x) == qord) {
                    lift = x;
                    break;
                }
            if (lift < 0) throw error("Internal", "order-preserving lift missing in p-group basis");
            rest.emplace_back(lift, qord);
        }
    }
    out.emplace_back(incl.map[g], best);
    for (auto [x, ord] : rest) out.emplace_back(incl.map[x], ord);
}

}  // namespace detail

inline AbelianBasis AbelianBasis::build(const FiniteGroup& M) {
    if (!M.abelian()) throw error("Internal", "AbelianBasis requires an abelian group");
    AbelianBasis b;
    b.M_ = M;

    std::set<int> primeset;
    for (int d = 2, n = M.order(); n > 1; ++d)
        while (n % d == 0) {
            primeset.insert(d);
            n /= d;
        }
    b.primes_.assign(primeset.begin(), primeset.end());

    for (int p : b.primes_) {
        std::vector<int> part;
        for (int x = 0; x < M.order(); ++x) {
            int o = M.element_order(x), t = o;
            while (t % p == 0) t /= p;
            if (t == 1) part.push_back(x);  // includes identity (order 1)
        }
        std::vector<std::pair<int, int>> basis;
        detail::p_group_basis(M, part, p, basis);
        for (auto [g, ord] : basis) {
            CyclicFactor f;
            f.gen = g;
            f.order = ord;
            f.prime = p;
            f.exp = 0;
            for (int t = ord; t > 1; t /= p) ++f.exp;
            b.by_prime_[p].push_back(static_cast<int>(b.factors_.size()));
            b.factors_.push_back(f);
            b.max_exp_[p] = std::max(b.max_exp_[p], f.exp);
        }
        if (b.max_exp_.find(p) == b.max_exp_.end()) b.max_exp_[p] = 0;
    }

    // coordinates by full enumeration, with a bijectivity check of the basis
    const int k = b.factor_count();
    b.coords_.assign(M.order(), {});
    std::vector<int> c(k, 0);
    int filled = 0;
    while (true) {
        int x = b.element(c);
        if (!b.coords_[x].empty() && b.coords_[x] != c)
            throw error("Internal", "abelian basis is not independent");
        if (b.coords_[x].empty()) {
            b.coords_[x] = c;
            ++filled;
        }
        int i = 0;
        for (; i < k; ++i) {
            if (++c[i] < b.factors_[i].order) break;
            c[i] = 0;
        }
        if (i == k) break;
    }
    if (filled != M.order()) throw error("Internal", "abelian basis does not span");
    return b;
}

// -- local Smith normal form over Z/p^E ---------------------------------------

using ModVec = std::vector<int64_t>;
using ModMat = std::vector<ModVec>;  // row-major

/// Smith form of a matrix over the chain ring Z/p^E: U*A*V = diag(p^{v_i}).
/// Provides solvability tests, particular solutions and kernel generators for
/// systems whose rows and columns carry individual exponents <= E (rows are
/// scaled by p^{E-row_exp} so everything happens uniformly mod p^E).
class LocalSmith {
public:
    LocalSmith(int p, int E, const ModMat& A, std::vector<int> row_exp, std::vector<int> col_exp)
        : p_(p), E_(E), row_exp_(std::move(row_exp)), col_exp_(std::move(col_exp)) {
        mod_ = 1;
        for (int i = 0; i < E; ++i) mod_ *= p;
        rows_ = static_cast<int>(A.size());
        cols_ = rows_ ? static_cast<int>(A[0].size()) : 0;
        if (cols_ == 0 && !col_exp_.empty()) cols_ = static_cast<int>(col_exp_.size());

        a_ = A;
        for (auto& row : a_)
            for (auto& v : row) v = norm(v);
        // scale row i by p^{E - row_exp[i]}
        for (int i = 0; i < rows_; ++i) {
            int64_t s = pw(E_ - row_exp_[i]);
            for (auto& v : a_[i]) v = norm(v * s);
        }
        u_ = eye(rows_);
        v_ = eye(cols_);
        decompose();
    }

    int rank() const { return rank_; }
    int64_t modulus() const { return mod_; }

    /// all x (each coordinate mod p^{col_exp}) with A x = b (rows mod p^{row_exp})
    std::optional<ModVec> solve(const ModVec& b) const {
        ModVec w(rows_, 0);
        for (int i = 0; i < rows_; ++i) {
            int64_t s = 0;
            for (int j = 0; j < rows_; ++j) s += u_[i][j] * norm(b[j] * pw(E_ - row_exp_[j]));
            w[i] = norm(s);
        }
        ModVec z(cols_, 0);
        for (int i = 0; i < rows_; ++i) {
            if (i < rank_ && i < cols_) {
                if (w[i] % diag_[i] != 0) return std::nullopt;
                z[i] = w[i] / diag_[i];
            } else if (w[i] != 0) {
                return std::nullopt;
            }
        }
        ModVec x(cols_, 0);
        for (int j = 0; j < cols_; ++j) {
            int64_t s = 0;
            for (int i = 0; i < cols_; ++i) s += v_[j][i] * z[i];
            x[j] = norm(s) % pw(col_exp_[j]);
        }
        return x;
    }

    /// generators of the solution set of A x = 0 inside prod Z/p^{col_exp}
    std::vector<ModVec> kernel_generators() const {
        std::vector<ModVec> gens;
        for (int i = 0; i < cols_; ++i) {
            int64_t scale = (i < rank_) ? pw(E_ - val(diag_[i])) : 1;
            ModVec g(cols_, 0);
            bool nonzero = false;
            for (int j = 0; j < cols_; ++j) {
                g[j] = norm(v_[j][i] * scale) % pw(col_exp_[j]);
                nonzero |= g[j] != 0;
            }
            if (nonzero) gens.push_back(std::move(g));
        }
        // lattice generators p^{e_j} e_j are solutions too but already lie in
        // the mod-p^E kernel, hence in the span of the above after reduction
        return gens;
    }

    /// log_p of the number of solutions of A x = 0 inside prod Z/p^{col_exp}
    int kernel_log_size() const {
        // solutions mod p^E: prod_{i<rank} p^{val(diag_i)} * prod_{i>=rank} p^E,
        // then divide by the lattice prod p^{E-col_exp_j}
        int lg = 0;
        for (int i = 0; i < rank_; ++i) lg += val(diag_[i]);
        lg += E_ * (cols_ - rank_);
        for (int j = 0; j < cols_; ++j) lg -= E_ - col_exp_[j];
        return lg;
    }

private:
    int64_t pw(int e) const {
        int64_t r = 1;
        while (e-- > 0) r *= p_;
        return r;
    }
    int64_t norm(int64_t x) const {
        x %= mod_;
        return x < 0 ? x + mod_ : x;
    }
    int val(int64_t x) const {  // p-adic valuation of x mod p^E, E if zero
        if (x == 0) return E_;
        int v = 0;
        while (x % p_ == 0) {
            x /= p_;
            ++v;
        }
        return v;
    }
    int64_t unit_inverse(int64_t u) const {  // inverse of a unit mod p^E
        int64_t r = 1, b = norm(u);
        // Euler: u^(phi-1); phi = p^E - p^(E-1)
        int64_t e = mod_ - mod_ / p_ - 1;
        while (e > 0) {
            if (e & 1) r = norm(r * b);
            b = norm(b * b);
            e >>= 1;
        }
        return r;
    }
    static ModMat eye(int n) {
        ModMat m(n, ModVec(n, 0));
        for (int i = 0; i < n; ++i) m[i][i] = 1;
        return m;
    }

    void decompose() {
        int k = 0;
        const int lim = std::min(rows_, cols_);
        while (k < lim) {
            // pivot: first entry of minimal valuation in the remaining block
            int bi = -1, bj = -1, bv = E_;
            for (int i = k; i < rows_; ++i)
                for (int j = k; j < cols_; ++j) {
                    int v = val(a_[i][j]);
                    if (v < bv) {
                        bv = v;
                        bi = i;
                        bj = j;
                    }
                }
            if (bi < 0) break;  // all zero
            if (bi != k) {
                std::swap(a_[bi], a_[k]);
                std::swap(u_[bi], u_[k]);
            }
            if (bj != k)
                for (int i = 0; i < rows_; ++i) std::swap(a_[i][bj], a_[i][k]);
            if (bj != k)
                for (int i = 0; i < cols_; ++i) std::swap(v_[i][bj], v_[i][k]);
            // normalize pivot to p^bv (divide column by its unit part)
            int64_t unit = a_[k][k] / pw(bv);
            int64_t ui = unit_inverse(unit);
            for (int i = 0; i < rows_; ++i) a_[i][k] = norm(a_[i][k] * ui);
            for (int i = 0; i < cols_; ++i) v_[i][k] = norm(v_[i][k] * ui);
            int64_t piv = a_[k][k];
            // clear the column; every other entry has valuation >= bv, so the
            // division by the pivot p^bv is exact
            for (int i = 0; i < rows_; ++i) {
                if (i == k || a_[i][k] == 0) continue;
                int64_t c = a_[i][k] / piv;
                for (int j = 0; j < cols_; ++j) a_[i][j] = norm(a_[i][j] - c * a_[k][j]);
                for (int j = 0; j < rows_; ++j) u_[i][j] = norm(u_[i][j] - c * u_[k][j]);
            }
            // clear the row
            for (int j = 0; j < cols_; ++j) {
                if (j == k || a_[k][j] == 0) continue;
                int64_t c = a_[k][j] / piv;
                for (int i = 0; i < rows_; ++i) a_[i][j] = norm(a_[i][j] - c * a_[i][k]);
                for (int i = 0; i < cols_; ++i) v_[i][j] = norm(v_[i][j] - c * v_[i][k]);
            }
            ++k;
        }
        rank_ = k;
        diag_.assign(rank_, 0);
        for (int i = 0; i < rank_; ++i) diag_[i] = a_[i][i];
    }

    int p_, E_;
    int64_t mod_;
    int rows_, cols_, rank_ = 0;
    std::vector<int> row_exp_, col_exp_;
    ModMat a_, u_, v_;
    ModVec diag_;
};

/// BFS closure of an additive subgroup of prod Z/m_j from generators.
inline std::vector<ModVec> span_subgroup(const std::vector<ModVec>& gens,
                                         const std::vector<int64_t>& moduli, long long cap) {
    std::set<ModVec> got;
    ModVec zero(moduli.size(), 0);
    got.insert(zero);
    std::vector<ModVec> todo = {zero};
    while (!todo.empty()) {
        ModVec x = todo.back();
        todo.pop_back();
        for (const ModVec& g : gens) {
            ModVec y(x.size());
            for (size_t j = 0; j < x.size(); ++j) y[j] = (x[j] + g[j]) % moduli[j];
            if (got.insert(y).second) {
                if (static_cast<long long>(got.size()) > cap)
                    throw budget_exceeded("subgroup span exceeds " + std::to_string(cap) +
                                          " elements");
                todo.push_back(y);
            }
        }
    }
    return std::vector<ModVec>(got.begin(), got.end());
}

}  // namespace bandcoh
