#pragma once

// Serialization, the sweep over small-group catalogs, and report emission.
// Files are JSON (the normative machine format); plain multiplication tables
// and permutation generators are also accepted in a line-oriented text form.

#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "band.hpp"
#include "catalog.hpp"
#include "errors.hpp"
#include "extension.hpp"
#include "gamma.hpp"
#include "group.hpp"
#include "h2.hpp"
#include "springer.hpp"

namespace bandcoh {

using nlohmann::json;

// -- group files ------------------------------------------------------------------

inline FiniteGroup group_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw parse_error("group file needs a kind");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "table") {
        auto rows = j.at("rows").get<std::vector<std::vector<int>>>();
        return make_group(rows);
    }
    if (kind == "perm") {
        int degree = j.at("degree").get<int>();
        auto gens = j.at("generators").get<std::vector<Perm>>();
        return group_from_permutations(degree, gens);
    }
    throw parse_error("unknown group kind '" + kind + "'");
}

inline json group_to_json(const FiniteGroup& G) {
    std::vector<std::vector<int>> rows(G.order(), std::vector<int>(G.order()));
    for (int a = 0; a < G.order(); ++a)
        for (int b = 0; b < G.order(); ++b) rows[a][b] = G.mul(a, b);
    return json{{"kind", "table"}, {"n", G.order()}, {"rows", rows}};
}

/// Text form: "table <n>" followed by n rows, or "perm <degree>" followed by
/// one generator per line in one-line notation.
inline FiniteGroup group_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string kind;
    if (!(in >> kind)) throw parse_error("empty group file");
    if (kind == "table") {
        int n;
        if (!(in >> n) || n < 1) throw parse_error("table header needs a positive size");
        std::vector<std::vector<int>> rows(n, std::vector<int>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!(in >> rows[i][j]))
                    throw parse_error("table row " + std::to_string(i) + " is short");
        return make_group(rows);
    }
    if (kind == "perm") {
        int degree;
        if (!(in >> degree) || degree < 1) throw parse_error("perm header needs a degree");
        std::vector<Perm> gens;
        Perm cur;
        int v;
        while (in >> v) {
            cur.push_back(v);
            if (static_cast<int>(cur.size()) == degree) {
                gens.push_back(cur);
                cur.clear();
            }
        }
        if (!cur.empty()) throw parse_error("trailing values do not fill a permutation");
        return group_from_permutations(degree, gens);
    }
    throw parse_error("unknown group kind '" + kind + "'");
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline bool looks_like_json(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{';
    }
    return false;
}

inline FiniteGroup parse_group(const std::string& text) {
    if (looks_like_json(text)) {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw parse_error(e.what());
        }
        return group_from_json(j);
    }
    return group_from_text(text);
}

/// Group given inline (object / text) or by a path relative to `base`.
inline FiniteGroup group_from_ref(const json& j, const std::filesystem::path& base) {
    if (j.is_string()) {
        std::filesystem::path p = j.get<std::string>();
        if (p.is_relative()) p = base / p;
        return parse_group(read_file(p.string()));
    }
    return group_from_json(j);
}

// -- kernel files -----------------------------------------------------------------

inline Band kernel_from_json(const json& j, const std::filesystem::path& base,
                             const Budget& budget = default_budget()) {
    try {
        FiniteGroup gamma = group_from_ref(j.at("gamma"), base);
        FiniteGroup A = group_from_ref(j.at("kernel"), base);
        auto section = j.at("section").get<std::vector<Perm>>();
        return make_band(gamma, A, section, budget);
    } catch (const json::exception& e) {
        throw parse_error(std::string("kernel file: ") + e.what());
    }
}

inline Band parse_kernel(const std::string& text, const std::filesystem::path& base,
                         const Budget& budget = default_budget()) {
    if (!looks_like_json(text)) throw parse_error("kernel files use the JSON form");
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw parse_error(e.what());
    }
    return kernel_from_json(j, base, budget);
}

inline json kernel_to_json(const Band& B) {
    return json{{"gamma", group_to_json(B.gamma)},
                {"kernel", group_to_json(B.kernel)},
                {"section", B.section}};
}

// -- space files ------------------------------------------------------------------

inline EquivariantSpace space_from_json(const json& j, const std::filesystem::path& base) {
    try {
        FiniteGroup G = group_from_ref(j.at("group"), base);
        FiniteGroup gamma = group_from_ref(j.at("gamma"), base);
        auto sigma = j.at("sigma").get<std::vector<Perm>>();
        GammaGroup GG = make_gamma_group(gamma, G, sigma);
        int points = j.at("points").get<int>();
        auto ra = j.at("right_action").get<std::vector<std::vector<int>>>();
        auto ga = j.at("gamma_action").get<std::vector<std::vector<int>>>();
        if (static_cast<int>(ra.size()) != points || static_cast<int>(ga.size()) != points)
            throw parse_error("action tables need one row per point");
        std::vector<int> raf, gaf;
        for (const auto& row : ra) {
            if (static_cast<int>(row.size()) != G.order())
                throw parse_error("right_action rows must have |G| entries");
            raf.insert(raf.end(), row.begin(), row.end());
        }
        for (const auto& row : ga) {
            if (static_cast<int>(row.size()) != gamma.order())
                throw parse_error("gamma_action rows must have |Gamma| entries");
            gaf.insert(gaf.end(), row.begin(), row.end());
        }
        return make_equivariant_space(GG, points, raf, gaf);
    } catch (const json::exception& e) {
        throw parse_error(std::string("space file: ") + e.what());
    }
}

inline EquivariantSpace parse_space(const std::string& text, const std::filesystem::path& base) {
    if (!looks_like_json(text)) throw parse_error("space files use the JSON form");
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw parse_error(e.what());
    }
    return space_from_json(j, base);
}

inline json space_to_json(const EquivariantSpace& sp) {
    const int nG = sp.G.carrier.order(), ns = sp.G.gamma.order();
    std::vector<std::vector<int>> ra(sp.points), ga(sp.points);
    for (int x = 0; x < sp.points; ++x) {
        ra[x].assign(sp.right_action.begin() + x * nG, sp.right_action.begin() + (x + 1) * nG);
        ga[x].assign(sp.gamma_action.begin() + x * ns, sp.gamma_action.begin() + (x + 1) * ns);
    }
    return json{{"group", group_to_json(sp.G.carrier)}, {"gamma", group_to_json(sp.G.gamma)},
                {"sigma", sp.G.action},                 {"points", sp.points},
                {"right_action", ra},                   {"gamma_action", ga}};
}

// -- order 16, derived ---------------------------------------------------------------

/// All groups of order 16 up to isomorphism, derived as extensions of C2 by
/// the order-8 catalog (every group of order 16 has a normal subgroup of
/// index 2). Names come from matching against direct constructions.
inline const std::vector<NamedGroup>& groups_of_order_16() {
    static const std::vector<NamedGroup> cat = [] {
        std::vector<NamedGroup> references;
        references.push_back({"C16", cyclic(16)});
        references.push_back({"C4xC4", direct_product(cyclic(4), cyclic(4))});
        references.push_back({"C8xC2", direct_product(cyclic(8), cyclic(2))});
        references.push_back({"C4xC2xC2", direct_product(cyclic(4), klein4())});
        references.push_back({"C2xC2xC2xC2", direct_product(klein4(), klein4())});
        references.push_back({"D8", dihedral(8)});
        references.push_back({"Q16", dicyclic(4)});
        references.push_back({"D4xC2", direct_product(d4(), cyclic(2))});
        references.push_back({"Q8xC2", direct_product(q8(), cyclic(2))});
        {  // semidihedral: C8 x| C2 with r -> r^3
            Perm a(8);
            for (int x = 0; x < 8; ++x) a[x] = (3 * x) % 8;
            references.push_back({"SD16", semidirect_product(cyclic(8), cyclic(2),
                                                             {identity_perm(8), a})});
        }
        {  // modular: C8 x| C2 with r -> r^5
            Perm a(8);
            for (int x = 0; x < 8; ++x) a[x] = (5 * x) % 8;
            references.push_back({"M16", semidirect_product(cyclic(8), cyclic(2),
                                                            {identity_perm(8), a})});
        }
        {  // C4 x| C4 by inversion
            auto C4 = cyclic(4);
            Perm inv = {0, 3, 2, 1};
            Section phi = {identity_perm(4), inv, identity_perm(4), inv};
            references.push_back({"C4sdC4", semidirect_product(C4, C4, phi)});
        }
        {  // (C4 x C2) x| C2 swapping the two C4-cosets: C2^2 x| C4
            auto K = klein4();
            Perm swap = {0, 2, 1, 3};
            Section phi = {identity_perm(4), swap, identity_perm(4), swap};
            references.push_back({"C2sdC4x", semidirect_product(K, cyclic(4), phi)});
        }
        {  // central product D4 . C4 (Pauli group)
            auto P = direct_product(d4(), cyclic(4));
            // identify the central involutions: (r^2, 0) with (1, 2)
            int r2 = -1;
            auto Zd4 = center(d4());
            for (int z : Zd4.members)
                if (z != 0) r2 = z;
            int diag = P.mul(r2 * 4 + 0, 0 * 4 + 2);  // (r^2, 2)
            auto [Q, proj] = quotient(P, subgroup_generated(P, {diag}));
            references.push_back({"D4oC4", Q});
        }

        // derive the full list from extensions and match names
        std::vector<FiniteGroup> derived;
        for (const auto& ng8 : groups_of_order(8)) {
            const FiniteGroup& A = ng8.group;
            auto oc = outer_classes(A);
            // kappa: C2 -> Out(A): any involution class (or the identity)
            std::set<int> done;
            for (size_t i = 0; i < oc.auts.size(); ++i) {
                int cls = oc.coset_of[i];
                if (!done.insert(cls).second) continue;
                const Perm& f1 = oc.auts[oc.cosets[cls].front()];
                Section sec = {identity_perm(8), f1};
                Band B;
                try {
                    B = make_band(cyclic(2), A, sec);
                } catch (const not_outer_homomorphism&) {
                    continue;  // class is not an involution in Out
                }
                for (const auto& ecls : enumerate_extensions(B).classes) {
                    bool fresh = true;
                    for (const auto& g : derived)
                        if (isomorphic(g, ecls.rep.E)) {
                            fresh = false;
                            break;
                        }
                    if (fresh) derived.push_back(ecls.rep.E);
                }
            }
        }
        std::vector<NamedGroup> out;
        for (const auto& g : derived) {
            bool named = false;
            for (const auto& ref : references)
                if (isomorphic(ref.group, g)) {
                    out.push_back(ref);  // use the reference table for stability
                    named = true;
                    break;
                }
            if (!named)
                throw error("Internal", "derived order-16 group matches no reference");
        }
        std::sort(out.begin(), out.end(),
                  [](const NamedGroup& a, const NamedGroup& b) { return a.name < b.name; });
        if (out.size() != 14)
            throw error("Internal", "expected 14 groups of order 16, derived " +
                                        std::to_string(out.size()));
        return out;
    }();
    return cat;
}

inline std::vector<NamedGroup> sweep_catalog(int max_order) {
    auto out = catalog_upto(std::min(max_order, 15));
    if (max_order >= 16)
        for (const auto& g : groups_of_order_16()) out.push_back(g);
    return out;
}

// -- kappa enumeration ---------------------------------------------------------------

/// All homomorphisms Gamma -> Out(A) up to Aut(Gamma) x Aut(A), each realized
/// as a band section (least automorphism per outer class).
struct KappaList {
    std::vector<Band> bands;  // one per kept class
    long long homs_total = 0;
    long long homs_kept = 0;
};

inline KappaList enumerate_kappas(const FiniteGroup& gamma, const FiniteGroup& A,
                                  const Budget& budget = default_budget()) {
    KappaList out;
    auto oc = outer_classes(A, budget);
    const int n_auts = static_cast<int>(oc.auts.size());
    if (n_auts > 2048) throw budget_exceeded("Aut(A) too large for the sweep");

    // Out(A) as a table over coset ids
    const int n_out = static_cast<int>(oc.cosets.size());
    std::map<Perm, int> aut_idx;
    for (int i = 0; i < n_auts; ++i) aut_idx[oc.auts[i]] = i;
    std::vector<std::vector<int>> otab(n_out, std::vector<int>(n_out));
    for (int a = 0; a < n_out; ++a)
        for (int b = 0; b < n_out; ++b)
            otab[a][b] = oc.coset_of[aut_idx.at(
                compose(oc.auts[oc.cosets[a].front()], oc.auts[oc.cosets[b].front()]))];
    FiniteGroup Out = make_group(otab);
    // make_group relabels if the Inn coset is not index 0; it always is,
    // since the identity automorphism is lexicographically least
    if (oc.coset_of[0] != 0) throw error("Internal", "Inn coset is not class 0");

    // all homs gamma -> Out via generator images
    std::vector<std::vector<int>> homs;
    {
        auto gens = small_generating_set(gamma);
        auto words = generator_words(gamma, gens);
        if (gens.empty()) {
            homs.push_back({0});
        } else {
            std::vector<int> choice(gens.size(), 0);
            while (true) {
                Perm h = extend_by_words(gamma, Out, words, choice);
                if (is_hom_table(gamma, Out, h)) homs.push_back(h);
                size_t i = 0;
                for (; i < gens.size(); ++i) {
                    if (++choice[i] < Out.order()) break;
                    choice[i] = 0;
                }
                if (i == gens.size()) break;
            }
        }
    }
    out.homs_total = static_cast<long long>(homs.size());

    // induced permutations of Out-classes from Aut(A)
    std::vector<Perm> out_perms;
    {
        std::set<Perm> seen;
        for (const auto& psi : oc.auts) {
            Perm p(n_out);
            Perm psi_inv = inverse_perm(psi);
            for (int c = 0; c < n_out; ++c) {
                Perm conj = compose(psi, compose(oc.auts[oc.cosets[c].front()], psi_inv));
                p[c] = oc.coset_of[aut_idx.at(conj)];
            }
            if (seen.insert(p).second) out_perms.push_back(p);
        }
    }
    auto gamma_auts = automorphisms(gamma, budget);

    std::set<std::vector<int>> kept;
    for (const auto& kappa : homs) {
        std::vector<int> least = kappa;
        for (const auto& theta : gamma_auts) {
            Perm theta_inv = inverse_perm(theta);
            for (const auto& p : out_perms) {
                std::vector<int> cand(kappa.size());
                for (int s = 0; s < gamma.order(); ++s) cand[s] = p[kappa[theta_inv[s]]];
                if (cand < least) least = cand;
            }
        }
        kept.insert(least);
    }
    out.homs_kept = static_cast<long long>(kept.size());
    for (const auto& kappa : kept) {
        Section sec(gamma.order());
        for (int s = 0; s < gamma.order(); ++s)
            sec[s] = oc.auts[oc.cosets[kappa[s]].front()];
        out.bands.push_back(make_band(gamma, A, sec, budget));
    }
    return out;
}

// -- sweep ----------------------------------------------------------------------------

struct SweepOptions {
    int gamma_max = 4;
    int kernel_max = 8;
    int threads = 1;
    bool timings = false;  // off by default so reruns are byte-identical
    Budget budget;
};

struct SweepRow {
    std::string gamma_id, kernel_id;
    int kappa_index = 0;
    long long h2_count = 0, neutral_count = 0;
    bool obstruction_zero = false, representable = false;
    long long runtime_ms = 0;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    struct Reduction {
        std::string gamma_id, kernel_id;
        long long homs_total, homs_kept;
    };
    std::vector<Reduction> reductions;
    SweepOptions options;

    std::string to_csv() const {
        std::ostringstream out;
        out << "gamma_id,kernel_id,kappa_index,h2_count,neutral_count,obstruction_zero,"
               "representable,runtime_ms\n";
        for (const auto& r : rows)
            out << r.gamma_id << ',' << r.kernel_id << ',' << r.kappa_index << ',' << r.h2_count
                << ',' << r.neutral_count << ',' << (r.obstruction_zero ? 1 : 0) << ','
                << (r.representable ? 1 : 0) << ',' << r.runtime_ms << '\n';
        return out.str();
    }

    json to_json() const {
        json rows_j = json::array();
        for (const auto& r : rows)
            rows_j.push_back({{"gamma_id", r.gamma_id},
                              {"kernel_id", r.kernel_id},
                              {"kappa_index", r.kappa_index},
                              {"h2_count", r.h2_count},
                              {"neutral_count", r.neutral_count},
                              {"obstruction_zero", r.obstruction_zero},
                              {"representable", r.representable},
                              {"runtime_ms", r.runtime_ms}});
        json red_j = json::array();
        for (const auto& r : reductions)
            red_j.push_back({{"gamma_id", r.gamma_id},
                             {"kernel_id", r.kernel_id},
                             {"homs_total", r.homs_total},
                             {"homs_kept", r.homs_kept}});
        return json{{"rows", rows_j},
                    {"kappa_reduction", red_j},
                    {"budgets",
                     {{"gamma_max", options.gamma_max},
                      {"kernel_max", options.kernel_max},
                      {"max_enumeration", options.budget.max_enumeration},
                      {"max_aut_candidates", options.budget.max_aut_candidates}}}};
    }
};

inline SweepReport run_sweep(const SweepOptions& opts) {
    SweepReport report;
    report.options = opts;

    struct Job {
        std::string gamma_id, kernel_id;
        Band band;
        int kappa_index;
    };
    std::vector<Job> jobs;
    auto gammas = sweep_catalog(opts.gamma_max);
    auto kernels = sweep_catalog(opts.kernel_max);
    for (const auto& gng : gammas) {
        if (gng.group.order() > opts.gamma_max) continue;
        for (const auto& kng : kernels) {
            if (kng.group.order() > opts.kernel_max) continue;
            auto kl = enumerate_kappas(gng.group, kng.group, opts.budget);
            report.reductions.push_back(
                {gng.name, kng.name, kl.homs_total, kl.homs_kept});
            for (size_t i = 0; i < kl.bands.size(); ++i)
                jobs.push_back(Job{gng.name, kng.name, kl.bands[i], static_cast<int>(i)});
        }
    }

    auto run_job = [&](const Job& job) {
        auto start = std::chrono::steady_clock::now();
        SweepRow row;
        row.gamma_id = job.gamma_id;
        row.kernel_id = job.kernel_id;
        row.kappa_index = job.kappa_index;
        auto h2 = h2_classes(job.band, opts.budget);
        row.h2_count = h2.count();
        row.neutral_count = h2.neutral_count();
        row.obstruction_zero = obstruction(job.band, opts.budget).zero;
        row.representable = is_representable(job.band, opts.budget).has_value();
        if (opts.timings)
            row.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
        return row;
    };

    if (opts.threads <= 1) {
        for (const auto& job : jobs) report.rows.push_back(run_job(job));
    } else {
        // parallel in batches with an order-stable merge
        for (size_t begin = 0; begin < jobs.size(); begin += opts.threads) {
            size_t end = std::min(jobs.size(), begin + opts.threads);
            std::vector<std::future<SweepRow>> futures;
            for (size_t i = begin; i < end; ++i)
                futures.push_back(std::async(std::launch::async, run_job, std::cref(jobs[i])));
            for (auto& f : futures) report.rows.push_back(f.get());
        }
    }
    return report;
}

}  // namespace bandcoh
