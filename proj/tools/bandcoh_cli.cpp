// Command-line surface: batch classification of finite bands and equivariant
// spaces. Every subcommand prints one JSON document to stdout (the sweep can
// print CSV instead). Exit codes: 0 ok, 1 validation/parse error, 2 budget.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bandcoh/io.hpp"
#include "bandcoh/modlin.hpp"

using namespace bandcoh;
namespace fs = std::filesystem;

namespace {

fs::path base_of(const std::string& path) { return fs::path(path).parent_path(); }

json budgets_json(const Budget& b) {
    return json{{"max_aut_candidates", b.max_aut_candidates},
                {"max_enumeration", b.max_enumeration},
                {"max_materialized", b.max_materialized}};
}

json cocycle_json(const Cocycle& c) { return json{{"f", c.f}, {"g", c.g}}; }

int run_validate(const std::string& path) {
    std::string text = read_file(path);
    json out{{"command", "validate"}, {"input", path}};
    if (looks_like_json(text)) {
        json j = json::parse(text, nullptr, true);
        if (j.contains("section")) {
            Band B = kernel_from_json(j, base_of(path));
            out["type"] = "kernel";
            out["gamma_order"] = B.gamma.order();
            out["kernel_order"] = B.kernel.order();
            out["kappa_image_order"] = kappa_image_order(B);
            out["center_order"] = static_cast<int>(B.z_members.size());
        } else if (j.contains("right_action")) {
            EquivariantSpace sp = space_from_json(j, base_of(path));
            out["type"] = "space";
            out["points"] = sp.points;
            out["group_order"] = sp.G.carrier.order();
            out["stabilizer_order"] = stabilizer(sp, 0).order();
            out["has_fixed_point"] = has_gamma_fixed_point(sp);
        } else {
            FiniteGroup G = group_from_json(j);
            out["type"] = "group";
            out["order"] = G.order();
            out["abelian"] = G.abelian();
        }
    } else {
        FiniteGroup G = group_from_text(text);
        out["type"] = "group";
        out["order"] = G.order();
        out["abelian"] = G.abelian();
    }
    out["ok"] = true;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_h2(const std::string& path, bool list_cocycles) {
    Band B = parse_kernel(read_file(path), base_of(path));
    auto h2 = h2_classes(B);
    json classes = json::array();
    for (const auto& cls : h2.classes()) {
        json c{{"neutral", cls.neutral}};
        if (list_cocycles) c["cocycle"] = cocycle_json(cls.rep);
        classes.push_back(c);
    }
    json out{{"command", "h2"},
             {"input", path},
             {"classes", h2.count()},
             {"neutral", h2.neutral_count()},
             {"class_list", classes},
             {"budgets", budgets_json(default_budget())}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_neutral(const std::string& path) {
    Band B = parse_kernel(read_file(path), base_of(path));
    auto h2 = h2_classes(B);
    json witnesses = json::array();
    for (int i : neutral_class_indices(h2)) witnesses.push_back(cocycle_json(h2.classes()[i].rep));
    json out{{"command", "neutral"},
             {"input", path},
             {"classes", h2.count()},
             {"neutral", h2.neutral_count()},
             {"neutral_representatives", witnesses}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_obstruction(const std::string& path) {
    Band B = parse_kernel(read_file(path), base_of(path));
    auto obs = obstruction(B);
    json out{{"command", "obstruction"},
             {"input", path},
             {"center_order", obs.z_module.carrier.order()},
             {"zero", obs.zero},
             {"cocycle_values", obs.cocycle.values}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_abelianize(const std::string& path) {
    Band B = parse_kernel(read_file(path), base_of(path));
    auto abmod = abelianization_module(B);
    BarComplex ab(abmod);
    auto h2 = h2_classes(B);
    json images = json::array();
    for (const auto& cls : h2.classes()) images.push_back(ab2(B, cls.rep, ab));
    std::vector<int> invariants;
    auto basis = AbelianBasis::build(abmod.carrier);
    for (const auto& f : basis.factors()) invariants.push_back(f.order);
    json out{{"command", "abelianize"},
             {"input", path},
             {"abelianization_order", abmod.carrier.order()},
             {"abelianization_factors", invariants},
             {"h2_abelian_order", ab.h_order(2)},
             {"class_images", images}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_twist(const std::string& path, const std::string& cocycle_path) {
    Band B = parse_kernel(read_file(path), base_of(path));
    json cj = json::parse(read_file(cocycle_path));
    auto values = cj.at("values").get<std::vector<Perm>>();
    Band twisted;
    if (is_homomorphic_section(B, B.section)) {
        // the kernel is a Gamma-group: full cocycle validation applies
        GammaGroup M{B.gamma, B.kernel, B.section};
        GammaGroup T = twist_gamma_group(M, values);
        twisted = make_band(B.gamma, B.kernel, T.action);
    } else {
        Section sec(B.gamma.order());
        for (int s = 0; s < B.gamma.order(); ++s) sec[s] = compose(values[s], B.section[s]);
        twisted = make_band(B.gamma, B.kernel, sec);
    }
    json out{{"command", "twist"},
             {"input", path},
             {"cocycle", cocycle_path},
             {"kernel", kernel_to_json(twisted)},
             {"kappa_image_order", kappa_image_order(twisted)}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_lift(const std::string& path, const std::string& hom_path) {
    Band B = parse_kernel(read_file(path), base_of(path));
    json hj = json::parse(read_file(hom_path));
    FiniteGroup Big = group_from_ref(hj.at("source"), base_of(hom_path));
    auto map = hj.at("map").get<Perm>();
    GroupHom alpha = make_hom(Big, B.kernel, map);
    auto f_prime = hj.at("f_prime").get<Section>();
    auto m_classes = hj.at("m_classes").get<std::vector<int>>();
    Section f = B.section;
    if (hj.contains("f")) f = hj.at("f").get<Section>();
    auto lifted = lift_band_along(alpha, B, f, f_prime, m_classes);
    json out{{"command", "lift"},
             {"input", path},
             {"along", hom_path},
             {"lifted", kernel_to_json(lifted.lifted)},
             {"compatible_on_kernel", lifted.compatible_on_a}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_springer(const std::string& path) {
    EquivariantSpace sp = parse_space(read_file(path), base_of(path));
    auto cls = springer_class(sp);
    auto lift = has_equivariant_lift(sp);
    json out{{"command", "springer"},
             {"input", path},
             {"points", sp.points},
             {"stabilizer_order", cls.at_base.band.kernel.order()},
             {"has_fixed_point", has_gamma_fixed_point(sp)},
             {"classes", cls.h2.count()},
             {"neutral", cls.neutral},
             {"cocycle", cocycle_json(cls.at_base.cocycle)},
             {"lift_witness",
              lift ? json(lift->transporter) : json(nullptr)}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_extensions(const std::string& path) {
    Band B = parse_kernel(read_file(path), base_of(path));
    auto oracle = enumerate_extensions(B);
    json classes = json::array();
    for (const auto& cls : oracle.classes)
        classes.push_back(json{{"order", cls.rep.E.order()},
                               {"splits", cls.split},
                               {"factor_data", cocycle_json(cls.rep_data)}});
    json out{{"command", "extensions"},
             {"input", path},
             {"classes", oracle.count()},
             {"split", oracle.split_count()},
             {"class_list", classes}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_sweep_cmd(const SweepOptions& opts, const std::string& report, const std::string& outfile) {
    auto rep = run_sweep(opts);
    std::string payload =
        report == "json" ? rep.to_json().dump(2) + "\n" : rep.to_csv();
    if (outfile.empty()) {
        std::cout << payload;
    } else {
        std::ofstream of(outfile);
        if (!of) throw parse_error("cannot write '" + outfile + "'");
        of << payload;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonabelian H^2 of finite bands: classification, obstructions, twists"};
    app.require_subcommand(1);

    std::string file, cocycle_file, hom_file;
    bool list_cocycles = false;

    auto* validate = app.add_subcommand("validate", "parse and validate a group/kernel/space file");
    validate->add_option("file", file)->required();

    auto* h2cmd = app.add_subcommand("h2", "classify the second cohomology set of a kernel");
    h2cmd->add_option("file", file)->required();
    h2cmd->add_flag("--list-cocycles", list_cocycles, "include canonical cocycles in the output");

    auto* neutral = app.add_subcommand("neutral", "neutral classes of a kernel");
    neutral->add_option("file", file)->required();

    auto* obstr = app.add_subcommand("obstruction", "H^3 obstruction class of a kernel");
    obstr->add_option("file", file)->required();

    auto* abel = app.add_subcommand("abelianize", "abelianization data and the ab2 images");
    abel->add_option("file", file)->required();

    auto* twist = app.add_subcommand("twist", "twist a kernel by an automorphism cocycle");
    twist->add_option("file", file)->required();
    twist->add_option("--cocycle", cocycle_file)->required();

    auto* lift = app.add_subcommand("lift", "pull the kernel back along a homomorphism");
    lift->add_option("file", file)->required();
    lift->add_option("--along", hom_file)->required();

    auto* springer = app.add_subcommand("springer", "stabilizer band of an equivariant space");
    springer->add_option("file", file)->required();

    auto* ext = app.add_subcommand("extensions", "group-extension oracle classification");
    ext->add_option("file", file)->required();

    SweepOptions sw;
    std::string report = "csv", outfile;
    auto* sweep = app.add_subcommand("sweep", "classify every kernel in the small-group catalog");
    sweep->add_option("--gamma-max", sw.gamma_max, "largest |Gamma| (default 4)");
    sweep->add_option("--kernel-max", sw.kernel_max, "largest |A| (default 8)");
    sweep->add_option("--threads", sw.threads, "parallel jobs (default 1)");
    sweep->add_flag("--timings", sw.timings, "measure wall-clock per row (non-reproducible)");
    sweep->add_option("--report", report, "csv or json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--out", outfile, "write the report to a file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return run_validate(file);
        if (h2cmd->parsed()) return run_h2(file, list_cocycles);
        if (neutral->parsed()) return run_neutral(file);
        if (obstr->parsed()) return run_obstruction(file);
        if (abel->parsed()) return run_abelianize(file);
        if (twist->parsed()) return run_twist(file, cocycle_file);
        if (lift->parsed()) return run_lift(file, hom_file);
        if (springer->parsed()) return run_springer(file);
        if (ext->parsed()) return run_extensions(file);
        if (sweep->parsed()) return run_sweep_cmd(sw, report, outfile);
    } catch (const budget_exceeded& e) {
        std::cerr << json{{"error", e.code()}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << json{{"error", e.code()}, {"message", e.what()}}.dump() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << json{{"error", "ParseError"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
