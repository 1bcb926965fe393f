#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "potcompose/config.hpp"
#include "potcompose/errors.hpp"

namespace pc = potcompose;

namespace {

struct FamilyInfo {
    const char* name;
    const char* params;
    const char* domain;
    const char* seeds;
};

const FamilyInfo kFamilies[] = {
    {"radial_oscillator", "g > 1/2", "(0, inf)", "virtual v = 0,1,..."},
    {"poschl_teller", "g, h > 1/2", "(0, pi/2)", "virtual v = 0..[h-1/2]'"},
    {"hyperbolic_pt", "h > g > 1/2", "(0, inf)",
     "virtual v = 0..[(h-g)/2]', overshoot v > h-g"},
    {"rosen_morse", "h > sqrt(mu) > 0", "(-inf, inf)", "overshoot h < v < h+mu/h"},
    {"eckart", "sqrt(mu) > g > 1/2", "(0, inf)", "overshoot v > mu/g - g"},
    {"free_particle", "kappa > 0", "(-inf, inf)", "virtual v = 0 (seed exp(kappa x))"},
    {"infinite_well", "width > 0", "(0, width)", "none (System 1 only; modes m >= 1)"},
};

void print_bracket(const char* label, const pc::IndexBracket& b) {
    if (b.empty) {
        std::printf("  %s window (%g, %g): empty\n", label, b.lower, b.upper);
        return;
    }
    if (b.max_degree)
        std::printf("  %s v in {%ld..%ld}\n", label, b.min_degree, *b.max_degree);
    else
        std::printf("  %s v in {%ld,%ld,...}\n", label, b.min_degree, b.min_degree + 1);
}

int cmd_list(const std::string& family, const std::map<std::string, double>& params) {
    if (family.empty()) {
        for (const auto& f : kFamilies)
            std::printf("%-18s params: %-22s domain: %-12s seeds: %s\n", f.name, f.params,
                        f.domain, f.seeds);
        return 0;
    }
    pc::Family fam = pc::family_from_name(family);
    pc::SpecPtr spec;
    try {
        spec = pc::make_potential(fam, params);
    } catch (const pc::ParamOutOfRange& e) {
        std::fprintf(stderr, "parameter error: %s\n", e.what());
        return 2;
    }
    std::printf("%s on %s, ground energy %.17g", pc::family_name(fam).c_str(),
                spec->domain.str().c_str(), spec->ground_energy);
    if (spec->n_bound)
        std::printf(", %ld bound state(s)\n", *spec->n_bound);
    else
        std::printf(", infinitely many bound states\n");
    pc::IndexBracket vb = pc::virtual_bracket(*spec);
    if (!vb.empty || fam == pc::Family::PoschlTeller || fam == pc::Family::HyperbolicPT)
        print_bracket("virtual", vb);
    pc::IndexBracket ob = pc::overshoot_bracket(*spec);
    if (fam == pc::Family::HyperbolicPT || fam == pc::Family::RosenMorse ||
        fam == pc::Family::Eckart)
        print_bracket("overshoot", ob);
    if (fam == pc::Family::RadialOscillator && spec->params.count("g")) {
        const pc::NodelessSolution seed = pc::virtual_state(spec, 0);
        if (seed.reference_energy_mismatch)
            std::printf(
                "  note: catalog energy formula -4v-2g+3 disagrees with the computed "
                "-(4v+2g+1); the computed value is used (v=0: %.17g vs %.17g)\n",
                seed.reference_energy, seed.energy);
    }
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"composition of one-dimensional quantum potentials"};
    app.set_help_flag("--help", "print usage");
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "list families, constraints and seed brackets");
    list->set_help_flag("--help", "print usage");
    std::string family;
    std::optional<double> g, h, mu, kappa, width;
    list->add_option("--family", family, "family to describe");
    list->add_option("--g", g);
    list->add_option("--h", h);
    list->add_option("--mu", mu);
    list->add_option("--kappa", kappa);
    list->add_option("--width", width);

    std::string config_path;
    auto* compose_cmd =
        app.add_subcommand("compose", "build the composition and write the CSV grid");
    compose_cmd->add_option("--config", config_path, "job config path")->required();
    auto* verify_cmd =
        app.add_subcommand("verify", "build the composition and run every check");
    verify_cmd->add_option("--config", config_path, "job config path")->required();

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        std::map<std::string, double> params;
        if (g) params["g"] = *g;
        if (h) params["h"] = *h;
        if (mu) params["mu"] = *mu;
        if (kappa) params["kappa"] = *kappa;
        if (width) params["width"] = *width;
        return cmd_list(family, params);
    }

    pc::JobConfig cfg = pc::load_config(config_path);
    pc::BuiltJob job = pc::build_job(cfg);

    if (compose_cmd->parsed()) {
        pc::GridSample grid =
            pc::sample_grid(job.system(), cfg.grid_n, cfg.margin, cfg.modes);
        std::ofstream out(cfg.csv_path, std::ios::binary);
        if (!out) {
            std::fprintf(stderr, "error: cannot open '%s' for writing\n",
                         cfg.csv_path.c_str());
            return 2;
        }
        pc::write_csv_grid(grid, out);
        std::printf("wrote %zu rows x %zu columns to %s\n", grid.xs.size(),
                    grid.names.size() + 1, cfg.csv_path.c_str());
        return 0;
    }

    pc::ReportOptions options;
    options.modes = cfg.modes;
    options.margin = cfg.margin;
    options.quad.rel_tol = cfg.quad_rel_tol;
    pc::VerificationReport report = pc::full_report(job.system(), options);
    std::string text = pc::format_report(report);
    std::ofstream out(cfg.report_path, std::ios::binary);
    if (out) out << text;
    std::fputs(text.c_str(), stdout);
    return report.overall ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const pc::ParseError& e) {
        std::fprintf(stderr, "config error (line %d): %s\n", e.line, e.what());
        return 2;
    } catch (const pc::ValidationError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const pc::Error& e) {
        std::fprintf(stderr, "construction error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
