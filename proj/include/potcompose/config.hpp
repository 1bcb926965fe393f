#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "potcompose/composition.hpp"
#include "potcompose/verify.hpp"

namespace potcompose {

struct SystemConfig {
    std::string family;  // normalized name, e.g. "radial_oscillator"
    std::map<std::string, double> params;
    bool operator==(const SystemConfig&) const = default;
};

/// Declarative job description parsed from the line-oriented
/// `section.key = value` format (see the repo README for the grammar).
/// Unknown keys are rejected.
struct JobConfig {
    SystemConfig system0;
    std::string seed0_kind = "virtual";
    int seed0_v = 0;
    SystemConfig system1;
    std::optional<SystemConfig> system2;
    std::string seed1_kind = "virtual";  // seed of system1, second stage
    int seed1_v = 0;

    double quad_rel_tol = 1e-10;
    int knots = 128;
    double margin = 1e-3;
    int grid_n = 101;

    std::string csv_path = "composition.csv";
    std::string report_path = "report.txt";
    std::vector<int> modes;  // defaulted to the terminal system's first mode

    double corrupt_energy = 0.0;
    double corrupt_weight_exponent = 4.0;
    double corrupt_alpha_factor = 1.0;

    bool operator==(const JobConfig&) const = default;
};

/// Parses and validates. Throws ParseError (with line number) on
/// syntax/unknown keys, ValidationError naming field and constraint.
JobConfig parse_config(const std::string& text);
JobConfig load_config(const std::string& path);
std::string serialize_config(const JobConfig& config);

Family family_from_name(const std::string& name);  // throws ValidationError

struct BuiltJob {
    SpecPtr system0;
    SpecPtr system1;
    SpecPtr system2;
    std::unique_ptr<Composition> comp;
    std::unique_ptr<CompositionChain> chain;
    const ComposedSystem& system() const;
};

/// Instantiates systems and seeds and builds the composition (or chain).
BuiltJob build_job(const JobConfig& config);

/// CSV with header x,V_C,psi0,chi0,weight,phi_C_m...; 17 significant
/// digits, \n line endings.
void write_csv_grid(const GridSample& grid, std::ostream& os);

}  // namespace potcompose
