#include "potcompose/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "potcompose/errors.hpp"

namespace potcompose {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string normalize(std::string s) {
    std::replace(s.begin(), s.end(), '-', '_');
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return s;
}

double parse_number(const std::string& v, int line) {
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ParseError("expected a number, got '" + v + "'", line);
    return x;
}

int parse_int(const std::string& v, int line) {
    double x = parse_number(v, line);
    if (x != std::floor(x)) throw ParseError("expected an integer, got '" + v + "'", line);
    return static_cast<int>(x);
}

std::vector<int> parse_int_list(const std::string& v, int line) {
    std::vector<int> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ParseError("empty entry in list '" + v + "'", line);
        out.push_back(parse_int(item, line));
    }
    if (out.empty()) throw ParseError("empty list", line);
    return out;
}

const std::vector<std::string> kParamKeys = {"g", "h", "mu", "kappa", "width"};

bool is_param_key(const std::string& k) {
    return std::find(kParamKeys.begin(), kParamKeys.end(), k) != kParamKeys.end();
}

struct Raw {
    JobConfig cfg;
    bool has_system2 = false;
    bool has_modes = false;
};

void apply_key(Raw& raw, const std::string& section, const std::string& key,
               const std::string& value, int line) {
    JobConfig& cfg = raw.cfg;
    auto bad_key = [&]() -> void {
        throw ParseError("unknown key '" + section + "." + key + "'", line);
    };
    if (section == "system0" || section == "system1" || section == "system2") {
        SystemConfig* sys = nullptr;
        if (section == "system0") sys = &cfg.system0;
        else if (section == "system1") sys = &cfg.system1;
        else {
            if (!cfg.system2) cfg.system2.emplace();
            raw.has_system2 = true;
            sys = &*cfg.system2;
        }
        if (key == "family") {
            sys->family = normalize(value);
            return;
        }
        if (is_param_key(key)) {
            sys->params[key] = parse_number(value, line);
            return;
        }
        if (key == "seed_kind") {
            if (section == "system1") bad_key();
            std::string k = normalize(value);
            if (section == "system0") cfg.seed0_kind = k;
            else cfg.seed1_kind = k;
            return;
        }
        if (key == "v") {
            if (section == "system1") bad_key();
            if (section == "system0") cfg.seed0_v = parse_int(value, line);
            else cfg.seed1_v = parse_int(value, line);
            return;
        }
        bad_key();
    }
    if (section == "numerics") {
        if (key == "quad_rel_tol") cfg.quad_rel_tol = parse_number(value, line);
        else if (key == "knots") cfg.knots = parse_int(value, line);
        else if (key == "margin") cfg.margin = parse_number(value, line);
        else if (key == "grid_n") cfg.grid_n = parse_int(value, line);
        else bad_key();
        return;
    }
    if (section == "outputs") {
        if (key == "csv_path") cfg.csv_path = value;
        else if (key == "report_path") cfg.report_path = value;
        else if (key == "modes") {
            cfg.modes = parse_int_list(value, line);
            raw.has_modes = true;
        } else bad_key();
        return;
    }
    if (section == "debug") {
        if (key == "corrupt_energy") cfg.corrupt_energy = parse_number(value, line);
        else if (key == "corrupt_weight_exponent")
            cfg.corrupt_weight_exponent = parse_number(value, line);
        else if (key == "corrupt_alpha_factor")
            cfg.corrupt_alpha_factor = parse_number(value, line);
        else bad_key();
        return;
    }
    throw ParseError("unknown section '" + section + "'", line);
}

SpecPtr make_system(const SystemConfig& sys, const std::string& which) {
    if (sys.family.empty())
        throw ValidationError(which + ".family: missing");
    Family fam = family_from_name(sys.family);
    try {
        return make_potential(fam, sys.params);
    } catch (const ParamOutOfRange& e) {
        throw ValidationError(which + ": " + e.what());
    }
}

void check_seed(const SpecPtr& spec, const std::string& kind, int v, const std::string& which) {
    if (kind == "custom")
        throw ValidationError(which + ".seed_kind: custom seeds are API-only (a config "
                              "cannot carry evaluators)");
    if (kind != "virtual" && kind != "overshoot")
        throw ValidationError(which + ".seed_kind: must be 'virtual' or 'overshoot'");
    IndexBracket b =
        kind == "virtual" ? virtual_bracket(*spec) : overshoot_bracket(*spec);
    if (b.empty) {
        std::ostringstream os;
        os << which << ".v: " << kind << " window (" << b.lower << ", " << b.upper
           << ") is empty for " << family_name(spec->family);
        throw ValidationError(os.str());
    }
    if (!b.admits(v)) {
        std::ostringstream os;
        os << which << ".v: degree " << v << " outside the admissible " << kind
           << " bracket [" << b.min_degree << ", "
           << (b.max_degree ? std::to_string(*b.max_degree) : std::string("inf")) << "] of "
           << family_name(spec->family);
        throw ValidationError(os.str());
    }
}

void validate(JobConfig& cfg, bool has_modes) {
    SpecPtr s0 = make_system(cfg.system0, "system0");
    check_seed(s0, cfg.seed0_kind, cfg.seed0_v, "system0");
    SpecPtr s1 = make_system(cfg.system1, "system1");
    SpecPtr terminal = s1;
    if (cfg.system2) {
        check_seed(s1, cfg.seed1_kind, cfg.seed1_v, "system2(seed of system1)");
        terminal = make_system(*cfg.system2, "system2");
    }
    if (!(cfg.quad_rel_tol > 0.0))
        throw ValidationError("numerics.quad_rel_tol: must be > 0");
    if (cfg.knots < 32) throw ValidationError("numerics.knots: must be >= 32");
    if (!(cfg.margin > 0.0 && cfg.margin < 0.5))
        throw ValidationError("numerics.margin: must be in (0, 1/2)");
    if (cfg.grid_n < 2) throw ValidationError("numerics.grid_n: must be >= 2");
    if (!has_modes && cfg.modes.empty() && terminal->valid_index(terminal->first_index))
        cfg.modes = {terminal->first_index};
    for (int m : cfg.modes)
        if (!terminal->valid_index(m))
            throw ValidationError("outputs.modes: mode " + std::to_string(m) +
                                  " is not a valid eigenstate index of the terminal system");
}

void serialize_system(std::ostream& os, const std::string& name, const SystemConfig& sys) {
    os << name << ".family = " << sys.family << "\n";
    for (const auto& [k, v] : sys.params) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        os << name << "." << k << " = " << buf << "\n";
    }
}

}  // namespace

Family family_from_name(const std::string& name) {
    std::string n = normalize(name);
    if (n == "radial_oscillator" || n == "ro") return Family::RadialOscillator;
    if (n == "poschl_teller" || n == "pt") return Family::PoschlTeller;
    if (n == "hyperbolic_pt" || n == "hpt") return Family::HyperbolicPT;
    if (n == "rosen_morse" || n == "rm") return Family::RosenMorse;
    if (n == "eckart") return Family::Eckart;
    if (n == "free_particle" || n == "free") return Family::FreeParticle;
    if (n == "infinite_well" || n == "well") return Family::InfiniteWell;
    throw ValidationError("unknown family '" + name + "'");
}

JobConfig parse_config(const std::string& text) {
    Raw raw;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'section.key = value'", line_no);
        std::string key_full = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        std::size_t dot = key_full.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 >= key_full.size())
            throw ParseError("key must look like 'section.key'", line_no);
        if (value.empty()) throw ParseError("missing value", line_no);
        apply_key(raw, normalize(key_full.substr(0, dot)), normalize(key_full.substr(dot + 1)),
                  value, line_no);
    }
    validate(raw.cfg, raw.has_modes);
    return raw.cfg;
}

JobConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'", 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const JobConfig& cfg) {
    std::ostringstream os;
    char buf[64];
    serialize_system(os, "system0", cfg.system0);
    os << "system0.seed_kind = " << cfg.seed0_kind << "\n";
    os << "system0.v = " << cfg.seed0_v << "\n";
    serialize_system(os, "system1", cfg.system1);
    if (cfg.system2) {
        serialize_system(os, "system2", *cfg.system2);
        os << "system2.seed_kind = " << cfg.seed1_kind << "\n";
        os << "system2.v = " << cfg.seed1_v << "\n";
    }
    std::snprintf(buf, sizeof(buf), "%.17g", cfg.quad_rel_tol);
    os << "numerics.quad_rel_tol = " << buf << "\n";
    os << "numerics.knots = " << cfg.knots << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", cfg.margin);
    os << "numerics.margin = " << buf << "\n";
    os << "numerics.grid_n = " << cfg.grid_n << "\n";
    os << "outputs.csv_path = " << cfg.csv_path << "\n";
    os << "outputs.report_path = " << cfg.report_path << "\n";
    if (!cfg.modes.empty()) {
        os << "outputs.modes = ";
        for (std::size_t i = 0; i < cfg.modes.size(); ++i)
            os << (i ? "," : "") << cfg.modes[i];
        os << "\n";
    }
    if (cfg.corrupt_energy != 0.0) {
        std::snprintf(buf, sizeof(buf), "%.17g", cfg.corrupt_energy);
        os << "debug.corrupt_energy = " << buf << "\n";
    }
    if (cfg.corrupt_weight_exponent != 4.0) {
        std::snprintf(buf, sizeof(buf), "%.17g", cfg.corrupt_weight_exponent);
        os << "debug.corrupt_weight_exponent = " << buf << "\n";
    }
    if (cfg.corrupt_alpha_factor != 1.0) {
        std::snprintf(buf, sizeof(buf), "%.17g", cfg.corrupt_alpha_factor);
        os << "debug.corrupt_alpha_factor = " << buf << "\n";
    }
    return os.str();
}

const ComposedSystem& BuiltJob::system() const {
    if (chain) return *chain;
    return *comp;
}

BuiltJob build_job(const JobConfig& cfg) {
    BuiltJob job;
    QuadSettings settings;
    settings.rel_tol = cfg.quad_rel_tol;

    job.system0 = make_system(cfg.system0, "system0");
    NodelessSolution seed0 = cfg.seed0_kind == "virtual"
                                 ? virtual_state(job.system0, cfg.seed0_v, settings)
                                 : overshoot_state(job.system0, cfg.seed0_v, settings);
    job.system1 = make_system(cfg.system1, "system1");

    CorruptionSpec corruption;
    corruption.energy_shift = cfg.corrupt_energy;
    corruption.weight_exponent = cfg.corrupt_weight_exponent;
    corruption.alpha_factor = cfg.corrupt_alpha_factor;

    job.comp = std::make_unique<Composition>(
        compose(std::move(seed0), job.system1, settings, cfg.knots, corruption));

    if (cfg.system2) {
        NodelessSolution seed1 = cfg.seed1_kind == "virtual"
                                     ? virtual_state(job.system1, cfg.seed1_v, settings)
                                     : overshoot_state(job.system1, cfg.seed1_v, settings);
        job.system2 = make_system(*cfg.system2, "system2");
        job.chain = std::make_unique<CompositionChain>(
            iterate(*job.comp, std::move(seed1), job.system2, settings, cfg.knots));
    }
    return job;
}

void write_csv_grid(const GridSample& grid, std::ostream& os) {
    os << "x";
    for (const auto& name : grid.names) os << "," << name;
    os << "\n";
    char buf[32];
    for (std::size_t i = 0; i < grid.xs.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", grid.xs[i]);
        os << buf;
        for (const auto& col : grid.columns) {
            std::snprintf(buf, sizeof(buf), "%.17g", col[i]);
            os << "," << buf;
        }
        os << "\n";
    }
}

}  // namespace potcompose
