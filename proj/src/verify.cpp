#include "potcompose/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "potcompose/errors.hpp"
#include "potcompose/grids.hpp"
#include "potcompose/parallel.hpp"

namespace potcompose {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_step(double h, double x, const Interval& dom) {
    if (dom.lo_finite()) h = std::min(h, (x - dom.lo()) / 8.0);
    if (dom.hi_finite()) h = std::min(h, (dom.hi() - x) / 8.0);
    return h;
}

}  // namespace

CheckResult residual_check(const ComposedSystem& comp, int m, int n_points, double margin,
                           double tol) {
    CheckResult res;
    res.name = "residual_m" + std::to_string(m);
    res.tol = tol;
    if (n_points < 16) throw std::invalid_argument("residual_check: n_points >= 16");
    if (!comp.valid_mode(m)) {
        res.pass = false;
        res.note = "mode index invalid for the terminal system";
        return res;
    }
    const Interval& dom = comp.source_domain();
    const double energy = comp.mode_energy(m);
    std::vector<double> xs = chebyshev_grid(dom, n_points, margin);
    std::vector<double> rel(xs.size());

    par_for(xs.size(), [&](std::size_t i) {
        double x = xs[i];
        double scale = std::max({1.0, std::sqrt(std::abs(comp.potential(x))),
                                 std::sqrt(std::abs(energy) * comp.weight(x))});
        double h = clamp_step(0.02 / scale, x, dom);
        auto fn = comp.precise_mode_fn(m, x + h);
        double f0 = fn(x);
        double dd = fd_second_derivative(fn, x, h);
        double vc = comp.potential_precise(x);
        double w = comp.weight_precise(x);
        double r = -dd + vc * f0 - energy * w * f0;
        double s = std::abs(dd) + std::abs(vc * f0) + std::abs(energy * w * f0) + 1e-12;
        rel[i] = std::abs(r) / s;
    });

    res.worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (rel[i] > res.worst) {
            res.worst = rel[i];
            res.location = xs[i];
        }
    }
    res.pass = res.worst <= tol;
    return res;
}

OrthogonalityResult orthogonality_check(const ComposedSystem& comp, int max_m, double tol,
                                        const QuadSettings& settings) {
    OrthogonalityResult out;
    out.offdiag.name = "orthogonality_offdiag";
    out.offdiag.tol = tol;
    out.diagonal.name = "orthogonality_diagonal";
    out.diagonal.tol = 10.0 * tol;

    const SpecPtr terminal = comp.terminal();
    for (int m = terminal->first_index; m <= max_m; ++m)
        if (comp.valid_mode(m)) out.modes.push_back(m);
    if (out.modes.empty()) {
        out.offdiag.note = out.diagonal.note = "no valid modes";
        return out;
    }
    const std::size_t n = out.modes.size();
    const Interval& dom = comp.source_domain();

    std::vector<Eigenfunction> efs;
    efs.reserve(n);
    for (int m : out.modes) efs.push_back(eigenfunction(terminal, m));
    const double expo = 2.0 - comp.weight_exponent();

    out.gram.assign(n, std::vector<double>(n, 0.0));
    std::vector<double> norms(n, 0.0);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) pairs.emplace_back(i, j);

    std::vector<char> failed(pairs.size() + n, 0);
    par_for(pairs.size(), [&](std::size_t k) {
        auto [i, j] = pairs[k];
        // fused phi_m^C phi_n^C w = phi_m(z) phi_n(z) exp((2-we) L)
        auto integrand = [&, i, j](double x) {
            double lchi, z;
            comp.chi_and_coordinate(x, &lchi, &z);
            return efs[i].value(z) * efs[j].value(z) * std::exp(expo * lchi);
        };
        try {
            double v = adaptive_quad(integrand, dom.lo(), dom.hi(), settings).value;
            out.gram[i][j] = v;
            out.gram[j][i] = v;
        } catch (const QuadratureFailure&) {
            failed[k] = 1;
        }
    });
    // Independent target-side norms int_c^d phi_m(y)^2 dy.
    const Interval& tgt = terminal->domain;
    par_for(n, [&](std::size_t i) {
        Eigenfunction ef = eigenfunction(terminal, out.modes[i]);
        auto f2 = [&ef](double y) { return ef.value(y) * ef.value(y); };
        try {
            norms[i] = adaptive_quad(f2, tgt.lo(), tgt.hi(), settings).value;
        } catch (const QuadratureFailure&) {
            failed[pairs.size() + i] = 1;
        }
    });
    if (std::any_of(failed.begin(), failed.end(), [](char c) { return c != 0; })) {
        out.offdiag.pass = out.diagonal.pass = false;
        out.offdiag.note = out.diagonal.note = "quadrature failure";
        return out;
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double scale = std::sqrt(out.gram[i][i] * out.gram[j][j]);
            double r = std::abs(out.gram[i][j]) / scale;
            if (r > out.offdiag.worst) {
                out.offdiag.worst = r;
                out.offdiag.location = out.modes[i];
            }
        }
        double d = std::abs(out.gram[i][i] - norms[i]) / norms[i];
        if (d > out.diagonal.worst) {
            out.diagonal.worst = d;
            out.diagonal.location = out.modes[i];
        }
    }
    out.offdiag.pass = out.offdiag.worst <= out.offdiag.tol;
    out.diagonal.pass = out.diagonal.worst <= out.diagonal.tol;
    {
        std::ostringstream s;
        s << "modes " << out.modes.front() << ".." << out.modes.back();
        out.offdiag.note = out.diagonal.note = s.str();
    }
    return out;
}

CheckResult mapping_check(const MappingKernel& kernel, double tol, double alpha_scale) {
    CheckResult res;
    res.name = "mapping";
    res.tol = tol;
    const Interval& src = kernel.source();
    const Interval& tgt = kernel.target();
    const double span = tgt.hi_finite() ? tgt.length() : 1.0;

    double worst = 0.0;
    bool lo_ok = false;
    {
        double x = compact_inverse(src, 0.5);
        double prev_gap = kInf;
        for (int j = 0; j < 1200; ++j) {
            double gap = std::abs(kernel.psi(x, EvalMode::Fast, alpha_scale) - tgt.lo());
            if (gap > prev_gap + 1e-14 * span) break;  // not converging monotonically
            prev_gap = gap;
            if (gap <= tol * span) {
                lo_ok = true;
                break;
            }
            if (src.lo_finite()) {
                double d = (x - src.lo()) * 0.5;
                if (d < 1e-300) break;
                x = src.lo() + d;
            } else {
                x -= std::max(0.35, 0.05 * std::abs(x));
            }
        }
        if (!lo_ok) worst = std::max(worst, prev_gap / span);
    }
    bool hi_ok = false;
    {
        double x = compact_inverse(src, 0.5);
        double prev = -kInf;
        for (int j = 0; j < 400; ++j) {
            double psi = kernel.psi(x, EvalMode::Fast, alpha_scale);
            if (psi < prev - 1e-14 * span) break;
            prev = psi;
            if (tgt.hi_finite()) {
                if (std::abs(tgt.hi() - psi) <= tol * span) {
                    hi_ok = true;
                    break;
                }
            } else if (psi - tgt.lo() > 1e6 * (1.0 + std::abs(tgt.lo()))) {
                hi_ok = true;
                break;
            }
            if (src.hi_finite()) {
                double d = (src.hi() - x) * 0.5;
                if (d < 1e-300) break;
                x = src.hi() - d;
            } else {
                x += std::max(0.35, 0.05 * std::abs(x));
            }
        }
        if (!hi_ok && tgt.hi_finite()) worst = std::max(worst, std::abs(tgt.hi() - prev) / span);
        if (!hi_ok && !tgt.hi_finite()) worst = std::max(worst, 1.0);
    }
    // Deterministic random monotonicity pairs on the compactified interior.
    bool mono_ok = true;
    {
        std::mt19937 rng(20140214u);
        std::uniform_real_distribution<double> uni(1e-4, 1.0 - 1e-4);
        for (int k = 0; k < 1000; ++k) {
            double u1 = uni(rng), u2 = uni(rng);
            if (u1 == u2) continue;
            if (u1 > u2) std::swap(u1, u2);
            double x1 = compact_inverse(src, u1);
            double x2 = compact_inverse(src, u2);
            if (!(kernel.psi(x1, EvalMode::Fast, alpha_scale) <
                  kernel.psi(x2, EvalMode::Fast, alpha_scale))) {
                mono_ok = false;
                res.location = x1;
                break;
            }
        }
    }
    res.pass = lo_ok && hi_ok && mono_ok;
    res.worst = worst;
    std::ostringstream note;
    note << "lo:" << (lo_ok ? "ok" : "FAIL") << " hi:" << (hi_ok ? "ok" : "FAIL")
         << " monotone:" << (mono_ok ? "ok" : "FAIL");
    res.note = note.str();
    return res;
}

VerificationReport full_report(const ComposedSystem& comp, const ReportOptions& options) {
    VerificationReport report;

    for (std::size_t i = 0; i < comp.stage_count(); ++i) {
        const MappingKernel& kernel = comp.stage_kernel(i);
        const NodelessSolution& seed = kernel.seed();
        const std::string prefix = "stage" + std::to_string(i) + "_";

        CheckResult scan;
        scan.name = prefix + "seed_nodeless";
        scan.tol = 0.0;
        scan.pass = nodeless_scan(seed.value, seed.owner->domain, 1024);
        report.checks.push_back(scan);

        BoundaryReport br = check_boundary_conditions(seed, options.quad);
        CheckResult ba;
        ba.name = prefix + "seed_boundary_A";
        ba.pass = br.a_holds;
        ba.note = br.diagnostics;
        report.checks.push_back(ba);
        CheckResult bb;
        bb.name = prefix + "seed_boundary_B";
        bb.pass = br.b_holds;
        report.checks.push_back(bb);

        CheckResult ray;
        ray.name = prefix + "seed_rayleigh";
        ray.tol = 1e-7;
        ray.worst = seed.rayleigh_spread;
        ray.pass = seed.rayleigh_spread <= 1e-7 &&
                   std::abs(seed.rayleigh_energy - seed.energy) <=
                       1e-6 * std::max(1.0, std::abs(seed.energy));
        if (seed.reference_energy_mismatch) {
            std::ostringstream s;
            s << "catalog formula " << seed.reference_energy
              << " disagrees with computed energy " << seed.energy
              << "; computed value used";
            ray.note = s.str();
        }
        report.checks.push_back(ray);

        CheckResult mp = mapping_check(kernel, options.mapping_tol, comp.stage_alpha_scale(i));
        mp.name = prefix + "mapping";
        report.checks.push_back(mp);
    }

    for (int m : options.modes)
        report.checks.push_back(
            residual_check(comp, m, options.n_points, options.margin, options.residual_tol));

    int max_m = -1;
    for (int m : options.modes)
        if (comp.valid_mode(m)) max_m = std::max(max_m, m);
    if (max_m >= 0) {
        OrthogonalityResult ortho =
            orthogonality_check(comp, max_m, options.ortho_tol, options.quad);
        report.checks.push_back(ortho.offdiag);
        report.checks.push_back(ortho.diagonal);
        report.gram = std::move(ortho.gram);
        report.gram_modes = std::move(ortho.modes);
    }

    std::sort(report.checks.begin(), report.checks.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    report.overall = std::all_of(report.checks.begin(), report.checks.end(),
                                 [](const CheckResult& c) { return c.pass; });
    return report;
}

std::string format_report(const VerificationReport& report) {
    std::ostringstream os;
    os.precision(6);
    os << "verification report\n";
    for (const auto& c : report.checks) {
        os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << "  worst=" << c.worst
           << " tol=" << c.tol;
        if (!c.note.empty()) os << "  (" << c.note << ")";
        os << "\n";
    }
    os << "overall: " << (report.overall ? "PASS" : "FAIL") << "\n";
    os << "# machine rows: name,pass,worst,tol\n";
    for (const auto& c : report.checks) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%s,%d,%.17g,%.17g\n", c.name.c_str(),
                      c.pass ? 1 : 0, c.worst, c.tol);
        os << buf;
    }
    return os.str();
}

}  // namespace potcompose
