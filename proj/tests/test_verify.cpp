#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "potcompose/errors.hpp"
#include "potcompose/verify.hpp"

using namespace potcompose;

namespace {
const double kPi = std::acos(-1.0);

Composition well_comp(CorruptionSpec corruption = {}) {
    SpecPtr fp = make_potential(Family::FreeParticle, {{"kappa", 1.0}});
    SpecPtr well = make_potential(Family::InfiniteWell, {{"width", 1.0}});
    return compose(virtual_state(fp, 0), well, {}, 128, corruption);
}
}  // namespace

TEST_CASE("residual check passes on the closed-form composition") {
    Composition comp = well_comp();
    for (int m = 1; m <= 3; ++m) {
        CheckResult r = residual_check(comp, m, 32, 1e-3, 1e-7);
        CHECK(r.pass);
        CHECK(r.worst < 1e-7);
    }
}

TEST_CASE("residual check fails with a corrupted seed energy") {
    CorruptionSpec bad;
    bad.energy_shift = 0.1;
    Composition comp = well_comp(bad);
    CheckResult r = residual_check(comp, 1, 32, 1e-3, 1e-6);
    CHECK_FALSE(r.pass);
}

TEST_CASE("orthogonality: well norms are 1/2 and off-diagonals vanish") {
    Composition comp = well_comp();
    OrthogonalityResult o = orthogonality_check(comp, 4, 1e-8);
    REQUIRE(o.modes == std::vector<int>{1, 2, 3, 4});
    CHECK(o.offdiag.pass);
    CHECK(o.diagonal.pass);
    CHECK(o.offdiag.worst < 1e-8);
    for (std::size_t i = 0; i < o.gram.size(); ++i) {
        CHECK(o.gram[i][i] == doctest::Approx(0.5).epsilon(1e-8));
        CHECK(o.gram[i][i] > 0.0);
    }
}

TEST_CASE("orthogonality diagonals match a Poschl-Teller System 1") {
    SpecPtr fp = make_potential(Family::FreeParticle, {{"kappa", 1.0}});
    SpecPtr pt = make_potential(Family::PoschlTeller, {{"g", 2.0}, {"h", 2.0}});
    Composition comp = compose(virtual_state(fp, 0), pt);
    OrthogonalityResult o = orthogonality_check(comp, 3, 1e-8);
    CHECK(o.offdiag.pass);
    CHECK(o.diagonal.pass);
    // oracle: direct quadrature of phi_m^2 over (0, pi/2) at 1e-12
    QuadSettings tight;
    tight.rel_tol = 1e-12;
    for (std::size_t i = 0; i < o.modes.size(); ++i) {
        Eigenfunction ef = eigenfunction(pt, o.modes[i]);
        double oracle =
            adaptive_quad([&](double y) { return ef.value(y) * ef.value(y); }, 0.0,
                          kPi / 2.0, tight)
                .value;
        CHECK(o.gram[i][i] == doctest::Approx(oracle).epsilon(1e-7));
    }
}

TEST_CASE("mapping check on the closed-form kernel") {
    Composition comp = well_comp();
    CheckResult r = mapping_check(comp.kernel(), 1e-6);
    CHECK(r.pass);
    // psi0(-20) < 1e-8 and 1 - psi0(20) < 1e-8 in closed form
    CHECK(comp.kernel().psi(-20.0) < 1e-8);
    CHECK(1.0 - comp.kernel().psi(20.0) < 1e-8);
}

TEST_CASE("half-line target passes through the unboundedness probe") {
    SpecPtr fp = make_potential(Family::FreeParticle, {{"kappa", 1.0}});
    MappingKernel k = build_mapping(virtual_state(fp, 0), Interval::half_line(0.0));
    CheckResult r = mapping_check(k, 1e-6);
    CHECK(r.pass);
}

TEST_CASE("fault injection flips at least one check each") {
    ReportOptions options;
    options.modes = {1, 2};

    VerificationReport clean = full_report(well_comp(), options);
    CHECK(clean.overall);

    CorruptionSpec e;
    e.energy_shift = 0.1;
    VerificationReport re = full_report(well_comp(e), options);
    CHECK_FALSE(re.overall);

    CorruptionSpec w;
    w.weight_exponent = 3.9;
    VerificationReport rw = full_report(well_comp(w), options);
    CHECK_FALSE(rw.overall);

    CorruptionSpec a;
    a.alpha_factor = 1.01;
    VerificationReport ra = full_report(well_comp(a), options);
    CHECK_FALSE(ra.overall);
}

TEST_CASE("full report aggregates and stays sorted") {
    ReportOptions options;
    options.modes = {1};
    VerificationReport rep = full_report(well_comp(), options);
    CHECK(rep.overall);
    for (std::size_t i = 1; i < rep.checks.size(); ++i)
        CHECK(rep.checks[i - 1].name < rep.checks[i].name);
    bool all = true;
    for (const auto& c : rep.checks) all = all && c.pass;
    CHECK(rep.overall == all);
    std::string text = format_report(rep);
    CHECK(text.find("overall: PASS") != std::string::npos);
    CHECK(text.find("residual_m1,1,") != std::string::npos);
}

TEST_CASE("two-stage chain report includes per-stage mapping checks") {
    SpecPtr fp = make_potential(Family::FreeParticle, {{"kappa", 1.0}});
    SpecPtr pt = make_potential(Family::PoschlTeller, {{"g", 1.5}, {"h", 2.6}});
    SpecPtr well = make_potential(Family::InfiniteWell, {{"width", 1.0}});
    Composition comp = compose(virtual_state(fp, 0), pt);
    CompositionChain chain = iterate(comp, virtual_state(pt, 0), well);

    ReportOptions options;
    options.modes = {1};
    options.residual_tol = 1e-5;
    VerificationReport rep = full_report(chain, options);
    int mapping_checks = 0;
    for (const auto& c : rep.checks)
        if (c.name.find("_mapping") != std::string::npos) ++mapping_checks;
    CHECK(mapping_checks == 2);
    CHECK(rep.overall);
}

TEST_CASE("change-of-variables identity: source-side vs target-side integrals") {
    Composition comp = well_comp();
    const Interval& dom = comp.source_domain();
    QuadSettings s;
    for (int m = 1; m <= 3; ++m) {
        for (int n = m; n <= 3; ++n) {
            Eigenfunction em = eigenfunction(comp.terminal(), m);
            Eigenfunction en = eigenfunction(comp.terminal(), n);
            auto fused = [&](double x) {
                double lchi, z;
                comp.chi_and_coordinate(x, &lchi, &z);
                return em.value(z) * en.value(z) * std::exp(-2.0 * lchi);
            };
            double source_side = adaptive_quad(fused, dom.lo(), dom.hi(), s).value;
            double target_side =
                adaptive_quad([&](double y) { return em.value(y) * en.value(y); }, 0.0, 1.0,
                              s)
                    .value;
            CHECK(std::abs(source_side - target_side) <=
                  1e-7 * (std::abs(target_side) + 0.5));
        }
    }
}
