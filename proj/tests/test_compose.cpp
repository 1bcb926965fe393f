#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "potcompose/composition.hpp"
#include "potcompose/errors.hpp"
#include "potcompose/numerics.hpp"

using namespace potcompose;

namespace {
const double kPi = std::acos(-1.0);

NodelessSolution exp_seed() {
    SpecPtr fp = make_potential(Family::FreeParticle, {{"kappa", 1.0}});
    return virtual_state(fp, 0);
}
}  // namespace

TEST_CASE("closed-form kernel: exp seed mapped to (0,1)") {
    MappingKernel k = build_mapping(exp_seed(), Interval(0.0, 1.0));
    CHECK(k.alpha() == 1.0);
    // I(x) = exp(-2x)/2, psi(0) = 1/(1+1/2) = 2/3, chi(0) = 3/2,
    // psi'(0) = 1/chi^2 = 4/9
    CHECK(std::exp(k.log_tail(0.0)) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(k.psi(0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(k.chi(0.0) == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(k.psi_prime(0.0) == doctest::Approx(4.0 / 9.0).epsilon(1e-10));
    // frozen reference values at other points (40-digit arithmetic)
    CHECK(k.psi(-1.0) == doctest::Approx(0.2130139578384015010211).epsilon(1e-10));
    CHECK(k.chi(-1.0) == doctest::Approx(1.727020355400964939276).epsilon(1e-10));
    CHECK(k.psi(2.0) == doctest::Approx(0.9909252851556862529571).epsilon(1e-10));
    CHECK(k.chi(2.0) == doctest::Approx(7.456723740548956573177).epsilon(1e-10));
    // chi_prime = phi'(alpha+I) - 1/phi
    double cp = k.chi_prime(0.4);
    double fd = fd_first_derivative([&](double t) { return k.chi(t); }, 0.4, 1e-5);
    CHECK(cp == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("closed-form kernel: exp seed mapped to a half line") {
    MappingKernel k = build_mapping(exp_seed(), Interval::half_line(0.0));
    CHECK(k.alpha() == 0.0);
    // psi(x) = 1/I(x) = 2 exp(2x)
    for (double x : {-1.0, 0.0, 1.5})
        CHECK(k.psi(x) == doctest::Approx(2.0 * std::exp(2.0 * x)).epsilon(1e-9));
    CHECK(k.psi(8.0) > 1e6);
}

TEST_CASE("target with infinite lower endpoint is rejected") {
    CHECK_THROWS_AS(
        (void)build_mapping(exp_seed(), Interval(-std::numeric_limits<double>::infinity(), 5.0)),
        TargetLowerInfinite);
}

TEST_CASE("a seed violating (A) fails the mapping build") {
    // a constant seed on (0,1) keeps its tail integral bounded at the
    // lower endpoint, so condition (A) fails; custom_nodeless is the
    // earliest surface that rejects it
    auto val = [](double) { return 1.0; };
    auto der = [](double) { return 0.0; };
    auto sdd = [](double) { return 0.0; };
    CHECK_THROWS_AS((void)custom_nodeless(val, der, sdd, 0.0, Interval(0.0, 1.0)),
                    BoundaryCheckFailed);
}

TEST_CASE("free particle + infinite well: V_C is identically 1") {
    SpecPtr well = make_potential(Family::InfiniteWell, {{"width", 1.0}});
    Composition comp = compose(exp_seed(), well);
    for (double x : {-3.0, -0.5, 0.0, 1.0, 2.5})
        CHECK(comp.potential(x) == doctest::Approx(1.0).epsilon(1e-12));
    // composed mode value at x=0: chi0(0) sin(pi * 2/3) = 1.5 * sqrt(3)/2
    ComposedMode m1 = comp.solution(1);
    CHECK(m1.energy == doctest::Approx(kPi * kPi));
    CHECK(m1.value(0.0) == doctest::Approx(1.29903810567665797).epsilon(1e-9));
    CHECK_THROWS_AS((void)comp.solution(0), IndexOutOfRange);
}

TEST_CASE("radial oscillator virtual seed + infinite well: V_C = x^2 + 3") {
    SpecPtr ro = make_potential(Family::RadialOscillator, {{"g", 1.0}});
    SpecPtr well = make_potential(Family::InfiniteWell, {{"width", 1.0}});
    Composition comp = compose(virtual_state(ro, 0), well);
    for (double x : {0.3, 0.9, 1.7, 3.0})
        CHECK(comp.potential(x) == doctest::Approx(x * x + 3.0).epsilon(1e-12));
}

TEST_CASE("exp seed + Poschl-Teller target (0, pi/2)") {
    SpecPtr pt = make_potential(Family::PoschlTeller, {{"g", 1.0}, {"h", 1.0}});
    Composition comp = compose(exp_seed(), pt);
    // alpha = 2/pi; at x=0: I=1/2, psi0(0) = 1/(2/pi + 1/2),
    // chi0(0) = 2/pi + 1/2 (frozen 40-digit values)
    CHECK(comp.psi0(0.0) == doctest::Approx(0.879801692976885248179).epsilon(1e-10));
    CHECK(comp.chi0(0.0) == doctest::Approx(1.136619772367581343076).epsilon(1e-10));
    // PT(1,1) has V identically zero, so V_C(0) = 1 exactly like the well
    CHECK(comp.potential(0.0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("psi0 consistency, monotonicity and chi0 residual") {
    SpecPtr ro = make_potential(Family::RadialOscillator, {{"g", 1.5}});
    SpecPtr well = make_potential(Family::InfiniteWell, {{"width", 1.0}});
    NodelessSolution seed = virtual_state(ro, 1);
    Composition comp = compose(seed, well);
    const MappingKernel& k = comp.kernel();

    std::mt19937 rng(99u);
    std::uniform_real_distribution<double> uni(0.05, 4.0);
    double prev_x = -1.0, prev_psi = -1.0;
    for (int i = 0; i < 100; ++i) {
        double x = uni(rng);
        // two expressions of Eq-psi0: c + 1/(alpha+I) vs c + phi0/chi0
        double direct = k.psi(x);
        double via_ratio = 0.0 + seed.value(x) / k.chi(x);
        CHECK(std::abs(direct - via_ratio) <= 1e-10 * (0.0 + 1.0 / k.alpha()));
        if (prev_x >= 0.0 && x > prev_x) CHECK(direct > prev_psi);
        prev_x = x;
        prev_psi = direct;
        CHECK(k.psi_prime(x) > 0.0);
    }
    // finite-difference slope of psi matches chi^{-2}
    for (double x : {0.4, 1.1, 2.2}) {
        double fd = fd_first_derivative([&](double t) { return k.psi(t, EvalMode::Precise); },
                                        x, 1e-3);
        CHECK(fd == doctest::Approx(k.psi_prime(x, EvalMode::Precise)).epsilon(1e-6));
    }
    // chi residual: -chi'' + (V0 - E0) chi = 0
    for (double x : {0.5, 1.0, 2.0}) {
        double dd = fd_second_derivative(
            [&](double t) { return k.chi(t, EvalMode::Precise); }, x, 1e-3);
        double resid = -dd + (ro->V(x) - seed.energy) * k.chi(x, EvalMode::Precise);
        double scale = std::abs(dd) + std::abs(ro->V(x) * k.chi(x, EvalMode::Precise));
        CHECK(std::abs(resid) / scale < 1e-6);
        // chi_prime identity against finite differences
        double cp = fd_first_derivative(
            [&](double t) { return k.chi(t, EvalMode::Precise); }, x, 1e-4);
        CHECK(k.chi_prime(x, EvalMode::Precise) == doctest::Approx(cp).epsilon(1e-6));
    }
}

TEST_CASE("iterate: seed owner mismatch is rejected") {
    SpecPtr well = make_potential(Family::InfiniteWell, {{"width", 1.0}});
    Composition comp = compose(exp_seed(), well);
    SpecPtr ro = make_potential(Family::RadialOscillator, {{"g", 1.0}});
    CHECK_THROWS_AS((void)iterate(comp, virtual_state(ro, 0), well), SeedOwnerMismatch);
}

TEST_CASE("chain with a vanishing second stage reproduces the plain V_C") {
    // System 1 = custom V=0 on (0,1) carrying the linear seed phi1 = y
    // with E1 = 0; System 2 = infinite well (V=0). The stage-2 terms then
    // vanish identically and V_chain must equal the plain composition's
    // V_C built over the same custom system.
    auto val = [](double y) { return y; };
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    auto [sys1, seed1] = custom_nodeless(val, one, zero, 0.0, Interval(0.0, 1.0));

    Composition comp = compose(exp_seed(), sys1);
    SpecPtr well = make_potential(Family::InfiniteWell, {{"width", 1.0}});
    CompositionChain chain = iterate(comp, seed1, well);

    for (double x : {-2.0, -0.3, 0.6, 1.9})
        CHECK(chain.potential(x) ==
              doctest::Approx(comp.potential(x)).epsilon(1e-10).scale(1.0));
}

TEST_CASE("two-stage chain vs direct nested evaluation") {
    SpecPtr pt = make_potential(Family::PoschlTeller, {{"g", 1.5}, {"h", 2.6}});
    SpecPtr well = make_potential(Family::InfiniteWell, {{"width", 1.0}});
    Composition comp = compose(exp_seed(), pt);
    NodelessSolution seed1 = virtual_state(pt, 0);
    CompositionChain chain = iterate(comp, seed1, well);

    QuadSettings tight;
    tight.rel_tol = 1e-13;
    MappingKernel k0 = build_mapping(exp_seed(), pt->domain, tight, 192);
    MappingKernel k1 = build_mapping(virtual_state(pt, 0), well->domain, tight, 192);

    auto mode = chain.mode_evaluator(1);
    for (double x : {-1.0, 0.0, 0.8}) {
        double y = k0.psi(x, EvalMode::Precise);
        double z = k1.psi(y, EvalMode::Precise);
        double direct = k0.chi(x, EvalMode::Precise) * k1.chi(y, EvalMode::Precise) *
                        std::sin(kPi * z);
        CHECK(mode(x) == doctest::Approx(direct).epsilon(1e-8));
    }
}

TEST_CASE("sample_grid contracts") {
    SpecPtr well = make_potential(Family::InfiniteWell, {{"width", 1.0}});
    Composition comp = compose(exp_seed(), well);

    GridSample g3 = sample_grid(comp, 3, 0.25, {});
    CHECK(g3.xs.size() == 3);
    CHECK(g3.names == std::vector<std::string>{"V_C", "psi0", "chi0", "weight"});

    GridSample g = sample_grid(comp, 101, 0.01, {1});
    CHECK(g.names.back() == "phi_C_1");
    for (std::size_t i = 0; i < g.xs.size(); ++i) {
        double x = g.xs[i];
        double psi = 1.0 / (1.0 + 0.5 * std::exp(-2.0 * x));
        double chi = std::exp(x) * (1.0 + 0.5 * std::exp(-2.0 * x));
        CHECK(g.columns[4][i] == doctest::Approx(chi * std::sin(kPi * psi)).epsilon(1e-9));
        if (i > 0) CHECK(g.xs[i] > g.xs[i - 1]);
    }

    SpecPtr ro = make_potential(Family::RadialOscillator, {{"g", 1.0}});
    Composition half = compose(virtual_state(ro, 0), well);
    GridSample gh = sample_grid(half, 50, 1e-3, {});
    CHECK(std::isfinite(gh.xs.back()));
    CHECK(gh.xs.back() == doctest::Approx(std::atanh(1.0 - 1e-3)).epsilon(1e-12));
}
