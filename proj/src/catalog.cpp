#include "potcompose/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "potcompose/errors.hpp"
#include "potcompose/grids.hpp"
#include "potcompose/orthopoly.hpp"
#include "potcompose/parallel.hpp"

namespace potcompose {

namespace op = orthopoly;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kPi = std::acos(-1.0);

// log(sinh x) and log(cosh x) without overflow; x > 0 for sinh.
double log_sinh(double x) { return x - M_LN2 + std::log(-std::expm1(-2.0 * x)); }
double log_cosh(double x) {
    double a = std::abs(x);
    return a - M_LN2 + std::log1p(std::exp(-2.0 * a));
}

// P_n'(x)/P_n(x) through the log forms; safe where P_n overflows plain
// evaluation. Only valid away from zeros of P_n (nodeless seeds).
double jacobi_log_ratio(int n, double a, double b, double x) {
    if (n == 0) return 0.0;
    op::SignLog p = op::jacobi_eval_log(n, a, b, x);
    op::SignLog d = op::jacobi_eval_log(n - 1, a + 1.0, b + 1.0, x);
    if (p.sign == 0.0 || d.sign == 0.0) return 0.0;
    return 0.5 * (n + a + b + 1.0) * p.sign * d.sign * std::exp(d.log_abs - p.log_abs);
}

double laguerre_log_ratio(int n, double a, double x) {
    if (n == 0) return 0.0;
    op::SignLog p = op::laguerre_eval_log(n, a, x);
    op::SignLog d = op::laguerre_eval_log(n - 1, a + 1.0, x);
    if (p.sign == 0.0 || d.sign == 0.0) return 0.0;
    return -p.sign * d.sign * std::exp(d.log_abs - p.log_abs);
}

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 Family f) {
    auto it = params.find(key);
    if (it == params.end())
        throw ParamOutOfRange(family_name(f) + ": missing parameter '" + key + "'");
    if (!std::isfinite(it->second))
        throw ParamOutOfRange(family_name(f) + ": parameter '" + key + "' must be finite");
    return it->second;
}

void reject_unknown(const std::map<std::string, double>& params,
                    std::initializer_list<const char*> known, Family f) {
    for (const auto& [k, v] : params) {
        (void)v;
        if (std::find_if(known.begin(), known.end(),
                         [&](const char* s) { return k == s; }) == known.end())
            throw ParamOutOfRange(family_name(f) + ": unknown parameter '" + k + "'");
    }
}

// ---------------------------------------------------------------------
// Rayleigh-quotient oracle: (-phi'' + V phi) / phi sampled on interior
// points, second derivative by central differences with two Richardson
// levels. The step adapts to the local logarithmic-derivative scale so
// that the oracle stays accurate even for tiny energies such as the
// Poschl-Teller (g-h+1+2v)^2 values near zero.
struct RayleighResult {
    double mean = 0.0;
    double spread = 0.0;  // max |RQ_i - mean| / max(1, |mean|)
};

RayleighResult rayleigh_quotient(const std::function<double(double)>& V,
                                 const std::function<double(double)>& phi,
                                 const std::function<double(double)>& phi_prime,
                                 const Interval& dom, double energy_scale) {
    std::vector<double> xs = chebyshev_grid(dom, 10, 0.1);
    std::vector<double> rq(xs.size());
    par_for(xs.size(), [&](std::size_t i) {
        double x = xs[i];
        double f = phi(x);
        double scale = std::max({1.0, std::sqrt(std::abs(energy_scale)),
                                 std::sqrt(std::abs(V(x))), std::abs(phi_prime(x) / f)});
        double h = 0.0226 / scale;
        if (dom.lo_finite()) h = std::min(h, (x - dom.lo()) / 8.0);
        if (dom.hi_finite()) h = std::min(h, (dom.hi() - x) / 8.0);
        auto d2 = [&](double step) {
            return (phi(x - step) - 2.0 * f + phi(x + step)) / (step * step);
        };
        double a = d2(h), b = d2(0.5 * h), c = d2(0.25 * h);
        double r1 = (4.0 * b - a) / 3.0;
        double r2 = (4.0 * c - b) / 3.0;
        double dd = (16.0 * r2 - r1) / 15.0;
        rq[i] = (-dd + V(x) * f) / f;
    });
    RayleighResult res;
    for (double v : rq) res.mean += v;
    res.mean /= static_cast<double>(rq.size());
    double norm = std::max(1.0, std::abs(res.mean));
    for (double v : rq) res.spread = std::max(res.spread, std::abs(v - res.mean) / norm);
    return res;
}

// Shared seed finisher: positivity normalization, nodelessness scan,
// Rayleigh constancy + energy cross-check, boundary conditions.
NodelessSolution finish_seed(SpecPtr owner, SeedKind kind, int degree, double used_energy,
                             double reference_energy, std::function<double(double)> value,
                             std::function<double(double)> log_abs,
                             std::function<double(double)> deriv,
                             const QuadSettings& settings) {
    const Interval& dom = owner->domain;
    double probe = compact_inverse(dom, 0.5);
    if (value(probe) < 0.0) {
        auto v_old = value;
        auto d_old = deriv;
        value = [v_old](double x) { return -v_old(x); };
        deriv = [d_old](double x) { return -d_old(x); };
    }

    NodelessSolution sol;
    sol.owner = owner;
    sol.kind = kind;
    sol.degree = degree;
    sol.energy = used_energy;
    sol.reference_energy = reference_energy;
    sol.value = value;
    sol.log_abs = std::move(log_abs);
    sol.deriv = deriv;

    if (!nodeless_scan(value, dom, 1024))
        throw ConstructionCheckFailed(family_name(owner->family) +
                                      " seed (degree " + std::to_string(degree) +
                                      "): nodelessness scan found a sign change");

    RayleighResult rq = rayleigh_quotient(owner->V, value, deriv, dom, used_energy);
    sol.rayleigh_energy = rq.mean;
    sol.rayleigh_spread = rq.spread;
    if (rq.spread > 1e-7)
        throw ConstructionCheckFailed(
            family_name(owner->family) + " seed: Rayleigh quotient not constant (spread " +
            std::to_string(rq.spread) + ")");
    if (std::abs(used_energy - rq.mean) > 1e-6 * std::max(1.0, std::abs(used_energy)))
        throw ConstructionCheckFailed(
            family_name(owner->family) + " seed: energy formula " +
            std::to_string(used_energy) + " disagrees with Rayleigh quotient " +
            std::to_string(rq.mean));
    sol.reference_energy_mismatch =
        std::abs(reference_energy - rq.mean) > 1e-6 * std::max(1.0, std::abs(rq.mean));

    BoundaryReport br = check_boundary_conditions(sol, settings);
    if (!br.a_holds || !br.b_holds)
        throw ConstructionCheckFailed(family_name(owner->family) +
                                      " seed: boundary conditions failed: " + br.diagnostics);
    return sol;
}

void require_family(const PotentialSpec& spec, std::initializer_list<Family> allowed,
                    const char* what) {
    for (Family f : allowed)
        if (spec.family == f) return;
    throw IndexOutOfRange(std::string(what) + " not defined for family " +
                          family_name(spec.family));
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::RadialOscillator: return "radial_oscillator";
        case Family::PoschlTeller: return "poschl_teller";
        case Family::HyperbolicPT: return "hyperbolic_pt";
        case Family::RosenMorse: return "rosen_morse";
        case Family::Eckart: return "eckart";
        case Family::FreeParticle: return "free_particle";
        case Family::InfiniteWell: return "infinite_well";
        case Family::Custom: return "custom";
    }
    return "?";
}

long strict_floor(double a) {
    double f = std::floor(a);
    if (f == a) return static_cast<long>(f) - 1;
    return static_cast<long>(f);
}

long int_greater(double a) { return static_cast<long>(std::floor(a)) + 1; }

bool PotentialSpec::valid_index(int n) const {
    if (n < first_index) return false;
    if (n_bound && static_cast<long>(n) - first_index >= *n_bound) return false;
    return true;
}

double PotentialSpec::eigen_energy(int n) const {
    if (!valid_index(n))
        throw IndexOutOfRange(family_name(family) + ": eigenstate index " +
                              std::to_string(n) + " out of range");
    return eigen_energy_fn(n);
}

bool IndexBracket::admits(long v) const {
    if (empty || v < min_degree) return false;
    if (max_degree && v > *max_degree) return false;
    return true;
}

SpecPtr make_potential(Family family, const std::map<std::string, double>& params) {
    auto spec = std::make_shared<PotentialSpec>();
    spec->family = family;
    spec->params = params;

    switch (family) {
        case Family::RadialOscillator: {
            reject_unknown(params, {"g"}, family);
            double g = get_param(params, "g", family);
            if (!(g > 0.5)) throw ParamOutOfRange("radial_oscillator: requires g > 1/2");
            spec->domain = Interval::half_line(0.0);
            double gg = g * (g - 1.0);
            spec->V = [g, gg](double x) { return x * x + gg / (x * x); };
            spec->V_prime = [gg](double x) { return 2.0 * x - 2.0 * gg / (x * x * x); };
            spec->eigen_energy_fn = [g](int n) { return 4.0 * n + 2.0 * g + 1.0; };
            spec->ground_energy = 2.0 * g + 1.0;
            spec->n_bound = std::nullopt;
            spec->eigen_builder = [g](int n) {
                Eigenfunction e;
                e.energy = 4.0 * n + 2.0 * g + 1.0;
                e.value = [n, g](double x) {
                    return std::pow(x, g) * std::exp(-0.5 * x * x) *
                           op::laguerre_eval(n, g - 0.5, x * x);
                };
                e.deriv = [n, g](double x) {
                    double u = x * x;
                    double L = op::laguerre_eval(n, g - 0.5, u);
                    double Ld = op::laguerre_deriv(n, g - 0.5, u);
                    return std::pow(x, g - 1.0) * std::exp(-0.5 * u) *
                           ((g - u) * L + 2.0 * u * Ld);
                };
                return e;
            };
            break;
        }
        case Family::PoschlTeller: {
            reject_unknown(params, {"g", "h"}, family);
            double g = get_param(params, "g", family);
            double h = get_param(params, "h", family);
            if (!(g > 0.5 && h > 0.5)) throw ParamOutOfRange("poschl_teller: requires g,h > 1/2");
            spec->domain = Interval(0.0, 0.5 * kPi);
            double gg = g * (g - 1.0), hh = h * (h - 1.0);
            spec->V = [gg, hh](double x) {
                double s = std::sin(x), c = std::cos(x);
                return gg / (s * s) + hh / (c * c);
            };
            spec->V_prime = [gg, hh](double x) {
                double s = std::sin(x), c = std::cos(x);
                return -2.0 * gg * c / (s * s * s) + 2.0 * hh * s / (c * c * c);
            };
            spec->eigen_energy_fn = [g, h](int n) {
                double t = g + h + 2.0 * n;
                return t * t;
            };
            spec->ground_energy = (g + h) * (g + h);
            spec->n_bound = std::nullopt;
            spec->eigen_builder = [g, h](int n) {
                Eigenfunction e;
                double t = g + h + 2.0 * n;
                e.energy = t * t;
                e.value = [n, g, h](double x) {
                    double s = std::sin(x), c = std::cos(x);
                    return std::pow(s, g) * std::pow(c, h) *
                           op::jacobi_eval(n, g - 0.5, h - 0.5, std::cos(2.0 * x));
                };
                e.deriv = [n, g, h](double x) {
                    double s = std::sin(x), c = std::cos(x);
                    double u = std::cos(2.0 * x);
                    double P = op::jacobi_eval(n, g - 0.5, h - 0.5, u);
                    double Pd = op::jacobi_deriv(n, g - 0.5, h - 0.5, u);
                    return std::pow(s, g - 1.0) * std::pow(c, h - 1.0) *
                           ((g * c * c - h * s * s) * P - 4.0 * s * s * c * c * Pd);
                };
                return e;
            };
            break;
        }
        case Family::HyperbolicPT: {
            reject_unknown(params, {"g", "h"}, family);
            double g = get_param(params, "g", family);
            double h = get_param(params, "h", family);
            if (!(h > g && g > 0.5)) throw ParamOutOfRange("hyperbolic_pt: requires h > g > 1/2");
            spec->domain = Interval::half_line(0.0);
            double gg = g * (g - 1.0), hh = h * (h + 1.0);
            spec->V = [gg, hh](double x) {
                double s = std::sinh(x), c = std::cosh(x);
                return gg / (s * s) - hh / (c * c);
            };
            spec->V_prime = [gg, hh](double x) {
                double s = std::sinh(x), c = std::cosh(x);
                return -2.0 * gg * c / (s * s * s) + 2.0 * hh * s / (c * c * c);
            };
            spec->eigen_energy_fn = [g, h](int n) {
                double t = h - g - 2.0 * n;
                return -t * t;
            };
            spec->ground_energy = -(h - g) * (h - g);
            spec->n_bound = strict_floor((h - g) / 2.0) + 1;
            spec->eigen_builder = [g, h](int n) {
                Eigenfunction e;
                double t = h - g - 2.0 * n;
                e.energy = -t * t;
                e.value = [n, g, h](double x) {
                    double s = std::sinh(x), c = std::cosh(x);
                    return std::pow(s, g) * std::pow(c, -h) *
                           op::jacobi_eval(n, g - 0.5, -h - 0.5, std::cosh(2.0 * x));
                };
                e.deriv = [n, g, h](double x) {
                    double s = std::sinh(x), c = std::cosh(x);
                    double u = std::cosh(2.0 * x);
                    double P = op::jacobi_eval(n, g - 0.5, -h - 0.5, u);
                    double Pd = op::jacobi_deriv(n, g - 0.5, -h - 0.5, u);
                    return std::pow(s, g - 1.0) * std::pow(c, -h - 1.0) *
                           ((g * c * c - h * s * s) * P + 4.0 * s * s * c * c * Pd);
                };
                return e;
            };
            break;
        }
        case Family::RosenMorse: {
            reject_unknown(params, {"h", "mu"}, family);
            double h = get_param(params, "h", family);
            double mu = get_param(params, "mu", family);
            if (!(mu > 0.0 && h > std::sqrt(mu)))
                throw ParamOutOfRange("rosen_morse: requires h > sqrt(mu) > 0");
            spec->domain = Interval::whole_line();
            double hh = h * (h + 1.0);
            spec->V = [hh, mu](double x) {
                double c = std::cosh(x);
                return -hh / (c * c) + 2.0 * mu * std::tanh(x);
            };
            spec->V_prime = [hh, mu](double x) {
                double c = std::cosh(x);
                return 2.0 * hh * std::sinh(x) / (c * c * c) + 2.0 * mu / (c * c);
            };
            spec->eigen_energy_fn = [h, mu](int n) {
                double p = h - n;
                return -p * p - mu * mu / (p * p);
            };
            spec->ground_energy = -h * h - mu * mu / (h * h);
            spec->n_bound = strict_floor(h - std::sqrt(mu)) + 1;
            spec->eigen_builder = [h, mu](int n) {
                Eigenfunction e;
                double p = h - n;
                double lam = -mu / p;
                double a = p + mu / p, b = p - mu / p;
                e.energy = -p * p - mu * mu / (p * p);
                e.value = [p, lam, a, b, n](double x) {
                    return std::exp(lam * x - p * log_cosh(x)) *
                           op::jacobi_eval(n, a, b, std::tanh(x));
                };
                e.deriv = [p, lam, a, b, n](double x) {
                    double t = std::tanh(x);
                    double sech2 = std::exp(-2.0 * log_cosh(x));
                    double P = op::jacobi_eval(n, a, b, t);
                    double Pd = op::jacobi_deriv(n, a, b, t);
                    return std::exp(lam * x - p * log_cosh(x)) *
                           ((lam - p * t) * P + sech2 * Pd);
                };
                return e;
            };
            break;
        }
        case Family::Eckart: {
            reject_unknown(params, {"g", "mu"}, family);
            double g = get_param(params, "g", family);
            double mu = get_param(params, "mu", family);
            if (!(g > 0.5 && std::sqrt(mu) > g))
                throw ParamOutOfRange("eckart: requires sqrt(mu) > g > 1/2");
            spec->domain = Interval::half_line(0.0);
            double gg = g * (g - 1.0);
            spec->V = [gg, mu](double x) {
                double s = std::sinh(x);
                return gg / (s * s) - 2.0 * mu / std::tanh(x);
            };
            spec->V_prime = [gg, mu](double x) {
                double s = std::sinh(x);
                return -2.0 * gg * std::cosh(x) / (s * s * s) + 2.0 * mu / (s * s);
            };
            spec->eigen_energy_fn = [g, mu](int n) {
                double q = g + n;
                return -q * q - mu * mu / (q * q);
            };
            spec->ground_energy = -g * g - mu * mu / (g * g);
            spec->n_bound = strict_floor(std::sqrt(mu) - g) + 1;
            spec->eigen_builder = [g, mu](int n) {
                Eigenfunction e;
                double q = g + n;
                double lam = -mu / q;
                double a = -q + mu / q, b = -q - mu / q;
                e.energy = -q * q - mu * mu / (q * q);
                e.value = [q, lam, a, b, n](double x) {
                    return std::exp(lam * x + q * log_sinh(x)) *
                           op::jacobi_eval(n, a, b, 1.0 / std::tanh(x));
                };
                e.deriv = [q, lam, a, b, n](double x) {
                    double u = 1.0 / std::tanh(x);
                    double csch2 = std::exp(-2.0 * log_sinh(x));
                    double P = op::jacobi_eval(n, a, b, u);
                    double Pd = op::jacobi_deriv(n, a, b, u);
                    return std::exp(lam * x + q * log_sinh(x)) *
                           ((lam + q * u) * P - csch2 * Pd);
                };
                return e;
            };
            break;
        }
        case Family::FreeParticle: {
            reject_unknown(params, {"kappa"}, family);
            double kappa = params.count("kappa") ? get_param(params, "kappa", family) : 1.0;
            if (!(kappa > 0.0)) throw ParamOutOfRange("free_particle: requires kappa > 0");
            spec->params["kappa"] = kappa;
            spec->domain = Interval::whole_line();
            spec->V = [](double) { return 0.0; };
            spec->V_prime = [](double) { return 0.0; };
            spec->eigen_energy_fn = [](int) { return 0.0; };
            spec->ground_energy = 0.0;  // continuum bottom
            spec->n_bound = 0;
            spec->eigen_builder = [](int) -> Eigenfunction {
                throw IndexOutOfRange("free_particle has no bound states");
            };
            break;
        }
        case Family::InfiniteWell: {
            reject_unknown(params, {"width"}, family);
            double w = get_param(params, "width", family);
            if (!(w > 0.0)) throw ParamOutOfRange("infinite_well: requires width > 0");
            spec->domain = Interval(0.0, w);
            spec->first_index = 1;
            spec->V = [](double) { return 0.0; };
            spec->V_prime = [](double) { return 0.0; };
            spec->eigen_energy_fn = [w](int n) {
                double k = n * kPi / w;
                return k * k;
            };
            spec->ground_energy = (kPi / w) * (kPi / w);
            spec->n_bound = std::nullopt;
            spec->eigen_builder = [w](int n) {
                Eigenfunction e;
                double k = n * kPi / w;
                e.energy = k * k;
                e.value = [k](double x) { return std::sin(k * x); };
                e.deriv = [k](double x) { return k * std::cos(k * x); };
                return e;
            };
            break;
        }
        case Family::Custom:
            throw ParamOutOfRange("custom systems are built through custom_nodeless");
    }
    return spec;
}

Eigenfunction eigenfunction(const SpecPtr& spec, int n) {
    if (!spec->valid_index(n))
        throw IndexOutOfRange(family_name(spec->family) + ": eigenstate index " +
                              std::to_string(n) + " out of range");
    return spec->eigen_builder(n);
}

IndexBracket virtual_bracket(const PotentialSpec& spec) {
    IndexBracket b;
    switch (spec.family) {
        case Family::RadialOscillator:
        case Family::FreeParticle:
            b.lower = 0.0;
            b.upper = kInf;
            b.min_degree = 0;
            b.max_degree = spec.family == Family::FreeParticle ? std::optional<long>(0)
                                                               : std::nullopt;
            return b;
        case Family::PoschlTeller: {
            double h = spec.params.at("h");
            b.lower = 0.0;
            b.upper = h - 0.5;
            b.min_degree = 0;
            b.max_degree = strict_floor(h - 0.5);
            b.empty = *b.max_degree < 0;
            return b;
        }
        case Family::HyperbolicPT: {
            double g = spec.params.at("g"), h = spec.params.at("h");
            b.lower = 0.0;
            b.upper = (h - g) / 2.0;
            b.min_degree = 0;
            b.max_degree = strict_floor((h - g) / 2.0);
            b.empty = *b.max_degree < 0;
            return b;
        }
        default:
            b.empty = true;
            return b;
    }
}

IndexBracket overshoot_bracket(const PotentialSpec& spec) {
    IndexBracket b;
    switch (spec.family) {
        case Family::HyperbolicPT: {
            double g = spec.params.at("g"), h = spec.params.at("h");
            b.lower = h - g;
            b.upper = kInf;
            b.min_degree = int_greater(h - g);
            return b;
        }
        case Family::RosenMorse: {
            double h = spec.params.at("h"), mu = spec.params.at("mu");
            b.lower = h;
            b.upper = h + mu / h;
            b.min_degree = int_greater(h);
            b.max_degree = strict_floor(h + mu / h);
            b.empty = b.min_degree > *b.max_degree;
            return b;
        }
        case Family::Eckart: {
            double g = spec.params.at("g"), mu = spec.params.at("mu");
            b.lower = mu / g - g;
            b.upper = kInf;
            b.min_degree = std::max(0L, int_greater(mu / g - g));
            return b;
        }
        default:
            b.empty = true;
            return b;
    }
}

NodelessSolution virtual_state(const SpecPtr& spec, int v, const QuadSettings& settings) {
    require_family(*spec,
                   {Family::RadialOscillator, Family::PoschlTeller, Family::HyperbolicPT,
                    Family::FreeParticle},
                   "virtual_state");
    IndexBracket bracket = virtual_bracket(*spec);
    if (!bracket.admits(v))
        throw IndexOutOfRange(family_name(spec->family) + ": virtual degree v=" +
                              std::to_string(v) + " outside admissible bracket");

    switch (spec->family) {
        case Family::RadialOscillator: {
            double g = spec->params.at("g");
            double used = -(4.0 * v + 2.0 * g + 1.0);
            double ref = -4.0 * v - 2.0 * g + 3.0;  // catalog formula; disagrees
            auto value = [g, v](double x) {
                double u = -x * x;
                double L = op::laguerre_eval(v, g - 0.5, u);
                double raw = std::pow(x, g) * std::exp(0.5 * x * x) * L;
                if (std::isfinite(raw)) return raw;
                op::SignLog sl = op::laguerre_eval_log(v, g - 0.5, u);
                return sl.sign * std::exp(g * std::log(x) + 0.5 * x * x + sl.log_abs);
            };
            auto log_abs = [g, v](double x) {
                return g * std::log(x) + 0.5 * x * x +
                       op::laguerre_eval_log(v, g - 0.5, -x * x).log_abs;
            };
            auto deriv = [g, v, value](double x) {
                double ld = g / x + x - 2.0 * x * laguerre_log_ratio(v, g - 0.5, -x * x);
                return value(x) * ld;
            };
            return finish_seed(spec, SeedKind::Virtual, v, used, ref, value, log_abs, deriv,
                               settings);
        }
        case Family::PoschlTeller: {
            double g = spec->params.at("g"), h = spec->params.at("h");
            double t = g - h + 1.0 + 2.0 * v;
            double used = t * t;
            auto value = [g, h, v](double x) {
                double s = std::sin(x), c = std::cos(x);
                return std::pow(s, g) * std::pow(c, 1.0 - h) *
                       op::jacobi_eval(v, g - 0.5, 0.5 - h, std::cos(2.0 * x));
            };
            auto log_abs = [g, h, v](double x) {
                double s = std::sin(x), c = std::cos(x);
                return g * std::log(s) + (1.0 - h) * std::log(c) +
                       op::jacobi_eval_log(v, g - 0.5, 0.5 - h, std::cos(2.0 * x)).log_abs;
            };
            auto deriv = [g, h, v, value](double x) {
                double s = std::sin(x), c = std::cos(x);
                double ld = g * c / s - (1.0 - h) * s / c -
                            4.0 * s * c * jacobi_log_ratio(v, g - 0.5, 0.5 - h, std::cos(2.0 * x));
                return value(x) * ld;
            };
            return finish_seed(spec, SeedKind::Virtual, v, used, used, value, log_abs, deriv,
                               settings);
        }
        case Family::HyperbolicPT: {
            double g = spec->params.at("g"), h = spec->params.at("h");
            double t = g + h + 2.0 * v + 1.0;
            double used = -t * t;
            double ref = -(h - g) * (h - g) -
                         (2.0 * v + 2.0 * g + 1.0) * (2.0 * v + 2.0 * h + 1.0);
            auto value = [g, h, v](double x) {
                double s = std::sinh(x), c = std::cosh(x);
                double raw = std::pow(s, g) * std::pow(c, h + 1.0) *
                             op::jacobi_eval(v, g - 0.5, h + 0.5, std::cosh(2.0 * x));
                if (std::isfinite(raw)) return raw;
                op::SignLog sl = op::jacobi_eval_log(v, g - 0.5, h + 0.5, std::cosh(2.0 * x));
                return sl.sign *
                       std::exp(g * log_sinh(x) + (h + 1.0) * log_cosh(x) + sl.log_abs);
            };
            auto log_abs = [g, h, v](double x) {
                return g * log_sinh(x) + (h + 1.0) * log_cosh(x) +
                       op::jacobi_eval_log_arg(v, g - 0.5, h + 0.5, log_cosh(2.0 * x), 1.0)
                           .log_abs;
            };
            auto deriv = [g, h, v, value](double x) {
                double ld = g / std::tanh(x) + (h + 1.0) * std::tanh(x) +
                            4.0 * std::sinh(x) * std::cosh(x) *
                                jacobi_log_ratio(v, g - 0.5, h + 0.5, std::cosh(2.0 * x));
                return value(x) * ld;
            };
            return finish_seed(spec, SeedKind::Virtual, v, used, ref, value, log_abs, deriv,
                               settings);
        }
        case Family::FreeParticle: {
            double kappa = spec->params.at("kappa");
            double used = -kappa * kappa;
            auto value = [kappa](double x) { return std::exp(kappa * x); };
            auto log_abs = [kappa](double x) { return kappa * x; };
            auto deriv = [kappa](double x) { return kappa * std::exp(kappa * x); };
            return finish_seed(spec, SeedKind::Virtual, v, used, used, value, log_abs, deriv,
                               settings);
        }
        default:
            break;
    }
    throw IndexOutOfRange("virtual_state: unsupported family");
}

NodelessSolution overshoot_state(const SpecPtr& spec, int v, const QuadSettings& settings) {
    require_family(*spec, {Family::HyperbolicPT, Family::RosenMorse, Family::Eckart},
                   "overshoot_state");
    IndexBracket bracket = overshoot_bracket(*spec);
    if (bracket.empty)
        throw EmptyRange(family_name(spec->family) + ": overshoot window (" +
                         std::to_string(bracket.lower) + ", " + std::to_string(bracket.upper) +
                         ") contains no integer");
    if (!bracket.admits(v))
        throw IndexOutOfRange(family_name(spec->family) + ": overshoot degree v=" +
                              std::to_string(v) + " outside admissible window");

    switch (spec->family) {
        case Family::HyperbolicPT: {
            double g = spec->params.at("g"), h = spec->params.at("h");
            double t = h - g - 2.0 * v;
            double used = -t * t;
            auto value = [g, h, v](double x) {
                double s = std::sinh(x), c = std::cosh(x);
                double raw = std::pow(s, g) * std::pow(c, -h) *
                             op::jacobi_eval(v, g - 0.5, -h - 0.5, std::cosh(2.0 * x));
                if (std::isfinite(raw)) return raw;
                op::SignLog sl = op::jacobi_eval_log(v, g - 0.5, -h - 0.5, std::cosh(2.0 * x));
                return sl.sign * std::exp(g * log_sinh(x) - h * log_cosh(x) + sl.log_abs);
            };
            auto log_abs = [g, h, v](double x) {
                return g * log_sinh(x) - h * log_cosh(x) +
                       op::jacobi_eval_log_arg(v, g - 0.5, -h - 0.5, log_cosh(2.0 * x), 1.0)
                           .log_abs;
            };
            auto deriv = [g, h, v, value](double x) {
                double ld = g / std::tanh(x) - h * std::tanh(x) +
                            4.0 * std::sinh(x) * std::cosh(x) *
                                jacobi_log_ratio(v, g - 0.5, -h - 0.5, std::cosh(2.0 * x));
                return value(x) * ld;
            };
            return finish_seed(spec, SeedKind::Overshoot, v, used, used, value, log_abs, deriv,
                               settings);
        }
        case Family::RosenMorse: {
            double h = spec->params.at("h"), mu = spec->params.at("mu");
            double p = h - v;  // negative inside the window
            double lam = -mu / p;
            double a = p + mu / p, b = p - mu / p;
            double used = -p * p - mu * mu / (p * p);
            auto value = [p, lam, a, b, v](double x) {
                return std::exp(lam * x - p * log_cosh(x)) *
                       op::jacobi_eval(v, a, b, std::tanh(x));
            };
            auto log_abs = [p, lam, a, b, v](double x) {
                return lam * x - p * log_cosh(x) +
                       op::jacobi_eval_log(v, a, b, std::tanh(x)).log_abs;
            };
            auto deriv = [p, lam, a, b, v, value](double x) {
                double sech2 = std::exp(-2.0 * log_cosh(x));
                double ld = lam - p * std::tanh(x) +
                            sech2 * jacobi_log_ratio(v, a, b, std::tanh(x));
                return value(x) * ld;
            };
            return finish_seed(spec, SeedKind::Overshoot, v, used, used, value, log_abs, deriv,
                               settings);
        }
        case Family::Eckart: {
            double g = spec->params.at("g"), mu = spec->params.at("mu");
            double q = g + v;
            double lam = -mu / q;
            double a = -q + mu / q, b = -q - mu / q;
            double used = -q * q - mu * mu / (q * q);
            auto value = [q, lam, a, b, v](double x) {
                return std::exp(lam * x + q * log_sinh(x)) *
                       op::jacobi_eval(v, a, b, 1.0 / std::tanh(x));
            };
            auto log_abs = [q, lam, a, b, v](double x) {
                return lam * x + q * log_sinh(x) +
                       op::jacobi_eval_log(v, a, b, 1.0 / std::tanh(x)).log_abs;
            };
            auto deriv = [q, lam, a, b, v, value](double x) {
                double u = 1.0 / std::tanh(x);
                double csch2 = std::exp(-2.0 * log_sinh(x));
                double ld = lam + q * u - csch2 * jacobi_log_ratio(v, a, b, u);
                return value(x) * ld;
            };
            return finish_seed(spec, SeedKind::Overshoot, v, used, used, value, log_abs, deriv,
                               settings);
        }
        default:
            break;
    }
    throw IndexOutOfRange("overshoot_state: unsupported family");
}

std::pair<SpecPtr, NodelessSolution> custom_nodeless(
    const std::function<double(double)>& value, const std::function<double(double)>& deriv,
    const std::function<double(double)>& second_deriv, double energy_hint,
    const Interval& domain, const QuadSettings& settings) {
    double probe = compact_inverse(domain, 0.5);
    double sign = value(probe) < 0.0 ? -1.0 : 1.0;
    auto val = [value, sign](double x) { return sign * value(x); };
    auto der = [deriv, sign](double x) { return sign * deriv(x); };

    for (double x : graded_grid(domain, 512)) {
        if (!(val(x) > 0.0))
            throw NodeDetected("custom seed: non-positive value at x=" + std::to_string(x));
    }

    auto spec = std::make_shared<PotentialSpec>();
    spec->family = Family::Custom;
    spec->domain = domain;
    spec->ground_energy = kInf;  // unknown spectrum; no constraint
    spec->n_bound = 0;
    spec->V = [value, second_deriv, energy_hint](double x) {
        return second_deriv(x) / value(x) + energy_hint;
    };
    auto V = spec->V;
    spec->V_prime = [V, domain](double x) {
        double h = 1e-4 * (1.0 + std::abs(x));
        if (domain.lo_finite()) h = std::min(h, (x - domain.lo()) / 8.0);
        if (domain.hi_finite()) h = std::min(h, (domain.hi() - x) / 8.0);
        return fd_first_derivative(V, x, h);
    };
    spec->eigen_energy_fn = [](int) { return 0.0; };
    spec->eigen_builder = [](int) -> Eigenfunction {
        throw IndexOutOfRange("custom system exposes no eigenstates");
    };

    NodelessSolution sol;
    sol.owner = spec;
    sol.kind = SeedKind::Custom;
    sol.degree = -1;
    sol.energy = energy_hint;
    sol.reference_energy = energy_hint;
    sol.value = val;
    sol.log_abs = [val](double x) { return std::log(val(x)); };
    sol.deriv = der;

    RayleighResult rq = rayleigh_quotient(spec->V, val, der, domain, energy_hint);
    sol.rayleigh_energy = rq.mean;
    sol.rayleigh_spread = rq.spread;
    if (rq.spread > 1e-6 ||
        std::abs(rq.mean - energy_hint) > 1e-6 * std::max(1.0, std::abs(energy_hint)))
        throw ConstructionCheckFailed(
            "custom seed: supplied second_deriv is inconsistent with value "
            "(Rayleigh quotient " +
            std::to_string(rq.mean) + " vs hint " + std::to_string(energy_hint) + ")");

    BoundaryReport br = check_boundary_conditions(sol, settings);
    if (!br.a_holds || !br.b_holds)
        throw BoundaryCheckFailed("custom seed: " + br.diagnostics);
    return {spec, sol};
}

bool nodeless_scan(const std::function<double(double)>& fn, const Interval& domain,
                   int n_points) {
    if (n_points < 64) throw std::invalid_argument("nodeless_scan: n_points must be >= 64");
    std::vector<double> xs = graded_grid(domain, n_points);
    std::vector<double> vals(xs.size());
    par_for(xs.size(), [&](std::size_t i) { vals[i] = fn(xs[i]); });

    for (double v : vals)
        if (v == 0.0) return false;

    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if ((vals[i] > 0.0) == (vals[i + 1] > 0.0)) continue;
        // Refine and confirm: a genuine simple root keeps opposite signs
        // with non-noise magnitudes on both flanks.
        double width_tol = 1e-12 * (std::abs(xs[i]) + std::abs(xs[i + 1]) + 1.0);
        double root = bisect_root(fn, xs[i], xs[i + 1], width_tol);
        double local = std::max(std::abs(vals[i]), std::abs(vals[i + 1]));
        double delta = std::max(4.0 * width_tol, 1e-7 * (1.0 + std::abs(root)));
        double left = fn(std::max(root - delta, xs[i]));
        double right = fn(std::min(root + delta, xs[i + 1]));
        bool genuine = (left > 0.0) != (right > 0.0) &&
                       std::min(std::abs(left), std::abs(right)) > 1e-13 * local;
        if (genuine) return false;
    }
    return true;
}

BoundaryReport check_boundary_conditions(const NodelessSolution& sol,
                                         const QuadSettings& settings) {
    const Interval& dom = sol.owner->domain;
    auto log_abs = sol.log_abs;
    auto logf = [log_abs](double t) { return -2.0 * log_abs(t); };
    const double mid = compact_inverse(dom, 0.5);

    BoundaryReport report;
    std::ostringstream diag;

    // (B): I(x) -> 0 as x -> hi. Walk probes toward hi, innermost tail by
    // direct quadrature, then accumulate outward.
    {
        std::vector<double> probes{mid};
        if (dom.hi_finite()) {
            double d = (dom.hi() - mid) * 0.5;
            for (int j = 0; j < 60 && d > 1e-13 * (dom.hi() - mid); ++j, d *= 0.5)
                probes.push_back(dom.hi() - d);
        } else {
            double x = std::max(mid, 0.0) + 1.0;
            for (int j = 0; j < 200; ++j) {
                probes.push_back(x);
                if (logf(x) < -760.0) break;
                x = 1.25 * x + 0.35;
            }
        }
        double log_tail = log_integral_exp(logf, probes.back(), dom.hi(), settings);
        report.b_holds = log_tail <= std::log(1e-10);
        diag << "I at innermost hi-probe x=" << probes.back() << ": exp(" << log_tail << ")";
    }

    // (A): I(x) beyond 1e6 and increasing toward lo, accumulated in log
    // space so that astronomically large tails never overflow.
    {
        double log_I = log_integral_exp(logf, mid, dom.hi(), settings);
        double x = mid;
        bool passed = log_I > std::log(1e6);
        for (int j = 0; j < 1000 && !passed; ++j) {
            double xn;
            if (dom.lo_finite()) {
                double d = (x - dom.lo()) * 0.5;
                if (d < 1e-300) break;
                xn = dom.lo() + d;
            } else {
                xn = x - std::max(0.35, 0.05 * std::abs(x));
            }
            log_I = log_add_exp(log_I, log_integral_exp(logf, xn, x, settings));
            x = xn;
            if (log_I > std::log(1e7)) passed = true;
        }
        report.a_holds = passed || log_I > std::log(1e6);
        diag << "; I at innermost lo-probe x=" << x << ": exp(" << log_I << ")";
    }

    report.diagnostics = diag.str();
    return report;
}

double wronskian(const std::vector<NodelessSolution>& sols, double x) {
    if (sols.empty()) throw std::invalid_argument("wronskian: empty solution list");
    for (const auto& s : sols)
        if (s.owner != sols.front().owner)
            throw MixedOwners("wronskian: solutions do not share one potential");
    const PotentialSpec& spec = *sols.front().owner;
    const std::size_t m = sols.size();

    // V-derivative tower at x: V' is closed form, higher orders by
    // Richardson differences of V'.
    std::vector<double> vd(m, 0.0);
    if (m >= 3) vd[1] = spec.V_prime(x);
    if (m >= 4) {
        double h = 1e-3 * (1.0 + std::abs(x));
        if (spec.domain.lo_finite()) h = std::min(h, (x - spec.domain.lo()) / 8.0);
        if (spec.domain.hi_finite()) h = std::min(h, (spec.domain.hi() - x) / 8.0);
        std::function<double(double)> vp = spec.V_prime;
        for (std::size_t order = 2; order < m - 1; ++order) {
            if (order == 2) vd[2] = fd_first_derivative(vp, x, h);
            else if (order == 3) vd[3] = fd_second_derivative(vp, x, h);
            else {
                // nested differences; accuracy degrades with order
                std::function<double(double)> f = vp;
                for (std::size_t k = 2; k < order; ++k) {
                    auto prev = f;
                    f = [prev, h](double t) { return fd_first_derivative(prev, t, h); };
                }
                vd[order] = fd_first_derivative(f, x, h);
            }
        }
    }

    // phi^{(j+2)} = sum_i C(j,i) (V - E)^{(i)} phi^{(j-i)} (Leibniz on
    // phi'' = (V - E) phi), with (V-E)^{(0)} = V(x) - E_k.
    double v0 = spec.V(x);
    std::vector<std::vector<double>> rows(m, std::vector<double>(m));
    for (std::size_t k = 0; k < m; ++k) {
        std::vector<double> d(m);
        d[0] = sols[k].value(x);
        if (m > 1) d[1] = sols[k].deriv(x);
        double e0 = v0 - sols[k].energy;
        for (std::size_t j = 2; j < m; ++j) {
            std::size_t p = j - 2;
            double acc = 0.0;
            double binom = 1.0;
            for (std::size_t i = 0; i <= p; ++i) {
                double ve = (i == 0) ? e0 : vd[i];
                acc += binom * ve * d[p - i];
                binom = binom * static_cast<double>(p - i) / static_cast<double>(i + 1);
            }
            d[j] = acc;
        }
        for (std::size_t j = 0; j < m; ++j) rows[j][k] = d[j];
    }

    // determinant by Gaussian elimination with partial pivoting
    double det = 1.0;
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(rows[r][col]) > std::abs(rows[pivot][col])) pivot = r;
        if (rows[pivot][col] == 0.0) return 0.0;
        if (pivot != col) {
            std::swap(rows[pivot], rows[col]);
            det = -det;
        }
        det *= rows[col][col];
        for (std::size_t r = col + 1; r < m; ++r) {
            double f = rows[r][col] / rows[col][col];
            for (std::size_t c = col; c < m; ++c) rows[r][c] -= f * rows[col][c];
        }
    }
    return det;
}

}  // namespace potcompose
