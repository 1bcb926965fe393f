#pragma once

#include <functional>

#include "potcompose/interval.hpp"

namespace potcompose {

struct QuadSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_depth = 60;
};

struct QuadResult {
    double value;
    double error;
};

/// Adaptive Gauss-Kronrod (G7/K15) integration over an open interval.
/// Infinite endpoints are mapped to a finite parameter first:
///   whole line  t = s/(1-s^2),  half line  t = lo + s/(1-s)  (mirrored
/// for an infinite lower endpoint). The |K15-G7| difference is the local
/// error estimate; the panel with the largest estimate is bisected until
/// the accumulated error meets max(abs_tol, rel_tol*|value|).
/// Throws QuadratureFailure when max_depth is exhausted first.
QuadResult adaptive_quad(const std::function<double(double)>& f, double lo, double hi,
                         const QuadSettings& settings = {});

/// log of integral of exp(log_f(t)) dt over (lo, hi), with the same
/// endpoint transforms and the same adaptive scheme run in scaled
/// arithmetic. Usable when the integrand or the integral overflow double
/// range; only relative accuracy is targeted.
double log_integral_exp(const std::function<double(double)>& log_f, double lo, double hi,
                        const QuadSettings& settings = {});

/// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

/// Central second difference with one Richardson step over h, h/2.
double fd_second_derivative(const std::function<double(double)>& f, double x, double h);

/// Central first difference with one Richardson step over h, h/2.
double fd_first_derivative(const std::function<double(double)>& f, double x, double h);

/// Bisection to bracket width <= tol; requires f(lo)*f(hi) < 0, else
/// throws NoSignChange.
double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol);

}  // namespace potcompose
