#pragma once

#include <cmath>

namespace potcompose::orthopoly {

/// Value carried as sign * exp(log_abs); usable far outside the range of
/// double, which the hyperbolic families need (arguments like cosh 2x).
struct SignLog {
    double sign;     // -1, 0 or +1
    double log_abs;  // -inf when sign == 0
    double value() const { return sign == 0.0 ? 0.0 : sign * std::exp(log_abs); }
};

/// Generalized Laguerre polynomial L_n^{(alpha)}(x) by the three-term
/// recurrence (k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1},
/// accumulated in double-double arithmetic. Valid for any real alpha and
/// any real x, including x < 0 as the virtual states require.
double laguerre_eval(int n, double alpha, double x);

/// d/dx L_n^{(alpha)}(x) = -L_{n-1}^{(alpha+1)}(x), zero for n = 0.
double laguerre_deriv(int n, double alpha, double x);

/// Jacobi polynomial P_n^{(alpha,beta)}(x). Uses the three-term
/// recurrence; when an intermediate denominator 2k(k+a+b)(2k+a+b-2) has
/// magnitude below 1e-12 (possible when alpha+beta is a negative integer,
/// as for overshoot states) it falls back to the explicit finite sum.
double jacobi_eval(int n, double alpha, double beta, double x);

/// d/dx P_n^{(alpha,beta)}(x) = ((n+alpha+beta+1)/2) P_{n-1}^{(alpha+1,beta+1)}(x).
double jacobi_deriv(int n, double alpha, double beta, double x);

/// Recurrence-only path; throws DegenerateRecurrence instead of falling
/// back. Exposed so tests can drive the degenerate branch directly.
double jacobi_eval_recurrence(int n, double alpha, double beta, double x);

/// Explicit finite sum
///   P_n = sum_j C(n+alpha, j) C(n+beta, n-j) ((x-1)/2)^(n-j) ((x+1)/2)^j.
double jacobi_eval_series(int n, double alpha, double beta, double x);

/// Overflow-safe evaluations; for |x| beyond ~1e30 they switch to a
/// series scaled by (x/2)^n resp. x^n.
SignLog laguerre_eval_log(int n, double alpha, double x);
SignLog jacobi_eval_log(int n, double alpha, double beta, double x);

/// Jacobi evaluation with the argument given as sign_x * exp(log_abs_x);
/// needed where the argument itself (cosh 2x) overflows double.
SignLog jacobi_eval_log_arg(int n, double alpha, double beta, double log_abs_x, double sign_x);

}  // namespace potcompose::orthopoly
