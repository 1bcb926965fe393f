#include "potcompose/orthopoly.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "potcompose/errors.hpp"

namespace potcompose::orthopoly {

namespace {

// Minimal double-double arithmetic (an unevaluated sum hi + lo with
// |lo| <= ulp(hi)/2). The recurrences run entirely in this type; the
// parameter ranges of the virtual states (beta < -1) sit outside the
// classical orthogonality regime, where plain double recurrences lose
// digits to cancellation.
struct DD {
    double hi;
    double lo;
};

inline DD dd_from(double a) { return {a, 0.0}; }

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    double hi = s.hi + s.lo;
    return {hi, s.lo - (hi - s.hi)};
}

inline DD dd_sub(DD a, DD b) { return dd_add(a, DD{-b.hi, -b.lo}); }

inline DD dd_mul_d(DD a, double b) {
    DD p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    double hi = p.hi + p.lo;
    return {hi, p.lo - (hi - p.hi)};
}

inline DD dd_div_d(DD a, double b) {
    double q1 = a.hi / b;
    DD p = two_prod(q1, b);
    double r = ((a.hi - p.hi) - p.lo) + a.lo;
    double q2 = r / b;
    double hi = q1 + q2;
    return {hi, q2 - (hi - q1)};
}

// Generalized binomial C(a, k) = a (a-1) ... (a-k+1) / k! for real a.
DD dd_binom(double a, int k) {
    DD r = dd_from(1.0);
    for (int i = 1; i <= k; ++i) {
        r = dd_mul_d(r, a - static_cast<double>(i - 1));
        r = dd_div_d(r, static_cast<double>(i));
    }
    return r;
}

constexpr double kDegenerateFloor = 1e-12;
constexpr double kHugeArgument = 1e30;

double jacobi_recurrence_impl(int n, double a, double b, double x, bool* degenerate) {
    if (degenerate) *degenerate = false;
    if (n == 0) return 1.0;
    DD pm1 = dd_from(1.0);
    DD p = dd_add(dd_from((a - b) / 2.0), dd_mul_d(dd_from((a + b + 2.0) / 2.0), x));
    for (int k = 2; k <= n; ++k) {
        double kk = static_cast<double>(k);
        double s = 2.0 * kk + a + b;
        double den = 2.0 * kk * (kk + a + b) * (s - 2.0);
        if (std::abs(den) < kDegenerateFloor) {
            if (degenerate) {
                *degenerate = true;
                return 0.0;
            }
            throw DegenerateRecurrence(
                "jacobi recurrence denominator vanished at k=" + std::to_string(k));
        }
        double c2 = (s - 1.0) * (a * a - b * b);
        double c3 = (s - 2.0) * (s - 1.0) * s;
        double c4 = 2.0 * (kk + a - 1.0) * (kk + b - 1.0) * s;
        DD t = dd_mul_d(p, c2);
        t = dd_add(t, dd_mul_d(dd_mul_d(p, c3), x));
        t = dd_sub(t, dd_mul_d(pm1, c4));
        t = dd_div_d(t, den);
        pm1 = p;
        p = t;
    }
    return p.hi + p.lo;
}

DD jacobi_series_dd(int n, double a, double b, double x) {
    const double xm = (x - 1.0) / 2.0;
    const double xp = (x + 1.0) / 2.0;
    DD sum = dd_from(0.0);
    for (int j = 0; j <= n; ++j) {
        DD term = dd_binom(n + a, j);
        DD other = dd_binom(n + b, n - j);
        DD t = dd_mul_d(term, other.hi);
        t = dd_add(t, dd_mul_d(term, other.lo));
        for (int i = 0; i < n - j; ++i) t = dd_mul_d(t, xm);
        for (int i = 0; i < j; ++i) t = dd_mul_d(t, xp);
        sum = dd_add(sum, t);
    }
    return sum;
}

// Series scaled by (x/2)^n; all per-term factors stay O(1) for huge |x|.
// Takes the argument as sign/log pair so arguments beyond double range
// work too. Returns sign and log of |P_n|.
SignLog jacobi_series_scaled_log(int n, double a, double b, double log_abs_x, double sign_x) {
    const double inv = sign_x * std::exp(-log_abs_x);  // 1/x, may underflow to 0
    const double rm = 1.0 - inv;  // (x-1)/2 / (x/2)
    const double rp = 1.0 + inv;
    DD sum = dd_from(0.0);
    for (int j = 0; j <= n; ++j) {
        DD term = dd_binom(n + a, j);
        DD other = dd_binom(n + b, n - j);
        DD t = dd_mul_d(term, other.hi);
        t = dd_add(t, dd_mul_d(term, other.lo));
        for (int i = 0; i < n - j; ++i) t = dd_mul_d(t, rm);
        for (int i = 0; i < j; ++i) t = dd_mul_d(t, rp);
        sum = dd_add(sum, t);
    }
    double sigma = sum.hi + sum.lo;
    if (sigma == 0.0) return {0.0, -std::numeric_limits<double>::infinity()};
    double sign = (sigma > 0.0 ? 1.0 : -1.0);
    if (sign_x < 0.0 && (n % 2) != 0) sign = -sign;
    return {sign, n * (log_abs_x - M_LN2) + std::log(std::abs(sigma))};
}

SignLog jacobi_series_scaled(int n, double a, double b, double x) {
    return jacobi_series_scaled_log(n, a, b, std::log(std::abs(x)), x < 0.0 ? -1.0 : 1.0);
}

SignLog laguerre_series_scaled(int n, double a, double x) {
    // L_n^{(a)}(x) = sum_j (-1)^j C(n+a, n-j) x^j / j!; scale by x^n.
    DD sum = dd_from(0.0);
    for (int j = 0; j <= n; ++j) {
        DD t = dd_binom(n + a, n - j);
        for (int i = 1; i <= j; ++i) t = dd_div_d(t, static_cast<double>(i));
        for (int i = 0; i < n - j; ++i) t = dd_div_d(t, x);
        if (j % 2 != 0) t = dd_mul_d(t, -1.0);
        sum = dd_add(sum, t);
    }
    double sigma = sum.hi + sum.lo;
    if (sigma == 0.0) return {0.0, -std::numeric_limits<double>::infinity()};
    double sign = (sigma > 0.0 ? 1.0 : -1.0);
    if (x < 0.0 && (n % 2) != 0) sign = -sign;
    return {sign, n * std::log(std::abs(x)) + std::log(std::abs(sigma))};
}

void require_degree(int n, const char* who) {
    if (n < 0) throw std::invalid_argument(std::string(who) + ": degree must be >= 0");
}

}  // namespace

double laguerre_eval(int n, double alpha, double x) {
    require_degree(n, "laguerre_eval");
    if (n == 0) return 1.0;
    DD lm1 = dd_from(1.0);
    DD l = dd_from(1.0 + alpha - x);
    for (int k = 1; k < n; ++k) {
        double kk = static_cast<double>(k);
        DD t = dd_mul_d(l, 2.0 * kk + 1.0 + alpha - x);
        t = dd_sub(t, dd_mul_d(lm1, kk + alpha));
        t = dd_div_d(t, kk + 1.0);
        lm1 = l;
        l = t;
    }
    return l.hi + l.lo;
}

double laguerre_deriv(int n, double alpha, double x) {
    require_degree(n, "laguerre_deriv");
    if (n == 0) return 0.0;
    return -laguerre_eval(n - 1, alpha + 1.0, x);
}

double jacobi_eval_recurrence(int n, double alpha, double beta, double x) {
    require_degree(n, "jacobi_eval");
    return jacobi_recurrence_impl(n, alpha, beta, x, nullptr);
}

double jacobi_eval_series(int n, double alpha, double beta, double x) {
    require_degree(n, "jacobi_eval");
    DD s = jacobi_series_dd(n, alpha, beta, x);
    return s.hi + s.lo;
}

double jacobi_eval(int n, double alpha, double beta, double x) {
    require_degree(n, "jacobi_eval");
    bool degenerate = false;
    double v = jacobi_recurrence_impl(n, alpha, beta, x, &degenerate);
    if (degenerate) return jacobi_eval_series(n, alpha, beta, x);
    return v;
}

double jacobi_deriv(int n, double alpha, double beta, double x) {
    require_degree(n, "jacobi_deriv");
    if (n == 0) return 0.0;
    return 0.5 * (n + alpha + beta + 1.0) * jacobi_eval(n - 1, alpha + 1.0, beta + 1.0, x);
}

SignLog laguerre_eval_log(int n, double alpha, double x) {
    require_degree(n, "laguerre_eval_log");
    if (std::abs(x) > kHugeArgument && n > 0) return laguerre_series_scaled(n, alpha, x);
    double v = laguerre_eval(n, alpha, x);
    if (v == 0.0) return {0.0, -std::numeric_limits<double>::infinity()};
    return {v > 0.0 ? 1.0 : -1.0, std::log(std::abs(v))};
}

SignLog jacobi_eval_log(int n, double alpha, double beta, double x) {
    require_degree(n, "jacobi_eval_log");
    if (std::abs(x) > kHugeArgument && n > 0) return jacobi_series_scaled(n, alpha, beta, x);
    double v = jacobi_eval(n, alpha, beta, x);
    if (v == 0.0) return {0.0, -std::numeric_limits<double>::infinity()};
    if (std::isinf(v)) return jacobi_series_scaled(n, alpha, beta, x);
    return {v > 0.0 ? 1.0 : -1.0, std::log(std::abs(v))};
}

SignLog jacobi_eval_log_arg(int n, double alpha, double beta, double log_abs_x,
                            double sign_x) {
    require_degree(n, "jacobi_eval_log_arg");
    if (n == 0) return {1.0, 0.0};
    if (log_abs_x < 690.0)
        return jacobi_eval_log(n, alpha, beta, sign_x * std::exp(log_abs_x));
    return jacobi_series_scaled_log(n, alpha, beta, log_abs_x, sign_x);
}

}  // namespace potcompose::orthopoly
