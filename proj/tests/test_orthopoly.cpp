#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <vector>

#include "potcompose/errors.hpp"
#include "potcompose/numerics.hpp"
#include "potcompose/orthopoly.hpp"

namespace op = potcompose::orthopoly;
using Rational = boost::multiprecision::cpp_rational;

namespace {

// Exact-rational oracles. Rational inputs only; evaluated with no
// rounding, then converted to double at the very end.

Rational rat_binom(const Rational& a, int k) {
    Rational r = 1;
    for (int i = 1; i <= k; ++i) r *= (a - (i - 1)) / i;
    return r;
}

Rational jacobi_series_exact(int n, const Rational& a, const Rational& b, const Rational& x) {
    Rational xm = (x - 1) / 2;
    Rational xp = (x + 1) / 2;
    Rational sum = 0;
    for (int j = 0; j <= n; ++j) {
        Rational t = rat_binom(n + a, j) * rat_binom(n + b, n - j);
        for (int i = 0; i < n - j; ++i) t *= xm;
        for (int i = 0; i < j; ++i) t *= xp;
        sum += t;
    }
    return sum;
}

Rational laguerre_series_exact(int n, const Rational& a, const Rational& x) {
    // L_n^{(a)}(x) = sum_j (-1)^j C(n+a, n-j) x^j / j!
    Rational sum = 0;
    Rational fact = 1;
    Rational xp = 1;
    for (int j = 0; j <= n; ++j) {
        if (j > 0) {
            fact *= j;
            xp *= x;
        }
        Rational t = rat_binom(n + a, n - j) * xp / fact;
        sum += (j % 2 == 0) ? t : -t;
    }
    return sum;
}

double to_double(const Rational& r) { return static_cast<double>(r); }

}  // namespace

TEST_CASE("laguerre fixed values") {
    CHECK(op::laguerre_eval(0, 0.5, -4.0) == 1.0);
    CHECK(op::laguerre_eval(1, 0.5, -1.0) == doctest::Approx(2.5).epsilon(1e-15));
    // oracle: L_2^{(1/2)}(-1) = (a+1)(a+2)/2 - (a+2)x + x^2/2 at a=1/2, x=-1
    Rational exact = laguerre_series_exact(2, Rational(1, 2), Rational(-1));
    CHECK(to_double(exact) == doctest::Approx(4.875).epsilon(1e-15));
    CHECK(op::laguerre_eval(2, 0.5, -1.0) == doctest::Approx(4.875).epsilon(1e-14));
}

TEST_CASE("jacobi fixed values") {
    CHECK(op::jacobi_eval(0, 2.3, -3.1, 5.0) == 1.0);
    CHECK(op::jacobi_eval(1, 1.0, 1.0, 0.0) == 0.0);
    Rational exact = jacobi_series_exact(2, Rational(1, 2), Rational(-5, 2), Rational(3));
    CHECK(op::jacobi_eval(2, 0.5, -2.5, 3.0) ==
          doctest::Approx(to_double(exact)).epsilon(1e-14));
}

TEST_CASE("recurrence agrees with exact series, n <= 10") {
    const std::vector<Rational> alphas = {Rational(1, 2), Rational(-5, 2), Rational(7, 3),
                                          Rational(-1, 4), Rational(3)};
    const std::vector<Rational> xs = {Rational(-3), Rational(-1, 2), Rational(1, 4),
                                      Rational(9, 8), Rational(5), Rational(-25, 3)};
    for (int n = 0; n <= 10; ++n) {
        for (const auto& a : alphas) {
            for (const auto& x : xs) {
                double exact = to_double(laguerre_series_exact(n, a, x));
                double got = op::laguerre_eval(n, to_double(a), to_double(x));
                CHECK(got == doctest::Approx(exact).epsilon(1e-12));
                for (const auto& b : alphas) {
                    double je = to_double(jacobi_series_exact(n, a, b, x));
                    double jg = op::jacobi_eval(n, to_double(a), to_double(b), to_double(x));
                    if (std::abs(je) > 1e-30)
                        CHECK(jg == doctest::Approx(je).epsilon(1e-12));
                    else
                        CHECK(std::abs(jg) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("degenerate jacobi recurrence falls back to the series") {
    // alpha + beta = -2 makes the k=2 denominator 2k(k+a+b)(2k+a+b-2)
    // vanish: the recurrence-only path must throw, the public one must
    // agree with the exact series.
    double a = 1.0, b = -3.0, x = 0.7;
    CHECK_THROWS_AS((void)op::jacobi_eval_recurrence(3, a, b, x),
                    potcompose::DegenerateRecurrence);
    Rational exact = jacobi_series_exact(3, Rational(1), Rational(-3), Rational(7, 10));
    CHECK(op::jacobi_eval(3, a, b, x) == doctest::Approx(to_double(exact)).epsilon(1e-13));
    // Rosen-Morse h=2, mu=3, v=3 hits the same branch: a+b = 2(h-v) = -2
    double av = -1.0 + (-3.0), bv = -1.0 + 3.0;
    CHECK(op::jacobi_eval(3, av, bv, 0.3) ==
          doctest::Approx(to_double(jacobi_series_exact(3, Rational(-4), Rational(2),
                                                        Rational(3, 10))))
              .epsilon(1e-13));
}

TEST_CASE("derivative identities vs central differences") {
    CHECK(op::laguerre_deriv(0, 0.5, 2.0) == 0.0);
    CHECK(op::laguerre_deriv(1, 0.0, 7.0) == doctest::Approx(-1.0).epsilon(1e-15));
    // L_2^{(1/2)}'(-1) = -L_1^{(3/2)}(-1) = -3.5
    CHECK(op::laguerre_deriv(2, 0.5, -1.0) == doctest::Approx(-3.5).epsilon(1e-14));
    CHECK(op::jacobi_deriv(0, 1.0, 1.0, 0.3) == 0.0);
    CHECK(op::jacobi_deriv(1, 1.0, 1.0, 0.3) == doctest::Approx(2.0).epsilon(1e-15));

    for (int n = 1; n <= 8; ++n) {
        for (double x : {-10.0, -4.5, -0.7, 0.3, 2.0, 9.5}) {
            auto lf = [n](double t) { return op::laguerre_eval(n, 0.5, t); };
            double fd = potcompose::fd_first_derivative(lf, x, 1e-3);
            CHECK(op::laguerre_deriv(n, 0.5, x) == doctest::Approx(fd).epsilon(1e-7));
            auto jf = [n](double t) { return op::jacobi_eval(n, 0.5, -2.5, t); };
            double jfd = potcompose::fd_first_derivative(jf, x, 1e-3);
            CHECK(op::jacobi_deriv(n, 0.5, -2.5, x) ==
                  doctest::Approx(jfd).epsilon(1e-7).scale(std::abs(jfd) + 1.0));
        }
    }
}

TEST_CASE("jacobi symmetry P_n^{(a,b)}(-x) = (-1)^n P_n^{(b,a)}(x)") {
    for (int n = 0; n <= 9; ++n) {
        for (double a : {0.5, -2.5, 1.75}) {
            for (double b : {0.5, 3.25, -0.25}) {
                for (double x : {-2.0, -0.3, 0.9, 4.0}) {
                    double lhs = op::jacobi_eval(n, a, b, -x);
                    double rhs = (n % 2 == 0 ? 1.0 : -1.0) * op::jacobi_eval(n, b, a, x);
                    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11).scale(std::abs(rhs) + 1.0));
                }
            }
        }
    }
}

TEST_CASE("log evaluation matches plain evaluation and scales past overflow") {
    for (int n : {1, 3, 5}) {
        for (double x : {-50.0, 3.0, 1e4}) {
            op::SignLog sl = op::jacobi_eval_log(n, 0.5, -2.5, x);
            double plain = op::jacobi_eval(n, 0.5, -2.5, x);
            CHECK(sl.value() == doctest::Approx(plain).epsilon(1e-12));
            op::SignLog ll = op::laguerre_eval_log(n, 0.5, x);
            CHECK(ll.value() == doctest::Approx(op::laguerre_eval(n, 0.5, x)).epsilon(1e-12));
        }
    }
    // beyond double range: compare against log of leading behaviour
    op::SignLog big = op::jacobi_eval_log_arg(4, 0.5, 2.5, 800.0, 1.0);
    CHECK(big.sign == 1.0);
    // P_4 ~ C(2n+a+b, n)/2^n x^n => log ~ 4*(800 - log 2) + log(lead)
    double lead = 0.0;
    {
        double prod = 1.0;
        for (int i = 1; i <= 4; ++i) prod *= (4 + 0.5 + 2.5 + i) / i;  // C(n+a+b+n, n)
        lead = std::log(prod / 16.0);
    }
    CHECK(big.log_abs == doctest::Approx(4.0 * (800.0 - std::log(2.0)) + lead).epsilon(1e-4));
    // continuity across the switch point
    op::SignLog below = op::jacobi_eval_log(3, 0.5, -2.5, 9e29);
    op::SignLog above = op::jacobi_eval_log(3, 0.5, -2.5, 1.1e30);
    CHECK(below.log_abs / std::log(9e29) ==
          doctest::Approx(above.log_abs / std::log(1.1e30)).epsilon(1e-3));
}
