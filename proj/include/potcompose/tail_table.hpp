#pragma once

#include <functional>
#include <vector>

#include "potcompose/interval.hpp"
#include "potcompose/numerics.hpp"

namespace potcompose {

/// Tabulated tail integral I(x) = int_x^b dt / phi0(t)^2, stored as
/// log I over graded knots with a monotonicity-preserving cubic Hermite
/// interpolant (knot slopes are the exact d(log I)/dx = -exp(-2 log|phi0|
/// - log I), limited Fritsch-Carlson style). Everything is carried in
/// log space: I can exceed double range near the lower endpoint without
/// losing the table.
class MonotoneTable {
public:
    struct Knot {
        double x;
        double log_I;
        double slope;  // d(log I)/dx, shape-limited
    };

    /// Interpolated log I(x); outside the knot span falls back to direct
    /// adaptive quadrature. Returns +inf/-inf beyond the domain ends.
    double log_eval(double x) const;
    double eval(double x) const;

    /// Verification-grade value: anchored at the nearest knot above x and
    /// integrated locally with tightened tolerance; no interpolation.
    double log_eval_precise(double x) const;

    const std::vector<Knot>& knots() const { return knots_; }
    const Interval& domain() const { return domain_; }
    /// Span covered by knots (subset of domain()).
    Interval knot_span() const;

    /// log of int_x^b exp(-2 log_phi) computed by direct quadrature with
    /// the table's integrand; used for anchors and fallbacks.
    double log_tail_direct(double x, double rel_tol) const;

    /// log of int_x0^x1 of the integrand (finite piece, given tolerance).
    double log_piece(double x0, double x1, double rel_tol) const;

private:
    friend MonotoneTable tabulate_tail_integral(const std::function<double(double)>&,
                                                const Interval&, int, const QuadSettings&);
    std::function<double(double)> log_integrand_;  // -2 log|phi0|
    Interval domain_{0.0, 1.0};
    QuadSettings settings_;
    std::vector<Knot> knots_;
};

/// Builds the table: graded initial knots (extended adaptively until the
/// integrand underflows toward b and until I is huge toward a), the
/// outermost tail by direct quadrature, panel integrals accumulated from
/// b toward a, then recursive panel refinement until the interpolant
/// matches locally re-anchored quadrature to ~rel_tol.
MonotoneTable tabulate_tail_integral(const std::function<double(double)>& log_abs_phi,
                                     const Interval& domain, int n_knots,
                                     const QuadSettings& settings = {});

}  // namespace potcompose
