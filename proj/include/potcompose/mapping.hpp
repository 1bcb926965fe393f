#pragma once

#include <memory>

#include "potcompose/catalog.hpp"
#include "potcompose/tail_table.hpp"

namespace potcompose {

enum class EvalMode { Fast, Precise };

/// log(alpha + exp(log_tail)), stable in every regime including
/// log_tail far outside double range and alpha = 0.
double log_alpha_plus(double log_tail, double alpha);

/// Consistent high-accuracy tail evaluations sharing one anchor point;
/// built per finite-difference stencil so that quadrature noise enters
/// all stencil points as a common smooth offset instead of independent
/// jitter (which a second difference would amplify by 1/h^2).
class TailFrame {
public:
    double log_tail(double x) const;  // requires x <= anchor_x
    double anchor_x() const { return anchor_x_; }

private:
    friend class MappingKernel;
    const MonotoneTable* table_;
    double anchor_x_;
    double anchor_log_I_;
};

/// The computed mapping data for one seed: tail table I, chi0 = phi0 *
/// (alpha + I), psi0 = c + 1/(alpha + I), with alpha = 1/(d-c) (0 when
/// d = +inf). alpha_scale parameters exist for fault-injection tests and
/// default to the exact 1.
class MappingKernel {
public:
    const Interval& source() const { return source_; }
    const Interval& target() const { return target_; }
    double alpha() const { return alpha_; }
    const NodelessSolution& seed() const { return seed_; }
    const MonotoneTable& table() const { return table_; }

    double log_tail(double x, EvalMode mode = EvalMode::Fast) const;
    double psi(double x, EvalMode mode = EvalMode::Fast, double alpha_scale = 1.0) const;
    double psi_prime(double x, EvalMode mode = EvalMode::Fast, double alpha_scale = 1.0) const;
    double log_chi(double x, EvalMode mode = EvalMode::Fast, double alpha_scale = 1.0) const;
    double chi(double x, EvalMode mode = EvalMode::Fast, double alpha_scale = 1.0) const;
    /// chi0' = phi0'(x) (alpha + I(x)) - 1/phi0(x)
    double chi_prime(double x, EvalMode mode = EvalMode::Fast, double alpha_scale = 1.0) const;

    /// Frame anchored at x_max for stencil evaluations (all points <= x_max).
    TailFrame make_frame(double x_max) const;

    // helpers shared with compositions
    double psi_from_log_tail(double lt, double alpha_scale = 1.0) const;
    double log_chi_from_log_tail(double x, double lt, double alpha_scale = 1.0) const;

private:
    friend MappingKernel build_mapping(NodelessSolution, const Interval&, const QuadSettings&,
                                       int);
    MappingKernel(NodelessSolution seed, Interval source, Interval target, double alpha,
                  MonotoneTable table)
        : seed_(std::move(seed)),
          source_(source),
          target_(target),
          alpha_(alpha),
          table_(std::move(table)) {}

    NodelessSolution seed_;
    Interval source_;
    Interval target_;
    double alpha_;
    MonotoneTable table_;
};

/// Tabulates the tail integral and wires the kernel, then verifies the
/// endpoint limits (psi0 -> c at a, -> d at b, or unbounded growth for
/// d = +inf) and monotonicity. Throws TargetLowerInfinite for targets
/// with lo = -inf and MappingCheckFailed when a limit check fails.
MappingKernel build_mapping(NodelessSolution seed, const Interval& target,
                            const QuadSettings& settings = {}, int n_knots = 128);

}  // namespace potcompose
