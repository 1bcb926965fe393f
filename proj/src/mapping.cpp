#include "potcompose/mapping.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "potcompose/errors.hpp"
#include "potcompose/grids.hpp"

namespace potcompose {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double log_alpha_plus(double log_tail, double alpha) {
    if (alpha == 0.0) return log_tail;
    double la = std::log(alpha);
    if (log_tail == kInf) return kInf;
    if (log_tail == -kInf) return la;
    if (log_tail >= la) return log_tail + std::log1p(std::exp(la - log_tail));
    return la + std::log1p(std::exp(log_tail - la));
}

double TailFrame::log_tail(double x) const {
    if (x >= anchor_x_) return anchor_log_I_;
    return log_add_exp(anchor_log_I_, table_->log_piece(x, anchor_x_, 1e-13));
}

double MappingKernel::log_tail(double x, EvalMode mode) const {
    return mode == EvalMode::Fast ? table_.log_eval(x) : table_.log_eval_precise(x);
}

double MappingKernel::psi_from_log_tail(double lt, double alpha_scale) const {
    double la = log_alpha_plus(lt, alpha_ * alpha_scale);
    return target_.lo() + std::exp(-la);
}

double MappingKernel::log_chi_from_log_tail(double x, double lt, double alpha_scale) const {
    return seed_.log_abs(x) + log_alpha_plus(lt, alpha_ * alpha_scale);
}

double MappingKernel::psi(double x, EvalMode mode, double alpha_scale) const {
    return psi_from_log_tail(log_tail(x, mode), alpha_scale);
}

double MappingKernel::psi_prime(double x, EvalMode mode, double alpha_scale) const {
    return std::exp(-2.0 * log_chi(x, mode, alpha_scale));
}

double MappingKernel::log_chi(double x, EvalMode mode, double alpha_scale) const {
    return log_chi_from_log_tail(x, log_tail(x, mode), alpha_scale);
}

double MappingKernel::chi(double x, EvalMode mode, double alpha_scale) const {
    return std::exp(log_chi(x, mode, alpha_scale));
}

double MappingKernel::chi_prime(double x, EvalMode mode, double alpha_scale) const {
    double ap = std::exp(log_alpha_plus(log_tail(x, mode), alpha_ * alpha_scale));
    return seed_.deriv(x) * ap - 1.0 / seed_.value(x);
}

TailFrame MappingKernel::make_frame(double x_max) const {
    TailFrame f;
    f.table_ = &table_;
    f.anchor_x_ = x_max;
    f.anchor_log_I_ = table_.log_eval_precise(x_max);
    return f;
}

MappingKernel build_mapping(NodelessSolution seed, const Interval& target,
                            const QuadSettings& settings, int n_knots) {
    if (!target.lo_finite())
        throw TargetLowerInfinite("build_mapping: target interval must have finite lo");
    const Interval source = seed.owner->domain;
    const double alpha = target.hi_finite() ? 1.0 / target.length() : 0.0;

    MonotoneTable table = tabulate_tail_integral(seed.log_abs, source, n_knots, settings);
    MappingKernel kernel(std::move(seed), source, target, alpha, std::move(table));

    // Endpoint limits. Toward a: psi -> c, i.e. 1/(alpha + I) below
    // 1e-6 (d-c) for finite d (below 1e-6/(1+|c|) absolute scale for
    // d = inf the roles flip, see below). Toward b: psi -> d.
    const double span = target.hi_finite() ? target.length() : 1.0;
    {
        double x = compact_inverse(source, 0.5);
        bool ok = false;
        for (int j = 0; j < 1200 && !ok; ++j) {
            double lt = kernel.log_tail(x);
            if (std::exp(-log_alpha_plus(lt, alpha)) <= 1e-6 * span) ok = true;
            if (source.lo_finite()) {
                double d = (x - source.lo()) * 0.5;
                if (d < 1e-300) break;
                x = source.lo() + d;
            } else {
                x -= std::max(0.35, 0.05 * std::abs(x));
            }
        }
        if (!ok)
            throw MappingCheckFailed("build_mapping: psi0 does not reach the lower target "
                                     "endpoint c within tolerance");
    }
    {
        double x = compact_inverse(source, 0.5);
        bool ok = false;
        for (int j = 0; j < 400 && !ok; ++j) {
            double lt = kernel.log_tail(x);
            if (target.hi_finite()) {
                // d - psi = I / (alpha (alpha + I))
                double gap = std::exp(lt - std::log(alpha) - log_alpha_plus(lt, alpha));
                if (gap <= 1e-6 * span) ok = true;
            } else {
                if (kernel.psi(x) - target.lo() > 1e6 * (1.0 + std::abs(target.lo())))
                    ok = true;
            }
            if (source.hi_finite()) {
                double d = (source.hi() - x) * 0.5;
                if (d < 1e-300) break;
                x = source.hi() - d;
            } else {
                x += std::max(0.35, 0.05 * std::abs(x));
            }
        }
        if (!ok)
            throw MappingCheckFailed("build_mapping: psi0 does not reach the upper target "
                                     "endpoint within tolerance");
    }
    // Monotonicity across the knot span.
    {
        const auto& ks = kernel.table().knots();
        double prev = -kInf;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            double p = kernel.psi_from_log_tail(ks[i].log_I);
            if (!(p >= prev))
                throw MappingCheckFailed("build_mapping: psi0 not increasing at knot x=" +
                                         std::to_string(ks[i].x));
            prev = p;
        }
    }
    return kernel;
}

}  // namespace potcompose
