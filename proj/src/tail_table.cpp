#include "potcompose/tail_table.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "potcompose/errors.hpp"
#include "potcompose/grids.hpp"
#include "potcompose/parallel.hpp"

namespace potcompose {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogUnderflow = -760.0;  // integrand below this adds nothing
constexpr double kLogHugeTail = 34.5;     // log I ~ e^34.5 ~ 1e15: deep enough
constexpr int kMaxExtension = 600;
constexpr double kPreciseRel = 1e-13;

double hermite(double x, double x0, double x1, double y0, double y1, double m0, double m1) {
    double h = x1 - x0;
    double t = (x - x0) / h;
    double t2 = t * t;
    double t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1;
    double h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2;
    double h11 = t3 - t2;
    return h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
}

}  // namespace

Interval MonotoneTable::knot_span() const {
    return Interval(knots_.front().x, knots_.back().x);
}

double MonotoneTable::log_tail_direct(double x, double rel_tol) const {
    QuadSettings s = settings_;
    s.rel_tol = rel_tol;
    return log_integral_exp(log_integrand_, x, domain_.hi(), s);
}

double MonotoneTable::log_piece(double x0, double x1, double rel_tol) const {
    if (!(x0 < x1)) return -kInf;
    QuadSettings s = settings_;
    s.rel_tol = rel_tol;
    return log_integral_exp(log_integrand_, x0, x1, s);
}

double MonotoneTable::log_eval(double x) const {
    if (x <= domain_.lo()) return kInf;
    if (x >= domain_.hi()) return -kInf;
    if (x < knots_.front().x) {
        QuadSettings s = settings_;
        double piece = log_integral_exp(log_integrand_, x, knots_.front().x, s);
        return log_add_exp(knots_.front().log_I, piece);
    }
    if (x > knots_.back().x) return log_tail_direct(x, settings_.rel_tol);
    auto it = std::lower_bound(knots_.begin(), knots_.end(), x,
                               [](const Knot& k, double v) { return k.x < v; });
    if (it->x == x) return it->log_I;
    const Knot& k1 = *it;
    const Knot& k0 = *(it - 1);
    return hermite(x, k0.x, k1.x, k0.log_I, k1.log_I, k0.slope, k1.slope);
}

double MonotoneTable::eval(double x) const { return std::exp(log_eval(x)); }

double MonotoneTable::log_eval_precise(double x) const {
    if (x <= domain_.lo()) return kInf;
    if (x >= domain_.hi()) return -kInf;
    if (x > knots_.back().x) return log_tail_direct(x, kPreciseRel);
    auto it = std::lower_bound(knots_.begin(), knots_.end(), x,
                               [](const Knot& k, double v) { return k.x < v; });
    if (it->x == x) return it->log_I;
    QuadSettings s = settings_;
    s.rel_tol = kPreciseRel;
    double piece = log_integral_exp(log_integrand_, x, it->x, s);
    return log_add_exp(it->log_I, piece);
}

MonotoneTable tabulate_tail_integral(const std::function<double(double)>& log_abs_phi,
                                     const Interval& domain, int n_knots,
                                     const QuadSettings& settings) {
    if (n_knots < 32) throw std::invalid_argument("tabulate_tail_integral: n_knots >= 32");

    MonotoneTable table;
    table.log_integrand_ = [log_abs_phi](double t) { return -2.0 * log_abs_phi(t); };
    table.domain_ = domain;
    table.settings_ = settings;
    const auto& logf = table.log_integrand_;

    std::vector<double> xs = graded_grid(domain, n_knots);
    if (xs.size() < 4) throw std::invalid_argument("tabulate_tail_integral: domain too thin");

    // Extend toward an infinite upper endpoint until the integrand
    // underflows; the remaining tail is picked up by direct quadrature.
    if (!domain.hi_finite()) {
        double x = xs.back();
        for (int j = 0; j < kMaxExtension && logf(x) > kLogUnderflow; ++j) {
            x += std::max(0.35, 0.05 * std::abs(x));
            xs.push_back(x);
        }
    }

    const std::size_t n = xs.size();
    std::vector<double> panel_log(n - 1);
    par_for(n - 1, [&](std::size_t i) {
        panel_log[i] = log_integral_exp(logf, xs[i], xs[i + 1], settings);
    });

    std::vector<double> ys(n);
    ys[n - 1] = log_integral_exp(logf, xs[n - 1], domain.hi(), settings);
    for (std::size_t i = n - 1; i-- > 0;) ys[i] = log_add_exp(ys[i + 1], panel_log[i]);

    // Extend toward the lower endpoint until I is huge (the mapping is
    // already pinned to c there) or the walk budget runs out. Finite
    // lower endpoints already carry the geometric ladder down to the
    // 1e-12 clustering floor, so only infinite ones are walked.
    if (!domain.lo_finite()) {
        std::vector<double> ext_x, ext_y;
        double x = xs.front();
        double y = ys.front();
        for (int j = 0; j < kMaxExtension && y < kLogHugeTail; ++j) {
            double xn = x - std::max(0.35, 0.05 * std::abs(x));
            double q = log_integral_exp(logf, xn, x, settings);
            y = log_add_exp(y, q);
            x = xn;
            ext_x.push_back(x);
            ext_y.push_back(y);
        }
        std::reverse(ext_x.begin(), ext_x.end());
        std::reverse(ext_y.begin(), ext_y.end());
        xs.insert(xs.begin(), ext_x.begin(), ext_x.end());
        ys.insert(ys.begin(), ext_y.begin(), ext_y.end());
    }

    // Per-panel recursive refinement: insert knots until the log-space
    // Hermite (with exact endpoint slopes) reproduces a locally
    // re-anchored quadrature value at the midpoint. Panels refine
    // independently, anchored at their own right knot. The target sits a
    // factor above the quadrature tolerance: the midpoint reference value
    // carries that much noise itself.
    const double tol = std::max(2.0 * settings.rel_tol, 1e-12);
    struct Pt {
        double x, y;
    };
    auto slope_at = [&](double x, double y) { return -std::exp(logf(x) - y); };

    std::vector<std::vector<Pt>> inserted(xs.size() - 1);
    par_for(xs.size() - 1, [&](std::size_t i) {
        std::vector<Pt>& out = inserted[i];
        auto refine = [&](auto&& self, double x0, double y0, double x1, double y1,
                          int depth) -> void {
            double xm = 0.5 * (x0 + x1);
            if (depth > 22 || out.size() > 4096 || !(xm > x0 && xm < x1)) return;
            double ym = log_add_exp(y1, log_integral_exp(logf, xm, x1, settings));
            double pred = hermite(xm, x0, x1, y0, y1, slope_at(x0, y0), slope_at(x1, y1));
            if (std::abs(pred - ym) <= tol) return;
            self(self, x0, y0, xm, ym, depth + 1);
            out.push_back({xm, ym});
            self(self, xm, ym, x1, y1, depth + 1);
        };
        refine(refine, xs[i], ys[i], xs[i + 1], ys[i + 1], 0);
    });

    std::vector<Pt> all;
    all.reserve(xs.size() * 2);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        all.push_back({xs[i], ys[i]});
        for (const Pt& p : inserted[i]) all.push_back(p);
    }
    all.push_back({xs.back(), ys.back()});

    // Drop knots that do not strictly decrease (possible where the
    // remaining tail is many orders below I and log_add_exp saturates).
    std::vector<MonotoneTable::Knot> knots;
    knots.reserve(all.size());
    for (const Pt& p : all) {
        if (!knots.empty()) {
            double prev = knots.back().log_I;
            if (!(p.y < prev - 1e-15 * std::max(1.0, std::abs(prev)))) continue;
        }
        knots.push_back({p.x, p.y, 0.0});
    }
    if (knots.size() < 2)
        throw QuadratureFailure("tabulate_tail_integral: degenerate knot set");

    for (auto& k : knots) k.slope = slope_at(k.x, k.log_I);
    // Fritsch-Carlson limiting: |slope| <= 3 |secant| on both sides keeps
    // the cubic monotone between knots.
    for (std::size_t i = 0; i < knots.size(); ++i) {
        double cap = kInf;
        if (i > 0) {
            double d = (knots[i].log_I - knots[i - 1].log_I) / (knots[i].x - knots[i - 1].x);
            cap = std::min(cap, 3.0 * std::abs(d));
        }
        if (i + 1 < knots.size()) {
            double d = (knots[i + 1].log_I - knots[i].log_I) / (knots[i + 1].x - knots[i].x);
            cap = std::min(cap, 3.0 * std::abs(d));
        }
        if (std::abs(knots[i].slope) > cap) knots[i].slope = -cap;
        if (knots[i].slope > 0.0) knots[i].slope = 0.0;
    }

    table.knots_ = std::move(knots);
    return table;
}

}  // namespace potcompose
