#include "potcompose/grids.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace potcompose {

namespace {
constexpr double kLadderStart = 0.25;   // first ladder point at len/4
constexpr double kLadderFloor = 1e-12;  // relative clustering floor
}  // namespace

double compact_forward(const Interval& dom, double x) {
    if (dom.finite()) return (x - dom.lo()) / dom.length();
    if (dom.lo_finite()) return std::tanh(x - dom.lo());
    if (dom.hi_finite()) return 1.0 - std::tanh(dom.hi() - x);
    return 0.5 * (1.0 + std::tanh(x));
}

double compact_inverse(const Interval& dom, double u) {
    if (dom.finite()) return dom.lo() + u * dom.length();
    if (dom.lo_finite()) return dom.lo() + std::atanh(u);
    if (dom.hi_finite()) return dom.hi() - std::atanh(1.0 - u);
    return std::atanh(2.0 * u - 1.0);
}

std::vector<double> graded_grid(const Interval& dom, int n) {
    if (n < 2) throw std::invalid_argument("graded_grid: n must be >= 2");
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(n) + 96);

    const int ladder_len = std::min(44, std::max(8, n / 4));
    const double scale = dom.finite() ? dom.length() : 1.0;

    // Lower-endpoint ladder.
    if (dom.lo_finite()) {
        double d = scale * kLadderStart;
        for (int j = 0; j < ladder_len && d > kLadderFloor * scale; ++j, d *= 0.5)
            pts.push_back(dom.lo() + d);
    } else {
        for (int j = 1; j <= ladder_len; ++j)
            pts.push_back(compact_inverse(dom, 0.5 * std::pow(0.5, j)));
    }
    // Upper-endpoint ladder.
    if (dom.hi_finite()) {
        double d = scale * kLadderStart;
        for (int j = 0; j < ladder_len && d > kLadderFloor * scale; ++j, d *= 0.5)
            pts.push_back(dom.hi() - d);
    } else {
        for (int j = 1; j <= ladder_len; ++j)
            pts.push_back(compact_inverse(dom, 1.0 - 0.5 * std::pow(0.5, j)));
    }
    // Uniform compactified backbone.
    int backbone = std::max(2, n - static_cast<int>(pts.size()));
    for (int i = 0; i < backbone; ++i)
        pts.push_back(compact_inverse(dom, (i + 0.5) / backbone));

    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    // Points collapsing onto an endpoint (atanh saturation) are dropped.
    std::erase_if(pts, [&](double x) { return !dom.contains(x) || !std::isfinite(x); });
    return pts;
}

std::vector<double> chebyshev_grid(const Interval& dom, int n, double margin) {
    if (n < 2) throw std::invalid_argument("chebyshev_grid: n must be >= 2");
    if (!(margin > 0.0 && margin < 0.5))
        throw std::invalid_argument("chebyshev_grid: margin must be in (0, 1/2)");
    std::vector<double> xs(static_cast<std::size_t>(n));
    const double pi = std::acos(-1.0);
    for (int k = 0; k < n; ++k) {
        double t = 0.5 * (1.0 - std::cos(pi * k / (n - 1)));  // ascending in [0,1]
        double u = margin + (1.0 - 2.0 * margin) * t;
        xs[static_cast<std::size_t>(k)] = compact_inverse(dom, u);
    }
    return xs;
}

}  // namespace potcompose
