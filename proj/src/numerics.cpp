#include "potcompose/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "potcompose/errors.hpp"

namespace potcompose {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
    int depth;
};

struct PanelWorse {
    bool operator()(const Panel& p, const Panel& q) const { return p.error < q.error; }
};

void gk15(const std::function<double(double)>& f, double a, double b, double* value,
          double* error) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    double k15 = kWgk[7] * fc;
    double g7 = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        double d = h * kXgk[i];
        double fs = f(c - d) + f(c + d);
        k15 += kWgk[i] * fs;
        if (i % 2 == 1) g7 += kWg[i / 2] * fs;
    }
    *value = k15 * h;
    *error = std::abs(k15 - g7) * h;
}

// Maps an integral over an arbitrary open interval onto a finite
// parameter range, folding the Jacobian into the integrand. `log_form`
// adds log|dt/ds| instead of multiplying.
struct Transformed {
    std::function<double(double)> g;
    double lo, hi;
};

Transformed transform(const std::function<double(double)>& f, double lo, double hi,
                      bool log_form) {
    auto wrap = [log_form](const std::function<double(double)>& fn, auto map, auto jac) {
        return [fn, map, jac, log_form](double s) {
            double t = map(s);
            double j = jac(s);
            return log_form ? fn(t) + std::log(j) : fn(t) * j;
        };
    };
    if (lo == -kInf && hi == kInf) {
        auto map = [](double s) { return s / (1.0 - s * s); };
        auto jac = [](double s) {
            double d = 1.0 - s * s;
            return (1.0 + s * s) / (d * d);
        };
        return {wrap(f, map, jac), -1.0, 1.0};
    }
    if (hi == kInf) {
        auto map = [lo](double s) { return lo + s / (1.0 - s); };
        auto jac = [](double s) {
            double d = 1.0 - s;
            return 1.0 / (d * d);
        };
        return {wrap(f, map, jac), 0.0, 1.0};
    }
    if (lo == -kInf) {
        auto map = [hi](double s) { return hi - s / (1.0 - s); };
        auto jac = [](double s) {
            double d = 1.0 - s;
            return 1.0 / (d * d);
        };
        return {wrap(f, map, jac), 0.0, 1.0};
    }
    return {f, lo, hi};
}

bool splittable(const Panel& p, int max_depth) {
    if (p.depth >= max_depth) return false;
    double mid = 0.5 * (p.a + p.b);
    return mid > p.a && mid < p.b;
}

}  // namespace

double log_add_exp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

QuadResult adaptive_quad(const std::function<double(double)>& f, double lo, double hi,
                         const QuadSettings& settings) {
    Transformed tr = transform(f, lo, hi, false);

    std::priority_queue<Panel, std::vector<Panel>, PanelWorse> queue;
    double total_value = 0.0;
    double total_error = 0.0;
    auto push = [&](double a, double b, int depth) {
        Panel p{a, b, 0.0, 0.0, depth};
        gk15(tr.g, a, b, &p.value, &p.error);
        if (!std::isfinite(p.value)) {
            p.value = 0.0;
            p.error = kInf;
        }
        total_value += p.value;
        total_error += p.error;
        queue.push(p);
    };
    push(tr.lo, tr.hi, 0);

    const std::size_t kPanelCap = 200000;
    while (true) {
        double goal = std::max(settings.abs_tol, settings.rel_tol * std::abs(total_value));
        if (total_error <= goal) break;
        Panel worst = queue.top();
        if (!splittable(worst, settings.max_depth)) {
            throw QuadratureFailure("adaptive_quad: tolerance unreachable (error " +
                                    std::to_string(total_error) + ", goal " +
                                    std::to_string(goal) + ")");
        }
        queue.pop();
        total_value -= worst.value;
        total_error -= worst.error;
        double mid = 0.5 * (worst.a + worst.b);
        push(worst.a, mid, worst.depth + 1);
        push(mid, worst.b, worst.depth + 1);
        if (queue.size() > kPanelCap)
            throw QuadratureFailure("adaptive_quad: panel budget exhausted");
    }
    return {total_value, total_error};
}

double log_integral_exp(const std::function<double(double)>& log_f, double lo, double hi,
                        const QuadSettings& settings) {
    Transformed tr = transform(log_f, lo, hi, true);

    // Same scheme as adaptive_quad, but panel values and errors are kept
    // as logs; the integrand exp(log_f) is positive so the running sums
    // are logsumexp accumulations.
    struct LogPanel {
        double a, b;
        double log_value;
        double log_error;
        int depth;
    };
    struct Worse {
        bool operator()(const LogPanel& p, const LogPanel& q) const {
            return p.log_error < q.log_error;
        }
    };

    auto gk15_log = [&](double a, double b, double* lv, double* le) {
        const double c = 0.5 * (a + b);
        const double h = 0.5 * (b - a);
        double lf[15];
        lf[14] = tr.g(c);
        for (int i = 0; i < 7; ++i) {
            double d = h * kXgk[i];
            lf[2 * i] = tr.g(c - d);
            lf[2 * i + 1] = tr.g(c + d);
        }
        double m = -kInf;
        for (double v : lf) m = std::max(m, v);
        if (m == -kInf) {
            *lv = -kInf;
            *le = -kInf;
            return;
        }
        double k15 = kWgk[7] * std::exp(lf[14] - m);
        double g7 = kWg[3] * std::exp(lf[14] - m);
        for (int i = 0; i < 7; ++i) {
            double fs = std::exp(lf[2 * i] - m) + std::exp(lf[2 * i + 1] - m);
            k15 += kWgk[i] * fs;
            if (i % 2 == 1) g7 += kWg[i / 2] * fs;
        }
        *lv = m + std::log(k15 * h);
        double diff = std::abs(k15 - g7) * h;
        *le = diff > 0.0 ? m + std::log(diff) : -kInf;
    };

    std::priority_queue<LogPanel, std::vector<LogPanel>, Worse> queue;
    double total_lv = -kInf;
    double total_le = -kInf;
    auto push = [&](double a, double b, int depth) {
        LogPanel p{a, b, 0.0, 0.0, depth};
        gk15_log(a, b, &p.log_value, &p.log_error);
        total_lv = log_add_exp(total_lv, p.log_value);
        total_le = log_add_exp(total_le, p.log_error);
        queue.push(p);
    };
    push(tr.lo, tr.hi, 0);

    const double log_rel = std::log(settings.rel_tol);
    const std::size_t kPanelCap = 200000;
    std::vector<LogPanel> done;
    while (total_le > total_lv + log_rel) {
        LogPanel worst = queue.top();
        if (worst.depth >= settings.max_depth ||
            !(0.5 * (worst.a + worst.b) > worst.a && 0.5 * (worst.a + worst.b) < worst.b)) {
            throw QuadratureFailure("log_integral_exp: tolerance unreachable");
        }
        queue.pop();
        // Rebuild the running sums without the removed panel: recompute
        // from scratch is O(n); instead accumulate the kept panels lazily.
        done.clear();
        total_lv = -kInf;
        total_le = -kInf;
        while (!queue.empty()) {
            done.push_back(queue.top());
            queue.pop();
        }
        for (const auto& p : done) {
            total_lv = log_add_exp(total_lv, p.log_value);
            total_le = log_add_exp(total_le, p.log_error);
            queue.push(p);
        }
        double mid = 0.5 * (worst.a + worst.b);
        push(worst.a, mid, worst.depth + 1);
        push(mid, worst.b, worst.depth + 1);
        if (queue.size() > kPanelCap)
            throw QuadratureFailure("log_integral_exp: panel budget exhausted");
    }
    return total_lv;
}

double fd_second_derivative(const std::function<double(double)>& f, double x, double h) {
    double fx = f(x);
    auto d2 = [&](double step) {
        return (f(x - step) - 2.0 * fx + f(x + step)) / (step * step);
    };
    double coarse = d2(h);
    double fine = d2(0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

double fd_first_derivative(const std::function<double(double)>& f, double x, double h) {
    auto d1 = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
    double coarse = d1(h);
    double fine = d1(0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NoSignChange("bisect_root: f(lo) and f(hi) have the same sign");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // hit double resolution
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace potcompose
