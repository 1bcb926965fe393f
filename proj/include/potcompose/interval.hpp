#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace potcompose {

/// Open interval with independently finite or infinite endpoints.
class Interval {
public:
    Interval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (std::isnan(lo) || std::isnan(hi) || !(lo < hi))
            throw std::invalid_argument("Interval requires lo < hi");
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool lo_finite() const { return std::isfinite(lo_); }
    bool hi_finite() const { return std::isfinite(hi_); }
    bool finite() const { return lo_finite() && hi_finite(); }

    /// +inf when either endpoint is infinite.
    double length() const { return hi_ - lo_; }

    bool contains(double x) const { return lo_ < x && x < hi_; }

    static Interval whole_line() {
        const double inf = std::numeric_limits<double>::infinity();
        return Interval(-inf, inf);
    }
    static Interval half_line(double lo) {
        return Interval(lo, std::numeric_limits<double>::infinity());
    }

    std::string str() const {
        auto fmt = [](double v) {
            if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
            return std::to_string(v);
        };
        return "(" + fmt(lo_) + ", " + fmt(hi_) + ")";
    }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

private:
    double lo_;
    double hi_;
};

}  // namespace potcompose
