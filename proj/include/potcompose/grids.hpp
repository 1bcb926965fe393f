#pragma once

#include <vector>

#include "potcompose/interval.hpp"

namespace potcompose {

/// Map the open interval onto (0,1). Finite intervals map affinely;
/// infinite endpoints are compactified with tanh (unit scale), so the
/// inverse of u -> 1 grows like atanh.
double compact_forward(const Interval& dom, double x);
double compact_inverse(const Interval& dom, double u);

/// Strictly increasing interior points, denser near the endpoints:
/// a uniform compactified backbone plus geometric ladders (ratio 1/2,
/// down to 1e-12 of the local scale) at finite endpoints and atanh
/// ladders at infinite ones. Size is approximately n.
std::vector<double> graded_grid(const Interval& dom, int n);

/// n Chebyshev-distributed points on the margin-shrunk compactified
/// interval, in increasing order. margin is the relative exclusion at
/// each end, 0 < margin < 1/2, measured in the compactified coordinate
/// (equivalently, relative to length for finite intervals).
std::vector<double> chebyshev_grid(const Interval& dom, int n, double margin);

}  // namespace potcompose
