#pragma once

#include <string>
#include <vector>

#include "potcompose/composition.hpp"

namespace potcompose {

struct CheckResult {
    std::string name;
    bool pass = false;
    double worst = 0.0;     // worst observed value (relative residual, gap, ...)
    double tol = 0.0;
    double location = 0.0;  // x where the worst value occurred
    std::string note;
};

struct VerificationReport {
    std::vector<CheckResult> checks;  // sorted by name
    bool overall = false;
    std::vector<std::vector<double>> gram;  // last orthogonality Gram matrix
    std::vector<int> gram_modes;
};

/// Pointwise eigen-relation residual R = -phi'' + V_C phi - E w phi with
/// the second derivative from fd_second_derivative on the precise
/// evaluators (independent of the construction's chain-rule forms).
/// Passes iff max |R|/S <= tol, S = |phi''| + |V phi| + |E w phi| + 1e-12.
CheckResult residual_check(const ComposedSystem& comp, int m, int n_points, double margin,
                           double tol);

struct OrthogonalityResult {
    CheckResult offdiag;
    CheckResult diagonal;
    std::vector<std::vector<double>> gram;
    std::vector<int> modes;
};

/// Source-side weighted Gram matrix vs the target-side plain norms: the
/// change-of-variables identity. Off-diagonals must stay below
/// tol * sqrt(h_m h_n); diagonals must match the independently computed
/// target norms to relative 10*tol.
OrthogonalityResult orthogonality_check(const ComposedSystem& comp, int max_m, double tol,
                                        const QuadSettings& settings = {});

/// Endpoint limits of psi0 (c at a, d at b, or unbounded growth for
/// d = +inf) plus 1000 deterministic random monotonicity pairs.
CheckResult mapping_check(const MappingKernel& kernel, double tol, double alpha_scale = 1.0);

struct ReportOptions {
    std::vector<int> modes = {1};
    int n_points = 64;
    double margin = 1e-3;
    double residual_tol = 1e-6;
    double ortho_tol = 1e-8;
    double mapping_tol = 1e-6;
    QuadSettings quad;
};

/// Residuals for every requested mode, orthogonality, per-stage mapping
/// checks, and the seeds' nodelessness/boundary/Rayleigh re-checks.
/// Deterministic ordering (sorted by check name).
VerificationReport full_report(const ComposedSystem& comp, const ReportOptions& options = {});

std::string format_report(const VerificationReport& report);

}  // namespace potcompose
