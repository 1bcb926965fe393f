#pragma once

#include <string>
#include <vector>

#include "potcompose/mapping.hpp"

namespace potcompose {

/// Deliberate corruptions for fault-injection tests: shift the seed
/// energy, bend the weight exponent away from 4, or scale alpha. All
/// defaults are the exact values (no corruption).
struct CorruptionSpec {
    double energy_shift = 0.0;
    double weight_exponent = 4.0;
    double alpha_factor = 1.0;
    bool any() const {
        return energy_shift != 0.0 || weight_exponent != 4.0 || alpha_factor != 1.0;
    }
};

/// Common face of Composition and CompositionChain for the verifier and
/// the grid sampler. The *_precise evaluators re-anchor the tail
/// integral locally with tightened quadrature instead of using the
/// interpolant: interpolation error is smooth enough for values but its
/// curvature would dominate an independent second difference.
class ComposedSystem {
public:
    virtual ~ComposedSystem() = default;
    virtual const Interval& source_domain() const = 0;
    virtual SpecPtr terminal() const = 0;
    virtual bool valid_mode(int m) const = 0;
    virtual double mode_energy(int m) const = 0;
    virtual std::size_t stage_count() const = 0;
    virtual const MappingKernel& stage_kernel(std::size_t i) const = 0;
    virtual double stage_alpha_scale(std::size_t i) const = 0;
    virtual double weight_exponent() const = 0;
    virtual double potential(double x) const = 0;
    virtual double weight(double x) const = 0;
    virtual double psi0(double x) const = 0;
    virtual double chi0(double x) const = 0;
    virtual std::function<double(double)> mode_evaluator(int m) const = 0;
    /// Verification-grade mode evaluator valid on (a, x_max]; all its
    /// evaluations share one tail anchor so quadrature noise enters a
    /// finite-difference stencil as a smooth common offset.
    virtual std::function<double(double)> precise_mode_fn(int m, double x_max) const = 0;
    virtual double potential_precise(double x) const = 0;
    virtual double weight_precise(double x) const = 0;
    /// Sum of stage log chi factors and the terminal coordinate (psi of
    /// the last stage). Weighted products like phi_m^C phi_n^C w are
    /// integrated as phi_m(z) phi_n(z) exp((2 - we) L): the separate
    /// factors overflow/underflow in opposite directions near the source
    /// endpoints while the fused form stays finite.
    virtual void chi_and_coordinate(double x, double* log_chi_total, double* z) const = 0;
};

struct ComposedMode {
    std::function<double(double)> value;
    double energy;
    std::function<double(double)> weight;
};

/// V_C = V0 - E0 + chi0^{-4} V1(psi0) with solutions chi0 * phi_m(psi0)
/// satisfying H_C phi_m^C = E_m chi0^{-4} phi_m^C.
class Composition : public ComposedSystem {
public:
    Composition(NodelessSolution seed, SpecPtr system1, const QuadSettings& settings,
                int n_knots, CorruptionSpec corruption);

    const MappingKernel& kernel() const { return kernel_; }
    const SpecPtr& system1() const { return system1_; }
    double seed_energy() const { return energy_eff_; }
    const CorruptionSpec& corruption() const { return corruption_; }
    ComposedMode solution(int m) const;

    const Interval& source_domain() const override { return kernel_.source(); }
    SpecPtr terminal() const override { return system1_; }
    bool valid_mode(int m) const override { return system1_->valid_index(m); }
    double mode_energy(int m) const override { return system1_->eigen_energy(m); }
    std::size_t stage_count() const override { return 1; }
    const MappingKernel& stage_kernel(std::size_t) const override { return kernel_; }
    double stage_alpha_scale(std::size_t) const override { return corruption_.alpha_factor; }
    double weight_exponent() const override { return corruption_.weight_exponent; }
    double potential(double x) const override;
    double weight(double x) const override;
    double psi0(double x) const override;
    double chi0(double x) const override;
    std::function<double(double)> mode_evaluator(int m) const override;
    std::function<double(double)> precise_mode_fn(int m, double x_max) const override;
    double potential_precise(double x) const override;
    double weight_precise(double x) const override;
    void chi_and_coordinate(double x, double* log_chi_total, double* z) const override;

private:
    MappingKernel kernel_;
    SpecPtr system1_;
    CorruptionSpec corruption_;
    double energy_eff_;
};

Composition compose(NodelessSolution seed, SpecPtr system1, const QuadSettings& settings = {},
                    int n_knots = 128, CorruptionSpec corruption = {});

/// Two-stage chain: V0 - E0 + chi0^{-4} (V1(psi0) - E1)
///                  + chi0^{-4} chi1^{-4}(psi0) V2(psi1(psi0)),
/// solutions chi0 chi1(psi0) Phi_m(psi1(psi0)).
class CompositionChain : public ComposedSystem {
public:
    CompositionChain(Composition stage0, MappingKernel kernel1, double seed1_energy,
                     SpecPtr system2);

    const Composition& stage0() const { return stage0_; }
    const MappingKernel& kernel1() const { return kernel1_; }
    double seed1_energy() const { return seed1_energy_; }

    const Interval& source_domain() const override { return stage0_.source_domain(); }
    SpecPtr terminal() const override { return system2_; }
    bool valid_mode(int m) const override { return system2_->valid_index(m); }
    double mode_energy(int m) const override { return system2_->eigen_energy(m); }
    std::size_t stage_count() const override { return 2; }
    const MappingKernel& stage_kernel(std::size_t i) const override {
        return i == 0 ? stage0_.kernel() : kernel1_;
    }
    double stage_alpha_scale(std::size_t i) const override {
        return i == 0 ? stage0_.stage_alpha_scale(0) : 1.0;
    }
    double weight_exponent() const override { return stage0_.weight_exponent(); }
    double potential(double x) const override;
    double weight(double x) const override;
    double psi0(double x) const override;
    double chi0(double x) const override;
    std::function<double(double)> mode_evaluator(int m) const override;
    std::function<double(double)> precise_mode_fn(int m, double x_max) const override;
    double potential_precise(double x) const override;
    double weight_precise(double x) const override;
    void chi_and_coordinate(double x, double* log_chi_total, double* z) const override;

private:
    Composition stage0_;
    MappingKernel kernel1_;
    double seed1_energy_;
    SpecPtr system2_;
};

/// Builds the second stage from a nodeless seed of comp's System 1.
/// Throws SeedOwnerMismatch when seed1 does not belong to that system.
CompositionChain iterate(const Composition& comp, NodelessSolution seed1, SpecPtr system2,
                         const QuadSettings& settings = {}, int n_knots = 128);

/// Columns evaluated on a Chebyshev grid over the margin-shrunk
/// (compactified) source interval.
struct GridSample {
    std::vector<double> xs;
    std::vector<std::string> names;               // column names after x
    std::vector<std::vector<double>> columns;     // [names][xs]
    double margin = 0.0;
};

GridSample sample_grid(const ComposedSystem& comp, int n, double margin,
                       const std::vector<int>& modes);

}  // namespace potcompose
