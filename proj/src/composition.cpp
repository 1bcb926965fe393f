#include "potcompose/composition.hpp"

#include <algorithm>
#include <cmath>

#include "potcompose/errors.hpp"
#include "potcompose/grids.hpp"
#include "potcompose/parallel.hpp"

namespace potcompose {

Composition::Composition(NodelessSolution seed, SpecPtr system1, const QuadSettings& settings,
                         int n_knots, CorruptionSpec corruption)
    : kernel_(build_mapping(std::move(seed), system1->domain, settings, n_knots)),
      system1_(std::move(system1)),
      corruption_(corruption),
      energy_eff_(kernel_.seed().energy + corruption.energy_shift) {}

double Composition::potential(double x) const {
    double lchi = kernel_.log_chi(x, EvalMode::Fast, corruption_.alpha_factor);
    double w = std::exp(-corruption_.weight_exponent * lchi);
    double psi = kernel_.psi(x, EvalMode::Fast, corruption_.alpha_factor);
    return kernel_.seed().owner->V(x) - energy_eff_ + w * system1_->V(psi);
}

double Composition::weight(double x) const {
    return std::exp(-corruption_.weight_exponent *
                    kernel_.log_chi(x, EvalMode::Fast, corruption_.alpha_factor));
}

double Composition::psi0(double x) const {
    return kernel_.psi(x, EvalMode::Fast, corruption_.alpha_factor);
}

double Composition::chi0(double x) const {
    return kernel_.chi(x, EvalMode::Fast, corruption_.alpha_factor);
}

std::function<double(double)> Composition::mode_evaluator(int m) const {
    Eigenfunction ef = eigenfunction(system1_, m);
    const MappingKernel* k = &kernel_;
    double af = corruption_.alpha_factor;
    return [k, ef, af](double x) {
        double lt = k->log_tail(x, EvalMode::Fast);
        double lchi = k->log_chi_from_log_tail(x, lt, af);
        return std::exp(lchi) * ef.value(k->psi_from_log_tail(lt, af));
    };
}

ComposedMode Composition::solution(int m) const {
    ComposedMode mode;
    mode.value = mode_evaluator(m);
    mode.energy = mode_energy(m);
    const Composition* self = this;
    mode.weight = [self](double x) { return self->weight(x); };
    return mode;
}

std::function<double(double)> Composition::precise_mode_fn(int m, double x_max) const {
    Eigenfunction ef = eigenfunction(system1_, m);
    auto frame = std::make_shared<TailFrame>(kernel_.make_frame(x_max));
    const MappingKernel* k = &kernel_;
    double af = corruption_.alpha_factor;
    return [k, ef, frame, af](double x) {
        double lt = frame->log_tail(x);
        double lchi = k->log_chi_from_log_tail(x, lt, af);
        return std::exp(lchi) * ef.value(k->psi_from_log_tail(lt, af));
    };
}

double Composition::potential_precise(double x) const {
    double lt = kernel_.log_tail(x, EvalMode::Precise);
    double lchi = kernel_.log_chi_from_log_tail(x, lt, corruption_.alpha_factor);
    double w = std::exp(-corruption_.weight_exponent * lchi);
    double psi = kernel_.psi_from_log_tail(lt, corruption_.alpha_factor);
    return kernel_.seed().owner->V(x) - energy_eff_ + w * system1_->V(psi);
}

double Composition::weight_precise(double x) const {
    double lt = kernel_.log_tail(x, EvalMode::Precise);
    return std::exp(-corruption_.weight_exponent *
                    kernel_.log_chi_from_log_tail(x, lt, corruption_.alpha_factor));
}

void Composition::chi_and_coordinate(double x, double* log_chi_total, double* z) const {
    double lt = kernel_.log_tail(x, EvalMode::Fast);
    *log_chi_total = kernel_.log_chi_from_log_tail(x, lt, corruption_.alpha_factor);
    *z = kernel_.psi_from_log_tail(lt, corruption_.alpha_factor);
}

Composition compose(NodelessSolution seed, SpecPtr system1, const QuadSettings& settings,
                    int n_knots, CorruptionSpec corruption) {
    return Composition(std::move(seed), std::move(system1), settings, n_knots, corruption);
}

CompositionChain::CompositionChain(Composition stage0, MappingKernel kernel1,
                                   double seed1_energy, SpecPtr system2)
    : stage0_(std::move(stage0)),
      kernel1_(std::move(kernel1)),
      seed1_energy_(seed1_energy),
      system2_(std::move(system2)) {}

double CompositionChain::potential(double x) const {
    const MappingKernel& k0 = stage0_.kernel();
    double af = stage0_.stage_alpha_scale(0);
    double we = weight_exponent();
    double lchi0 = k0.log_chi(x, EvalMode::Fast, af);
    double w0 = std::exp(-we * lchi0);
    double y = k0.psi(x, EvalMode::Fast, af);
    double lchi1 = kernel1_.log_chi(y, EvalMode::Fast);
    double w1 = std::exp(-we * lchi1);
    double z = kernel1_.psi(y, EvalMode::Fast);
    return k0.seed().owner->V(x) - stage0_.seed_energy() +
           w0 * (stage0_.system1()->V(y) - seed1_energy_) + w0 * w1 * system2_->V(z);
}

double CompositionChain::weight(double x) const {
    const MappingKernel& k0 = stage0_.kernel();
    double af = stage0_.stage_alpha_scale(0);
    double we = weight_exponent();
    double lchi0 = k0.log_chi(x, EvalMode::Fast, af);
    double y = k0.psi(x, EvalMode::Fast, af);
    double lchi1 = kernel1_.log_chi(y, EvalMode::Fast);
    return std::exp(-we * (lchi0 + lchi1));
}

double CompositionChain::psi0(double x) const { return stage0_.psi0(x); }

double CompositionChain::chi0(double x) const { return stage0_.chi0(x); }

std::function<double(double)> CompositionChain::mode_evaluator(int m) const {
    Eigenfunction ef = eigenfunction(system2_, m);
    const MappingKernel* k0 = &stage0_.kernel();
    const MappingKernel* k1 = &kernel1_;
    double af = stage0_.stage_alpha_scale(0);
    return [k0, k1, ef, af](double x) {
        double lt0 = k0->log_tail(x, EvalMode::Fast);
        double lchi0 = k0->log_chi_from_log_tail(x, lt0, af);
        double y = k0->psi_from_log_tail(lt0, af);
        double lt1 = k1->log_tail(y, EvalMode::Fast);
        double lchi1 = k1->log_chi_from_log_tail(y, lt1);
        return std::exp(lchi0 + lchi1) * ef.value(k1->psi_from_log_tail(lt1));
    };
}

std::function<double(double)> CompositionChain::precise_mode_fn(int m, double x_max) const {
    Eigenfunction ef = eigenfunction(system2_, m);
    const MappingKernel* k0 = &stage0_.kernel();
    const MappingKernel* k1 = &kernel1_;
    double af = stage0_.stage_alpha_scale(0);
    auto frame0 = std::make_shared<TailFrame>(k0->make_frame(x_max));
    // psi0 is increasing, so the stage-1 anchor sits at psi0(x_max).
    double y_max = k0->psi_from_log_tail(frame0->log_tail(x_max), af);
    auto frame1 = std::make_shared<TailFrame>(k1->make_frame(y_max));
    return [k0, k1, ef, af, frame0, frame1](double x) {
        double lt0 = frame0->log_tail(x);
        double lchi0 = k0->log_chi_from_log_tail(x, lt0, af);
        double y = k0->psi_from_log_tail(lt0, af);
        double lt1 = frame1->log_tail(y);
        double lchi1 = k1->log_chi_from_log_tail(y, lt1);
        return std::exp(lchi0 + lchi1) * ef.value(k1->psi_from_log_tail(lt1));
    };
}

double CompositionChain::potential_precise(double x) const {
    const MappingKernel& k0 = stage0_.kernel();
    double af = stage0_.stage_alpha_scale(0);
    double we = weight_exponent();
    double lt0 = k0.log_tail(x, EvalMode::Precise);
    double lchi0 = k0.log_chi_from_log_tail(x, lt0, af);
    double y = k0.psi_from_log_tail(lt0, af);
    double lt1 = kernel1_.log_tail(y, EvalMode::Precise);
    double lchi1 = kernel1_.log_chi_from_log_tail(y, lt1);
    double z = kernel1_.psi_from_log_tail(lt1);
    return k0.seed().owner->V(x) - stage0_.seed_energy() +
           std::exp(-we * lchi0) * (stage0_.system1()->V(y) - seed1_energy_) +
           std::exp(-we * (lchi0 + lchi1)) * system2_->V(z);
}

double CompositionChain::weight_precise(double x) const {
    const MappingKernel& k0 = stage0_.kernel();
    double af = stage0_.stage_alpha_scale(0);
    double we = weight_exponent();
    double lt0 = k0.log_tail(x, EvalMode::Precise);
    double lchi0 = k0.log_chi_from_log_tail(x, lt0, af);
    double y = k0.psi_from_log_tail(lt0, af);
    double lchi1 = kernel1_.log_chi(y, EvalMode::Precise);
    return std::exp(-we * (lchi0 + lchi1));
}

void CompositionChain::chi_and_coordinate(double x, double* log_chi_total, double* z) const {
    const MappingKernel& k0 = stage0_.kernel();
    double af = stage0_.stage_alpha_scale(0);
    double lt0 = k0.log_tail(x, EvalMode::Fast);
    double lchi0 = k0.log_chi_from_log_tail(x, lt0, af);
    double y = k0.psi_from_log_tail(lt0, af);
    double lt1 = kernel1_.log_tail(y, EvalMode::Fast);
    *log_chi_total = lchi0 + kernel1_.log_chi_from_log_tail(y, lt1);
    *z = kernel1_.psi_from_log_tail(lt1);
}

CompositionChain iterate(const Composition& comp, NodelessSolution seed1, SpecPtr system2,
                         const QuadSettings& settings, int n_knots) {
    if (seed1.owner != comp.system1())
        throw SeedOwnerMismatch("iterate: seed1 must solve the composition's System 1");
    double e1 = seed1.energy;
    MappingKernel k1 = build_mapping(std::move(seed1), system2->domain, settings, n_knots);
    return CompositionChain(comp, std::move(k1), e1, std::move(system2));
}

GridSample sample_grid(const ComposedSystem& comp, int n, double margin,
                       const std::vector<int>& modes) {
    if (n < 2) throw std::invalid_argument("sample_grid: n must be >= 2");
    if (!(margin > 0.0 && margin < 0.5))
        throw std::invalid_argument("sample_grid: margin must be in (0, 1/2)");

    GridSample gs;
    gs.margin = margin;
    gs.xs = chebyshev_grid(comp.source_domain(), n, margin);
    gs.names = {"V_C", "psi0", "chi0", "weight"};
    std::vector<std::function<double(double)>> mode_fns;
    for (int m : modes) {
        gs.names.push_back("phi_C_" + std::to_string(m));
        mode_fns.push_back(comp.mode_evaluator(m));
    }
    gs.columns.assign(gs.names.size(), std::vector<double>(gs.xs.size()));

    par_for(gs.xs.size(), [&](std::size_t i) {
        double x = gs.xs[i];
        gs.columns[0][i] = comp.potential(x);
        gs.columns[1][i] = comp.psi0(x);
        gs.columns[2][i] = comp.chi0(x);
        gs.columns[3][i] = comp.weight(x);
        for (std::size_t k = 0; k < mode_fns.size(); ++k)
            gs.columns[4 + k][i] = mode_fns[k](x);
    });
    return gs;
}

}  // namespace potcompose
