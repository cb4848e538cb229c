#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fields.hpp"
#include "map_ops.hpp"

namespace bhmap {

// E(phi) = 1/2 sum_x w sum_a |D+_a phi|^2. The forward-difference quadrature
// is the exact discrete adjoint of the 3-point tension: d/dt E(Pi(phi + tV))
// at t=0 equals -∫<tau(phi), V> in exact arithmetic.
double energy(const MapField& phi);

// E_2(phi) = 1/2 ∫ |tau(phi)|^2
double bienergy(const MapField& phi);

struct FirstVariationResult {
    double energy_residual = 0.0;   // |centered dE/dt - (-∫<tau,V>)|
    double bienergy_residual = 0.0; // |centered dE2/dt - (-∫<tau2,V>)|
};

FirstVariationResult first_variation_check(const MapField& phi, const Section& V, double eps);

enum class FlowKind { Harmonic, Biharmonic };
enum class StepControl { Fixed, HalvingLineSearch };

struct FlowConfig {
    FlowKind kind = FlowKind::Harmonic;
    double dt = 1e-3;
    long long max_steps = 1000;
    double tolerance = 1e-6; // on sup-norm of the driving residual
    StepControl control = StepControl::HalvingLineSearch;
    std::uint64_t seed = 0;
    // nodes held fixed during the flow (removable-singularity manufacturing)
    std::vector<Index> pinned;
};

struct FlowStepRecord {
    long long step = 0;
    double E = 0.0;
    double E2 = 0.0;
    double tau_sup = 0.0;
    double tau2_sup = 0.0;
    double dt = 0.0;
};

enum class FlowStatus { Converged, MaxSteps, DtUnderflow };

struct FlowTrace {
    std::vector<FlowStepRecord> steps;
    FlowStatus status = FlowStatus::MaxSteps;
    long long accepted = 0;
    std::string to_csv() const; // "step,E,E2,tau_sup,tau2_sup,dt"
};

// Retraction-based explicit gradient flow. Descent directions per the first
// variation formula: D = tau for the energy, D = +tau_2 for the bienergy.
// With line search enabled the driving objective never increases across
// accepted steps; dt underflow is reported via FlowStatus, never silently.
std::pair<MapField, FlowTrace> run_flow(const MapField& phi0, const FlowConfig& cfg);

} // namespace bhmap
