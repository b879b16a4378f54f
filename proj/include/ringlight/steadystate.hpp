#pragma once

#include "ringlight/geometry.hpp"
#include "ringlight/hamiltonian.hpp"

#include <vector>

namespace ringlight {

struct SteadyStateResult {
    CVector amplitudes;
    double acceptor_pop = 0.0;
    double trap_rate = 0.0;           // Gamma_T * acceptor population
    double normalized_rate = 0.0;     // trap_rate / single-emitter rate at equal Omega0
    double residual = 0.0;            // ||H psi + f|| / ||f||
    double rcond = 0.0;
};

/// Trap rate 4 Omega0^2 Gamma_T / (Gamma0 + Gamma_T)^2 of a lone emitter
/// driven on resonance.
double single_emitter_trap_rate(double rabi, double trap_rate);

/// psi = -H^{-1} f by a dense LU solve.
SteadyStateResult solve_steady_state(const EffectiveHamiltonian& h, const DriveVector& drive);

struct TrapScanPoint {
    double trap_rate = 0.0;
    double trap_over_coupling = 0.0;
    double effective_rate = 0.0;
    double normalized_rate = 0.0;
    double waist = 0.0;
    double detuning = 0.0;
};

enum class BeamCenter { donor, acceptor };

struct TrapScanSettings {
    double waist = 0.3;
    double detuning = 0.0;
    double rabi = 1e-3;
    BeamCenter center = BeamCenter::donor;
    /// |J| used for the Gamma_T / |J| axis.
    double coupling_scale = 1.0;
};

/// Normalized steady-state trapping rate over a grid of trap rates for a
/// geometry with donor and acceptor. Points are independent.
std::vector<TrapScanPoint> trapping_rate_scan(const EmitterEnsemble& ensemble,
                                              const std::vector<double>& trap_rates,
                                              const TrapScanSettings& settings);

} // namespace ringlight
