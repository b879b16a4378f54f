#pragma once

#include "ringlight/coupling.hpp"
#include "ringlight/geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ringlight {

struct EffectiveHamiltonian {
    CMatrix matrix;
    /// Trap rate on each emitter (non-zero only on the acceptor).
    RVector trap_rates;
    std::optional<std::size_t> donor;
    std::optional<std::size_t> acceptor;
    bool has_trap = false;
    bool has_disorder = false;

    Eigen::Index size() const { return matrix.rows(); }
    /// Total decay operator i(H - H^dagger) = Gamma + trap diagonal.
    RMatrix decay_operator() const;
    /// Radiative part of the decay operator (trap channel removed).
    RMatrix radiative_operator() const;
};

struct DriveVector {
    RVector amplitudes;
    double rabi = 0.0;
    double waist = 0.0;
    Vec3 center = Vec3::Zero();
    /// Set when the drive leaves the weak-excitation regime.
    std::vector<std::string> warnings;
};

/// H_nm = J_nm - (i/2) Gamma_nm, H_nn = detuning_n - (i/2)(decay_n + trap_n).
EffectiveHamiltonian assemble_effective(const EmitterEnsemble& ensemble,
                                        const CouplingMatrices& couplings);

/// Copy of `h` with the donor/acceptor detuning and the acceptor trap rate
/// replaced. Cheap path for parameter scans over a fixed geometry.
EffectiveHamiltonian retune(const EffectiveHamiltonian& h, const EmitterEnsemble& ensemble,
                            double detuning, double trap_rate);

/// Adds `offsets` to the lattice diagonal (frequency disorder) in place.
void add_lattice_detunings(EffectiveHamiltonian& h, const EmitterEnsemble& ensemble,
                           const RVector& offsets);

/// Omega0 * exp(-|center - r_i|^2 / (2 w^2)) on every emitter.
DriveVector gaussian_drive(const EmitterEnsemble& ensemble, double rabi, double waist,
                           const Vec3& center);

/// All J = 0, all Gamma_nm = gamma. Test model with closed-form collective states.
EffectiveHamiltonian ideal_dicke_hamiltonian(int n, double gamma = gamma0);

} // namespace ringlight
