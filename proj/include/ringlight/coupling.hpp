#pragma once

#include "ringlight/geometry.hpp"
#include "ringlight/types.hpp"

namespace ringlight {

/// Smallest separation accepted by the Green's tensor evaluation.
inline constexpr double min_separation = 1e-6;

struct CouplingMatrices {
    RMatrix coherent;    // J, zero diagonal
    RMatrix dissipative; // Gamma, diagonal = emitter decay rates
    double wavenumber = k0;

    Eigen::Index size() const { return coherent.rows(); }
};

/// p_n^* . G(r, omega0) . p_m for the free-space dyadic Green's tensor.
/// The imaginary part is evaluated without cancellation for k0*r -> 0.
cplx green_projected(const Vec3& r, const CVec3& pn, const CVec3& pm);

/// Coherent and dissipative pair couplings (J_nm, Gamma_nm) in Gamma0 units.
inline double coherent_coupling(cplx g) { return -3.0 * pi / k0 * g.real(); }
inline double dissipative_coupling(cplx g) { return 6.0 * pi / k0 * g.imag(); }

CouplingMatrices coupling_matrices(const EmitterEnsemble& ensemble);

} // namespace ringlight
