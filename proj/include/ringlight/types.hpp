#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>

namespace ringlight {

// Lengths are in units of the transition wavelength lambda0, rates and
// energies in units of the single-emitter decay rate Gamma0, hbar = 1.

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double wavelength = 1.0;
inline constexpr double k0 = 2.0 * pi / wavelength;
inline constexpr double gamma0 = 1.0;

/// Single-emitter resonant scattering cross-section 6*pi/k0^2.
inline constexpr double scattering_cross_section = 6.0 * pi / (k0 * k0);

inline CVec3 circular_polarization() {
    return CVec3(cplx(1.0, 0.0), cplx(0.0, 1.0), cplx(0.0, 0.0)) / std::sqrt(2.0);
}

} // namespace ringlight
