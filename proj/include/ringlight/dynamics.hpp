#pragma once

#include "ringlight/hamiltonian.hpp"
#include "ringlight/linalg.hpp"

#include <vector>

namespace ringlight {

struct AmplitudeState {
    CVector amplitudes;
    double time = 0.0;
};

/// Unit excitation on emitter `index` of an n-emitter system.
AmplitudeState localized_state(Eigen::Index n, Eigen::Index index);

/// Time series of a single-excitation evolution. All integrals are exact in
/// the eigenbasis, so the grid only sets where values are reported.
struct TransportTrace {
    std::vector<double> times;
    std::vector<double> donor_pop;
    std::vector<double> acceptor_pop;
    std::vector<double> norm2;
    /// Integral of the acceptor population, int_0^t |psi_a|^2.
    std::vector<double> acceptor_integral;
    /// Trap yield Gamma_T * acceptor_integral.
    std::vector<double> eta;
    /// Photon loss int_0^t psi^dagger Gamma psi (trap channel excluded).
    std::vector<double> radiated;
    /// Amplitudes at each time, only when requested.
    std::vector<CVector> states;
    double trap_rate = 0.0;
    double initial_norm2 = 0.0;
    bool driven = false;
};

/// Diagonalizes H once and propagates i psi' = H psi + f analytically:
/// psi(t) = s + sum_k c_k v_k exp(-i lambda_k t) with s = -H^{-1} f.
class SpectralPropagator {
public:
    explicit SpectralPropagator(const EffectiveHamiltonian& h);

    const EffectiveHamiltonian& hamiltonian() const { return h_; }
    const Eigensystem& eigen() const { return eig_; }
    /// Reciprocal condition number estimate of the eigenvector matrix.
    double eigenvector_rcond() const { return rcond_; }

    /// Sets the initial state and an optional constant drive (empty = none).
    /// The radiated-loss integral costs an extra O(N^3) and can be skipped.
    void prepare(const CVector& psi0, const RVector& drive = RVector(), bool radiative = true);

    CVector state(double t) const;
    double acceptor_integral(double t) const;
    double radiated(double t) const;

private:
    // int_0^t psi^dagger Q psi from W = V^dagger Q V, q = V^dagger Q s, s^dagger Q s
    double quadratic_integral(const CMatrix& w, const CVector& q, double sqs, double t) const;

    EffectiveHamiltonian h_;
    Eigensystem eig_;
    Eigen::PartialPivLU<CMatrix> lu_;
    double rcond_ = 0.0;
    CVector coeffs_;
    CVector shift_;
    CMatrix w_acceptor_;
    CVector q_acceptor_;
    double s_acceptor_ = 0.0;
    CMatrix w_radiative_;
    CVector q_radiative_;
    double s_radiative_ = 0.0;
    bool prepared_ = false;
};

/// Propagates psi0 over `times` (strictly increasing, starting at >= 0).
TransportTrace evolve(const EffectiveHamiltonian& h, const AmplitudeState& psi0,
                      const std::vector<double>& times, const DriveVector* drive = nullptr,
                      bool keep_states = false);

/// Uniform grid 0, dt, ..., t_max with `steps` intervals.
std::vector<double> time_grid(double t_max, int steps);

/// eta_t = Gamma_T int_0^t |psi_a|^2, linear in the acceptor population
/// between grid points.
double transport_efficiency(const TransportTrace& trace, double trap_rate, double t);

/// Transport efficiency at time t for an excitation starting on the donor,
/// without building a trace. Used by scans.
double transport_efficiency(const EffectiveHamiltonian& h, double t);

struct ExcitationBudget {
    double remaining = 0.0;
    double radiated = 0.0;
    double trapped = 0.0;
    double total() const { return remaining + radiated + trapped; }
};

/// Budget at the last grid point. Throws IntegrationAccuracyError when an
/// undriven trace violates conservation by more than 1e-4.
ExcitationBudget excitation_budget(const TransportTrace& trace);

/// |<psi|mode>|^2 with the mode normalized; psi is used as is.
double eigenstate_fidelity(const CVector& psi, const CVector& mode);
std::vector<double> eigenstate_fidelity(const TransportTrace& trace, const CVector& mode);

} // namespace ringlight
