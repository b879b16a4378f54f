#include "ringlight/hamiltonian.hpp"

#include "ringlight/errors.hpp"

#include <cmath>
#include <sstream>

namespace ringlight {

RMatrix EffectiveHamiltonian::decay_operator() const {
    return -(matrix - matrix.adjoint()).imag();
}

RMatrix EffectiveHamiltonian::radiative_operator() const {
    RMatrix g = decay_operator();
    g.diagonal() -= trap_rates;
    return g;
}

EffectiveHamiltonian assemble_effective(const EmitterEnsemble& ensemble,
                                        const CouplingMatrices& couplings) {
    const auto n = static_cast<Eigen::Index>(ensemble.size());
    if (couplings.coherent.rows() != n || couplings.dissipative.rows() != n ||
        couplings.coherent.cols() != n || couplings.dissipative.cols() != n) {
        std::ostringstream msg;
        msg << "assemble_effective: couplings are " << couplings.coherent.rows() << "x"
            << couplings.coherent.cols() << " for " << n << " emitters";
        throw DimensionMismatch(msg.str());
    }
    EffectiveHamiltonian h;
    h.matrix.resize(n, n);
    h.matrix.real() = couplings.coherent;
    h.matrix.imag() = -0.5 * couplings.dissipative;
    h.trap_rates = RVector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& e = ensemble[static_cast<std::size_t>(i)];
        h.matrix(i, i) = cplx(e.detuning, -0.5 * (e.decay_rate + e.trap_rate));
        h.trap_rates(i) = e.trap_rate;
        h.has_trap = h.has_trap || e.trap_rate > 0.0;
        h.has_disorder = h.has_disorder || (e.role == Role::lattice && e.detuning != 0.0);
    }
    h.donor = ensemble.donor_index();
    h.acceptor = ensemble.acceptor_index();
    return h;
}

EffectiveHamiltonian retune(const EffectiveHamiltonian& h, const EmitterEnsemble& ensemble,
                            double detuning, double trap_rate) {
    if (h.size() != static_cast<Eigen::Index>(ensemble.size())) {
        throw DimensionMismatch("retune: Hamiltonian and ensemble sizes differ");
    }
    if (trap_rate < 0.0) {
        throw InvalidArgument("retune: trap_rate must be non-negative");
    }
    EffectiveHamiltonian out = h;
    if (h.donor) {
        const auto i = static_cast<Eigen::Index>(*h.donor);
        out.matrix(i, i) = cplx(detuning, -0.5 * ensemble[*h.donor].decay_rate);
    }
    if (h.acceptor) {
        const auto i = static_cast<Eigen::Index>(*h.acceptor);
        out.matrix(i, i) = cplx(detuning, -0.5 * (ensemble[*h.acceptor].decay_rate + trap_rate));
        out.trap_rates(i) = trap_rate;
        out.has_trap = trap_rate > 0.0;
    }
    return out;
}

void add_lattice_detunings(EffectiveHamiltonian& h, const EmitterEnsemble& ensemble,
                           const RVector& offsets) {
    if (offsets.size() != static_cast<Eigen::Index>(ensemble.size())) {
        throw DimensionMismatch("add_lattice_detunings: one offset per emitter expected");
    }
    for (Eigen::Index i = 0; i < offsets.size(); ++i) {
        if (ensemble[static_cast<std::size_t>(i)].role == Role::lattice && offsets(i) != 0.0) {
            h.matrix(i, i) += offsets(i);
            h.has_disorder = true;
        }
    }
}

DriveVector gaussian_drive(const EmitterEnsemble& ensemble, double rabi, double waist,
                           const Vec3& center) {
    if (!(rabi > 0.0) || !(waist > 0.0)) {
        throw InvalidArgument("gaussian_drive: rabi frequency and waist must be positive");
    }
    DriveVector drive;
    drive.rabi = rabi;
    drive.waist = waist;
    drive.center = center;
    drive.amplitudes.resize(static_cast<Eigen::Index>(ensemble.size()));
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
        const double r2 = (ensemble[i].position - center).squaredNorm();
        drive.amplitudes(static_cast<Eigen::Index>(i)) = rabi * std::exp(-r2 / (2.0 * waist * waist));
    }
    if (rabi > 0.1 * gamma0) {
        drive.warnings.push_back("rabi frequency above 0.1 Gamma0: weak-drive treatment is approximate");
    }
    return drive;
}

EffectiveHamiltonian ideal_dicke_hamiltonian(int n, double gamma) {
    if (n < 1) {
        throw InvalidArgument("ideal_dicke_hamiltonian: need at least one emitter");
    }
    EffectiveHamiltonian h;
    h.matrix = CMatrix::Constant(n, n, cplx(0.0, -0.5 * gamma));
    h.trap_rates = RVector::Zero(n);
    return h;
}

} // namespace ringlight
