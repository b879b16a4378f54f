#include "ringlight/steadystate.hpp"

#include "ringlight/coupling.hpp"
#include "ringlight/errors.hpp"

#include <cmath>
#include <sstream>

namespace ringlight {

double single_emitter_trap_rate(double rabi, double trap_rate) {
    const double s = gamma0 + trap_rate;
    return 4.0 * rabi * rabi * trap_rate / (s * s);
}

SteadyStateResult solve_steady_state(const EffectiveHamiltonian& h, const DriveVector& drive) {
    if (drive.amplitudes.size() != h.size()) {
        throw DimensionMismatch("solve_steady_state: drive dimension does not match H");
    }
    SteadyStateResult out;
    const CVector f = drive.amplitudes.cast<cplx>();
    Eigen::PartialPivLU<CMatrix> lu(h.matrix);
    out.rcond = lu.rcond();
    if (!(out.rcond > 1e-14)) {
        std::ostringstream msg;
        msg << "steady state: H is numerically singular (rcond " << out.rcond << ")";
        throw IllConditioned(msg.str());
    }
    out.amplitudes = -lu.solve(f);
    const double fnorm = f.norm();
    out.residual = fnorm > 0.0 ? (h.matrix * out.amplitudes + f).norm() / fnorm : 0.0;
    if (h.acceptor) {
        const auto a = static_cast<Eigen::Index>(*h.acceptor);
        out.acceptor_pop = std::norm(out.amplitudes(a));
        const double gt = h.trap_rates(a);
        out.trap_rate = gt * out.acceptor_pop;
        if (gt > 0.0 && drive.rabi > 0.0) {
            out.normalized_rate = out.trap_rate / single_emitter_trap_rate(drive.rabi, gt);
        }
    }
    return out;
}

std::vector<TrapScanPoint> trapping_rate_scan(const EmitterEnsemble& ensemble,
                                              const std::vector<double>& trap_rates,
                                              const TrapScanSettings& s) {
    const auto donor = ensemble.donor_index();
    const auto acceptor = ensemble.acceptor_index();
    if (!donor || !acceptor) {
        throw WrongGeometry("trapping_rate_scan: geometry needs a donor and an acceptor");
    }
    const Vec3 center = ensemble[s.center == BeamCenter::donor ? *donor : *acceptor].position;
    const DriveVector drive = gaussian_drive(ensemble, s.rabi, s.waist, center);
    const EffectiveHamiltonian base = assemble_effective(ensemble, coupling_matrices(ensemble));
    std::vector<TrapScanPoint> out;
    out.reserve(trap_rates.size());
    for (double gt : trap_rates) {
        if (!(gt > 0.0)) {
            throw InvalidArgument("trapping_rate_scan: trap rates must be positive");
        }
        const SteadyStateResult r = solve_steady_state(retune(base, ensemble, s.detuning, gt), drive);
        TrapScanPoint p;
        p.trap_rate = gt;
        p.trap_over_coupling = gt / s.coupling_scale;
        p.effective_rate = r.trap_rate;
        p.normalized_rate = r.normalized_rate;
        p.waist = s.waist;
        p.detuning = s.detuning;
        out.push_back(p);
    }
    return out;
}

} // namespace ringlight
