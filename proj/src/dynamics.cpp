#include "ringlight/dynamics.hpp"

#include "ringlight/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ringlight {

namespace {

// exp(z) - 1 without cancellation for small |z|
cplx expm1c(cplx z) {
    const double x = z.real();
    const double y = z.imag();
    const double s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

// int_0^t exp(z t') dt'
cplx exp_integral(cplx z, double t) {
    const cplx zt = z * t;
    if (std::abs(zt) < 1e-12) {
        return t * (1.0 + 0.5 * zt);
    }
    return expm1c(zt) / z;
}

} // namespace

AmplitudeState localized_state(Eigen::Index n, Eigen::Index index) {
    if (index < 0 || index >= n) {
        throw InvalidArgument("localized_state: index out of range");
    }
    AmplitudeState s;
    s.amplitudes = CVector::Zero(n);
    s.amplitudes(index) = 1.0;
    return s;
}

SpectralPropagator::SpectralPropagator(const EffectiveHamiltonian& h)
    : h_(h), eig_(eigensystem(h.matrix)) {
    lu_.compute(eig_.vectors);
    rcond_ = lu_.rcond();
    if (!(rcond_ > 1e-14)) {
        std::ostringstream msg;
        msg << "eigenvector matrix is numerically singular (rcond " << rcond_
            << "); H is close to defective";
        throw EigenSolverError(msg.str());
    }
}

void SpectralPropagator::prepare(const CVector& psi0, const RVector& drive, bool radiative) {
    const Eigen::Index n = h_.size();
    if (psi0.size() != n) {
        throw DimensionMismatch("propagator: initial state dimension does not match H");
    }
    if (drive.size() != 0 && drive.size() != n) {
        throw DimensionMismatch("propagator: drive dimension does not match H");
    }
    const CMatrix& v = eig_.vectors;
    if (drive.size() == n) {
        // s = -H^{-1} f = -V diag(1/lambda) V^{-1} f
        const CVector f = drive.cast<cplx>();
        shift_ = -(v * (lu_.solve(f).array() / eig_.values.array()).matrix());
    } else {
        shift_ = CVector::Zero(n);
    }
    coeffs_ = lu_.solve(psi0 - shift_);

    if (h_.acceptor) {
        const auto a = static_cast<Eigen::Index>(*h_.acceptor);
        const CVector row = v.row(a).transpose();
        w_acceptor_ = row.conjugate() * row.transpose();
        q_acceptor_ = row.conjugate() * shift_(a);
        s_acceptor_ = std::norm(shift_(a));
    }
    if (radiative) {
        const CMatrix gamma = h_.radiative_operator().cast<cplx>();
        const CMatrix gv = gamma * v;
        w_radiative_ = v.adjoint() * gv;
        q_radiative_ = gv.adjoint() * shift_;
        s_radiative_ = (shift_.adjoint() * gamma * shift_)(0, 0).real();
    } else {
        w_radiative_.resize(0, 0);
    }
    prepared_ = true;
}

CVector SpectralPropagator::state(double t) const {
    const CVector phase = (cplx(0.0, -t) * eig_.values).array().exp();
    return shift_ + eig_.vectors * (coeffs_.array() * phase.array()).matrix();
}

double SpectralPropagator::quadratic_integral(const CMatrix& w, const CVector& q, double sqs,
                                              double t) const {
    const Eigen::Index n = eig_.values.size();
    const CVector& lam = eig_.values;
    const CVector u = (cplx(0.0, -t) * lam).array().exp();
    double total = sqs * t;
    cplx cross = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        cross += std::conj(q(k)) * coeffs_(k) * exp_integral(cplx(0.0, -1.0) * lam(k), t);
    }
    total += 2.0 * cross.real();
    cplx quad = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const cplx cj = std::conj(coeffs_(j));
        const cplx uj = std::conj(u(j));
        for (Eigen::Index k = 0; k < n; ++k) {
            const cplx z = cplx(0.0, 1.0) * (std::conj(lam(j)) - lam(k));
            cplx e;
            if (std::abs(z) * t > 0.5) {
                e = (uj * u(k) - 1.0) / z;
            } else {
                e = exp_integral(z, t);
            }
            quad += cj * coeffs_(k) * w(j, k) * e;
        }
    }
    return total + quad.real();
}

double SpectralPropagator::acceptor_integral(double t) const {
    if (!h_.acceptor || !prepared_) {
        return 0.0;
    }
    return quadratic_integral(w_acceptor_, q_acceptor_, s_acceptor_, t);
}

double SpectralPropagator::radiated(double t) const {
    if (!prepared_ || w_radiative_.size() == 0) {
        return 0.0;
    }
    return quadratic_integral(w_radiative_, q_radiative_, s_radiative_, t);
}

std::vector<double> time_grid(double t_max, int steps) {
    if (!(t_max > 0.0) || steps < 1) {
        throw InvalidArgument("time_grid: need t_max > 0 and at least one step");
    }
    std::vector<double> t(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) {
        t[static_cast<std::size_t>(i)] = t_max * i / steps;
    }
    return t;
}

TransportTrace evolve(const EffectiveHamiltonian& h, const AmplitudeState& psi0,
                      const std::vector<double>& times, const DriveVector* drive,
                      bool keep_states) {
    if (times.empty()) {
        throw InvalidArgument("evolve: empty time grid");
    }
    if (times.front() < 0.0) {
        throw InvalidArgument("evolve: times must start at or after 0");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw InvalidArgument("evolve: times must be strictly increasing");
        }
    }
    SpectralPropagator prop(h);
    prop.prepare(psi0.amplitudes, drive ? drive->amplitudes : RVector());

    TransportTrace trace;
    trace.times = times;
    trace.trap_rate = h.acceptor ? h.trap_rates(static_cast<Eigen::Index>(*h.acceptor)) : 0.0;
    trace.initial_norm2 = psi0.amplitudes.squaredNorm();
    trace.driven = drive != nullptr;
    const std::size_t n = times.size();
    trace.donor_pop.resize(n);
    trace.acceptor_pop.resize(n);
    trace.norm2.resize(n);
    trace.acceptor_integral.resize(n);
    trace.eta.resize(n);
    trace.radiated.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = times[i];
        const CVector psi = prop.state(t);
        if (!psi.allFinite()) {
            std::ostringstream msg;
            msg << "evolve: non-finite amplitudes at t = " << t;
            throw NumericError(msg.str());
        }
        trace.donor_pop[i] = h.donor ? std::norm(psi(static_cast<Eigen::Index>(*h.donor))) : 0.0;
        trace.acceptor_pop[i] =
            h.acceptor ? std::norm(psi(static_cast<Eigen::Index>(*h.acceptor))) : 0.0;
        trace.norm2[i] = psi.squaredNorm();
        trace.acceptor_integral[i] = prop.acceptor_integral(t);
        trace.eta[i] = trace.trap_rate * trace.acceptor_integral[i];
        trace.radiated[i] = prop.radiated(t);
        if (keep_states) {
            trace.states.push_back(psi);
        }
    }
    return trace;
}

double transport_efficiency(const TransportTrace& trace, double trap_rate, double t) {
    const auto& ts = trace.times;
    if (ts.empty() || t < 0.0 || t > ts.back()) {
        std::ostringstream msg;
        msg << "transport_efficiency: t = " << t << " outside the trace window";
        throw OutOfWindow(msg.str());
    }
    if (t == 0.0 && ts.front() == 0.0) {
        return 0.0;
    }
    if (t < ts.front()) {
        throw OutOfWindow("transport_efficiency: t precedes the first grid point");
    }
    const auto it = std::lower_bound(ts.begin(), ts.end(), t);
    const auto i = static_cast<std::size_t>(it - ts.begin());
    if (*it == t) {
        return trap_rate * trace.acceptor_integral[i];
    }
    const double t0 = ts[i - 1];
    const double p0 = trace.acceptor_pop[i - 1];
    const double p1 = trace.acceptor_pop[i];
    const double frac = (t - t0) / (ts[i] - t0);
    const double pt = p0 + frac * (p1 - p0);
    return trap_rate * (trace.acceptor_integral[i - 1] + 0.5 * (p0 + pt) * (t - t0));
}

double transport_efficiency(const EffectiveHamiltonian& h, double t) {
    if (!h.donor || !h.acceptor) {
        throw InvalidArgument("transport_efficiency: Hamiltonian needs a donor and an acceptor");
    }
    SpectralPropagator prop(h);
    prop.prepare(localized_state(h.size(), static_cast<Eigen::Index>(*h.donor)).amplitudes,
                 RVector(), false);
    return h.trap_rates(static_cast<Eigen::Index>(*h.acceptor)) * prop.acceptor_integral(t);
}

ExcitationBudget excitation_budget(const TransportTrace& trace) {
    if (trace.times.empty()) {
        throw InvalidArgument("excitation_budget: empty trace");
    }
    ExcitationBudget b;
    b.remaining = trace.norm2.back();
    b.radiated = trace.radiated.back();
    b.trapped = trace.eta.back();
    if (!trace.driven) {
        const double err = std::abs(b.total() - trace.initial_norm2);
        if (err > 1e-4) {
            std::ostringstream msg;
            msg << "excitation budget violated by " << err;
            throw IntegrationAccuracyError(msg.str());
        }
    }
    return b;
}

double eigenstate_fidelity(const CVector& psi, const CVector& mode) {
    if (psi.size() != mode.size()) {
        throw DimensionMismatch("eigenstate_fidelity: dimension mismatch");
    }
    const double n = mode.norm();
    if (!(n > 0.0)) {
        throw InvalidArgument("eigenstate_fidelity: zero mode");
    }
    return std::norm(mode.dot(psi)) / (n * n);
}

std::vector<double> eigenstate_fidelity(const TransportTrace& trace, const CVector& mode) {
    if (trace.states.size() != trace.times.size()) {
        throw InvalidArgument("eigenstate_fidelity: trace was evolved without keep_states");
    }
    std::vector<double> out;
    out.reserve(trace.states.size());
    for (const auto& psi : trace.states) {
        out.push_back(eigenstate_fidelity(psi, mode));
    }
    return out;
}

} // namespace ringlight
