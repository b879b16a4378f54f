#include "oracles.hpp"

#include "ringlight/coupling.hpp"
#include "ringlight/dynamics.hpp"
#include "ringlight/errors.hpp"
#include "ringlight/geometry.hpp"
#include "ringlight/hamiltonian.hpp"
#include "ringlight/steadystate.hpp"

#include <doctest.h>

using namespace ringlight;

namespace {

struct System {
    EmitterEnsemble ens;
    EffectiveHamiltonian h;
};

System chain(int ring_size, int rings, double detuning, double trap) {
    GeometrySpec g;
    g.kind = GeometryKind::ring_chain;
    g.ring_size = ring_size;
    g.rings_x = rings;
    g.spacing = 0.05;
    g.ring_gap = 0.045;
    g.detuning = detuning;
    g.trap_rate = trap;
    System s{build_geometry(g), {}};
    s.h = assemble_effective(s.ens, coupling_matrices(s.ens));
    return s;
}

} // namespace

TEST_CASE("spectral propagation matches a step-doubled RK4 reference") {
    const System s = chain(6, 2, 0.3, 2.0);
    const auto donor = static_cast<Eigen::Index>(*s.ens.donor_index());
    const auto acceptor = static_cast<Eigen::Index>(*s.ens.acceptor_index());
    const CVector psi0 = localized_state(s.h.size(), donor).amplitudes;
    const Eigen::MatrixXd gamma = s.h.radiative_operator();
    const double t = 3.0;
    const auto ref = oracle::rk4_converged(s.h.matrix, psi0, t, 2.0, acceptor, gamma, 1e-10, 2048);

    SpectralPropagator prop(s.h);
    prop.prepare(psi0);
    CHECK((prop.state(t) - ref.psi).norm() < 1e-8);
    CHECK(2.0 * prop.acceptor_integral(t) == doctest::Approx(ref.trapped).epsilon(1e-8));
    CHECK(prop.radiated(t) == doctest::Approx(ref.radiated).epsilon(1e-8));
    CHECK(transport_efficiency(s.h, t) == doctest::Approx(ref.trapped).epsilon(1e-8));
}

TEST_CASE("trace quantities agree with trapezoid integration of the acceptor population") {
    const System s = chain(9, 3, 0.0, 2.0);
    const auto donor = static_cast<Eigen::Index>(*s.ens.donor_index());
    const TransportTrace tr = evolve(s.h, localized_state(s.h.size(), donor), time_grid(40.0, 8000));
    const double trap = 2.0 * oracle::trapezoid(tr.times, tr.acceptor_pop);
    CHECK(tr.eta.back() == doctest::Approx(trap).epsilon(1e-6));
    CHECK(tr.eta.back() == doctest::Approx(transport_efficiency(s.h, 40.0)).epsilon(1e-12));
}

TEST_CASE("excitation budget closes and eta is monotone") {
    const System s = chain(9, 4, -1.0, 1.0);
    const auto donor = static_cast<Eigen::Index>(*s.ens.donor_index());
    const TransportTrace tr = evolve(s.h, localized_state(s.h.size(), donor), time_grid(150.0, 300));
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        CHECK(std::abs(tr.norm2[i] + tr.radiated[i] + tr.eta[i] - 1.0) < 1e-6);
        if (i > 0) {
            CHECK(tr.norm2[i] <= tr.norm2[i - 1] + 1e-12);
            CHECK(tr.eta[i] >= tr.eta[i - 1] - 1e-12);
        }
    }
    const ExcitationBudget b = excitation_budget(tr);
    CHECK(b.total() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("eta interpolation inside the window, OutOfWindow outside") {
    const System s = chain(6, 2, 0.0, 2.0);
    const auto donor = static_cast<Eigen::Index>(*s.ens.donor_index());
    const TransportTrace tr = evolve(s.h, localized_state(s.h.size(), donor), time_grid(10.0, 1000));
    CHECK(transport_efficiency(tr, 2.0, 10.0) == tr.eta.back());
    CHECK(transport_efficiency(tr, 2.0, 0.0) == 0.0);
    CHECK(transport_efficiency(tr, 2.0, 5.005) == doctest::Approx(transport_efficiency(s.h, 5.005)).epsilon(1e-6));
    CHECK_THROWS_AS(transport_efficiency(tr, 2.0, 10.5), OutOfWindow);
    CHECK_THROWS_AS(transport_efficiency(tr, 2.0, -1.0), OutOfWindow);
}

TEST_CASE("no trap means no transport; bad inputs are rejected") {
    const System s = chain(6, 2, 0.0, 0.0);
    CHECK(transport_efficiency(s.h, 50.0) == 0.0);
    CHECK_THROWS_AS(localized_state(3, 5), InvalidArgument);
    CHECK_THROWS_AS(evolve(s.h, localized_state(s.h.size(), 0), {1.0, 0.5}), InvalidArgument);
    CHECK_THROWS_AS(evolve(s.h, localized_state(3, 0), {1.0}), DimensionMismatch);
    CHECK_THROWS_AS(time_grid(0.0, 10), InvalidArgument);
}

TEST_CASE("driven evolution relaxes to the linear-solve steady state") {
    const System s = chain(6, 2, 0.0, 1.0);
    const Vec3 c = s.ens[*s.ens.donor_index()].position;
    const DriveVector f = gaussian_drive(s.ens, 1e-3, 0.3, c);
    const TransportTrace tr =
        evolve(s.h, AmplitudeState{CVector::Zero(s.h.size()), 0.0}, time_grid(4000.0, 40), &f, true);
    const SteadyStateResult ss = solve_steady_state(s.h, f);
    const double scale = ss.amplitudes.norm();
    CHECK((tr.states.back() - ss.amplitudes).norm() / scale < 1e-6);
}

TEST_CASE("Dicke dark states keep their fidelity") {
    // a subradiant Dicke state never decays, so its fidelity stays at one
    const EffectiveHamiltonian h = ideal_dicke_hamiltonian(4);
    CVector dark(4);
    dark << 1.0, -1.0, 0.0, 0.0;
    dark /= std::sqrt(2.0);
    const TransportTrace tr = evolve(h, AmplitudeState{dark, 0.0}, time_grid(20.0, 20), nullptr, true);
    for (double f : eigenstate_fidelity(tr, dark)) {
        CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(tr.norm2.back() == doctest::Approx(1.0).epsilon(1e-9));
}
