#include "oracles.hpp"

#include "ringlight/coupling.hpp"
#include "ringlight/errors.hpp"
#include "ringlight/geometry.hpp"
#include "ringlight/hamiltonian.hpp"
#include "ringlight/optimize.hpp"
#include "ringlight/steadystate.hpp"

#include <doctest.h>

using namespace ringlight;

namespace {

EffectiveHamiltonian lone_acceptor(double trap) {
    EffectiveHamiltonian h;
    h.matrix = CMatrix::Constant(1, 1, cplx(0.0, -0.5 * (1.0 + trap)));
    h.trap_rates = RVector::Constant(1, trap);
    h.acceptor = 0;
    h.donor = 0;
    h.has_trap = true;
    return h;
}

DriveVector uniform_drive(Eigen::Index n, double rabi) {
    DriveVector d;
    d.rabi = rabi;
    d.waist = 1.0;
    d.amplitudes = RVector::Constant(n, rabi);
    return d;
}

} // namespace

TEST_CASE("single-emitter steady trap rate matches the closed form") {
    for (double gt : {0.01, 0.3, 1.0, 2.0, 40.0}) {
        const SteadyStateResult r = solve_steady_state(lone_acceptor(gt), uniform_drive(1, 1e-3));
        CHECK(std::abs(r.trap_rate - oracle::single_emitter_flux(1e-3, gt)) < 1e-10 * oracle::single_emitter_flux(1e-3, gt));
        CHECK(single_emitter_trap_rate(1e-3, gt) == doctest::Approx(oracle::single_emitter_flux(1e-3, gt)).epsilon(1e-14));
        CHECK(r.normalized_rate == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.residual < 1e-12);
    }
    const ScanResult best =
        maximize_scalar([](double g) { return single_emitter_trap_rate(1e-3, g); }, 0.01, 10.0, 0.05, 1e-9);
    CHECK(best.x == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("steady state solves H psi = -f") {
    GeometrySpec g;
    g.kind = GeometryKind::ring_chain;
    g.ring_size = 9;
    g.rings_x = 3;
    g.spacing = 0.06;
    g.ring_gap = 0.054;
    g.trap_rate = 0.5;
    const EmitterEnsemble e = build_geometry(g);
    const EffectiveHamiltonian h = assemble_effective(e, coupling_matrices(e));
    const DriveVector f = gaussian_drive(e, 1e-3, 0.3, e[*e.donor_index()].position);
    const SteadyStateResult r = solve_steady_state(h, f);
    CHECK((h.matrix * r.amplitudes + f.amplitudes.cast<cplx>()).norm() / f.amplitudes.norm() < 1e-10);
    CHECK(r.acceptor_pop == doctest::Approx(std::norm(r.amplitudes(static_cast<Eigen::Index>(*e.acceptor_index())))));
    CHECK(r.normalized_rate == doctest::Approx(r.trap_rate / single_emitter_trap_rate(1e-3, 0.5)));
}

TEST_CASE("singular systems and bad inputs") {
    EffectiveHamiltonian h = lone_acceptor(0.0);
    h.matrix(0, 0) = 0.0;
    CHECK_THROWS_AS(solve_steady_state(h, uniform_drive(1, 1e-3)), IllConditioned);
    CHECK_THROWS_AS(solve_steady_state(lone_acceptor(1.0), uniform_drive(2, 1e-3)), DimensionMismatch);
}

TEST_CASE("trap-rate scan records its settings") {
    GeometrySpec g;
    g.kind = GeometryKind::free_pair;
    g.spacing = 0.06;
    const EmitterEnsemble e = build_geometry(g);
    TrapScanSettings s;
    s.coupling_scale = 8.4;
    s.waist = 0.3;
    const auto pts = trapping_rate_scan(e, {0.1, 1.0, 10.0}, s);
    REQUIRE(pts.size() == 3);
    for (const auto& p : pts) {
        CHECK(p.trap_over_coupling == doctest::Approx(p.trap_rate / 8.4));
        CHECK(p.waist == 0.3);
        CHECK(p.normalized_rate > 0.0);
    }
    CHECK_THROWS_AS(trapping_rate_scan(e, {0.0}, s), InvalidArgument);
    GeometrySpec ring;
    ring.kind = GeometryKind::single_ring;
    ring.ring_size = 6;
    CHECK_THROWS_AS(trapping_rate_scan(build_geometry(ring), {1.0}, s), WrongGeometry);
}
