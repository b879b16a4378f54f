#include "ringlight/coupling.hpp"
#include "ringlight/errors.hpp"
#include "ringlight/geometry.hpp"
#include "ringlight/hamiltonian.hpp"

#include <doctest.h>

using namespace ringlight;

namespace {

EmitterEnsemble small_chain(double detuning = 0.0, double trap = 0.0) {
    GeometrySpec g;
    g.kind = GeometryKind::ring_chain;
    g.ring_size = 6;
    g.rings_x = 2;
    g.spacing = 0.05;
    g.ring_gap = 0.045;
    g.detuning = detuning;
    g.trap_rate = trap;
    return build_geometry(g);
}

} // namespace

TEST_CASE("effective Hamiltonian is J - i Gamma / 2 with local terms on the diagonal") {
    const EmitterEnsemble e = small_chain(0.7, 2.0);
    const CouplingMatrices c = coupling_matrices(e);
    const EffectiveHamiltonian h = assemble_effective(e, c);
    const auto n = h.size();
    REQUIRE(n == 14);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i != j) {
                CHECK(h.matrix(i, j) == cplx(c.coherent(i, j), -0.5 * c.dissipative(i, j)));
            }
        }
    }
    const auto d = static_cast<Eigen::Index>(*e.donor_index());
    const auto a = static_cast<Eigen::Index>(*e.acceptor_index());
    CHECK(h.matrix(d, d) == cplx(0.7, -0.5));
    CHECK(h.matrix(a, a).real() == 0.7);
    CHECK(h.matrix(a, a).imag() == doctest::Approx(-0.5 * 3.0));
    CHECK(h.matrix(0, 0) == cplx(0.0, -0.5));
    CHECK(h.has_trap);
    CHECK((h.matrix - h.matrix.transpose()).norm() == 0.0); // complex symmetric
}

TEST_CASE("decay operator splits into radiative and trap parts") {
    const EmitterEnsemble e = small_chain(0.0, 1.5);
    const EffectiveHamiltonian h = assemble_effective(e, coupling_matrices(e));
    const RMatrix total = h.decay_operator();
    const RMatrix rad = h.radiative_operator();
    const CMatrix anti = (h.matrix - h.matrix.adjoint()) / cplx(0.0, 2.0);
    CHECK((anti.real() + 0.5 * total).norm() < 1e-12);
    const auto a = static_cast<Eigen::Index>(*e.acceptor_index());
    CHECK(total(a, a) - rad(a, a) == doctest::Approx(1.5));
}

TEST_CASE("retune changes only donor and acceptor entries") {
    const EmitterEnsemble e = small_chain();
    const EffectiveHamiltonian h = assemble_effective(e, coupling_matrices(e));
    const EffectiveHamiltonian r = retune(h, e, -3.0, 4.0);
    const auto d = static_cast<Eigen::Index>(*e.donor_index());
    const auto a = static_cast<Eigen::Index>(*e.acceptor_index());
    CMatrix diff = r.matrix - h.matrix;
    CHECK(diff(d, d) == cplx(-3.0, 0.0));
    CHECK(diff(a, a) == cplx(-3.0, -2.0));
    diff(d, d) = diff(a, a) = 0.0;
    CHECK(diff.norm() == 0.0);
    CHECK(r.trap_rates(a) == 4.0);
    CHECK_THROWS_AS(retune(h, e, 0.0, -1.0), InvalidArgument);
}

TEST_CASE("lattice detunings and dimension checks") {
    const EmitterEnsemble e = small_chain();
    EffectiveHamiltonian h = assemble_effective(e, coupling_matrices(e));
    RVector off = RVector::Zero(h.size());
    off(3) = 0.25;
    add_lattice_detunings(h, e, off);
    CHECK(h.matrix(3, 3).real() == 0.25);
    CHECK(h.has_disorder);
    CHECK_THROWS_AS(add_lattice_detunings(h, e, RVector::Zero(3)), DimensionMismatch);
    CouplingMatrices bad = coupling_matrices(e);
    bad.coherent = RMatrix::Zero(2, 2);
    CHECK_THROWS_AS(assemble_effective(e, bad), DimensionMismatch);
}

TEST_CASE("Gaussian drive profile and weak-drive warning") {
    const EmitterEnsemble e = small_chain();
    const Vec3 c = e[*e.donor_index()].position;
    const DriveVector f = gaussian_drive(e, 1e-3, 0.3, c);
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double r2 = (e[i].position - c).squaredNorm();
        CHECK(f.amplitudes(static_cast<Eigen::Index>(i)) == doctest::Approx(1e-3 * std::exp(-r2 / (2.0 * 0.3 * 0.3))));
    }
    CHECK(f.warnings.empty());
    CHECK_FALSE(gaussian_drive(e, 0.5, 0.3, c).warnings.empty());
    CHECK_THROWS_AS(gaussian_drive(e, 0.0, 0.3, c), InvalidArgument);
}

TEST_CASE("ideal Dicke Hamiltonian has one bright mode") {
    const EffectiveHamiltonian h = ideal_dicke_hamiltonian(5);
    Eigen::ComplexEigenSolver<CMatrix> es(h.matrix);
    int bright = 0;
    for (Eigen::Index i = 0; i < 5; ++i) {
        const double decay = -2.0 * es.eigenvalues()(i).imag();
        if (decay > 1e-9) {
            ++bright;
            CHECK(decay == doctest::Approx(5.0));
        }
    }
    CHECK(bright == 1);
}
