#include "oracles.hpp"

#include "ringlight/coupling.hpp"
#include "ringlight/errors.hpp"
#include "ringlight/geometry.hpp"
#include "ringlight/hamiltonian.hpp"
#include "ringlight/spectrum.hpp"

#include <doctest.h>

#include <algorithm>

using namespace ringlight;

namespace {

EmitterEnsemble lattice_chain(int ring_size, int rings, double gap_ratio, double d = 0.05) {
    GeometrySpec g;
    g.kind = GeometryKind::ring_chain;
    g.ring_size = ring_size;
    g.rings_x = rings;
    g.spacing = d;
    g.ring_gap = gap_ratio * d;
    g.with_donor_acceptor = false;
    return build_geometry(g);
}

CMatrix hamiltonian_of(const EmitterEnsemble& e) { return assemble_effective(e, coupling_matrices(e)).matrix; }

} // namespace

TEST_CASE("diagonalize sorts by real part and matches an independent eigensolver") {
    const EmitterEnsemble e = lattice_chain(6, 3, 0.9);
    const CMatrix h = hamiltonian_of(e);
    const ModeSet modes = diagonalize(h);
    CHECK(modes.max_residual < 1e-10);
    for (Eigen::Index i = 1; i < modes.size(); ++i) {
        CHECK(modes.shift(i - 1) <= modes.shift(i));
    }
    Eigen::ComplexEigenSolver<CMatrix> ref(h);
    std::vector<cplx> a(modes.eigenvalues.data(), modes.eigenvalues.data() + modes.size());
    std::vector<cplx> b(ref.eigenvalues().data(), ref.eigenvalues().data() + modes.size());
    auto by_re = [](cplx x, cplx y) { return x.real() < y.real() || (x.real() == y.real() && x.imag() > y.imag()); };
    std::sort(b.begin(), b.end(), by_re);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(a[i] - b[i]) < 1e-9);
    }
}

TEST_CASE("angular momentum sets") {
    CHECK(angular_momenta(9) == std::vector<int>{-4, -3, -2, -1, 0, 1, 2, 3, 4});
    CHECK(angular_momenta(8) == std::vector<int>{-3, -2, -1, 0, 1, 2, 3, 4});
}

TEST_CASE("spin waves are exact ring eigenmodes") {
    for (int n : {6, 8, 9}) {
        const EmitterEnsemble ring = build_ring(n, 0.05);
        const auto waves = spin_wave_spectrum(ring);
        REQUIRE(waves.size() == static_cast<std::size_t>(n));
        const ModeSet modes = diagonalize(hamiltonian_of(ring));
        for (const auto& w : waves) {
            CHECK(w.residual < 1e-10);
            CHECK(w.amplitudes.norm() == doctest::Approx(1.0));
            // every spin-wave eigenvalue appears in the numerical spectrum
            double best = 1e300;
            for (Eigen::Index k = 0; k < modes.size(); ++k) {
                best = std::min(best, std::abs(modes.eigenvalues(k) - cplx(w.shift, -0.5 * w.decay)));
            }
            CHECK(best < 1e-9);
        }
        // +m and -m are degenerate
        for (const auto& w : waves) {
            for (const auto& v : waves) {
                if (v.m == -w.m) {
                    CHECK(v.shift == doctest::Approx(w.shift).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("non-circulant rings are rejected") {
    const EmitterEnsemble ring = build_ring(6, 0.05);
    std::vector<DipoleEmitter> em = ring.emitters();
    em[2].position += Vec3(0.004, 0.0, 0.0);
    CHECK_THROWS_AS(spin_wave_spectrum(EmitterEnsemble(em, ring.metadata())), WrongGeometry);
}

TEST_CASE("ideal Dicke limit: bright decay N Gamma0 and donor fraction N / (N + 1)") {
    for (int n : {3, 6, 9, 12}) {
        CHECK(dicke_center_donor_fraction(n) == doctest::Approx(oracle::dicke_dark_donor_fraction(n)).epsilon(1e-12));
        const EffectiveHamiltonian h = ideal_dicke_hamiltonian(n);
        Eigen::ComplexEigenSolver<CMatrix> es(h.matrix);
        double max_decay = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            max_decay = std::max(max_decay, -2.0 * es.eigenvalues()(i).imag());
        }
        CHECK(max_decay == doctest::Approx(oracle::dicke_bright_decay(n)).epsilon(1e-12));
    }
    CHECK(std::abs(dicke_center_donor_fraction(9) - 0.9) < 1e-10);
}

TEST_CASE("centre-donor reduction reproduces the full ring spectrum") {
    GeometrySpec g;
    g.kind = GeometryKind::single_ring;
    g.ring_size = 9;
    g.spacing = 0.05;
    g.center_donor = true;
    const EmitterEnsemble e = build_geometry(g);
    const SingleRingAnalytics a = ring_center_analytics(e);
    CHECK(a.effective_decay <= 1e-3);
    CHECK(a.donor_fraction > 0.5);
    CHECK(a.donor_fraction <= 1.0);
    // the reduced eigenvalues are exact eigenvalues of the 10 x 10 problem
    const EffectiveHamiltonian h = retune(assemble_effective(e, coupling_matrices(e)), e, a.optimal_detuning, 0.0);
    const ModeSet modes = diagonalize(h);
    const auto [lminus, lplus] = a.eigenvalues(a.optimal_detuning);
    for (cplx l : {lminus, lplus}) {
        double best = 1e300;
        for (Eigen::Index k = 0; k < modes.size(); ++k) {
            best = std::min(best, std::abs(modes.eigenvalues(k) - l));
        }
        CHECK(best < 1e-8);
    }
    CHECK(-2.0 * lminus.imag() == doctest::Approx(a.effective_decay).epsilon(1e-9));
    // the optimum is a minimum of the scanned curve
    for (const auto& [d, v] : a.scan) {
        CHECK(v >= a.effective_decay - 1e-12);
    }
}

TEST_CASE("chain momenta and ansatz states") {
    const EmitterEnsemble e = lattice_chain(9, 10, 0.9);
    const double pitch = e.metadata().ring_pitch;
    const auto ks = chain_momenta(10, pitch);
    CHECK(ks.size() == 10);
    for (double k : ks) {
        CHECK(k > -pi / pitch);
        CHECK(k <= pi / pitch + 1e-12);
    }
    const CVector a = ansatz_state(e, 1, ks[3]);
    const CVector b = ansatz_state(e, 1, ks[4]);
    const CVector c = ansatz_state(e, -2, ks[3]);
    CHECK(a.norm() == doctest::Approx(1.0));
    CHECK(std::abs(a.dot(b)) < 1e-12);
    CHECK(std::abs(a.dot(c)) < 1e-12);
    CHECK_THROWS_AS(ansatz_state(e, 5, 0.0), InvalidArgument);
}

TEST_CASE("N_R = 9 chain shows a gap with two in-gap edge states") {
    const EmitterEnsemble e = lattice_chain(9, 10, 0.9);
    ModeSet modes = diagonalize(hamiltonian_of(e));
    recombine_degenerate(modes, e);
    const BandStructure bs = classify_bands(modes, e);
    CHECK(bs.has_gap);
    CHECK(bs.edge_states.size() == 2);
    CHECK(bs.min_gap() > 0.0);
    CHECK(bs.points.size() == 90);
    int confident = 0;
    for (const auto& p : bs.points) {
        confident += p.low_confidence ? 0 : 1;
        CHECK(p.fidelity <= 1.0 + 1e-9);
    }
    CHECK(confident > 45);
}

TEST_CASE("recombined degenerate pairs stay eigenvectors") {
    const EmitterEnsemble e = lattice_chain(8, 4, 0.6);
    const CMatrix h = hamiltonian_of(e);
    ModeSet modes = diagonalize(h);
    recombine_degenerate(modes, e, 1e-6);
    const CMatrix r = h * modes.vectors - modes.vectors * modes.eigenvalues.asDiagonal();
    CHECK(r.colwise().norm().maxCoeff() < 1e-6);
}

TEST_CASE("edge weights: chains and 2D lattices") {
    const EmitterEnsemble e = lattice_chain(8, 6, 0.9);
    const ModeSet modes = diagonalize(hamiltonian_of(e));
    const EdgeStateReport r = edge_localization(modes, e);
    for (std::size_t i = 0; i < r.edge_weight.size(); ++i) {
        CHECK(r.edge_weight[i] + r.bulk_weight[i] == doctest::Approx(1.0));
        CHECK(r.corner_weight[i] == doctest::Approx(r.edge_weight[i]));
    }
    GeometrySpec g;
    g.kind = GeometryKind::ring_lattice_square;
    g.ring_size = 8;
    g.rings_x = 3;
    g.rings_y = 3;
    g.spacing = 0.05;
    g.ring_gap = 0.045;
    g.with_donor_acceptor = false;
    const EmitterEnsemble sq = build_geometry(g);
    const EdgeStateReport r2 = edge_localization(diagonalize(hamiltonian_of(sq)), sq);
    for (std::size_t i = 0; i < r2.edge_weight.size(); ++i) {
        CHECK(r2.corner_weight[i] <= r2.edge_weight[i] + 1e-12);
    }
    GeometrySpec line;
    line.kind = GeometryKind::linear_chain;
    line.sites_x = 5;
    line.with_donor_acceptor = false;
    const EmitterEnsemble plain = build_geometry(line);
    CHECK_THROWS_AS(edge_localization(diagonalize(hamiltonian_of(plain)), plain), WrongGeometry);
}
