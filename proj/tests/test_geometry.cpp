#include "oracles.hpp"

#include "ringlight/errors.hpp"
#include "ringlight/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace ringlight;

namespace {

GeometrySpec chain_spec(int ring_size = 9, int rings = 10, double d = 0.05, double gap_ratio = 0.9) {
    GeometrySpec g;
    g.kind = GeometryKind::ring_chain;
    g.ring_size = ring_size;
    g.rings_x = rings;
    g.spacing = d;
    g.ring_gap = gap_ratio * d;
    return g;
}

double min_pair_distance(const EmitterEnsemble& e) {
    double m = 1e300;
    for (std::size_t i = 0; i < e.size(); ++i) {
        for (std::size_t j = i + 1; j < e.size(); ++j) {
            m = std::min(m, (e[i].position - e[j].position).norm());
        }
    }
    return m;
}

} // namespace

TEST_CASE("ring radius satisfies d = 2 R sin(pi / N)") {
    for (int n : {3, 6, 9, 12}) {
        const double r = ring_radius(n, 0.05);
        CHECK(2.0 * r * std::sin(pi / n) == doctest::Approx(0.05).epsilon(1e-14));
    }
}

TEST_CASE("single ring matches the polar layout and nearest-neighbour spacing") {
    const EmitterEnsemble ring = build_ring(9, 0.05);
    const auto ref = oracle::ring_positions(9, 0.05);
    REQUIRE(ring.size() == 9);
    for (std::size_t j = 0; j < 9; ++j) {
        CHECK((ring[j].position - ref[j]).norm() < 1e-15);
    }
    CHECK(min_pair_distance(ring) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("ring chain layout: pitch, donor and acceptor at ring centres, index order") {
    const EmitterEnsemble e = build_geometry(chain_spec());
    const auto& meta = e.metadata();
    CHECK(e.size() == 92);
    CHECK(e.lattice_count() == 90);
    CHECK(meta.ring_pitch == doctest::Approx(2.0 * meta.radius + 0.045));
    REQUIRE(e.donor_index() == 90u);
    REQUIRE(e.acceptor_index() == 91u);
    CHECK((e[90].position - meta.ring_centers.front()).norm() < 1e-15);
    CHECK((e[91].position - meta.ring_centers.back()).norm() < 1e-15);
    for (std::size_t i = 0; i < 90; ++i) {
        CHECK(e[i].ring_index == static_cast<int>(i / 9));
        CHECK(e[i].role == Role::lattice);
    }
    CHECK(e.ring_members(3).size() == 9);
    // odd rings have no facing emitters, so the closest pair is within a ring
    CHECK(min_pair_distance(e.lattice_only()) == doctest::Approx(0.05).epsilon(1e-9));
    double across = 1e300;
    for (std::size_t i : e.ring_members(0)) {
        for (std::size_t j : e.ring_members(1)) {
            across = std::min(across, (e[i].position - e[j].position).norm());
        }
    }
    CHECK(across >= 0.045);
}

TEST_CASE("acceptor carries the trap, donor and acceptor carry the detuning") {
    GeometrySpec g = chain_spec(9, 3);
    g.detuning = 1.5;
    g.trap_rate = 2.0;
    const EmitterEnsemble e = build_geometry(g);
    CHECK(e[*e.donor_index()].detuning == 1.5);
    CHECK(e[*e.acceptor_index()].detuning == 1.5);
    CHECK(e[*e.acceptor_index()].trap_rate == 2.0);
    CHECK(e[*e.donor_index()].trap_rate == 0.0);
    g.acceptor_detuning = -0.5;
    CHECK(build_geometry(g)[*e.acceptor_index()].detuning == -0.5);
}

TEST_CASE("2D ring lattices place ring centres on square and triangular grids") {
    GeometrySpec g = chain_spec(8, 3, 0.05, 0.9);
    g.kind = GeometryKind::ring_lattice_square;
    g.rings_y = 3;
    const EmitterEnsemble sq = build_geometry(g);
    CHECK(sq.ring_count() == 9);
    const double p = sq.metadata().ring_pitch;
    CHECK((sq.metadata().ring_centers[4] - Vec3(p, p, 0)).norm() < 1e-14);
    g.kind = GeometryKind::ring_lattice_hexagonal;
    const EmitterEnsemble hex = build_geometry(g);
    const auto& c = hex.metadata().ring_centers;
    // every neighbouring centre pair in a triangular grid is one pitch apart
    CHECK((c[0] - c[1]).norm() == doctest::Approx(p));
    CHECK((c[0] - c[3]).norm() == doctest::Approx(p));
    CHECK((c[1] - c[3]).norm() == doctest::Approx(p));
}

TEST_CASE("plain lattices put donor and acceptor about one wavelength apart") {
    GeometrySpec g;
    g.spacing = 0.06;
    g.donor_acceptor_distance = 1.0;
    for (auto [kind, sx, sy] : {std::tuple{GeometryKind::linear_chain, 20, 1},
                                std::tuple{GeometryKind::hexagonal, 18, 4},
                                std::tuple{GeometryKind::honeycomb, 13, 5}}) {
        g.kind = kind;
        g.sites_x = sx;
        g.sites_y = sy;
        const EmitterEnsemble e = build_geometry(g);
        const double da = (e[*e.donor_index()].position - e[*e.acceptor_index()].position).norm();
        CHECK(da == doctest::Approx(1.0).epsilon(0.1));
        CHECK(min_pair_distance(e) == doctest::Approx(0.06).epsilon(1e-9));
    }
    g.kind = GeometryKind::linear_chain;
    g.sites_x = 5;
    CHECK_THROWS_AS(build_geometry(g), InvalidArgument);
}

TEST_CASE("honeycomb has two sites per cell with threefold coordination in the bulk") {
    GeometrySpec g;
    g.kind = GeometryKind::honeycomb;
    g.spacing = 0.06;
    g.sites_x = 6;
    g.sites_y = 6;
    g.with_donor_acceptor = false;
    const EmitterEnsemble e = build_geometry(g);
    CHECK(e.size() == 72);
    int max_neighbours = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        int nn = 0;
        for (std::size_t j = 0; j < e.size(); ++j) {
            if (i != j && (e[i].position - e[j].position).norm() < 0.06 * 1.001) {
                ++nn;
            }
        }
        max_neighbours = std::max(max_neighbours, nn);
    }
    CHECK(max_neighbours == 3);
}

TEST_CASE("free pair separation defaults to the spacing") {
    GeometrySpec g;
    g.kind = GeometryKind::free_pair;
    g.spacing = 0.06;
    EmitterEnsemble e = build_geometry(g);
    CHECK(e.size() == 2);
    CHECK((e[0].position - e[1].position).norm() == doctest::Approx(0.06));
    g.pair_separation = 1.0;
    e = build_geometry(g);
    CHECK((e[0].position - e[1].position).norm() == doctest::Approx(1.0));
}

TEST_CASE("invalid geometry inputs are rejected") {
    GeometrySpec g = chain_spec();
    g.spacing = 0.0;
    CHECK_THROWS_AS(build_geometry(g), InvalidArgument);
    g = chain_spec();
    g.ring_size = 2;
    CHECK_THROWS_AS(build_geometry(g), InvalidArgument);
    g = chain_spec();
    g.ring_gap = -0.01;
    CHECK_THROWS_AS(build_geometry(g), InvalidArgument);
    g = chain_spec();
    g.trap_rate = -1.0;
    CHECK_THROWS_AS(build_geometry(g), InvalidArgument);
    g = chain_spec();
    g.ring_rotations = {0.1, 0.2};
    CHECK_THROWS_AS(build_geometry(g), InvalidArgument);
    CHECK_THROWS_AS(parse_geometry_kind("spiral"), InvalidArgument);
}

TEST_CASE("overlapping emitters are detected") {
    std::vector<DipoleEmitter> em(2);
    em[1].position = Vec3(1e-12, 0, 0);
    const EmitterEnsemble e(em, EnsembleMetadata{});
    CHECK_THROWS_AS(check_no_overlap(e), OverlapError);
    em[1].position = Vec3(0.05, 0, 0);
    CHECK_NOTHROW(check_no_overlap(EmitterEnsemble(em, EnsembleMetadata{})));
}

TEST_CASE("only the acceptor may carry a trap") {
    std::vector<DipoleEmitter> em(2);
    em[1].position = Vec3(0.05, 0, 0);
    em[0].trap_rate = 1.0;
    CHECK_THROWS_AS(EmitterEnsemble(em, EnsembleMetadata{}), InvalidArgument);
}

TEST_CASE("rotational disorder is seeded, keeps ring centres and intra-ring spacing") {
    const EmitterEnsemble base = build_geometry(chain_spec(9, 4));
    const EmitterEnsemble a = apply_rotational_disorder(base, 7);
    const EmitterEnsemble b = apply_rotational_disorder(base, 7);
    const EmitterEnsemble c = apply_rotational_disorder(base, 8);
    bool differs = false;
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(a[i].position == b[i].position);
        differs |= (a[i].position - c[i].position).norm() > 1e-9;
    }
    CHECK(differs);
    for (int r = 0; r < a.ring_count(); ++r) {
        Vec3 centroid = Vec3::Zero();
        const auto members = a.ring_members(r);
        for (auto i : members) {
            centroid += a[i].position;
        }
        centroid /= static_cast<double>(members.size());
        CHECK((centroid - base.metadata().ring_centers[static_cast<std::size_t>(r)]).norm() < 1e-12);
        CHECK((a[members[0]].position - a[members[1]].position).norm() == doctest::Approx(0.05));
    }
    CHECK(a[*a.donor_index()].position == base[*base.donor_index()].position);
    GeometrySpec line;
    line.kind = GeometryKind::linear_chain;
    line.sites_x = 4;
    line.with_donor_acceptor = false;
    CHECK_THROWS_AS(apply_rotational_disorder(build_geometry(line), 1), WrongGeometry);
}

TEST_CASE("frequency disorder touches lattice emitters only with the requested width") {
    GeometrySpec g = chain_spec(9, 10);
    const EmitterEnsemble base = build_geometry(g);
    const EmitterEnsemble e = apply_frequency_disorder(base, 2.0, 11);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i].role == Role::lattice) {
            sum += e[i].detuning;
            sum2 += e[i].detuning * e[i].detuning;
        } else {
            CHECK(e[i].detuning == base[i].detuning);
        }
    }
    const double n = 90.0;
    const double mean = sum / n;
    const double sd = std::sqrt(sum2 / n - mean * mean);
    CHECK(std::abs(mean) < 4.0 * 2.0 / std::sqrt(n));
    CHECK(sd == doctest::Approx(2.0).epsilon(0.3));
    const EmitterEnsemble zero = apply_frequency_disorder(base, 0.0, 11);
    for (std::size_t i = 0; i < zero.size(); ++i) {
        CHECK(zero[i].detuning == base[i].detuning);
    }
    CHECK_THROWS_AS(apply_frequency_disorder(base, -1.0, 1), InvalidArgument);
}
