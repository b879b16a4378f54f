#include "ringlight/geometry.hpp"

#include "ringlight/errors.hpp"
#include "ringlight/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace ringlight {

namespace {

constexpr std::array<std::pair<GeometryKind, std::string_view>, 8> kind_names{{
    {GeometryKind::single_ring, "single_ring"},
    {GeometryKind::ring_chain, "ring_chain"},
    {GeometryKind::ring_lattice_square, "ring_lattice_square"},
    {GeometryKind::ring_lattice_hexagonal, "ring_lattice_hexagonal"},
    {GeometryKind::linear_chain, "linear_chain"},
    {GeometryKind::hexagonal, "hexagonal"},
    {GeometryKind::honeycomb, "honeycomb"},
    {GeometryKind::free_pair, "free_pair"},
}};

void append_ring(std::vector<DipoleEmitter>& out, int ring_size, double radius, const Vec3& center,
                 double rotation, int ring_index, const CVec3& polarization) {
    for (int j = 0; j < ring_size; ++j) {
        const double angle = 2.0 * pi * j / ring_size + rotation;
        DipoleEmitter e;
        e.position = center + Vec3(radius * std::cos(angle), radius * std::sin(angle), 0.0);
        e.polarization = polarization;
        e.ring_index = ring_index;
        out.push_back(e);
    }
}

DipoleEmitter make_site(const Vec3& position, Role role, const GeometrySpec& spec) {
    DipoleEmitter e;
    e.position = position;
    e.polarization = spec.polarization;
    e.role = role;
    if (role == Role::donor) {
        e.detuning = spec.detuning;
    } else if (role == Role::acceptor) {
        e.detuning = spec.acceptor_detuning.value_or(spec.detuning);
        e.trap_rate = spec.trap_rate;
    }
    return e;
}

void validate_common(const GeometrySpec& spec) {
    if (!(spec.spacing > 0.0)) {
        throw InvalidArgument("geometry: spacing must be positive");
    }
    if (spec.trap_rate < 0.0) {
        throw InvalidArgument("geometry: trap_rate must be non-negative");
    }
    const double norm = spec.polarization.norm();
    if (std::abs(norm - 1.0) > 1e-12) {
        throw InvalidArgument("geometry: polarization must have unit norm");
    }
}

double ring_rotation(const GeometrySpec& spec, int ring) {
    double r = spec.rotation;
    if (!spec.ring_rotations.empty()) {
        r += spec.ring_rotations.at(static_cast<std::size_t>(ring));
    }
    return r;
}

EmitterEnsemble build_ring_family(const GeometrySpec& spec) {
    if (spec.ring_size < 3) {
        throw InvalidArgument("geometry: ring_size must be at least 3");
    }
    if (spec.kind != GeometryKind::single_ring && !(spec.ring_gap > 0.0)) {
        throw InvalidArgument("geometry: ring_gap must be positive");
    }
    int nx = spec.rings_x;
    int ny = spec.rings_y;
    switch (spec.kind) {
    case GeometryKind::single_ring:
        nx = 1;
        ny = 1;
        break;
    case GeometryKind::ring_chain:
        ny = 1;
        if (nx < 1) {
            throw InvalidArgument("geometry: ring chain needs at least one ring");
        }
        if (spec.with_donor_acceptor && nx < 2) {
            throw InvalidArgument("geometry: donor and acceptor need a chain of at least two rings");
        }
        break;
    default:
        if (nx < 1 || ny < 1 || nx * ny < 2) {
            throw InvalidArgument("geometry: ring lattice needs at least two rings");
        }
        break;
    }
    const int n_rings = nx * ny;
    if (!spec.ring_rotations.empty() &&
        spec.ring_rotations.size() != static_cast<std::size_t>(n_rings)) {
        throw InvalidArgument("geometry: ring_rotations must have one entry per ring");
    }

    EnsembleMetadata meta;
    meta.kind = spec.kind;
    meta.ring_size = spec.ring_size;
    meta.rings_x = nx;
    meta.rings_y = ny;
    meta.spacing = spec.spacing;
    meta.ring_gap = spec.kind == GeometryKind::single_ring ? 0.0 : spec.ring_gap;
    meta.radius = ring_radius(spec.ring_size, spec.spacing);
    meta.ring_pitch = 2.0 * meta.radius + meta.ring_gap;

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            Vec3 c = Vec3::Zero();
            if (spec.kind == GeometryKind::ring_lattice_hexagonal) {
                c = Vec3((i + 0.5 * j) * meta.ring_pitch, j * std::sqrt(3.0) / 2.0 * meta.ring_pitch,
                         0.0);
            } else {
                c = Vec3(i * meta.ring_pitch, j * meta.ring_pitch, 0.0);
            }
            meta.ring_centers.push_back(c);
        }
    }

    std::vector<DipoleEmitter> emitters;
    emitters.reserve(static_cast<std::size_t>(n_rings * spec.ring_size + 2));
    for (int r = 0; r < n_rings; ++r) {
        const double rot = ring_rotation(spec, r);
        meta.ring_rotations.push_back(rot);
        append_ring(emitters, spec.ring_size, meta.radius, meta.ring_centers[r], rot, r,
                    spec.polarization);
    }

    if (spec.kind == GeometryKind::single_ring) {
        if (spec.center_donor) {
            emitters.push_back(make_site(meta.ring_centers.front(), Role::donor, spec));
            meta.placement = "donor at ring centre";
        }
    } else if (spec.with_donor_acceptor) {
        emitters.push_back(make_site(meta.ring_centers.front(), Role::donor, spec));
        emitters.push_back(make_site(meta.ring_centers.back(), Role::acceptor, spec));
        meta.placement = "donor at centre of ring 0, acceptor at centre of ring " +
                         std::to_string(n_rings - 1);
    }
    return EmitterEnsemble(std::move(emitters), std::move(meta));
}

std::vector<Vec3> plain_sites(const GeometrySpec& spec) {
    std::vector<Vec3> sites;
    const double d = spec.spacing;
    switch (spec.kind) {
    case GeometryKind::linear_chain:
        if (spec.sites_x < 2) {
            throw InvalidArgument("geometry: linear_chain needs sites_x >= 2");
        }
        for (int i = 0; i < spec.sites_x; ++i) {
            sites.emplace_back(i * d, 0.0, 0.0);
        }
        break;
    case GeometryKind::hexagonal:
        if (spec.sites_x < 2 || spec.sites_y < 1) {
            throw InvalidArgument("geometry: hexagonal lattice needs sites_x >= 2, sites_y >= 1");
        }
        for (int j = 0; j < spec.sites_y; ++j) {
            for (int i = 0; i < spec.sites_x; ++i) {
                sites.emplace_back((i + 0.5 * (j % 2)) * d, j * std::sqrt(3.0) / 2.0 * d, 0.0);
            }
        }
        break;
    case GeometryKind::honeycomb:
        if (spec.sites_x < 1 || spec.sites_y < 1) {
            throw InvalidArgument("geometry: honeycomb lattice needs at least one cell");
        }
        for (int j = 0; j < spec.sites_y; ++j) {
            for (int i = 0; i < spec.sites_x; ++i) {
                const Vec3 origin((i + 0.5 * (j % 2)) * std::sqrt(3.0) * d, 1.5 * j * d, 0.0);
                sites.push_back(origin);
                sites.push_back(origin + Vec3(0.0, d, 0.0));
            }
        }
        break;
    default:
        break;
    }
    Vec3 centroid = Vec3::Zero();
    for (const auto& s : sites) {
        centroid += s;
    }
    centroid /= static_cast<double>(sites.size());
    for (auto& s : sites) {
        s -= centroid;
    }
    return sites;
}

std::size_t nearest_site(const std::vector<Vec3>& sites, const Vec3& target, std::size_t skip) {
    std::size_t best = sites.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (i == skip) {
            continue;
        }
        const double dist = (sites[i] - target).norm();
        if (dist < best_dist - 1e-12) {
            best_dist = dist;
            best = i;
        }
    }
    return best;
}

EmitterEnsemble build_plain_lattice(const GeometrySpec& spec) {
    std::vector<Vec3> sites = plain_sites(spec);
    EnsembleMetadata meta;
    meta.kind = spec.kind;
    meta.spacing = spec.spacing;

    std::vector<DipoleEmitter> emitters;
    if (!spec.with_donor_acceptor) {
        for (const auto& s : sites) {
            emitters.push_back(make_site(s, Role::lattice, spec));
        }
        return EmitterEnsemble(std::move(emitters), std::move(meta));
    }

    const double half = 0.5 * spec.donor_acceptor_distance;
    const std::size_t donor = nearest_site(sites, Vec3(-half, 0.0, 0.0), sites.size());
    const std::size_t acceptor = nearest_site(sites, Vec3(half, 0.0, 0.0), donor);
    const double achieved = (sites[acceptor] - sites[donor]).norm();
    if (std::abs(achieved - spec.donor_acceptor_distance) > 0.1 * spec.donor_acceptor_distance) {
        std::ostringstream msg;
        msg << "geometry: lattice too small for a donor-acceptor distance of "
            << spec.donor_acceptor_distance << " (best available " << achieved << ")";
        throw InvalidArgument(msg.str());
    }
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (i != donor && i != acceptor) {
            emitters.push_back(make_site(sites[i], Role::lattice, spec));
        }
    }
    emitters.push_back(make_site(sites[donor], Role::donor, spec));
    emitters.push_back(make_site(sites[acceptor], Role::acceptor, spec));
    std::ostringstream msg;
    msg << "substituted lattice sites " << donor << " (donor) and " << acceptor
        << " (acceptor) nearest to a segment of length " << spec.donor_acceptor_distance
        << " along x through the lattice centre; distance " << achieved;
    meta.placement = msg.str();
    return EmitterEnsemble(std::move(emitters), std::move(meta));
}

EmitterEnsemble build_free_pair(const GeometrySpec& spec) {
    const double sep = spec.pair_separation > 0.0 ? spec.pair_separation : spec.spacing;
    EnsembleMetadata meta;
    meta.kind = GeometryKind::free_pair;
    meta.spacing = sep;
    meta.placement = "donor at origin, acceptor on +x";
    std::vector<DipoleEmitter> emitters{
        make_site(Vec3::Zero(), Role::donor, spec),
        make_site(Vec3(sep, 0.0, 0.0), Role::acceptor, spec),
    };
    return EmitterEnsemble(std::move(emitters), std::move(meta));
}

} // namespace

std::string_view to_string(Role role) {
    switch (role) {
    case Role::lattice:
        return "lattice";
    case Role::donor:
        return "donor";
    case Role::acceptor:
        return "acceptor";
    }
    return "lattice";
}

std::string_view to_string(GeometryKind kind) {
    for (const auto& [k, name] : kind_names) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

GeometryKind parse_geometry_kind(std::string_view name) {
    for (const auto& [k, n] : kind_names) {
        if (n == name) {
            return k;
        }
    }
    throw InvalidArgument("unknown geometry kind '" + std::string(name) + "'");
}

bool is_ring_based(GeometryKind kind) {
    return kind == GeometryKind::single_ring || kind == GeometryKind::ring_chain ||
           kind == GeometryKind::ring_lattice_square || kind == GeometryKind::ring_lattice_hexagonal;
}

EmitterEnsemble::EmitterEnsemble(std::vector<DipoleEmitter> emitters, EnsembleMetadata metadata)
    : emitters_(std::move(emitters)), metadata_(std::move(metadata)) {
    int acceptors_with_trap = 0;
    for (const auto& e : emitters_) {
        if (!(e.decay_rate > 0.0)) {
            throw InvalidArgument("emitter decay_rate must be positive");
        }
        if (e.trap_rate < 0.0) {
            throw InvalidArgument("emitter trap_rate must be non-negative");
        }
        if (e.trap_rate > 0.0) {
            if (e.role != Role::acceptor) {
                throw InvalidArgument("only the acceptor may carry a trap rate");
            }
            ++acceptors_with_trap;
        }
        if (std::abs(e.polarization.norm() - 1.0) > 1e-12) {
            throw InvalidArgument("emitter polarization must have unit norm");
        }
    }
    (void)acceptors_with_trap;
}

std::size_t EmitterEnsemble::lattice_count() const {
    return static_cast<std::size_t>(std::count_if(emitters_.begin(), emitters_.end(),
                                                  [](const auto& e) { return e.role == Role::lattice; }));
}

std::optional<std::size_t> EmitterEnsemble::donor_index() const {
    for (std::size_t i = 0; i < emitters_.size(); ++i) {
        if (emitters_[i].role == Role::donor) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> EmitterEnsemble::acceptor_index() const {
    for (std::size_t i = 0; i < emitters_.size(); ++i) {
        if (emitters_[i].role == Role::acceptor) {
            return i;
        }
    }
    return std::nullopt;
}

std::vector<std::size_t> EmitterEnsemble::ring_members(int ring) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < emitters_.size(); ++i) {
        if (emitters_[i].role == Role::lattice && emitters_[i].ring_index == ring) {
            out.push_back(i);
        }
    }
    return out;
}

EmitterEnsemble EmitterEnsemble::lattice_only() const {
    std::vector<DipoleEmitter> kept;
    for (const auto& e : emitters_) {
        if (e.role == Role::lattice) {
            kept.push_back(e);
        }
    }
    EnsembleMetadata meta = metadata_;
    meta.placement = "lattice only";
    return EmitterEnsemble(std::move(kept), std::move(meta));
}

double ring_radius(int ring_size, double spacing) {
    return spacing / (2.0 * std::sin(pi / ring_size));
}

EmitterEnsemble build_ring(int ring_size, double spacing, const Vec3& center, double rotation) {
    if (ring_size < 3) {
        throw InvalidArgument("build_ring: ring_size must be at least 3");
    }
    if (!(spacing > 0.0)) {
        throw InvalidArgument("build_ring: spacing must be positive");
    }
    EnsembleMetadata meta;
    meta.kind = GeometryKind::single_ring;
    meta.ring_size = ring_size;
    meta.rings_x = 1;
    meta.rings_y = 1;
    meta.spacing = spacing;
    meta.radius = ring_radius(ring_size, spacing);
    meta.ring_pitch = 2.0 * meta.radius;
    meta.ring_centers = {center};
    meta.ring_rotations = {rotation};
    std::vector<DipoleEmitter> emitters;
    append_ring(emitters, ring_size, meta.radius, center, rotation, 0, circular_polarization());
    return EmitterEnsemble(std::move(emitters), std::move(meta));
}

EmitterEnsemble build_geometry(const GeometrySpec& spec) {
    validate_common(spec);
    EmitterEnsemble ensemble;
    switch (spec.kind) {
    case GeometryKind::single_ring:
    case GeometryKind::ring_chain:
    case GeometryKind::ring_lattice_square:
    case GeometryKind::ring_lattice_hexagonal:
        ensemble = build_ring_family(spec);
        break;
    case GeometryKind::linear_chain:
    case GeometryKind::hexagonal:
    case GeometryKind::honeycomb:
        ensemble = build_plain_lattice(spec);
        break;
    case GeometryKind::free_pair:
        ensemble = build_free_pair(spec);
        break;
    }
    check_no_overlap(ensemble);
    return ensemble;
}

EmitterEnsemble apply_rotational_disorder(const EmitterEnsemble& ensemble, std::uint64_t seed) {
    const auto& meta = ensemble.metadata();
    if (!is_ring_based(meta.kind) || meta.ring_centers.empty()) {
        throw WrongGeometry("rotational disorder requires a ring-based geometry");
    }
    Rng rng(seed);
    std::vector<double> angles(meta.ring_centers.size());
    for (auto& a : angles) {
        a = rng.uniform(0.0, 2.0 * pi / meta.ring_size);
    }
    std::vector<DipoleEmitter> emitters = ensemble.emitters();
    for (auto& e : emitters) {
        if (e.role != Role::lattice || e.ring_index < 0) {
            continue;
        }
        const Vec3& c = meta.ring_centers[static_cast<std::size_t>(e.ring_index)];
        const double a = angles[static_cast<std::size_t>(e.ring_index)];
        const Vec3 rel = e.position - c;
        e.position = c + Vec3(std::cos(a) * rel.x() - std::sin(a) * rel.y(),
                              std::sin(a) * rel.x() + std::cos(a) * rel.y(), rel.z());
    }
    EnsembleMetadata out_meta = meta;
    for (std::size_t r = 0; r < angles.size(); ++r) {
        out_meta.ring_rotations[r] += angles[r];
    }
    return EmitterEnsemble(std::move(emitters), std::move(out_meta));
}

EmitterEnsemble apply_frequency_disorder(const EmitterEnsemble& ensemble, double sigma,
                                         std::uint64_t seed) {
    if (!(sigma >= 0.0)) {
        throw InvalidArgument("frequency disorder: sigma must be non-negative");
    }
    std::vector<DipoleEmitter> emitters = ensemble.emitters();
    if (sigma == 0.0) {
        return ensemble;
    }
    Rng rng(seed);
    for (auto& e : emitters) {
        if (e.role == Role::lattice) {
            e.detuning += rng.normal(0.0, sigma);
        }
    }
    return EmitterEnsemble(std::move(emitters), ensemble.metadata());
}

void check_no_overlap(const EmitterEnsemble& ensemble, double min_distance) {
    const auto& em = ensemble.emitters();
    for (std::size_t i = 0; i < em.size(); ++i) {
        for (std::size_t j = i + 1; j < em.size(); ++j) {
            if ((em[i].position - em[j].position).norm() < min_distance) {
                std::ostringstream msg;
                msg << "emitters " << i << " and " << j << " overlap";
                throw OverlapError(msg.str());
            }
        }
    }
}

} // namespace ringlight
