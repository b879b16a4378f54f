#pragma once

#include "ringlight/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ringlight {

enum class Role { lattice, donor, acceptor };

enum class GeometryKind {
    single_ring,
    ring_chain,
    ring_lattice_square,
    ring_lattice_hexagonal,
    linear_chain,
    hexagonal,
    honeycomb,
    free_pair,
};

std::string_view to_string(Role role);
std::string_view to_string(GeometryKind kind);
GeometryKind parse_geometry_kind(std::string_view name);
bool is_ring_based(GeometryKind kind);

struct DipoleEmitter {
    Vec3 position = Vec3::Zero();
    CVec3 polarization = circular_polarization();
    Role role = Role::lattice;
    /// Delta for donor/acceptor, disorder offset for lattice emitters.
    double detuning = 0.0;
    double decay_rate = gamma0;
    double trap_rate = 0.0;
    /// Ring this emitter belongs to, -1 for centre emitters and non-ring lattices.
    int ring_index = -1;
};

struct EnsembleMetadata {
    GeometryKind kind = GeometryKind::single_ring;
    int ring_size = 0;     // emitters per ring
    int rings_x = 0;       // rings along x (chain length M)
    int rings_y = 0;       // rings along the second lattice direction
    double spacing = 0.0;  // nearest-neighbour distance d
    double ring_gap = 0.0; // inter-ring separation d_R
    double radius = 0.0;   // ring radius R
    double ring_pitch = 0.0; // centre-to-centre distance 2R + d_R
    std::vector<Vec3> ring_centers;
    std::vector<double> ring_rotations;
    std::string placement; // how donor/acceptor sites were chosen
};

/// Emitters in a fixed index order: lattice emitters ring by ring (or site by
/// site), then the donor, then the acceptor.
class EmitterEnsemble {
public:
    EmitterEnsemble() = default;
    EmitterEnsemble(std::vector<DipoleEmitter> emitters, EnsembleMetadata metadata);

    const std::vector<DipoleEmitter>& emitters() const { return emitters_; }
    const EnsembleMetadata& metadata() const { return metadata_; }
    std::size_t size() const { return emitters_.size(); }
    const DipoleEmitter& operator[](std::size_t i) const { return emitters_[i]; }

    std::size_t lattice_count() const;
    std::optional<std::size_t> donor_index() const;
    std::optional<std::size_t> acceptor_index() const;
    int ring_count() const { return static_cast<int>(metadata_.ring_centers.size()); }
    /// Indices of the lattice emitters on ring `ring`, in angular order.
    std::vector<std::size_t> ring_members(int ring) const;

    /// Copy with only the lattice emitters (donor/acceptor dropped).
    EmitterEnsemble lattice_only() const;

    /// Index convention, serialized alongside every output.
    static constexpr std::string_view index_convention =
        "lattice emitters ring by ring (site order for plain lattices), then donor, then acceptor";

private:
    std::vector<DipoleEmitter> emitters_;
    EnsembleMetadata metadata_;
};

struct GeometrySpec {
    GeometryKind kind = GeometryKind::ring_chain;
    int ring_size = 9;
    int rings_x = 10;
    int rings_y = 1;
    /// Site counts for linear_chain / hexagonal; unit-cell counts for honeycomb.
    int sites_x = 0;
    int sites_y = 1;
    double spacing = 0.05;
    double ring_gap = 0.045;
    /// Common rotation of every ring, added to ring_rotations[i] when present.
    double rotation = 0.0;
    std::vector<double> ring_rotations;
    bool with_donor_acceptor = true;
    /// single_ring only: place a donor in the ring centre.
    bool center_donor = false;
    /// Length of the donor-acceptor segment for plain lattices.
    double donor_acceptor_distance = 1.0;
    /// free_pair separation; 0 selects `spacing`.
    double pair_separation = 0.0;
    double detuning = 0.0;
    /// Acceptor detuning when it differs from the donor's.
    std::optional<double> acceptor_detuning;
    double trap_rate = 0.0;
    CVec3 polarization = circular_polarization();
};

/// Ring radius giving nearest-neighbour distance d for n emitters.
double ring_radius(int ring_size, double spacing);

EmitterEnsemble build_ring(int ring_size, double spacing, const Vec3& center = Vec3::Zero(),
                           double rotation = 0.0);

EmitterEnsemble build_geometry(const GeometrySpec& spec);

/// Rotates every ring about its own centre by an independent angle drawn
/// uniformly from [0, 2*pi/N_R).
EmitterEnsemble apply_rotational_disorder(const EmitterEnsemble& ensemble, std::uint64_t seed);

/// Adds i.i.d. Gaussian(0, sigma^2) detunings to the lattice emitters.
EmitterEnsemble apply_frequency_disorder(const EmitterEnsemble& ensemble, double sigma,
                                         std::uint64_t seed);

/// Throws OverlapError when two emitters are closer than `min_distance`.
void check_no_overlap(const EmitterEnsemble& ensemble, double min_distance = 1e-9);

} // namespace ringlight
