#pragma once

#include "ringlight/geometry.hpp"
#include "ringlight/steadystate.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ringlight {

using json = nlohmann::ordered_json;

enum class Analysis { geometry, coupling, transport, bands, zak, edges, steady, analytics };
enum class DisorderKind { none, frequency, rotation };

std::string_view to_string(Analysis a);

struct PhysicsSpec {
    double detuning = 0.0;
    std::optional<double> acceptor_detuning;
    double trap_rate = 0.0;
    bool optimize_detuning = false;
    double detuning_lo = -15.0;
    double detuning_hi = 15.0;
    double detuning_step = 0.5;
    double detuning_tol = 1e-3;
    double rabi = 1e-3;
    double waist = 0.3;
    BeamCenter beam_center = BeamCenter::donor;
    double t_max = 150.0;
    int time_steps = 300;
    /// Trap-rate grid for the steady analysis (absolute rates).
    std::vector<double> trap_rates;
};

struct DisorderSpec {
    DisorderKind kind = DisorderKind::none;
    double sigma = 0.0;
    int realizations = 1;
    std::uint64_t seed = 1;
};

struct SweepAxis {
    std::string parameter; // dotted path into the config, e.g. "geometry.ring_size"
    std::vector<double> values;
    /// Parameters stepped in lockstep with `parameter`, one value per grid point.
    std::vector<std::pair<std::string, std::vector<double>>> linked;
};

struct OutputSpec {
    std::string directory;
    bool plot = true;
    bool fidelity = false;
};

struct ScenarioConfig {
    std::string name = "scenario";
    Analysis analysis = Analysis::transport;
    GeometrySpec geometry;
    PhysicsSpec physics;
    DisorderSpec disorder;
    std::vector<SweepAxis> sweep;
    OutputSpec output;
    int zak_points = 128;
    int bloch_cells = 50;
    /// Transport on ring chains: also report the Bloch group velocity at Delta.
    bool group_velocity = false;
    /// |J| between two nearest-neighbour emitters at the geometry spacing.
    double coupling_scale = 0.0;
    /// The validated source document, used for sweeps and the manifest.
    json source;
};

/// Validates `doc` against the schema and resolves derived quantities
/// (radius -> spacing, ratios relative to d or |J|). Unknown keys and type
/// errors raise ConfigError naming the offending path.
ScenarioConfig parse_config(const json& doc);

/// Reads a JSON file; errors raise ConfigError.
json load_json_file(const std::string& path);

/// Applies "dotted.path=value" where value is parsed as JSON when possible
/// and as a string otherwise.
void apply_override(json& doc, const std::string& assignment);

/// Sets a value at a dotted path, creating objects on the way. Mutually
/// exclusive alternatives of the key (spacing/radius and the like) are removed.
void set_path(json& doc, const std::string& path, const json& value);

/// Canonical serialization (sorted keys, fixed formatting) and its FNV-1a hash.
std::string canonical_dump(const json& doc);
std::string fnv1a_hex(const std::string& bytes);

/// Human-readable summary of the accepted keys.
std::string schema_text();

} // namespace ringlight
