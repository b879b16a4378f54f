#include "ringlight/config.hpp"

#include "ringlight/coupling.hpp"
#include "ringlight/errors.hpp"
#include "ringlight/optimize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace ringlight {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

// Strict view of one JSON object: every key must be consumed.
class Section {
public:
    Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) {
            fail(path_, "expected an object");
        }
    }

    bool has(const std::string& key) const { return obj_.contains(key); }
    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json* raw(const std::string& key) {
        seen_.insert(key);
        const auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    bool number(const std::string& key, double& out) {
        const json* v = raw(key);
        if (!v) {
            return false;
        }
        if (!v->is_number()) {
            fail(at(key), "expected a number");
        }
        out = v->get<double>();
        if (!std::isfinite(out)) {
            fail(at(key), "must be finite");
        }
        return true;
    }

    bool integer(const std::string& key, int& out) {
        const json* v = raw(key);
        if (!v) {
            return false;
        }
        if (!v->is_number()) {
            fail(at(key), "expected an integer");
        }
        const double d = v->get<double>();
        if (d != std::floor(d) || std::abs(d) > 1e9) {
            fail(at(key), "expected an integer");
        }
        out = static_cast<int>(d);
        return true;
    }

    bool boolean(const std::string& key, bool& out) {
        const json* v = raw(key);
        if (!v) {
            return false;
        }
        if (!v->is_boolean()) {
            fail(at(key), "expected true or false");
        }
        out = v->get<bool>();
        return true;
    }

    bool string(const std::string& key, std::string& out) {
        const json* v = raw(key);
        if (!v) {
            return false;
        }
        if (!v->is_string()) {
            fail(at(key), "expected a string");
        }
        out = v->get<std::string>();
        return true;
    }

    void finish() const {
        for (const auto& [key, value] : obj_.items()) {
            if (!seen_.count(key)) {
                fail(at(key), "unknown key");
            }
        }
    }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

std::vector<double> parse_values(const json& v, const std::string& path) {
    std::vector<double> out;
    if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) {
                fail(path + "[" + std::to_string(i) + "]", "expected a number");
            }
            out.push_back(v[i].get<double>());
        }
    } else if (v.is_object()) {
        Section s(v, path);
        double start = 0.0, stop = 0.0, step = 0.0;
        int num = 0;
        std::string scale = "linear";
        if (!s.number("start", start) || !s.number("stop", stop)) {
            fail(path, "range needs start and stop");
        }
        const bool has_num = s.integer("num", num);
        const bool has_step = s.number("step", step);
        s.string("scale", scale);
        s.finish();
        if (has_num == has_step) {
            fail(path, "range needs exactly one of num and step");
        }
        if (scale != "linear" && scale != "log") {
            fail(path + ".scale", "expected \"linear\" or \"log\"");
        }
        if (has_step) {
            if (!(step > 0.0) || scale == "log") {
                fail(path + ".step", "step must be positive and only used with a linear scale");
            }
            num = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
            if (num < 1) {
                fail(path, "empty range");
            }
            for (int i = 0; i < num; ++i) {
                out.push_back(start + i * step);
            }
        } else {
            if (num < 1) {
                fail(path + ".num", "must be at least 1");
            }
            if (scale == "log" && !(start > 0.0 && stop > 0.0)) {
                fail(path, "log range needs positive bounds");
            }
            out = scale == "log" ? logspace(start, stop, num) : linspace(start, stop, num);
        }
    } else {
        fail(path, "expected a list of numbers or a range object");
    }
    if (out.empty()) {
        fail(path, "no values");
    }
    return out;
}

Analysis parse_analysis(const std::string& s, const std::string& path) {
    static const std::pair<const char*, Analysis> names[] = {
        {"geometry", Analysis::geometry}, {"coupling", Analysis::coupling},
        {"transport", Analysis::transport}, {"bands", Analysis::bands},
        {"zak", Analysis::zak},           {"edges", Analysis::edges},
        {"steady", Analysis::steady},     {"analytics", Analysis::analytics},
    };
    for (const auto& [n, a] : names) {
        if (s == n) {
            return a;
        }
    }
    fail(path, "unknown analysis '" + s + "'");
}

void check_sweep_path(const std::string& parameter, const std::string& path) {
    const auto dot = parameter.find('.');
    const std::string head = parameter.substr(0, dot);
    if (dot == std::string::npos || (head != "geometry" && head != "physics" && head != "disorder")) {
        fail(path, "must name a geometry, physics or disorder field");
    }
}

void parse_geometry(const json& doc, ScenarioConfig& cfg) {
    Section s(doc, "geometry");
    GeometrySpec& g = cfg.geometry;
    std::string kind = "ring_chain";
    s.string("kind", kind);
    try {
        g.kind = parse_geometry_kind(kind);
    } catch (const InvalidArgument& e) {
        fail("geometry.kind", e.what());
    }
    s.integer("ring_size", g.ring_size);
    s.integer("rings_x", g.rings_x);
    s.integer("rings_y", g.rings_y);
    s.integer("sites_x", g.sites_x);
    s.integer("sites_y", g.sites_y);
    if (is_ring_based(g.kind) && g.ring_size < 3) {
        fail("geometry.ring_size", "must be at least 3");
    }
    double spacing = 0.0, radius = 0.0, gap = 0.0, ratio = 0.0;
    const bool has_spacing = s.number("spacing", spacing);
    const bool has_radius = s.number("radius", radius);
    if (has_spacing && has_radius) {
        fail("geometry", "give either spacing or radius, not both");
    }
    if (has_radius) {
        if (!(radius > 0.0)) {
            fail("geometry.radius", "must be positive");
        }
        spacing = 2.0 * radius * std::sin(pi / g.ring_size);
    } else if (!has_spacing) {
        spacing = g.spacing;
    }
    if (!(spacing > 0.0)) {
        fail("geometry.spacing", "must be positive");
    }
    g.spacing = spacing;
    const bool has_gap = s.number("ring_gap", gap);
    const bool has_ratio = s.number("ring_gap_ratio", ratio);
    if (has_gap && has_ratio) {
        fail("geometry", "give either ring_gap or ring_gap_ratio, not both");
    }
    if (has_gap) {
        g.ring_gap = gap;
    } else if (has_ratio) {
        g.ring_gap = ratio * spacing;
    } else {
        g.ring_gap = 0.9 * spacing;
    }
    if (!(g.ring_gap > 0.0)) {
        fail("geometry.ring_gap", "must be positive");
    }
    s.number("rotation", g.rotation);
    if (const json* rot = s.raw("ring_rotations")) {
        g.ring_rotations = parse_values(*rot, "geometry.ring_rotations");
    }
    s.boolean("donor_acceptor", g.with_donor_acceptor);
    s.boolean("center_donor", g.center_donor);
    s.number("donor_acceptor_distance", g.donor_acceptor_distance);
    if (!(g.donor_acceptor_distance > 0.0)) {
        fail("geometry.donor_acceptor_distance", "must be positive");
    }
    s.number("pair_separation", g.pair_separation);
    if (g.pair_separation < 0.0) {
        fail("geometry.pair_separation", "must be non-negative");
    }
    s.finish();
}

void parse_physics(const json& doc, ScenarioConfig& cfg) {
    Section s(doc, "physics");
    PhysicsSpec& p = cfg.physics;
    s.number("detuning", p.detuning);
    double acc = 0.0;
    if (s.number("acceptor_detuning", acc)) {
        p.acceptor_detuning = acc;
    }
    double ratio = 0.0;
    const bool has_rate = s.number("trap_rate", p.trap_rate);
    const bool has_ratio = s.number("trap_over_coupling", ratio);
    if (has_rate && has_ratio) {
        fail("physics", "give either trap_rate or trap_over_coupling, not both");
    }
    if (has_ratio) {
        p.trap_rate = ratio * cfg.coupling_scale;
    }
    if (p.trap_rate < 0.0) {
        fail("physics.trap_rate", "must be non-negative");
    }
    s.boolean("optimize_detuning", p.optimize_detuning);
    if (const json* r = s.raw("detuning_range")) {
        if (!r->is_array() || r->size() != 2 || !(*r)[0].is_number() || !(*r)[1].is_number()) {
            fail("physics.detuning_range", "expected [low, high]");
        }
        p.detuning_lo = (*r)[0].get<double>();
        p.detuning_hi = (*r)[1].get<double>();
        if (!(p.detuning_hi > p.detuning_lo)) {
            fail("physics.detuning_range", "high must exceed low");
        }
    }
    s.number("detuning_step", p.detuning_step);
    s.number("detuning_tolerance", p.detuning_tol);
    if (!(p.detuning_step > 0.0) || !(p.detuning_tol > 0.0)) {
        fail("physics", "detuning_step and detuning_tolerance must be positive");
    }
    s.number("rabi", p.rabi);
    s.number("waist", p.waist);
    if (!(p.rabi > 0.0) || !(p.waist > 0.0)) {
        fail("physics", "rabi and waist must be positive");
    }
    std::string center = "donor";
    s.string("beam_center", center);
    if (center == "donor") {
        p.beam_center = BeamCenter::donor;
    } else if (center == "acceptor") {
        p.beam_center = BeamCenter::acceptor;
    } else {
        fail("physics.beam_center", "expected \"donor\" or \"acceptor\"");
    }
    s.number("t_max", p.t_max);
    s.integer("time_steps", p.time_steps);
    if (!(p.t_max > 0.0) || p.time_steps < 1) {
        fail("physics", "t_max must be positive and time_steps at least 1");
    }
    const json* rates = s.raw("trap_rates");
    const json* rates_ratio = s.raw("trap_rates_over_coupling");
    if (rates && rates_ratio) {
        fail("physics", "give either trap_rates or trap_rates_over_coupling, not both");
    }
    if (rates) {
        p.trap_rates = parse_values(*rates, "physics.trap_rates");
    } else if (rates_ratio) {
        p.trap_rates = parse_values(*rates_ratio, "physics.trap_rates_over_coupling");
        for (auto& r : p.trap_rates) {
            r *= cfg.coupling_scale;
        }
    }
    for (double r : p.trap_rates) {
        if (!(r > 0.0)) {
            fail("physics.trap_rates", "trap rates must be positive");
        }
    }
    s.finish();
}

void parse_disorder(const json& doc, ScenarioConfig& cfg) {
    Section s(doc, "disorder");
    DisorderSpec& d = cfg.disorder;
    std::string type = "none";
    s.string("type", type);
    if (type == "none") {
        d.kind = DisorderKind::none;
    } else if (type == "frequency") {
        d.kind = DisorderKind::frequency;
    } else if (type == "rotation") {
        d.kind = DisorderKind::rotation;
    } else {
        fail("disorder.type", "expected \"none\", \"frequency\" or \"rotation\"");
    }
    double ratio = 0.0;
    const bool has_sigma = s.number("sigma", d.sigma);
    const bool has_ratio = s.number("sigma_over_coupling", ratio);
    if (has_sigma && has_ratio) {
        fail("disorder", "give either sigma or sigma_over_coupling, not both");
    }
    if (has_ratio) {
        d.sigma = ratio * cfg.coupling_scale;
    }
    if (d.sigma < 0.0) {
        fail("disorder.sigma", "must be non-negative");
    }
    s.integer("realizations", d.realizations);
    if (d.realizations < 1) {
        fail("disorder.realizations", "must be at least 1");
    }
    if (const json* v = s.raw("seed")) {
        if (!v->is_number_integer() || v->get<std::int64_t>() < 0) {
            fail("disorder.seed", "expected a non-negative integer");
        }
        d.seed = v->get<std::uint64_t>();
    }
    s.finish();
    if (d.kind == DisorderKind::rotation && !is_ring_based(cfg.geometry.kind)) {
        fail("disorder.type", "rotational disorder needs a ring-based geometry");
    }
}

void parse_sweep(const json& doc, ScenarioConfig& cfg) {
    if (!doc.is_array()) {
        fail("sweep", "expected a list of axes");
    }
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string path = "sweep[" + std::to_string(i) + "]";
        Section s(doc[i], path);
        SweepAxis axis;
        if (!s.string("parameter", axis.parameter)) {
            fail(path, "missing parameter");
        }
        check_sweep_path(axis.parameter, path + ".parameter");
        const json* values = s.raw("values");
        if (!values) {
            fail(path, "missing values");
        }
        axis.values = parse_values(*values, path + ".values");
        if (const json* linked = s.raw("linked")) {
            Section l(*linked, path + ".linked");
            for (const auto& [key, vals] : linked->items()) {
                check_sweep_path(key, l.at(key));
                auto parsed = parse_values(*l.raw(key), l.at(key));
                if (parsed.size() != axis.values.size()) {
                    fail(l.at(key), "needs one value per grid point");
                }
                axis.linked.emplace_back(key, std::move(parsed));
            }
            l.finish();
        }
        s.finish();
        cfg.sweep.push_back(std::move(axis));
    }
}

void parse_output(const json& doc, ScenarioConfig& cfg) {
    Section s(doc, "output");
    s.string("directory", cfg.output.directory);
    s.boolean("plot", cfg.output.plot);
    s.boolean("fidelity", cfg.output.fidelity);
    s.finish();
}

} // namespace

std::string_view to_string(Analysis a) {
    switch (a) {
    case Analysis::geometry: return "geometry";
    case Analysis::coupling: return "coupling";
    case Analysis::transport: return "transport";
    case Analysis::bands: return "bands";
    case Analysis::zak: return "zak";
    case Analysis::edges: return "edges";
    case Analysis::steady: return "steady";
    case Analysis::analytics: return "analytics";
    }
    return "transport";
}

ScenarioConfig parse_config(const json& doc) {
    Section root(doc, "");
    ScenarioConfig cfg;
    cfg.source = doc;
    root.string("name", cfg.name);
    std::string analysis = "transport";
    root.string("analysis", analysis);
    cfg.analysis = parse_analysis(analysis, "analysis");

    static const json empty = json::object();
    const json* geometry = root.raw("geometry");
    parse_geometry(geometry ? *geometry : empty, cfg);
    const cplx g = green_projected(Vec3(cfg.geometry.spacing, 0.0, 0.0), circular_polarization(),
                                   circular_polarization());
    cfg.coupling_scale = std::abs(coherent_coupling(g));

    const json* physics = root.raw("physics");
    parse_physics(physics ? *physics : empty, cfg);
    cfg.geometry.detuning = cfg.physics.detuning;
    cfg.geometry.acceptor_detuning = cfg.physics.acceptor_detuning;
    cfg.geometry.trap_rate = cfg.physics.trap_rate;

    const json* disorder = root.raw("disorder");
    parse_disorder(disorder ? *disorder : empty, cfg);
    if (const json* sweep = root.raw("sweep")) {
        parse_sweep(*sweep, cfg);
    }
    const json* output = root.raw("output");
    parse_output(output ? *output : empty, cfg);

    if (const json* bands = root.raw("bands")) {
        Section s(*bands, "bands");
        s.integer("zak_points", cfg.zak_points);
        s.integer("bloch_cells", cfg.bloch_cells);
        s.boolean("group_velocity", cfg.group_velocity);
        s.finish();
        if (cfg.zak_points < 64) {
            fail("bands.zak_points", "must be at least 64");
        }
        if (cfg.bloch_cells < 1) {
            fail("bands.bloch_cells", "must be at least 1");
        }
    }
    root.finish();

    if (cfg.analysis == Analysis::analytics && cfg.geometry.kind != GeometryKind::single_ring) {
        fail("analysis", "analytics needs geometry.kind = single_ring");
    }
    if ((cfg.analysis == Analysis::bands || cfg.analysis == Analysis::edges) && !is_ring_based(cfg.geometry.kind)) {
        fail("analysis", std::string(to_string(cfg.analysis)) + " needs a ring-based geometry");
    }
    if ((cfg.analysis == Analysis::zak) && cfg.geometry.kind != GeometryKind::ring_chain) {
        fail("analysis", "zak needs geometry.kind = ring_chain");
    }
    return cfg;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path + ": cannot open");
    }
    try {
        return json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void set_path(json& doc, const std::string& path, const json& value) {
    static const std::pair<const char*, const char*> exclusive[] = {
        {"spacing", "radius"},
        {"ring_gap", "ring_gap_ratio"},
        {"trap_rate", "trap_over_coupling"},
        {"trap_rates", "trap_rates_over_coupling"},
        {"sigma", "sigma_over_coupling"},
    };
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) {
            throw ConfigError(path + ": malformed path");
        }
        if (!node->is_object()) {
            throw ConfigError(path + ": '" + key + "' is not inside an object");
        }
        if (dot == std::string::npos) {
            for (const auto& [a, b] : exclusive) {
                if (key == a) {
                    node->erase(b);
                } else if (key == b) {
                    node->erase(a);
                }
            }
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        if (node->is_null()) {
            *node = json::object();
        }
        start = dot + 1;
    }
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override '" + assignment + "': expected key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    set_path(doc, key, value);
}

std::string canonical_dump(const json& doc) {
    // nlohmann::json keeps keys sorted, which fixes the byte layout
    return nlohmann::json::parse(doc.dump()).dump(2);
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string schema_text() {
    return R"(Scenario configuration (JSON). Lengths in lambda0, rates in Gamma0.

name                      string
analysis                  geometry | coupling | transport | bands | zak | edges | steady | analytics
geometry.kind             single_ring | ring_chain | ring_lattice_square | ring_lattice_hexagonal |
                          linear_chain | hexagonal | honeycomb | free_pair
geometry.ring_size        emitters per ring N_R (>= 3)
geometry.rings_x/rings_y  rings along x / y
geometry.sites_x/sites_y  sites (linear_chain, hexagonal) or unit cells (honeycomb)
geometry.spacing | radius nearest-neighbour distance d, or ring radius R
geometry.ring_gap | ring_gap_ratio   inter-ring gap d_R, or d_R / d (default 0.9)
geometry.rotation         common ring rotation (rad)
geometry.ring_rotations   per-ring rotation offsets (list)
geometry.donor_acceptor   include donor and acceptor (default true)
geometry.center_donor     single_ring: add a centre donor
geometry.donor_acceptor_distance    plain lattices (default 1.0)
geometry.pair_separation  free_pair separation (default: spacing)
physics.detuning          donor/acceptor detuning Delta
physics.acceptor_detuning optional separate acceptor detuning
physics.trap_rate | trap_over_coupling     Gamma_T, or Gamma_T / |J|
physics.optimize_detuning maximize the analysis figure of merit over Delta
physics.detuning_range    [low, high] (default [-15, 15])
physics.detuning_step     grid step before golden-section refinement (default 0.5)
physics.detuning_tolerance  refinement tolerance (default 1e-3)
physics.rabi, waist       drive Omega0 (default 1e-3) and beam waist w (default 0.3)
physics.beam_center       donor | acceptor
physics.t_max, time_steps integration horizon (default 150) and report grid (default 300)
physics.trap_rates | trap_rates_over_coupling   steady-state trap-rate grid
disorder.type             none | frequency | rotation
disorder.sigma | sigma_over_coupling    frequency disorder width, or width / |J|
disorder.realizations     ensemble size
disorder.seed             base seed; realization i uses seed + i
sweep                     list of {parameter: "section.key", values: [..] | {start, stop, num|step, scale}}
sweep[i].linked            {"section.key": [..]} stepped together with the axis
output.directory, plot, fidelity
bands.zak_points, bands.bloch_cells, bands.group_velocity

Ranges: a list of numbers or {"start": a, "stop": b, "num": n, "scale": "linear"|"log"}
or {"start": a, "stop": b, "step": s}. Unknown keys are rejected.
)";
}

} // namespace ringlight
