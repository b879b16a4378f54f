#include "ringlight/runner.hpp"

#include "ringlight/bloch.hpp"
#include "ringlight/coupling.hpp"
#include "ringlight/dynamics.hpp"
#include "ringlight/errors.hpp"
#include "ringlight/hamiltonian.hpp"
#include "ringlight/optimize.hpp"
#include "ringlight/parallel.hpp"
#include "ringlight/rng.hpp"
#include "ringlight/spectrum.hpp"
#include "ringlight/steadystate.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace ringlight {

namespace fs = std::filesystem;

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr const char* version = "ringlight 0.1.0";

std::string fmt(double x) { return format_number(x); }
std::string fmt(std::size_t x) { return std::to_string(x); }
std::string fmt(int x) { return std::to_string(x); }

EmitterEnsemble realize(const ScenarioConfig& cfg, std::uint64_t seed) {
    EmitterEnsemble ens = build_geometry(cfg.geometry);
    switch (cfg.disorder.kind) {
    case DisorderKind::rotation:
        ens = apply_rotational_disorder(ens, seed);
        check_no_overlap(ens);
        break;
    case DisorderKind::frequency:
        if (cfg.disorder.sigma > 0.0) {
            ens = apply_frequency_disorder(ens, cfg.disorder.sigma, seed);
        }
        break;
    case DisorderKind::none:
        break;
    }
    return ens;
}

// Donor/acceptor detuning and trap rate on top of the lattice Hamiltonian.
EffectiveHamiltonian tune(const EffectiveHamiltonian& h, const EmitterEnsemble& ens,
                          const ScenarioConfig& cfg, double detuning, double trap_rate) {
    EffectiveHamiltonian out = retune(h, ens, detuning, trap_rate);
    if (cfg.physics.acceptor_detuning && out.acceptor) {
        const auto a = static_cast<Eigen::Index>(*out.acceptor);
        out.matrix(a, a) = cplx(*cfg.physics.acceptor_detuning, out.matrix(a, a).imag());
    }
    return out;
}

void require_pair(const EmitterEnsemble& ens, std::string_view analysis) {
    if (!ens.donor_index() || !ens.acceptor_index()) {
        throw InvalidArgument(std::string(analysis) + " needs a donor and an acceptor");
    }
}

Table scan_table(const std::vector<std::pair<double, double>>& trace, const std::string& value) {
    Table t;
    t.columns = {"delta", value};
    auto sorted = trace;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [x, v] : sorted) {
        t.add_row({fmt(x), fmt(v)});
    }
    return t;
}

void run_geometry(const ScenarioConfig&, const EmitterEnsemble& ens, bool detailed, PointResult& out) {
    double min_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ens.size(); ++i) {
        for (std::size_t j = i + 1; j < ens.size(); ++j) {
            min_dist = std::min(min_dist, (ens[i].position - ens[j].position).norm());
        }
    }
    double da = nan;
    if (ens.donor_index() && ens.acceptor_index()) {
        da = (ens[*ens.donor_index()].position - ens[*ens.acceptor_index()].position).norm();
    }
    const auto& meta = ens.metadata();
    out.metrics = {{"n_emitters", static_cast<double>(ens.size())},
                   {"n_lattice", static_cast<double>(ens.lattice_count())},
                   {"min_distance", ens.size() > 1 ? min_dist : nan},
                   {"donor_acceptor_distance", da},
                   {"radius", meta.radius > 0 ? meta.radius : nan},
                   {"ring_pitch", meta.ring_pitch > 0 ? meta.ring_pitch : nan}};
    if (!detailed) {
        return;
    }
    Table t;
    t.columns = {"index", "x", "y", "z", "role", "detuning", "trap_rate", "ring_index"};
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const auto& e = ens[i];
        t.add_row({fmt(i), fmt(e.position.x()), fmt(e.position.y()), fmt(e.position.z()),
                   std::string(to_string(e.role)), fmt(e.detuning), fmt(e.trap_rate), fmt(e.ring_index)});
    }
    out.tables.emplace_back("geometry", std::move(t));
    LinePlot p{"geometry", "x / lambda0", "y / lambda0", false, false, {}};
    for (Role role : {Role::lattice, Role::donor, Role::acceptor}) {
        Series s{std::string(to_string(role)), {}, {}, true};
        for (const auto& e : ens.emitters()) {
            if (e.role == role) {
                s.x.push_back(e.position.x());
                s.y.push_back(e.position.y());
            }
        }
        if (!s.x.empty()) {
            p.series.push_back(std::move(s));
        }
    }
    out.plots.push_back(std::move(p));
}

void run_coupling(const ScenarioConfig& cfg, const EmitterEnsemble& ens, bool detailed, PointResult& out) {
    const CouplingMatrices c = coupling_matrices(ens);
    const auto n = static_cast<Eigen::Index>(ens.size());
    double nn_j = nan, nn_g = nan, max_j = 0.0;
    if (n > 1) {
        Eigen::Index nearest = 1;
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 1; j < n; ++j) {
            const double r = (ens[0].position - ens[static_cast<std::size_t>(j)].position).norm();
            if (r < best) {
                best = r;
                nearest = j;
            }
        }
        nn_j = c.coherent(0, nearest);
        nn_g = c.dissipative(0, nearest);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i != j) {
                    max_j = std::max(max_j, std::abs(c.coherent(i, j)));
                }
            }
        }
    }
    out.metrics = {{"nn_coherent", nn_j},
                   {"nn_dissipative", nn_g},
                   {"max_abs_coherent", n > 1 ? max_j : nan},
                   {"coupling_scale", cfg.coupling_scale}};
    if (!detailed) {
        return;
    }
    for (const auto& [stem, m] : {std::pair{"coupling_J", &c.coherent}, std::pair{"coupling_Gamma", &c.dissipative}}) {
        Table t;
        t.columns.push_back("index");
        for (Eigen::Index j = 0; j < n; ++j) {
            t.columns.push_back(std::to_string(j));
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            std::vector<std::string> row{std::to_string(i)};
            for (Eigen::Index j = 0; j < n; ++j) {
                row.push_back(fmt((*m)(i, j)));
            }
            t.add_row(std::move(row));
        }
        out.tables.emplace_back(stem, std::move(t));
    }
}

void run_transport(const ScenarioConfig& cfg, const EmitterEnsemble& ens, bool detailed, PointResult& out) {
    require_pair(ens, "transport");
    const PhysicsSpec& p = cfg.physics;
    const EffectiveHamiltonian base = assemble_effective(ens, coupling_matrices(ens));
    double delta = p.detuning;
    ScanResult scan;
    if (p.optimize_detuning) {
        scan = maximize_scalar(
            [&](double d) { return transport_efficiency(tune(base, ens, cfg, d, p.trap_rate), p.t_max); },
            p.detuning_lo, p.detuning_hi, p.detuning_step, p.detuning_tol);
        delta = scan.x;
    }
    const EffectiveHamiltonian h = tune(base, ens, cfg, delta, p.trap_rate);
    const auto donor = static_cast<Eigen::Index>(*ens.donor_index());
    SpectralPropagator prop(h);
    prop.prepare(localized_state(h.size(), donor).amplitudes);
    const double remaining = prop.state(p.t_max).squaredNorm();
    const double radiated = prop.radiated(p.t_max);
    const double eta = p.trap_rate * prop.acceptor_integral(p.t_max);
    out.metrics = {{"detuning", delta},
                   {"eta", eta},
                   {"radiated", radiated},
                   {"remaining", remaining},
                   {"budget_error", std::abs(remaining + radiated + eta - 1.0)}};
    if (cfg.group_velocity) {
        double vg = nan, opt = nan, m_abs = nan;
        if (cfg.geometry.kind != GeometryKind::ring_chain) {
            throw InvalidArgument("bands.group_velocity needs geometry.kind = ring_chain");
        }
        try {
            const BlochChain chain(cfg.geometry.ring_size, cfg.geometry.spacing, cfg.geometry.ring_gap,
                                   cfg.bloch_cells, cfg.geometry.rotation);
            const BandCrossing x = group_velocity_and_optimal_trap(chain, delta);
            vg = x.velocity;
            opt = x.optimal_trap;
            m_abs = x.m_abs;
        } catch (const NoResonantMode& e) {
            out.warnings.push_back(e.what());
        }
        out.metrics.insert(out.metrics.end(),
                           {{"group_velocity", vg}, {"optimal_trap", opt}, {"resonant_m_abs", m_abs}});
    }
    if (!detailed) {
        return;
    }
    const TransportTrace trace =
        evolve(h, localized_state(h.size(), donor), time_grid(p.t_max, p.time_steps), nullptr, cfg.output.fidelity);
    const ExcitationBudget budget = excitation_budget(trace);
    out.metrics.emplace_back("trace_eta", trace.eta.back());
    out.metrics.emplace_back("trace_budget_error", std::abs(budget.total() - 1.0));
    Table t;
    t.columns = {"t", "donor_pop", "acceptor_pop", "norm2", "eta_t", "radiated"};
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        t.add_row({fmt(trace.times[i]), fmt(trace.donor_pop[i]), fmt(trace.acceptor_pop[i]), fmt(trace.norm2[i]),
                   fmt(trace.eta[i]), fmt(trace.radiated[i])});
    }
    out.tables.emplace_back("transport", std::move(t));
    out.plots.push_back({"transport",
                         "t Gamma0",
                         "population",
                         false,
                         false,
                         {{"donor", trace.times, trace.donor_pop, false},
                          {"acceptor", trace.times, trace.acceptor_pop, false},
                          {"eta_t", trace.times, trace.eta, false},
                          {"radiated", trace.times, trace.radiated, false}}});
    if (p.optimize_detuning) {
        out.tables.emplace_back("detuning_scan", scan_table(scan.trace, "eta"));
    }
    if (cfg.output.fidelity) {
        // the eigenmodes that dominate the evolution at some time
        const ModeSet modes = diagonalize(h);
        std::vector<std::pair<double, Eigen::Index>> ranked;
        std::vector<std::vector<double>> curves(static_cast<std::size_t>(modes.size()));
        for (Eigen::Index k = 0; k < modes.size(); ++k) {
            CVector v = modes.vectors.col(k);
            v.normalize();
            curves[static_cast<std::size_t>(k)] = eigenstate_fidelity(trace, v);
            const auto& c = curves[static_cast<std::size_t>(k)];
            ranked.emplace_back(-*std::max_element(c.begin(), c.end()), k);
        }
        std::sort(ranked.begin(), ranked.end());
        ranked.resize(std::min<std::size_t>(4, ranked.size()));
        Table f;
        f.columns = {"t"};
        LinePlot fp{"fidelity", "t Gamma0", "|<psi(t)|mode>|^2", false, false, {}};
        for (const auto& [neg, k] : ranked) {
            f.columns.push_back("mode_" + std::to_string(k));
            fp.series.push_back({"mode " + std::to_string(k) + " (decay " + fmt(std::round(modes.decay(k) * 1e4) / 1e4) + ")",
                                 trace.times, curves[static_cast<std::size_t>(k)], false});
        }
        for (std::size_t i = 0; i < trace.times.size(); ++i) {
            std::vector<std::string> row{fmt(trace.times[i])};
            for (const auto& [neg, k] : ranked) {
                row.push_back(fmt(curves[static_cast<std::size_t>(k)][i]));
            }
            f.add_row(std::move(row));
        }
        out.tables.emplace_back("fidelity", std::move(f));
        out.plots.push_back(std::move(fp));
    }
}

ModeSet lattice_modes(const EmitterEnsemble& lattice) {
    ModeSet modes = diagonalize(assemble_effective(lattice, coupling_matrices(lattice)));
    recombine_degenerate(modes, lattice);
    return modes;
}

void run_bands(const ScenarioConfig& cfg, const EmitterEnsemble& ens, bool detailed, PointResult& out) {
    const EmitterEnsemble lattice = ens.lattice_only();
    const ModeSet modes = lattice_modes(lattice);
    const EdgeStateReport edges = edge_localization(modes, lattice);
    const bool chain = cfg.geometry.kind == GeometryKind::ring_chain && cfg.geometry.rings_y == 1;
    BandStructure bs;
    if (chain) {
        bs = classify_bands(modes, lattice);
    }
    double max_edge = 0.0;
    for (double w : edges.edge_weight) {
        max_edge = std::max(max_edge, w);
    }
    out.metrics = {{"centroid_m0", chain ? bs.centroid_m0 : nan},
                   {"centroid_m1", chain ? bs.centroid_m1 : nan},
                   {"gap_m0", chain && bs.has_gap ? bs.gap_m0 : nan},
                   {"gap_m1", chain && bs.has_gap ? bs.gap_m1 : nan},
                   {"min_gap_over_J", chain && bs.has_gap ? bs.min_gap() / cfg.coupling_scale : nan},
                   {"n_edge_states", chain ? static_cast<double>(bs.edge_states.size())
                                           : static_cast<double>(edges.edge_states.size())},
                   {"min_bulk_weight", chain && bs.has_gap ? bs.min_bulk_weight : nan},
                   {"max_edge_weight", max_edge},
                   {"max_residual", modes.max_residual}};
    if (!detailed) {
        return;
    }
    Table t;
    if (chain) {
        t.columns = {"mode_index", "Re_lambda", "decay", "m_abs", "k", "fidelity", "edge_weight", "corner_weight", "in_gap_edge"};
        std::set<Eigen::Index> in_gap(bs.edge_states.begin(), bs.edge_states.end());
        for (const auto& pt : bs.points) {
            t.add_row({fmt(static_cast<std::size_t>(pt.mode)), fmt(pt.shift), fmt(pt.decay), fmt(pt.m_abs), fmt(pt.k),
                       fmt(pt.fidelity), fmt(pt.edge_weight), fmt(pt.corner_weight), in_gap.count(pt.mode) ? "1" : "0"});
        }
    } else {
        t.columns = {"mode_index", "Re_lambda", "decay", "edge_weight", "corner_weight"};
        for (Eigen::Index k = 0; k < modes.size(); ++k) {
            const auto i = static_cast<std::size_t>(k);
            t.add_row({fmt(i), fmt(modes.shift(k)), fmt(modes.decay(k)), fmt(edges.edge_weight[i]),
                       fmt(edges.corner_weight[i])});
        }
    }
    LinePlot p{"bands", chain ? "k d~" : "mode index", "Re lambda / Gamma0", false, false, {}};
    if (chain) {
        std::map<int, Series> by_m;
        const double pitch = ens.metadata().ring_pitch;
        for (const auto& pt : bs.points) {
            auto& s = by_m[pt.m_abs];
            s.label = "|m| = " + std::to_string(pt.m_abs);
            s.markers = true;
            s.x.push_back(pt.k * pitch);
            s.y.push_back(pt.shift);
        }
        for (auto& [m, s] : by_m) {
            p.series.push_back(std::move(s));
        }
    } else {
        Series s{"modes", {}, {}, true};
        for (Eigen::Index k = 0; k < modes.size(); ++k) {
            s.x.push_back(static_cast<double>(k));
            s.y.push_back(modes.shift(k));
        }
        p.series.push_back(std::move(s));
    }
    out.tables.emplace_back("bands", std::move(t));
    out.plots.push_back(std::move(p));
}

void run_edges(const ScenarioConfig&, const EmitterEnsemble& ens, bool detailed, PointResult& out) {
    const EmitterEnsemble lattice = ens.lattice_only();
    const ModeSet modes = lattice_modes(lattice);
    const EdgeStateReport r = edge_localization(modes, lattice);
    double max_edge = 0.0, max_corner = 0.0, min_bulk = 1.0;
    int superradiant_corners = 0;
    for (std::size_t i = 0; i < r.edge_weight.size(); ++i) {
        max_edge = std::max(max_edge, r.edge_weight[i]);
        max_corner = std::max(max_corner, r.corner_weight[i]);
    }
    for (auto k : r.edge_states) {
        min_bulk = std::min(min_bulk, r.bulk_weight[static_cast<std::size_t>(k)]);
    }
    for (auto k : r.corner_states) {
        superradiant_corners += r.superradiant[static_cast<std::size_t>(k)] ? 1 : 0;
    }
    out.metrics = {{"n_edge_states", static_cast<double>(r.edge_states.size())},
                   {"n_corner_states", static_cast<double>(r.corner_states.size())},
                   {"max_edge_weight", max_edge},
                   {"max_corner_weight", max_corner},
                   {"min_edge_state_bulk_weight", r.edge_states.empty() ? nan : min_bulk},
                   {"superradiant_corner_states", static_cast<double>(superradiant_corners)}};
    if (!detailed) {
        return;
    }
    Table t;
    t.columns = {"mode_index", "Re_lambda", "decay", "edge_weight", "bulk_weight", "corner_weight",
                 "edge", "corner", "superradiant"};
    for (Eigen::Index k = 0; k < modes.size(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        t.add_row({fmt(i), fmt(modes.shift(k)), fmt(modes.decay(k)), fmt(r.edge_weight[i]), fmt(r.bulk_weight[i]),
                   fmt(r.corner_weight[i]), r.edge_weight[i] > r.threshold ? "1" : "0",
                   r.corner_weight[i] > r.threshold ? "1" : "0", r.superradiant[i] ? "1" : "0"});
    }
    out.tables.emplace_back("edges", std::move(t));
    LinePlot p{"edges", "Re lambda / Gamma0", "edge weight", false, false, {}};
    Series s{"modes", {}, {}, true};
    for (Eigen::Index k = 0; k < modes.size(); ++k) {
        s.x.push_back(modes.shift(k));
        s.y.push_back(r.edge_weight[static_cast<std::size_t>(k)]);
    }
    p.series.push_back(std::move(s));
    out.plots.push_back(std::move(p));
}

double circular_distance(double a, double b) {
    const double d = std::fmod(std::abs(a - b), 2.0 * pi);
    return std::min(d, 2.0 * pi - d);
}

void run_zak(const ScenarioConfig& cfg, const EmitterEnsemble&, bool detailed, PointResult& out) {
    const BlochChain chain(cfg.geometry.ring_size, cfg.geometry.spacing, cfg.geometry.ring_gap, cfg.bloch_cells,
                           cfg.geometry.rotation);
    const ZakResult coarse = zak_phase(chain, cfg.zak_points);
    const ZakResult fine = zak_phase(chain, 2 * cfg.zak_points);
    out.metrics = {{"phase", coarse.phase},
                   {"phase_refined", fine.phase},
                   {"convergence", circular_distance(coarse.phase, fine.phase)},
                   {"min_overlap", coarse.min_overlap},
                   {"truncation_scale", chain.truncation_scale()}};
    if (!detailed) {
        return;
    }
    Table t;
    t.columns = {"nk", "phase", "min_overlap"};
    for (int nk : {cfg.zak_points, 2 * cfg.zak_points, 4 * cfg.zak_points}) {
        const ZakResult z = nk == cfg.zak_points ? coarse : nk == 2 * cfg.zak_points ? fine : zak_phase(chain, nk);
        t.add_row({fmt(nk), fmt(z.phase), fmt(z.min_overlap)});
    }
    out.tables.emplace_back("zak", std::move(t));
}

void run_steady(const ScenarioConfig& cfg, const EmitterEnsemble& ens, bool detailed, PointResult& out) {
    require_pair(ens, "steady");
    const PhysicsSpec& p = cfg.physics;
    std::vector<double> rates = p.trap_rates;
    if (rates.empty()) {
        if (!(p.trap_rate > 0.0)) {
            throw InvalidArgument("steady needs physics.trap_rate > 0 or a trap_rates grid");
        }
        rates.push_back(p.trap_rate);
    }
    const EffectiveHamiltonian base = assemble_effective(ens, coupling_matrices(ens));
    const std::size_t beam = p.beam_center == BeamCenter::donor ? *ens.donor_index() : *ens.acceptor_index();
    const DriveVector drive = gaussian_drive(ens, p.rabi, p.waist, ens[beam].position);
    out.warnings.insert(out.warnings.end(), drive.warnings.begin(), drive.warnings.end());

    Table t;
    t.columns = {"gamma_T", "gamma_T_over_J", "acceptor_pop", "trap_rate", "normalized_rate", "waist", "delta", "residual"};
    Series curve{"waist " + fmt(p.waist), {}, {}, false};
    double best = -1.0, best_rate = nan, best_delta = nan, max_residual = 0.0;
    for (double gt : rates) {
        auto solve = [&](double d) { return solve_steady_state(tune(base, ens, cfg, d, gt), drive); };
        double delta = p.detuning;
        if (p.optimize_detuning) {
            delta = maximize_scalar([&](double d) { return solve(d).normalized_rate; }, p.detuning_lo, p.detuning_hi,
                                    p.detuning_step, p.detuning_tol)
                        .x;
        }
        const SteadyStateResult r = solve(delta);
        max_residual = std::max(max_residual, r.residual);
        if (r.normalized_rate > best) {
            best = r.normalized_rate;
            best_rate = gt;
            best_delta = delta;
        }
        t.add_row({fmt(gt), fmt(gt / cfg.coupling_scale), fmt(r.acceptor_pop), fmt(r.trap_rate),
                   fmt(r.normalized_rate), fmt(p.waist), fmt(delta), fmt(r.residual)});
        curve.x.push_back(gt / cfg.coupling_scale);
        curve.y.push_back(r.normalized_rate);
    }
    out.metrics = {{"normalized_rate", best},
                   {"trap_rate_at_max", best_rate},
                   {"trap_over_coupling_at_max", best_rate / cfg.coupling_scale},
                   {"detuning_at_max", best_delta},
                   {"max_residual", max_residual}};
    if (!detailed) {
        return;
    }
    out.tables.emplace_back("steady", std::move(t));
    out.plots.push_back({"steady", "Gamma_T / |J|", "normalized trapping rate", true, true, {std::move(curve)}});
}

void run_analytics(const ScenarioConfig&, const EmitterEnsemble& ens, bool detailed, PointResult& out) {
    const SingleRingAnalytics a = ring_center_analytics(ens);
    out.warnings.insert(out.warnings.end(), a.warnings.begin(), a.warnings.end());
    out.metrics = {{"ring_shift", a.ring_shift},
                   {"ring_decay", a.ring_decay},
                   {"donor_coupling", a.donor_coupling},
                   {"donor_decay", a.donor_decay},
                   {"optimal_detuning", a.optimal_detuning},
                   {"detuning_estimate", a.detuning_estimate},
                   {"effective_decay", a.effective_decay},
                   {"donor_fraction", a.donor_fraction},
                   {"dicke_donor_fraction", dicke_center_donor_fraction(a.ring_size)}};
    if (!detailed) {
        return;
    }
    out.tables.emplace_back("analytics", scan_table(a.scan, "effective_decay"));
    Series s{"Gamma_eff", {}, {}, false};
    auto sorted = a.scan;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [d, g] : sorted) {
        s.x.push_back(d);
        s.y.push_back(g);
    }
    out.plots.push_back({"analytics", "Delta / Gamma0", "Gamma_eff / Gamma0", false, true, {std::move(s)}});
}

} // namespace

double PointResult::metric(const std::string& name) const {
    for (const auto& [k, v] : metrics) {
        if (k == name) {
            return v;
        }
    }
    throw InvalidArgument("no metric '" + name + "'");
}

std::string primary_metric(Analysis analysis) {
    switch (analysis) {
    case Analysis::geometry: return "n_emitters";
    case Analysis::coupling: return "nn_coherent";
    case Analysis::transport: return "eta";
    case Analysis::bands: return "min_gap_over_J";
    case Analysis::zak: return "phase";
    case Analysis::edges: return "max_edge_weight";
    case Analysis::steady: return "normalized_rate";
    case Analysis::analytics: return "effective_decay";
    }
    return "eta";
}

PointResult evaluate_point(const ScenarioConfig& cfg, std::uint64_t seed, bool detailed) {
    PointResult out;
    const EmitterEnsemble ens = realize(cfg, seed);
    switch (cfg.analysis) {
    case Analysis::geometry: run_geometry(cfg, ens, detailed, out); break;
    case Analysis::coupling: run_coupling(cfg, ens, detailed, out); break;
    case Analysis::transport: run_transport(cfg, ens, detailed, out); break;
    case Analysis::bands: run_bands(cfg, ens, detailed, out); break;
    case Analysis::zak: run_zak(cfg, ens, detailed, out); break;
    case Analysis::edges: run_edges(cfg, ens, detailed, out); break;
    case Analysis::steady: run_steady(cfg, ens, detailed, out); break;
    case Analysis::analytics: run_analytics(cfg, ens, detailed, out); break;
    }
    return out;
}

EnsembleResult reduce_ensemble(std::vector<double> values, std::vector<std::uint64_t> seeds) {
    if (values.empty() || values.size() != seeds.size()) {
        throw InvalidArgument("reduce_ensemble: one seed per value, at least one value");
    }
    EnsembleResult r;
    const double n = static_cast<double>(values.size());
    r.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - r.mean) * (v - r.mean);
        }
        r.std = std::sqrt(ss / (n - 1.0));
    }
    r.values = std::move(values);
    r.seeds = std::move(seeds);
    return r;
}

namespace {

struct GridPoint {
    std::vector<std::pair<std::string, double>> values; // axis and linked parameters
};

std::vector<GridPoint> sweep_grid(const std::vector<SweepAxis>& axes) {
    std::vector<GridPoint> grid(1);
    for (const auto& axis : axes) {
        std::vector<GridPoint> next;
        for (const auto& g : grid) {
            for (std::size_t i = 0; i < axis.values.size(); ++i) {
                GridPoint p = g;
                p.values.emplace_back(axis.parameter, axis.values[i]);
                for (const auto& [name, vals] : axis.linked) {
                    p.values.emplace_back(name, vals[i]);
                }
                next.push_back(std::move(p));
            }
        }
        grid = std::move(next);
    }
    return grid;
}

json number_value(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        return static_cast<std::int64_t>(v);
    }
    return v;
}

std::string describe(const GridPoint& p) {
    std::string s;
    for (const auto& [k, v] : p.values) {
        s += (s.empty() ? "" : ", ") + k + "=" + fmt(v);
    }
    return s;
}

// Prefix compute errors with where they happened; keeps the error category.
[[noreturn]] void rethrow_with_context(const std::string& context) {
    try {
        throw;
    } catch (const ConfigError& e) {
        throw ConfigError(context + ": " + e.what());
    } catch (const NumericError& e) {
        throw NumericError(context + ": " + e.what());
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(context + ": " + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(context + ": " + e.what());
    }
}

json units_json() {
    return json{{"length", "lambda0 (free-space wavelength)"},
                {"rate", "Gamma0 (single-emitter decay rate)"},
                {"energy", "hbar Gamma0; detunings are omega - omega0"},
                {"time", "1 / Gamma0"}};
}

json thresholds_json(const ScenarioConfig& cfg) {
    return json{{"fidelity_threshold", fidelity_threshold},
                {"edge_threshold", edge_threshold},
                {"detuning_step", cfg.physics.detuning_step},
                {"detuning_tolerance", cfg.physics.detuning_tol},
                {"budget_tolerance", 1e-4},
                {"rcond_floor", 1e-14},
                {"std", "sample standard deviation (n - 1)"}};
}

} // namespace

RunSummary run_scenario(json doc, const RunOptions& options) {
    for (const auto& o : options.overrides) {
        apply_override(doc, o);
    }
    const ScenarioConfig cfg = parse_config(doc);
    RunSummary result;
    result.config_hash = fnv1a_hex(canonical_dump(doc));
    result.directory = !options.output_dir.empty()        ? options.output_dir
                       : !cfg.output.directory.empty()    ? cfg.output.directory
                                                          : (fs::path("runs") / cfg.name).string();

    const std::vector<GridPoint> grid = sweep_grid(cfg.sweep);
    std::vector<ScenarioConfig> point_cfgs;
    point_cfgs.reserve(grid.size());
    for (const auto& g : grid) {
        if (cfg.sweep.empty()) {
            point_cfgs.push_back(cfg);
            continue;
        }
        json point = doc;
        point.erase("sweep");
        for (const auto& [k, v] : g.values) {
            set_path(point, k, number_value(v));
        }
        try {
            point_cfgs.push_back(parse_config(point));
        } catch (...) {
            rethrow_with_context("sweep point " + describe(g));
        }
    }

    const auto realizations = static_cast<std::size_t>(cfg.disorder.realizations);
    std::vector<std::uint64_t> seeds(realizations);
    for (std::size_t r = 0; r < realizations; ++r) {
        seeds[r] = realization_seed(cfg.disorder.seed, r);
    }
    const bool single = cfg.sweep.empty();
    const std::size_t tasks = grid.size() * realizations;
    const unsigned workers = options.jobs > 0 ? static_cast<unsigned>(options.jobs) : default_workers();
    std::vector<PointResult> results = parallel_map<PointResult>(tasks, workers, [&](std::size_t i) {
        const std::size_t p = i / realizations;
        const std::size_t r = i % realizations;
        try {
            return evaluate_point(point_cfgs[p], seeds[r], single && r == 0);
        } catch (...) {
            std::string ctx = "scenario '" + cfg.name + "'";
            if (!single) {
                ctx += ", point " + describe(grid[p]);
            }
            if (cfg.disorder.kind != DisorderKind::none) {
                ctx += ", seed " + std::to_string(seeds[r]);
            }
            rethrow_with_context(ctx);
        }
    });

    // metric names are fixed per analysis; the last result never carries the
    // extra entries of a detailed run
    std::vector<std::string> names;
    for (const auto& [k, v] : results.back().metrics) {
        names.push_back(k);
    }
    std::vector<std::string> warnings;
    for (const auto& r : results) {
        for (const auto& w : r.warnings) {
            if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) {
                warnings.push_back(w);
            }
        }
    }
    auto metric_of = [&](std::size_t p, std::size_t r, std::size_t m) {
        const auto& metrics = results[p * realizations + r].metrics;
        return m < metrics.size() ? metrics[m].second : nan;
    };

    json summary;
    summary["name"] = cfg.name;
    summary["analysis"] = std::string(to_string(cfg.analysis));
    summary["config_hash"] = result.config_hash;
    summary["points"] = grid.size();
    summary["realizations"] = realizations;
    summary["coupling_scale"] = cfg.coupling_scale;

    std::vector<std::pair<std::string, Table>> tables;
    std::vector<LinePlot> plots;
    std::vector<std::string> axis_columns;
    for (const auto& [k, v] : grid.front().values) {
        axis_columns.push_back(k);
    }

    if (single) {
        json metrics = json::object();
        for (std::size_t m = 0; m < names.size(); ++m) {
            std::vector<double> vals;
            for (std::size_t r = 0; r < realizations; ++r) {
                vals.push_back(metric_of(0, r, m));
            }
            if (realizations == 1) {
                metrics[names[m]] = vals[0];
            } else {
                const EnsembleResult e = reduce_ensemble(vals, seeds);
                metrics[names[m]] = json{{"mean", e.mean}, {"std", e.std}};
            }
        }
        // the first realization's detailed metrics may carry extra entries
        for (std::size_t m = names.size(); m < results.front().metrics.size(); ++m) {
            metrics[results.front().metrics[m].first] = results.front().metrics[m].second;
        }
        summary["metrics"] = metrics;
        tables = results.front().tables;
        plots = results.front().plots;
    } else {
        Table sweep;
        sweep.columns = axis_columns;
        for (const auto& n : names) {
            if (realizations == 1) {
                sweep.columns.push_back(n);
            } else {
                sweep.columns.push_back(n + "_mean");
                sweep.columns.push_back(n + "_std");
            }
        }
        for (std::size_t p = 0; p < grid.size(); ++p) {
            std::vector<std::string> row;
            for (const auto& [k, v] : grid[p].values) {
                row.push_back(fmt(v));
            }
            for (std::size_t m = 0; m < names.size(); ++m) {
                if (realizations == 1) {
                    row.push_back(fmt(metric_of(p, 0, m)));
                } else {
                    std::vector<double> vals;
                    for (std::size_t r = 0; r < realizations; ++r) {
                        vals.push_back(metric_of(p, r, m));
                    }
                    const EnsembleResult e = reduce_ensemble(vals, seeds);
                    row.push_back(fmt(e.mean));
                    row.push_back(fmt(e.std));
                }
            }
            sweep.add_row(std::move(row));
        }

        const std::string primary = primary_metric(cfg.analysis);
        const std::string primary_col = realizations == 1 ? primary : primary + "_mean";
        const std::vector<double> values = sweep.column(primary_col);
        std::size_t best = 0;
        for (std::size_t p = 1; p < values.size(); ++p) {
            if (std::isfinite(values[p]) && (!std::isfinite(values[best]) || values[p] > values[best])) {
                best = p;
            }
        }
        json best_point = json::object();
        for (const auto& [k, v] : grid[best].values) {
            best_point[k] = number_value(v);
        }
        summary["primary_metric"] = primary;
        summary["best_point"] = best_point;
        summary["best_value"] = values[best];

        if (cfg.sweep.size() == 1) {
            const auto x = sweep.column(cfg.sweep[0].parameter);
            const bool logx = cfg.sweep[0].values.front() > 0 && cfg.sweep[0].values.size() > 2 &&
                              cfg.sweep[0].values.back() / cfg.sweep[0].values.front() > 99.0;
            plots.push_back({"sweep", cfg.sweep[0].parameter, primary, logx, false, {{primary, x, values, false}}});
        } else if (cfg.sweep.size() == 2) {
            const auto& outer = cfg.sweep[0];
            const auto& inner = cfg.sweep[1];
            const bool logx = inner.values.front() > 0 && inner.values.size() > 2 &&
                              inner.values.back() / inner.values.front() > 99.0;
            LinePlot lines{"sweep", inner.parameter, primary, logx, false, {}};
            Heatmap map{"sweep_map", inner.parameter, outer.parameter, inner.values, outer.values, {}};
            for (std::size_t i = 0; i < outer.values.size(); ++i) {
                Series s{outer.parameter.substr(outer.parameter.find('.') + 1) + " = " + fmt(outer.values[i]), inner.values, {}, false};
                for (std::size_t j = 0; j < inner.values.size(); ++j) {
                    s.y.push_back(values[i * inner.values.size() + j]);
                }
                map.values.push_back(s.y);
                lines.series.push_back(std::move(s));
            }
            if (outer.values.size() <= 10) {
                plots.push_back(std::move(lines));
            }
            if (cfg.output.plot) {
                fs::create_directories(result.directory);
                write_text((fs::path(result.directory) / "sweep_map.svg").string(), render_svg(map));
                result.files.push_back("sweep_map.svg");
            }
        }
        tables.emplace_back("sweep", std::move(sweep));
    }

    if (realizations > 1) {
        Table per;
        per.columns = axis_columns;
        per.columns.push_back("realization");
        per.columns.push_back("seed");
        per.columns.insert(per.columns.end(), names.begin(), names.end());
        for (std::size_t p = 0; p < grid.size(); ++p) {
            for (std::size_t r = 0; r < realizations; ++r) {
                std::vector<std::string> row;
                for (const auto& [k, v] : grid[p].values) {
                    row.push_back(fmt(v));
                }
                row.push_back(fmt(r));
                row.push_back(std::to_string(seeds[r]));
                for (std::size_t m = 0; m < names.size(); ++m) {
                    row.push_back(fmt(metric_of(p, r, m)));
                }
                per.add_row(std::move(row));
            }
        }
        tables.emplace_back("realizations", std::move(per));
    }
    summary["warnings"] = warnings;
    result.summary = summary;
    if (!options.write_files) {
        return result;
    }

    fs::create_directories(result.directory);
    const std::vector<std::pair<std::string, std::string>> header = {
        {"config_hash", result.config_hash},
        {"seed", std::to_string(cfg.disorder.seed)},
        {"scenario", cfg.name},
        {"analysis", std::string(to_string(cfg.analysis))}};
    for (const auto& [stem, table] : tables) {
        write_csv((fs::path(result.directory) / (stem + ".csv")).string(), table, header);
        result.files.push_back(stem + ".csv");
    }
    if (cfg.output.plot) {
        for (const auto& plot : plots) {
            write_text((fs::path(result.directory) / (plot.title + ".svg")).string(), render_svg(plot));
            result.files.push_back(plot.title + ".svg");
        }
    } else {
        std::erase(result.files, "sweep_map.svg");
    }
    write_text((fs::path(result.directory) / "summary.json").string(), summary.dump(2) + "\n");
    result.files.push_back("summary.json");
    std::sort(result.files.begin(), result.files.end());

    json manifest;
    manifest["version"] = version;
    manifest["scenario"] = cfg.name;
    manifest["recipe"] = options.recipe;
    manifest["config_hash"] = result.config_hash;
    manifest["config"] = doc;
    manifest["overrides"] = options.overrides;
    manifest["seeds"] = seeds;
    manifest["units"] = units_json();
    manifest["index_convention"] = std::string(EmitterEnsemble::index_convention);
    manifest["thresholds"] = thresholds_json(cfg);
    json files = json::object();
    for (const auto& f : result.files) {
        files[f] = fnv1a_hex(read_text((fs::path(result.directory) / f).string()));
    }
    manifest["files"] = files;
    write_text((fs::path(result.directory) / "manifest.json").string(), manifest.dump(2) + "\n");
    result.files.push_back("manifest.json");
    return result;
}

RunSummary rerun_manifest(const std::string& manifest_path, RunOptions options) {
    const json manifest = load_json_file(manifest_path);
    if (!manifest.contains("config") || !manifest["config"].is_object()) {
        throw ConfigError(manifest_path + ": no config object in manifest");
    }
    if (options.output_dir.empty()) {
        options.output_dir = fs::path(manifest_path).parent_path().string();
    }
    if (options.recipe.empty() && manifest.contains("recipe") && manifest["recipe"].is_string()) {
        options.recipe = manifest["recipe"].get<std::string>();
    }
    // the stored config already has the original overrides applied
    const std::vector<std::string> extra = options.overrides;
    options.overrides.clear();
    json doc = manifest["config"];
    for (const auto& o : extra) {
        apply_override(doc, o);
    }
    RunSummary s = run_scenario(doc, options);
    return s;
}

std::vector<RunSummary> reproduce(const std::string& id, const RunOptions& options) {
    const json r = recipe(id);
    const json& parts = r["parts"];
    const std::string base = options.output_dir.empty() ? (fs::path("runs") / id).string() : options.output_dir;
    std::vector<RunSummary> out;
    for (const auto& part : parts) {
        RunOptions o = options;
        o.recipe = id;
        o.output_dir = parts.size() == 1 ? base : (fs::path(base) / part["name"].get<std::string>()).string();
        out.push_back(run_scenario(part, o));
    }
    return out;
}

} // namespace ringlight
