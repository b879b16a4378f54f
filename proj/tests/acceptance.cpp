// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "random_scenarios.hpp"

#include "ringlight/bloch.hpp"
#include "ringlight/config.hpp"
#include "ringlight/coupling.hpp"
#include "ringlight/dynamics.hpp"
#include "ringlight/errors.hpp"
#include "ringlight/geometry.hpp"
#include "ringlight/hamiltonian.hpp"
#include "ringlight/optimize.hpp"
#include "ringlight/output.hpp"
#include "ringlight/rng.hpp"
#include "ringlight/runner.hpp"
#include "ringlight/spectrum.hpp"
#include "ringlight/steadystate.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace ringlight;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(const std::string& id, const std::string& what, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.pass ? 0 : 1;
    std::printf("%-4s %s  %s | %s [%.1fs]\n", id.c_str(), o.pass ? "PASS" : "FAIL", what.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

double circular(double a, double b) {
    const double d = std::fmod(std::abs(a - b), 2.0 * pi);
    return std::min(d, 2.0 * pi - d);
}

EmitterEnsemble ring_chain(int ring_size, int rings, double spacing, double gap, bool donor_acceptor) {
    GeometrySpec g;
    g.kind = GeometryKind::ring_chain;
    g.ring_size = ring_size;
    g.rings_x = rings;
    g.spacing = spacing;
    g.ring_gap = gap;
    g.with_donor_acceptor = donor_acceptor;
    return build_geometry(g);
}

EffectiveHamiltonian bare(const EmitterEnsemble& e) { return assemble_effective(e, coupling_matrices(e)); }

double eta_at(const json& doc, std::uint64_t seed = 1) {
    return evaluate_point(parse_config(doc), seed, false).metric("eta");
}

// --- criteria ---

Outcome green_baseline() {
    const CVec3 p = circular_polarization();
    const double j = coherent_coupling(green_projected(Vec3(0.06, 0, 0), p, p));
    GeometrySpec g;
    g.kind = GeometryKind::free_pair;
    g.spacing = 0.06;
    const CouplingMatrices c = coupling_matrices(build_geometry(g));
    const double diag_err = (c.dissipative.diagonal().array() - gamma0).abs().maxCoeff();
    const bool ok = std::abs(j / -8.4 - 1.0) < 0.03 && diag_err < 1e-12;
    return {ok, "J(0.06) = " + fmt(j) + ", |Gamma_nn - 1| = " + fmt(diag_err)};
}

Outcome spin_waves() {
    double worst = 0.0;
    for (int n : {6, 8, 9}) {
        for (const auto& w : spin_wave_spectrum(build_ring(n, 0.05))) {
            worst = std::max(worst, w.residual);
        }
    }
    double dicke_err = 0.0;
    for (int n : {6, 8, 9}) {
        Eigen::ComplexEigenSolver<CMatrix> es(ideal_dicke_hamiltonian(n).matrix);
        dicke_err = std::max(dicke_err, std::abs(-2.0 * es.eigenvalues().imag().minCoeff() - n));
    }
    return {worst < 1e-10 && dicke_err < 1e-12,
            "max residual " + fmt(worst) + ", |Gamma~0 - N_R| = " + fmt(dicke_err)};
}

Outcome subradiant_donor() {
    GeometrySpec g;
    g.kind = GeometryKind::single_ring;
    g.ring_size = 9;
    g.spacing = 0.05;
    g.center_donor = true;
    const SingleRingAnalytics a = ring_center_analytics(build_geometry(g));
    const double dicke = dicke_center_donor_fraction(9);
    const bool ok = a.effective_decay <= 1e-3 && std::abs(a.optimal_detuning) < 0.5 && std::abs(dicke - 0.9) < 1e-10;
    return {ok, "Gamma_eff = " + fmt(a.effective_decay) + ", Delta_sub = " + fmt(a.optimal_detuning) +
                    " (closed-form estimate " + fmt(a.detuning_estimate) + "), Dicke fraction " + fmt(dicke)};
}

Outcome transport_threshold() {
    json doc = recipe("fig1c")["parts"][0];
    doc.erase("sweep");
    auto eta = [&](int n) {
        doc["geometry"]["ring_size"] = n;
        return eta_at(doc);
    };
    const double e9 = eta(9), e5 = eta(5), e4 = eta(4);
    return {e9 > 0.5 && e4 < 0.1 && e9 > e5,
            "eta(9) = " + fmt(e9) + ", eta(5) = " + fmt(e5) + ", eta(4) = " + fmt(e4)};
}

Outcome conservation() {
    testing::BudgetCheck worst;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto b = testing::check_budget(testing::random_hamiltonian(testing::random_case(1000 + s)));
        worst.max_budget_error = std::max(worst.max_budget_error, b.max_budget_error);
        worst.max_norm_increase = std::max(worst.max_norm_increase, b.max_norm_increase);
        worst.max_eta_decrease = std::max(worst.max_eta_decrease, b.max_eta_decrease);
    }
    const bool ok = worst.max_budget_error < 1e-6 && worst.max_norm_increase <= 1e-12 && worst.max_eta_decrease <= 1e-12;
    return {ok, "100 geometries: budget error " + fmt(worst.max_budget_error) + ", norm increase " +
                    fmt(worst.max_norm_increase) + ", eta decrease " + fmt(worst.max_eta_decrease)};
}

struct RatioScan {
    std::vector<double> ratio;
    std::vector<BandStructure> bands;
    double coupling = 0.0;
};

RatioScan band_scan(int ring_size) {
    RatioScan s;
    const CVec3 p = circular_polarization();
    s.coupling = std::abs(coherent_coupling(green_projected(Vec3(0.05, 0, 0), p, p)));
    for (int i = 0; i <= 50; ++i) {
        const double r = 0.2 + 0.02 * i;
        const EmitterEnsemble e = ring_chain(ring_size, 10, 0.05, r * 0.05, false);
        ModeSet modes = diagonalize(bare(e));
        recombine_degenerate(modes, e);
        s.ratio.push_back(r);
        s.bands.push_back(classify_bands(modes, e));
    }
    return s;
}

double optimized_eta(int ring_size, double ratio) {
    json doc = recipe("fig2e")["parts"][0];
    doc.erase("sweep");
    doc["geometry"]["ring_size"] = ring_size;
    doc["geometry"]["ring_gap_ratio"] = ratio;
    return eta_at(doc);
}

Outcome edge_criticality() {
    bool ok = true;
    std::string detail;
    for (const auto& [n, target] : {std::pair{8, 0.58}, std::pair{9, 0.34}}) {
        const RatioScan s = band_scan(n);
        double best = 2.0, at = 0.0;
        for (std::size_t i = 0; i < s.ratio.size(); ++i) {
            if (!s.bands[i].edge_states.empty() && s.bands[i].min_bulk_weight < best) {
                best = s.bands[i].min_bulk_weight;
                at = s.ratio[i];
            }
        }
        const double e_crit = optimized_eta(n, at);
        const double e_ref = optimized_eta(n, 0.9);
        const double e_target = optimized_eta(n, target);
        const bool here = std::abs(at - target) <= 0.05 && e_crit < 0.25 * e_ref;
        ok = ok && here;
        detail += "N_R=" + std::to_string(n) + ": min bulk weight " + fmt(best) + " at d_R/d = " + fmt(at) +
                  " (target " + fmt(target) + "), eta " + fmt(e_crit) + " vs " + fmt(e_ref) + " at 0.9 (" + fmt(e_target) +
                  " at the target spacing); ";
    }
    return {ok, detail};
}

Outcome gap_optimum() {
    const RatioScan s = band_scan(9);
    std::vector<double> gap;
    for (const auto& b : s.bands) {
        gap.push_back(b.has_gap ? b.min_gap() / s.coupling : 0.0);
    }
    bool found = false;
    double where = 0.0, value = 0.0;
    for (std::size_t i = 1; i + 1 < gap.size(); ++i) {
        const bool peak = gap[i] > 0.0 && gap[i] >= gap[i - 1] && gap[i] >= gap[i + 1] &&
                          (gap[i] > gap[i - 1] || gap[i] > gap[i + 1]);
        if (peak && s.ratio[i] >= 0.8 - 1e-9 && s.ratio[i] <= 1.0 + 1e-9) {
            found = true;
            where = s.ratio[i];
            value = gap[i];
        }
    }
    const auto top = std::max_element(gap.begin(), gap.end());
    std::string detail = found ? "local maximum " + fmt(value) + " at d_R/d = " + fmt(where)
                               : "no local maximum in [0.8, 1.0]";
    detail += "; global maximum " + fmt(*top) + " at " + fmt(s.ratio[static_cast<std::size_t>(top - gap.begin())]);
    return {found, detail};
}

Outcome zak() {
    const BlochChain chain(9, 0.05, 0.045);
    std::vector<CVector> states = lowest_band_states(chain, 128);
    const double before = wilson_loop_phase(states).phase;
    Rng rng(17);
    for (auto& v : states) {
        v *= std::polar(1.0, rng.uniform(0.0, 2.0 * pi));
    }
    const double gauge = circular(wilson_loop_phase(states).phase, before);
    const double conv = circular(zak_phase(chain, 128).phase, zak_phase(chain, 256).phase);
    const double ref = zak_phase(BlochChain(9, 0.05, 0.1), 128).phase;
    const double sep = circular(before, ref);
    return {gauge < 1e-8 && conv < 1e-4 && sep > 1.0, "gauge " + fmt(gauge) + ", doubling " + fmt(conv) +
                                                          ", phase " + fmt(before) + " vs reference " + fmt(ref)};
}

Outcome zeno_oracle() {
    double worst = 0.0;
    for (double gt : {0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0}) {
        EffectiveHamiltonian h;
        h.matrix = CMatrix::Constant(1, 1, cplx(0.0, -0.5 * (1.0 + gt)));
        h.trap_rates = RVector::Constant(1, gt);
        h.acceptor = 0;
        DriveVector f;
        f.rabi = 1e-3;
        f.amplitudes = RVector::Constant(1, 1e-3);
        const double exact = 4e-6 * gt / ((1.0 + gt) * (1.0 + gt));
        worst = std::max(worst, std::abs(solve_steady_state(h, f).trap_rate - exact) / exact);
    }
    const ScanResult best =
        maximize_scalar([](double g) { return single_emitter_trap_rate(1e-3, g); }, 0.01, 10.0, 0.05, 1e-9);

    // driven time evolution relaxes onto the linear-solve steady state
    const EmitterEnsemble e = ring_chain(9, 3, 0.06, 0.054, true);
    const EffectiveHamiltonian h = retune(bare(e), e, -2.0, 1.0);
    const DriveVector f = gaussian_drive(e, 1e-3, 0.3, e[*e.donor_index()].position);
    const CVector ss = solve_steady_state(h, f).amplitudes;
    AmplitudeState ground;
    ground.amplitudes = CVector::Zero(h.size());
    // long enough for the slowest mode to fall below 1e-9 in amplitude
    const double slowest = diagonalize(h).eigenvalues.imag().cwiseAbs().minCoeff();
    const double horizon = std::log(1e9) / slowest;
    const TransportTrace from_ground = evolve(h, ground, {0.0, horizon}, &f, true);
    const double drift = (from_ground.states.back() - ss).norm() / ss.norm();
    const bool ok = worst < 1e-10 && std::abs(best.x - 1.0) < 1e-3 && drift < 1e-6;
    return {ok, "relative error " + fmt(worst) + ", argmax Gamma_T = " + fmt(best.x) + ", driven vs steady " + fmt(drift) +
                    " at t = " + fmt(horizon)};
}

double best_steady(json doc, double over_coupling) {
    doc.erase("sweep");
    doc["physics"]["trap_rates_over_coupling"] = json::array({over_coupling});
    double best = 0.0;
    for (double w : {0.3, 3.0}) {
        doc["physics"]["waist"] = w;
        best = std::max(best, evaluate_point(parse_config(doc), 1, false).metric("normalized_rate"));
    }
    return best;
}

Outcome ring_lattice_trapping() {
    const double ring = best_steady(recipe("fig5d")["parts"][0], 0.01);
    const double honey = best_steady(recipe("fig5b")["parts"][0], 0.01);
    return {ring >= 50.0 && ring >= 10.0 * honey,
            "ring lattice " + fmt(ring) + ", honeycomb " + fmt(honey) + " (ratio " + fmt(ring / honey) + ")"};
}

Outcome group_velocity() {
    bool ok = true;
    std::string detail;
    const auto coarse_traps = logspace(0.01, 100.0, 9);
    const auto fine_traps = logspace(0.01, 100.0, 41);
    for (int n : {8, 9, 10}) {
        const double d = 2.0 * 0.08 * std::sin(pi / n);
        const double gap = (n % 2 == 0 ? 1.0 : 0.8660254037844386) * d;
        const EmitterEnsemble e = ring_chain(n, 10, d, gap, true);
        const EffectiveHamiltonian h0 = bare(e);
        auto eta = [&](double delta, double gt) { return transport_efficiency(retune(h0, e, delta, gt), 150.0); };
        double best_delta = 0.0, best_eta = -1.0;
        for (int i = 0; i <= 60; ++i) {
            const double delta = -15.0 + 0.5 * i;
            for (double gt : coarse_traps) {
                const double v = eta(delta, gt);
                if (v > best_eta) {
                    best_eta = v;
                    best_delta = delta;
                }
            }
        }
        auto argmax_trap = [&](double delta) {
            double at = 0.0, top = -1.0;
            for (double gt : fine_traps) {
                const double v = eta(delta, gt);
                if (v > top) {
                    top = v;
                    at = gt;
                }
            }
            return at;
        };
        const double opt = argmax_trap(best_delta);
        const BlochChain chain(n, d, gap);
        std::string estimate;
        bool here = false;
        try {
            const BandCrossing x = group_velocity_and_optimal_trap(chain, best_delta);
            const double ratio = opt / x.optimal_trap;
            here = ratio >= 0.5 && ratio <= 2.0;
            estimate = "v_g/d~ " + fmt(x.optimal_trap) + ", ratio " + fmt(ratio);
        } catch (const NoResonantMode&) {
            estimate = "no resonant band";
        }
        std::string at_zero;
        try {
            const double r0 = argmax_trap(0.0) / group_velocity_and_optimal_trap(chain, 0.0).optimal_trap;
            at_zero = "; at Delta = 0 ratio " + fmt(r0);
        } catch (const NoResonantMode&) {
            at_zero = "; at Delta = 0 no resonant band";
        }
        ok = ok && here;
        detail += "N_R=" + std::to_string(n) + ": Delta " + fmt(best_delta) + ", Gamma_T^opt " + fmt(opt) + ", " +
                  estimate + at_zero + "; ";
    }
    return {ok, detail};
}

Outcome disorder_robustness() {
    const json parts = recipe("fig4c")["parts"];
    json ring = parts[0];
    ring.erase("sweep");
    ring["disorder"]["sigma_over_coupling"] = 0.25;
    const std::uint64_t base = ring["disorder"]["seed"].get<std::uint64_t>();
    const int realizations = ring["disorder"]["realizations"].get<int>();
    auto ring_mean = [&](double over) {
        ring["physics"]["trap_over_coupling"] = over;
        const ScenarioConfig cfg = parse_config(ring);
        double sum = 0.0;
        for (int i = 0; i < realizations; ++i) {
            sum += evaluate_point(cfg, realization_seed(base, static_cast<std::uint64_t>(i)), false).metric("eta");
        }
        return sum / realizations;
    };
    double worst = 1.0;
    for (double over : logspace(0.05, 0.5, 5)) {
        worst = std::min(worst, ring_mean(over));
    }
    json pair = parts[1];
    pair.erase("sweep");
    bool below = true;
    std::string pairs;
    for (double over : {0.01, 0.03}) {
        pair["physics"]["trap_over_coupling"] = over;
        const double p = eta_at(pair);
        const double r = ring_mean(over);
        below = below && p < r;
        pairs += " " + fmt(over) + ": pair " + fmt(p) + " vs ring " + fmt(r) + ";";
    }
    return {worst >= 0.5 && below, "min mean eta over [0.05, 0.5] " + fmt(worst) + ";" + pairs};
}

Outcome determinism() {
    bool ok = true;
    std::string detail;
    for (const std::string id : {"fig1c", "fig4c"}) {
        const fs::path base = fs::temp_directory_path() / ("ringlight_accept_" + id);
        fs::remove_all(base);
        RunOptions opt;
        opt.output_dir = (base / "first").string();
        const auto runs = reproduce(id, opt);
        int compared = 0;
        for (const auto& run : runs) {
            RunOptions again;
            const fs::path second = base / "second" / fs::path(run.directory).filename();
            again.output_dir = second.string();
            rerun_manifest(run.directory + "/manifest.json", again);
            for (const auto& entry : fs::directory_iterator(run.directory)) {
                if (entry.path().extension() != ".csv") {
                    continue;
                }
                const fs::path other = second / entry.path().filename();
                ++compared;
                if (!fs::exists(other) || read_text(entry.path().string()) != read_text(other.string())) {
                    ok = false;
                    detail += "differs: " + entry.path().filename().string() + "; ";
                }
            }
        }
        detail += id + ": " + std::to_string(compared) + " CSV files compared; ";
    }
    return {ok, detail};
}

} // namespace

int main() {
    criterion("C1", "Green's-function baseline", green_baseline);
    criterion("C2", "spin-wave oracle", spin_waves);
    criterion("C3", "subradiant donor", subradiant_donor);
    criterion("C4", "transport threshold", transport_threshold);
    criterion("C5", "conservation", conservation);
    criterion("C6", "edge-state criticality", edge_criticality);
    criterion("C7", "band-gap optimum", gap_optimum);
    criterion("C8", "Zak phase", zak);
    criterion("C9", "Zeno / steady-state oracle", zeno_oracle);
    criterion("C10", "ring-lattice trapping advantage", ring_lattice_trapping);
    criterion("C11", "optimal trap vs group velocity", group_velocity);
    criterion("C12", "disorder robustness", disorder_robustness);
    criterion("C13", "determinism", determinism);
    std::printf("%d of 13 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
