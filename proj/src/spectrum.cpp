#include "ringlight/spectrum.hpp"

#include "ringlight/coupling.hpp"
#include "ringlight/errors.hpp"
#include "ringlight/linalg.hpp"
#include "ringlight/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace ringlight {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

bool is_chain(const EmitterEnsemble& e) {
    const auto kind = e.metadata().kind;
    return kind == GeometryKind::ring_chain || kind == GeometryKind::single_ring;
}

EmitterEnsemble ring_subensemble(const EmitterEnsemble& ens, int ring) {
    const auto members = ens.ring_members(ring);
    if (members.size() < 3) {
        throw WrongGeometry("expected a ring of at least three emitters");
    }
    std::vector<DipoleEmitter> emitters;
    for (auto i : members) {
        emitters.push_back(ens[i]);
    }
    return EmitterEnsemble(std::move(emitters), ens.metadata());
}

} // namespace

ModeSet diagonalize(const CMatrix& h) {
    Eigensystem es = eigensystem(h);
    const Eigen::Index n = es.values.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const cplx la = es.values(a);
        const cplx lb = es.values(b);
        if (la.real() != lb.real()) {
            return la.real() < lb.real();
        }
        return la.imag() > lb.imag();
    });
    ModeSet out;
    out.eigenvalues.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.eigenvalues(i) = es.values(order[static_cast<std::size_t>(i)]);
        out.vectors.col(i) = es.vectors.col(order[static_cast<std::size_t>(i)]);
    }
    if (n > 0) {
        const CMatrix r = h * out.vectors - out.vectors * out.eigenvalues.asDiagonal();
        out.max_residual = r.colwise().norm().maxCoeff();
    }
    return out;
}

std::vector<int> angular_momenta(int ring_size) {
    std::vector<int> ms;
    for (int m = -((ring_size - 1) / 2); m <= ring_size / 2; ++m) {
        ms.push_back(m);
    }
    return ms;
}

std::vector<SpinWaveState> spin_wave_spectrum(const EmitterEnsemble& ring_ensemble) {
    const EmitterEnsemble ring = ring_subensemble(ring_ensemble, 0);
    const auto n = static_cast<Eigen::Index>(ring.size());
    const CouplingMatrices c = coupling_matrices(ring);
    for (Eigen::Index a = 1; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            const Eigen::Index shifted = (b - a + n) % n;
            if (std::abs(c.coherent(a, b) - c.coherent(0, shifted)) > 1e-10 ||
                std::abs(c.dissipative(a, b) - c.dissipative(0, shifted)) > 1e-10) {
                throw WrongGeometry("spin_wave_spectrum: ring coupling matrix is not circulant");
            }
        }
    }
    const EffectiveHamiltonian h = assemble_effective(ring, c);
    std::vector<SpinWaveState> out;
    for (int m : angular_momenta(static_cast<int>(n))) {
        SpinWaveState s;
        s.m = m;
        s.amplitudes.resize(n);
        cplx shift = 0.0;
        cplx decay = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const cplx phase = std::polar(1.0, 2.0 * pi * m * j / n);
            s.amplitudes(j) = phase / std::sqrt(static_cast<double>(n));
            shift += phase * c.coherent(0, j);
            decay += phase * c.dissipative(0, j);
        }
        s.shift = shift.real();
        s.decay = decay.real();
        const cplx lambda(s.shift, -0.5 * s.decay);
        s.residual = (h.matrix * s.amplitudes - lambda * s.amplitudes).norm();
        out.push_back(std::move(s));
    }
    return out;
}

Eigen::Matrix2cd SingleRingAnalytics::reduced_matrix(double delta) const {
    const cplx c = std::sqrt(static_cast<double>(ring_size)) * cplx(donor_coupling, -0.5 * donor_decay);
    Eigen::Matrix2cd m;
    m << cplx(delta, -0.5 * gamma0), c, c, cplx(ring_shift, -0.5 * ring_decay);
    return m;
}

std::pair<cplx, cplx> SingleRingAnalytics::eigenvalues(double delta) const {
    const Eigen::Matrix2cd m = reduced_matrix(delta);
    const cplx a = m(0, 0);
    const cplx b = m(1, 1);
    const cplx c = m(0, 1);
    const cplx mean = 0.5 * (a + b);
    const cplx root = std::sqrt(0.25 * (a - b) * (a - b) + c * c);
    const cplx l1 = mean + root;
    const cplx l2 = mean - root;
    // eigenvector (c, lambda - a): donor fraction |c|^2 / (|c|^2 + |lambda - a|^2)
    const double d1 = std::norm(c) / (std::norm(c) + std::norm(l1 - a));
    const double d2 = std::norm(c) / (std::norm(c) + std::norm(l2 - a));
    if (std::norm(c) == 0.0) {
        return std::abs(l1 - a) < std::abs(l2 - a) ? std::pair{l1, l2} : std::pair{l2, l1};
    }
    return d1 >= d2 ? std::pair{l1, l2} : std::pair{l2, l1};
}

double SingleRingAnalytics::donor_fraction_at(double delta) const {
    const Eigen::Matrix2cd m = reduced_matrix(delta);
    const cplx lminus = eigenvalues(delta).first;
    const cplx c = m(0, 1);
    if (std::norm(c) == 0.0) {
        return 1.0;
    }
    return std::norm(c) / (std::norm(c) + std::norm(lminus - m(0, 0)));
}

SingleRingAnalytics ring_center_analytics(const EmitterEnsemble& ensemble, double lo, double hi,
                                          double step) {
    const EmitterEnsemble ring = ring_subensemble(ensemble, 0);
    const auto& meta = ensemble.metadata();
    Vec3 center = meta.ring_centers.empty() ? Vec3::Zero() : meta.ring_centers.front();
    CVec3 donor_pol = circular_polarization();
    if (const auto d = ensemble.donor_index()) {
        center = ensemble[*d].position;
        donor_pol = ensemble[*d].polarization;
    }
    SingleRingAnalytics out;
    out.ring_size = static_cast<int>(ring.size());
    const cplx g0 = green_projected(center - ring[0].position, donor_pol, ring[0].polarization);
    out.donor_coupling = coherent_coupling(g0);
    out.donor_decay = dissipative_coupling(g0);
    for (std::size_t j = 1; j < ring.size(); ++j) {
        const cplx g = green_projected(center - ring[j].position, donor_pol, ring[j].polarization);
        if (std::abs(g - g0) > 1e-10 * std::max(1.0, std::abs(g0))) {
            throw WrongGeometry("ring_center_analytics: donor is not at the ring centre");
        }
    }
    const auto waves = spin_wave_spectrum(ring);
    const auto zero = std::find_if(waves.begin(), waves.end(), [](const auto& s) { return s.m == 0; });
    out.ring_shift = zero->shift;
    out.ring_decay = zero->decay;
    if (meta.spacing > wavelength / 3.0) {
        out.warnings.push_back("spacing above lambda0/3: the donor-like branch may be misidentified");
    }
    const ScanResult best = minimize_scalar(
        [&](double delta) { return -2.0 * out.eigenvalues(delta).first.imag(); }, lo, hi, step, 1e-7);
    out.scan = best.trace;
    std::sort(out.scan.begin(), out.scan.end());
    out.optimal_detuning = best.x;
    out.effective_decay = best.value;
    out.donor_fraction = out.donor_fraction_at(best.x);
    // Estimate from expanding lambda_- for a nearly dark m = 0 wave, written in
    // the convention where the donor diagonal carries +Delta.
    out.detuning_estimate = out.ring_shift - out.donor_coupling * (out.ring_decay - gamma0);
    return out;
}

double dicke_center_donor_fraction(int ring_size) {
    if (ring_size < 1) {
        throw InvalidArgument("dicke_center_donor_fraction: ring_size must be positive");
    }
    SingleRingAnalytics a;
    a.ring_size = ring_size;
    a.donor_coupling = 0.0;
    a.donor_decay = gamma0;
    a.ring_shift = 0.0;
    a.ring_decay = ring_size * gamma0;
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(a.reduced_matrix(0.0));
    const auto& vals = solver.eigenvalues();
    const Eigen::Index dark = vals(0).imag() > vals(1).imag() ? 0 : 1;
    const Eigen::Vector2cd v = solver.eigenvectors().col(dark);
    return std::norm(v(0)) / v.squaredNorm();
}

std::vector<double> chain_momenta(int rings, double pitch) {
    if (rings < 1 || !(pitch > 0.0)) {
        throw InvalidArgument("chain_momenta: need rings >= 1 and pitch > 0");
    }
    std::vector<double> ks;
    for (int q = -((rings - 1) / 2); q <= rings / 2; ++q) {
        ks.push_back(2.0 * pi * q / (rings * pitch));
    }
    return ks;
}

CVector ansatz_state(const EmitterEnsemble& chain, int m, double k) {
    if (!is_chain(chain)) {
        throw WrongGeometry("ansatz_state: ring chain required");
    }
    const auto& meta = chain.metadata();
    const int nr = meta.ring_size;
    if (std::abs(m) > (nr) / 2) {
        std::ostringstream msg;
        msg << "ansatz_state: |m| = " << std::abs(m) << " exceeds " << nr / 2;
        throw InvalidArgument(msg.str());
    }
    const double pitch = meta.ring_pitch;
    if (!(k > -pi / pitch - 1e-12 && k <= pi / pitch + 1e-12)) {
        throw InvalidArgument("ansatz_state: k outside the Brillouin zone");
    }
    const auto n = static_cast<Eigen::Index>(chain.size());
    const double norm = std::sqrt(static_cast<double>(chain.lattice_count()));
    CVector out = CVector::Zero(n);
    for (int ring = 0; ring < chain.ring_count(); ++ring) {
        const auto members = chain.ring_members(ring);
        for (std::size_t j = 0; j < members.size(); ++j) {
            const double phase = 2.0 * pi * m * static_cast<double>(j) / nr + k * pitch * ring;
            out(static_cast<Eigen::Index>(members[j])) = std::polar(1.0 / norm, phase);
        }
    }
    return out;
}

int recombine_degenerate(ModeSet& modes, const EmitterEnsemble& ensemble, double tol) {
    if (modes.size() != static_cast<Eigen::Index>(ensemble.size())) {
        throw DimensionMismatch("recombine_degenerate: mode and ensemble sizes differ");
    }
    double mean_x = 0.0;
    for (const auto& e : ensemble.emitters()) {
        mean_x += e.position.x();
    }
    mean_x /= static_cast<double>(ensemble.size());
    RVector left(modes.size());
    for (Eigen::Index i = 0; i < left.size(); ++i) {
        left(i) = ensemble[static_cast<std::size_t>(i)].position.x() < mean_x ? 1.0 : 0.0;
    }
    int pairs = 0;
    for (Eigen::Index i = 0; i + 1 < modes.size(); ++i) {
        const cplx a = modes.eigenvalues(i);
        const cplx b = modes.eigenvalues(i + 1);
        if (std::abs(a - b) > tol * std::max(1.0, std::abs(a))) {
            continue;
        }
        Eigen::Matrix<cplx, Eigen::Dynamic, 2> basis(modes.size(), 2);
        basis.col(0) = modes.vectors.col(i);
        basis.col(1) = modes.vectors.col(i + 1);
        const Eigen::Matrix2cd gram = basis.adjoint() * basis;
        const Eigen::Matrix2cd proj = basis.adjoint() * left.asDiagonal() * basis;
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2cd> solver(proj, gram);
        if (solver.info() != Eigen::Success) {
            continue;
        }
        const auto mixed = (basis * solver.eigenvectors()).eval();
        // largest left weight first
        modes.vectors.col(i) = mixed.col(1).normalized();
        modes.vectors.col(i + 1) = mixed.col(0).normalized();
        ++pairs;
        ++i;
    }
    return pairs;
}

EdgeStateReport edge_localization(const ModeSet& input, const EmitterEnsemble& ensemble) {
    const auto& meta = ensemble.metadata();
    if (!is_ring_based(meta.kind) || ensemble.ring_count() < 1) {
        throw WrongGeometry("edge_localization: ring-based geometry required");
    }
    if (input.size() != static_cast<Eigen::Index>(ensemble.size())) {
        throw DimensionMismatch("edge_localization: mode and ensemble sizes differ");
    }
    ModeSet modes = input;
    recombine_degenerate(modes, ensemble);

    const int nx = meta.rings_x;
    const int ny = meta.rings_y;
    const int rings = ensemble.ring_count();
    std::vector<bool> edge_ring(static_cast<std::size_t>(rings), false);
    std::vector<bool> corner_ring(static_cast<std::size_t>(rings), false);
    for (int r = 0; r < rings; ++r) {
        const int i = r % nx;
        const int j = r / nx;
        const bool x_end = i == 0 || i == nx - 1;
        const bool y_end = j == 0 || j == ny - 1;
        if (ny <= 1) {
            edge_ring[static_cast<std::size_t>(r)] = x_end;
            corner_ring[static_cast<std::size_t>(r)] = x_end;
        } else {
            edge_ring[static_cast<std::size_t>(r)] = x_end || y_end;
            corner_ring[static_cast<std::size_t>(r)] = x_end && y_end;
        }
    }

    EdgeStateReport rep;
    const Eigen::Index n = modes.size();
    for (Eigen::Index k = 0; k < n; ++k) {
        const CVector v = modes.vectors.col(k).normalized();
        double edge = 0.0;
        double corner = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const int r = ensemble[static_cast<std::size_t>(i)].ring_index;
            if (r < 0 || ensemble[static_cast<std::size_t>(i)].role != Role::lattice) {
                continue;
            }
            const double p = std::norm(v(i));
            if (edge_ring[static_cast<std::size_t>(r)]) {
                edge += p;
            }
            if (corner_ring[static_cast<std::size_t>(r)]) {
                corner += p;
            }
        }
        rep.edge_weight.push_back(edge);
        rep.bulk_weight.push_back(1.0 - edge);
        rep.corner_weight.push_back(corner);
        rep.superradiant.push_back(modes.decay(k) > gamma0);
        if (edge > rep.threshold) {
            rep.edge_states.push_back(k);
        }
        if (corner > rep.threshold) {
            rep.corner_states.push_back(k);
        }
    }
    return rep;
}

BandStructure classify_bands(const ModeSet& input, const EmitterEnsemble& chain) {
    if (!is_chain(chain)) {
        throw WrongGeometry("classify_bands: ring chain required");
    }
    if (chain.donor_index() || chain.acceptor_index()) {
        throw WrongGeometry("classify_bands: expects the lattice-only chain");
    }
    if (input.size() != static_cast<Eigen::Index>(chain.size())) {
        throw DimensionMismatch("classify_bands: mode and ensemble sizes differ");
    }
    ModeSet modes = input;
    recombine_degenerate(modes, chain);
    const EdgeStateReport edges = edge_localization(modes, chain);

    const auto& meta = chain.metadata();
    const int nr = meta.ring_size;
    const double pitch = meta.ring_pitch > 0.0 ? meta.ring_pitch : 1.0;
    const std::vector<int> ms = angular_momenta(nr);
    const std::vector<double> ks = chain_momenta(chain.ring_count(), pitch);
    const Eigen::Index n = modes.size();

    // Labels (|m|, |k|): ansatz fidelities are summed over +-m and +-k.
    std::map<std::pair<int, long>, std::size_t> bins;
    std::vector<std::pair<int, double>> labels;
    CMatrix basis(n, static_cast<Eigen::Index>(ms.size() * ks.size()));
    std::vector<std::size_t> column_bin;
    Eigen::Index col = 0;
    for (int m : ms) {
        for (double k : ks) {
            basis.col(col++) = ansatz_state(chain, m, k);
            const long kq = std::lround(std::abs(k) * pitch * chain.ring_count() / (2.0 * pi));
            const auto key = std::pair{std::abs(m), kq};
            auto it = bins.find(key);
            if (it == bins.end()) {
                it = bins.emplace(key, labels.size()).first;
                labels.emplace_back(std::abs(m), std::abs(k));
            }
            column_bin.push_back(it->second);
        }
    }
    const RMatrix fid = (basis.adjoint() * modes.vectors).cwiseAbs2();

    BandStructure out;
    double sum0 = 0.0, sum1 = 0.0;
    int count0 = 0, count1 = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        std::vector<double> acc(labels.size(), 0.0);
        for (Eigen::Index c = 0; c < fid.rows(); ++c) {
            acc[column_bin[static_cast<std::size_t>(c)]] += fid(c, k);
        }
        const auto best = static_cast<std::size_t>(
            std::max_element(acc.begin(), acc.end()) - acc.begin());
        BandPoint p;
        p.mode = k;
        p.m_abs = labels[best].first;
        p.k = labels[best].second;
        p.shift = modes.shift(k);
        p.decay = modes.decay(k);
        p.fidelity = acc[best];
        p.low_confidence = p.fidelity < fidelity_threshold;
        p.edge_weight = edges.edge_weight[static_cast<std::size_t>(k)];
        p.corner_weight = edges.corner_weight[static_cast<std::size_t>(k)];
        if (p.m_abs == 0) {
            sum0 += p.shift;
            ++count0;
        } else if (p.m_abs == 1) {
            sum1 += p.shift;
            ++count1;
        }
        out.points.push_back(p);
    }
    out.centroid_m0 = count0 ? sum0 / count0 : nan;
    out.centroid_m1 = count1 ? sum1 / count1 : nan;
    out.gap_m0 = nan;
    out.gap_m1 = nan;
    if (!count0 || !count1) {
        return out;
    }
    const double lo = std::min(out.centroid_m0, out.centroid_m1);
    const double hi = std::max(out.centroid_m0, out.centroid_m1);
    std::vector<bool> is_edge(static_cast<std::size_t>(n), false);
    for (const auto& p : out.points) {
        if (p.shift > lo && p.shift < hi) {
            out.min_bulk_weight = std::min(out.min_bulk_weight, 1.0 - p.edge_weight);
            if (p.edge_weight > edge_threshold) {
                out.edge_states.push_back(p.mode);
                is_edge[static_cast<std::size_t>(p.mode)] = true;
            }
        }
    }
    if (out.edge_states.empty()) {
        return out;
    }
    double e_lo = INFINITY, e_hi = -INFINITY;
    for (auto i : out.edge_states) {
        e_lo = std::min(e_lo, modes.shift(i));
        e_hi = std::max(e_hi, modes.shift(i));
    }
    double below = -INFINITY, above = INFINITY;
    for (const auto& p : out.points) {
        if (is_edge[static_cast<std::size_t>(p.mode)]) {
            continue;
        }
        if (p.shift <= e_lo) {
            below = std::max(below, p.shift);
        }
        if (p.shift >= e_hi) {
            above = std::min(above, p.shift);
        }
    }
    if (!std::isfinite(below) || !std::isfinite(above)) {
        return out;
    }
    const double gap_below = e_lo - below;
    const double gap_above = above - e_hi;
    if (out.centroid_m0 < out.centroid_m1) {
        out.gap_m0 = gap_below;
        out.gap_m1 = gap_above;
    } else {
        out.gap_m0 = gap_above;
        out.gap_m1 = gap_below;
    }
    out.has_gap = true;
    return out;
}

} // namespace ringlight
