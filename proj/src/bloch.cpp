#include "ringlight/bloch.hpp"

#include "ringlight/coupling.hpp"
#include "ringlight/errors.hpp"
#include "ringlight/geometry.hpp"
#include "ringlight/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ringlight {

BlochChain::BlochChain(int ring_size, double spacing, double ring_gap, int cells, double rotation)
    : ring_size_(ring_size), cells_(cells) {
    if (cells < 1) {
        throw InvalidArgument("BlochChain: need at least one neighbouring cell");
    }
    if (!(ring_gap > 0.0)) {
        throw InvalidArgument("BlochChain: ring_gap must be positive");
    }
    const EmitterEnsemble cell = build_ring(ring_size, spacing, Vec3::Zero(), rotation);
    pitch_ = 2.0 * cell.metadata().radius + ring_gap;
    const auto n = static_cast<Eigen::Index>(ring_size);
    blocks_.reserve(static_cast<std::size_t>(2 * cells + 1));
    for (int c = -cells; c <= cells; ++c) {
        CMatrix b(n, n);
        const Vec3 offset(c * pitch_, 0.0, 0.0);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (c == 0 && i == j) {
                    b(i, j) = cplx(0.0, -0.5 * gamma0);
                    continue;
                }
                const auto& ei = cell[static_cast<std::size_t>(i)];
                const auto& ej = cell[static_cast<std::size_t>(j)];
                const cplx g = green_projected(ei.position - (ej.position + offset), ei.polarization,
                                               ej.polarization);
                b(i, j) = cplx(coherent_coupling(g), -0.5 * dissipative_coupling(g));
            }
        }
        blocks_.push_back(std::move(b));
    }
}

CMatrix BlochChain::hamiltonian(double k) const {
    CMatrix h = CMatrix::Zero(ring_size_, ring_size_);
    for (int c = -cells_; c <= cells_; ++c) {
        h += blocks_[static_cast<std::size_t>(c + cells_)] * std::polar(1.0, k * c * pitch_);
    }
    return h;
}

double BlochChain::truncation_scale() const {
    return std::max(blocks_.front().cwiseAbs().maxCoeff(), blocks_.back().cwiseAbs().maxCoeff());
}

ZakResult wilson_loop_phase(const std::vector<CVector>& states) {
    if (states.size() < 2) {
        throw InvalidArgument("wilson_loop_phase: need at least two states");
    }
    ZakResult out;
    out.points = static_cast<int>(states.size());
    cplx product = 1.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const CVector& a = states[i];
        const CVector& b = states[(i + 1) % states.size()];
        const cplx o = a.dot(b) / (a.norm() * b.norm());
        out.min_overlap = std::min(out.min_overlap, std::abs(o));
        product *= o / std::abs(o);
    }
    if (out.min_overlap < 0.1) {
        std::ostringstream msg;
        msg << "Wilson loop: successive overlap " << out.min_overlap << " below 0.1, refine the k grid";
        throw IllConditioned(msg.str());
    }
    double phase = -std::arg(product);
    if (phase < 0.0) {
        phase += 2.0 * pi;
    }
    out.phase = phase;
    return out;
}

std::vector<CVector> lowest_band_states(const BlochChain& chain, int nk) {
    if (nk < 2) {
        throw InvalidArgument("lowest_band_states: need at least two k points");
    }
    std::vector<CVector> states;
    states.reserve(static_cast<std::size_t>(nk));
    for (int j = 0; j < nk; ++j) {
        const double k = -pi / chain.pitch() + 2.0 * pi * j / (nk * chain.pitch());
        const Eigensystem es = eigensystem(chain.hamiltonian(k));
        Eigen::Index low = 0;
        for (Eigen::Index i = 1; i < es.values.size(); ++i) {
            if (es.values(i).real() < es.values(low).real()) {
                low = i;
            }
        }
        states.emplace_back(es.vectors.col(low));
    }
    return states;
}

ZakResult zak_phase(const BlochChain& chain, int nk) {
    if (nk < 64) {
        throw InvalidArgument("zak_phase: at least 64 k points required");
    }
    return wilson_loop_phase(lowest_band_states(chain, nk));
}

namespace {

std::vector<cplx> sorted_values(const CMatrix& h) {
    const CVector v = eigenvalues(h);
    std::vector<cplx> out(v.data(), v.data() + v.size());
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    return out;
}

// Eigenvalue at k of the band whose eigenvector overlaps most with `ref`.
cplx tracked_value(const BlochChain& chain, double k, const CVector& ref) {
    const Eigensystem es = eigensystem(chain.hamiltonian(k));
    Eigen::Index best = 0;
    double best_overlap = -1.0;
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
        const double o = std::norm(ref.dot(es.vectors.col(i)));
        if (o > best_overlap) {
            best_overlap = o;
            best = i;
        }
    }
    return es.values(best);
}

BandCrossing crossing_at(const BlochChain& chain, int band, double k, double dk) {
    const Eigensystem es = eigensystem(chain.hamiltonian(k));
    std::vector<Eigen::Index> order(static_cast<std::size_t>(es.values.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
        return es.values(a).real() < es.values(b).real();
    });
    const Eigen::Index idx = order[static_cast<std::size_t>(band)];
    const CVector ref = es.vectors.col(idx);
    const double e2p = tracked_value(chain, k + 2.0 * dk, ref).real();
    const double e1p = tracked_value(chain, k + dk, ref).real();
    const double e1m = tracked_value(chain, k - dk, ref).real();
    const double e2m = tracked_value(chain, k - 2.0 * dk, ref).real();
    BandCrossing c;
    c.band = band;
    c.k = k;
    c.velocity = std::abs((-e2p + 8.0 * e1p - 8.0 * e1m + e2m) / (12.0 * dk));
    c.decay = -2.0 * es.values(idx).imag();
    // |m| from the overlap with the ring spin waves, +-m summed
    const int n = chain.ring_size();
    std::vector<double> weight(static_cast<std::size_t>(n / 2 + 1), 0.0);
    for (int m = -((n - 1) / 2); m <= n / 2; ++m) {
        cplx o = 0.0;
        for (int j = 0; j < n; ++j) {
            o += std::polar(1.0, -2.0 * pi * m * j / n) * ref(j);
        }
        weight[static_cast<std::size_t>(std::abs(m))] += std::norm(o) / n;
    }
    c.m_abs = static_cast<int>(std::max_element(weight.begin(), weight.end()) - weight.begin());
    c.optimal_trap = c.velocity / chain.pitch();
    return c;
}

} // namespace

std::vector<BandCrossing> resonant_crossings(const BlochChain& chain, double detuning, int nk,
                                             double dk) {
    if (nk < 8) {
        throw InvalidArgument("resonant_crossings: need at least 8 k intervals");
    }
    if (dk <= 0.0) {
        dk = pi / (64.0 * chain.pitch());
    }
    const double kmax = pi / chain.pitch();
    std::vector<std::vector<cplx>> spectra;
    spectra.reserve(static_cast<std::size_t>(nk) + 1);
    for (int i = 0; i <= nk; ++i) {
        spectra.push_back(sorted_values(chain.hamiltonian(kmax * i / nk)));
    }
    std::vector<BandCrossing> out;
    for (int b = 0; b < chain.ring_size(); ++b) {
        for (int i = 0; i < nk; ++i) {
            const double f0 = spectra[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)].real() - detuning;
            const double f1 = spectra[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(b)].real() - detuning;
            if (f0 == 0.0 || f0 * f1 < 0.0) {
                double lo = kmax * i / nk;
                double hi = kmax * (i + 1) / nk;
                double flo = f0;
                for (int it = 0; it < 50 && f0 != 0.0; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm =
                        sorted_values(chain.hamiltonian(mid))[static_cast<std::size_t>(b)].real() - detuning;
                    if (fm * flo <= 0.0) {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                    if (hi - lo < 1e-10 * kmax) {
                        break;
                    }
                }
                out.push_back(crossing_at(chain, b, 0.5 * (lo + hi), dk));
            }
        }
    }
    return out;
}

BandCrossing group_velocity_and_optimal_trap(const BlochChain& chain, double detuning, double dk,
                                             int m_abs) {
    auto crossings = resonant_crossings(chain, detuning, 512, dk);
    if (m_abs >= 0) {
        std::erase_if(crossings, [&](const auto& c) { return c.m_abs != m_abs; });
    }
    if (crossings.empty()) {
        std::ostringstream msg;
        msg << "no band";
        if (m_abs >= 0) {
            msg << " with |m| = " << m_abs;
        }
        msg << " is resonant with detuning " << detuning;
        throw NoResonantMode(msg.str());
    }
    return *std::min_element(crossings.begin(), crossings.end(),
                             [](const auto& a, const auto& b) { return a.decay < b.decay; });
}

} // namespace ringlight
