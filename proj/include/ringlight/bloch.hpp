#pragma once

#include "ringlight/types.hpp"

#include <vector>

namespace ringlight {

/// Infinite ring chain with one ring per unit cell. Couplings to cells
/// beyond `cells` on either side are dropped.
class BlochChain {
public:
    BlochChain(int ring_size, double spacing, double ring_gap, int cells = 50,
               double rotation = 0.0);

    /// H(k) = sum_n B_n exp(i k n d~), ring_size x ring_size.
    CMatrix hamiltonian(double k) const;
    double pitch() const { return pitch_; }
    int ring_size() const { return ring_size_; }
    int cells() const { return cells_; }
    /// Largest entry of the outermost kept block, a bound on the per-cell
    /// size of the neglected tail.
    double truncation_scale() const;

private:
    int ring_size_;
    int cells_;
    double pitch_;
    std::vector<CMatrix> blocks_; // index n + cells
};

struct ZakResult {
    double phase = 0.0; // in [0, 2 pi)
    double min_overlap = 1.0;
    int points = 0;
};

/// Discrete Wilson loop -arg prod <u_k|u_{k+dk}> over a closed k loop. The
/// first state closes the loop. Throws IllConditioned if an overlap < 0.1.
ZakResult wilson_loop_phase(const std::vector<CVector>& states);

/// Eigenvectors of the lowest-shift band on k_j = -pi/d~ + 2 pi j/(nk d~).
std::vector<CVector> lowest_band_states(const BlochChain& chain, int nk);

/// Zak phase of the lowest band (the m = 0 band at k = 0).
ZakResult zak_phase(const BlochChain& chain, int nk = 128);

struct BandCrossing {
    int band = 0;         // index in the Re-sorted spectrum at the crossing
    int m_abs = 0;        // dominant ring angular momentum |m| of the mode
    double k = 0.0;       // in [0, pi/d~]
    double velocity = 0.0; // |dJ/dk|
    double decay = 0.0;
    double optimal_trap = 0.0; // v_g / d~
};

/// All k in [0, pi/d~] where a band shift equals `detuning`.
std::vector<BandCrossing> resonant_crossings(const BlochChain& chain, double detuning,
                                             int nk = 512, double dk = 0.0);

/// Group velocity at the least radiative resonant crossing, from a 5-point
/// centred difference with step dk (default pi / (64 d~)), and the trap rate
/// v_g / d~. With `m_abs` >= 0 only crossings of bands with that |m| count.
/// Throws NoResonantMode when no such band is resonant.
BandCrossing group_velocity_and_optimal_trap(const BlochChain& chain, double detuning,
                                             double dk = 0.0, int m_abs = -1);

} // namespace ringlight
