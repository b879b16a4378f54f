#pragma once

#include "ringlight/geometry.hpp"
#include "ringlight/hamiltonian.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ringlight {

/// Eigenmodes sorted by shift Re(lambda), ties by decay. Vectors unit norm.
struct ModeSet {
    CVector eigenvalues;
    CMatrix vectors;
    double max_residual = 0.0;

    Eigen::Index size() const { return eigenvalues.size(); }
    double shift(Eigen::Index i) const { return eigenvalues(i).real(); }
    double decay(Eigen::Index i) const { return -2.0 * eigenvalues(i).imag(); }
};

ModeSet diagonalize(const CMatrix& h);
inline ModeSet diagonalize(const EffectiveHamiltonian& h) { return diagonalize(h.matrix); }

struct SpinWaveState {
    int m = 0;
    CVector amplitudes; // e^{i m phi_j} / sqrt(N_R)
    double shift = 0.0; // collective shift J~_m
    double decay = 0.0; // collective decay Gamma~_m
    double residual = 0.0;
};

/// Angular momenta -floor((N_R-1)/2) .. floor(N_R/2).
std::vector<int> angular_momenta(int ring_size);

/// Spin waves of the first ring of `ring` from the circulant row sums.
/// Throws WrongGeometry if the ring coupling matrix is not circulant.
std::vector<SpinWaveState> spin_wave_spectrum(const EmitterEnsemble& ring);

struct SingleRingAnalytics {
    int ring_size = 0;
    double donor_coupling = 0.0;     // J_d, centre to one ring emitter
    double donor_decay = 0.0;        // Gamma_d
    double ring_shift = 0.0;         // J~_0
    double ring_decay = 0.0;         // Gamma~_0
    double optimal_detuning = 0.0;   // Delta_sub, exact minimiser of -2 Im lambda_-
    double detuning_estimate = 0.0;  // closed-form estimate of Delta_sub
    double effective_decay = 0.0;    // Gamma_eff = -2 Im lambda_-(Delta_sub)
    double donor_fraction = 0.0;     // donor population of |Psi_->
    std::vector<std::pair<double, double>> scan; // (Delta, -2 Im lambda_-)
    std::vector<std::string> warnings;

    /// The 2x2 donor / m=0 matrix at detuning `delta`, donor first.
    Eigen::Matrix2cd reduced_matrix(double delta) const;
    /// (lambda_-, lambda_+): lambda_- has the donor-majority eigenvector.
    std::pair<cplx, cplx> eigenvalues(double delta) const;
    double donor_fraction_at(double delta) const;
};

/// Ring plus centre donor reduced to the donor and the m = 0 spin wave.
/// Delta_sub is located by a grid scan over [lo, hi] with golden-section
/// refinement.
SingleRingAnalytics ring_center_analytics(const EmitterEnsemble& ring, double lo = -15.0,
                                          double hi = 15.0, double step = 0.05);

/// Donor fraction of the dark state of a ring plus centre emitter in the
/// ideal Dicke model (all J = 0, all Gamma = Gamma0), from the 2x2 reduction.
double dicke_center_donor_fraction(int ring_size);

/// Allowed chain quasimomenta 2 pi q / (M d~).
std::vector<double> chain_momenta(int rings, double pitch);

/// Product spin-wave / plane-wave state over the lattice emitters of a ring
/// chain; donor and acceptor entries are zero.
CVector ansatz_state(const EmitterEnsemble& chain, int m, double k);

struct BandPoint {
    Eigen::Index mode = 0;
    int m_abs = 0;
    double k = 0.0; // |k|, +-k are aggregated
    double shift = 0.0;
    double decay = 0.0;
    double fidelity = 0.0;
    double edge_weight = 0.0;
    double corner_weight = 0.0;
    bool low_confidence = false;
};

struct BandStructure {
    std::vector<BandPoint> points;
    double centroid_m0 = 0.0;
    double centroid_m1 = 0.0;
    /// In-gap edge modes between the m = 0 and |m| = 1 bands.
    std::vector<Eigen::Index> edge_states;
    double gap_m0 = 0.0; // edge states to the nearest m = 0 side mode
    double gap_m1 = 0.0; // edge states to the nearest |m| = 1 side mode
    bool has_gap = false;
    /// Smallest bulk weight among modes between the two band centroids.
    double min_bulk_weight = 1.0;

    double min_gap() const { return std::min(gap_m0, gap_m1); }
};

inline constexpr double fidelity_threshold = 0.5;
inline constexpr double edge_threshold = 0.5;

/// Recombines exactly degenerate pairs into left/right localized
/// representatives. Returns the number of pairs touched.
int recombine_degenerate(ModeSet& modes, const EmitterEnsemble& ensemble, double tol = 1e-9);

/// (|m|, |k|) labels for the modes of a lattice-only ring chain.
BandStructure classify_bands(const ModeSet& modes, const EmitterEnsemble& chain);

struct EdgeStateReport {
    std::vector<double> edge_weight;
    std::vector<double> bulk_weight;
    std::vector<double> corner_weight;
    std::vector<bool> superradiant;
    std::vector<Eigen::Index> edge_states;   // edge weight > 0.5
    std::vector<Eigen::Index> corner_states; // corner weight > 0.5
    double threshold = edge_threshold;
};

/// Edge weight: population on the first and last ring of a chain, or on the
/// boundary rings of a 2D ring lattice. Corner weight: corner rings.
EdgeStateReport edge_localization(const ModeSet& modes, const EmitterEnsemble& ensemble);

} // namespace ringlight
