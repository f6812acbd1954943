#pragma once

// Photon + atomic-ensemble implementation, restricted to the symmetric
// (Dicke) subspace of N_A two-level atoms {g, s}.
//
// Basis: Dicke index m = number of atoms in s. The per-atom quasi-spin is
// sigma_x = |g><g| - |s><s|, so J_x = N_A/2 - m is diagonal, and
// J_- = J_y - i J_z raises m with <m+1|J_-|m> = sqrt((m+1)(N_A-m)).

#include <vector>

#include "wva/pointer_fock.hpp"

namespace wva {

inline constexpr int max_atoms = 4096;

class DickeState {
public:
    /// Normalizes `amps` (length N_A + 1). Throws invalid_state for a zero vector.
    DickeState(int n_atoms, CVector amps);

    /// Dicke basis state with `m` atoms in s.
    static DickeState basis(int n_atoms, int m);

    int n_atoms() const noexcept { return n_atoms_; }
    const CVector& amps() const noexcept { return amps_; }

private:
    int n_atoms_;
    CVector amps_;
};

struct CollectiveSpinOps {
    int n_atoms = 0;
    CMatrix jx;
    CMatrix jy;
    CMatrix jz;

    /// J_y - i J_z.
    CMatrix j_minus() const { return jy - Complex(0.0, 1.0) * jz; }
};

/// <m+1|J_-|m> for the Dicke ladder.
double lowering_coefficient(int n_atoms, int m);

/// Spin-N_A/2 matrices in the J_x eigenbasis ordered by descending J_x, so
/// index = excitation number. Throws validation outside 1 <= N_A <= 4096.
CollectiveSpinOps build_spin_ops(int n_atoms);

/// Holstein-Primakoff quadratures X = J_y / sqrt(N_A/2), P = J_z / sqrt(N_A/2).
/// [X, P] = i J_x / (N_A/2), which equals i on the index-0 state and
/// i (1 - 2m/N_A) on index m.
struct Quadratures {
    CMatrix x;
    CMatrix p;
};

Quadratures hp_quadratures(const CollectiveSpinOps& ops);

/// Amplitudes over the fixed-N two-mode photon sector times the Dicke basis.
/// Row k holds |N-k>_{x+} |k>_{x-}; column m is the Dicke index.
class PhotonEnsembleState {
public:
    PhotonEnsembleState(int n_photons, int n_atoms, CMatrix amps, bool normalized);

    int n_photons() const noexcept { return n_photons_; }
    int n_atoms() const noexcept { return n_atoms_; }
    const CMatrix& amps() const noexcept { return amps_; }
    bool is_normalized() const noexcept { return normalized_; }

    Complex amplitude(int stokes_photons, int excitations) const
    {
        return amps_(stokes_photons, excitations);
    }

private:
    int n_photons_;
    int n_atoms_;
    CMatrix amps_;
    bool normalized_;
};

/// First-order Raman scattering of an N-photon write beam, generated by
/// a_dag_{x-} a_{x+} (J_- / sqrt(N_A)) + h.c. with amplitude kappa:
/// |N,0>|0> + kappa sqrt(N) |N-1,1>|1> (unnormalized).
/// Throws out_of_regime when kappa sqrt(N) > 0.3.
PhotonEnsembleState raman_scatter_first_order(int n_photons, int n_atoms, double kappa);

struct Detection {
    DickeState atomic;
    /// Squared norm of the projected (unnormalized) amplitude.
    double prob_weight;
};

/// Applies phi a_{x+} + a_{x-}, then projects the remaining N-1 photons onto
/// the write mode (|N-1>_{x+}|0>_{x-}) and normalizes the atomic state.
/// Throws impossible_post_selection for zero weight.
Detection detect_photon(const PhotonEnsembleState& state, double phi);

struct HomodyneOutcome {
    double x;
    double probability;
};

/// exp(-i theta J_z) on the Dicke subspace.
CMatrix z_rotation(const CollectiveSpinOps& ops, double theta);

/// pi/2 pulse exp(-i (pi/2) J_z) followed by a projective J_x readout.
/// The pulse maps J_x -> -J_y, so outcome J_x = j - m is reported as
/// x = (m - j)/sqrt(j), j = N_A/2, making x the J_y / sqrt(N_A/2) quadrature.
/// Outcomes are in ascending x.
std::vector<HomodyneOutcome> atomic_homodyne_distribution(const DickeState& atomic);

double distribution_mean(const std::vector<HomodyneOutcome>& dist);

/// Continuum probabilities of |phi psi0 + kappa psi1|^2 / (phi^2 + kappa^2)
/// (w = 1) over bins of width `bin_width` centred on `centres`.
std::vector<double> continuum_bin_probabilities(const std::vector<double>& centres,
                                                double bin_width, double phi, double kappa);

/// Total-variation distance between the homodyne distribution and the binned
/// continuum; continuum mass outside every bin counts as mismatch.
double continuum_tv_distance(const std::vector<HomodyneOutcome>& dist, double phi, double kappa);

} // namespace wva
