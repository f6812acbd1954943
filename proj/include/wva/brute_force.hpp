#pragma once

// Full 2^N_A tensor-product simulation of the atomic ensemble, used to
// validate the Dicke-subspace engine. Bit k of a basis index is 1 when atom k
// is in s. Per atom, in the (g, s) basis:
//   sigma_x = diag(1, -1), sigma_y = [[0, 1], [1, 0]], sigma_z = [[0, -i], [i, 0]].

#include <cstddef>
#include <vector>

#include "wva/ensemble.hpp"

namespace wva {

inline constexpr int max_oracle_atoms = 10;

class BruteForceEnsemble {
public:
    /// Throws oracle_scale for N_A > 10 and validation for N_A < 1.
    explicit BruteForceEnsemble(int n_atoms);

    int n_atoms() const noexcept { return n_atoms_; }
    std::size_t size() const noexcept { return std::size_t{1} << n_atoms_; }

    /// |g>_1 ... |g>_N.
    CVector ground() const;

    /// Uniform superposition of all product states with `m` atoms in s.
    CVector symmetric_state(int m) const;

    CVector apply_jx(const CVector& psi) const;
    CVector apply_jy(const CVector& psi) const;
    CVector apply_jz(const CVector& psi) const;
    CVector apply_j_minus(const CVector& psi) const;

    /// prod_k exp(-i theta sigma_z^{(k)} / 2).
    CVector rotate_z(const CVector& psi, double theta) const;

    /// Probability of each J_x eigenvalue N_A/2 - m, indexed by m.
    std::vector<double> jx_distribution(const CVector& psi) const;

    CVector embed(const DickeState& state) const;

    /// Overlaps with the normalized symmetric states, indexed by m.
    CVector project(const CVector& psi) const;

private:
    using Pauli = Eigen::Matrix2cd;

    CVector apply_collective(const CVector& psi, const Pauli& sigma) const;
    CVector apply_product(const CVector& psi, const Pauli& single) const;

    int n_atoms_;
};

/// Prepares (phi |0> + kappa J_-|0>/sqrt(N_A)) on the full space, applies the
/// pi/2 pulse atom by atom and reads out J_x, labelling outcomes as in
/// atomic_homodyne_distribution.
std::vector<HomodyneOutcome> brute_force_homodyne(int n_atoms, double phi, double kappa);

/// Same readout for an arbitrary Dicke state embedded into the full space.
std::vector<HomodyneOutcome> brute_force_homodyne(const DickeState& state);

} // namespace wva
