#include "wva/brute_force.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wva/error.hpp"

namespace wva {

namespace {

constexpr Complex I{0.0, 1.0};

Eigen::Matrix2cd sigma_x()
{
    Eigen::Matrix2cd s;
    s << 1.0, 0.0, 0.0, -1.0;
    return s;
}

Eigen::Matrix2cd sigma_y()
{
    Eigen::Matrix2cd s;
    s << 0.0, 1.0, 1.0, 0.0;
    return s;
}

Eigen::Matrix2cd sigma_z()
{
    Eigen::Matrix2cd s;
    s << 0.0, -I, I, 0.0;
    return s;
}

double binomial(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

std::vector<HomodyneOutcome> label_outcomes(const std::vector<double>& probs, int n_atoms)
{
    const double j = 0.5 * n_atoms;
    std::vector<HomodyneOutcome> out(probs.size());
    for (std::size_t m = 0; m < probs.size(); ++m)
        out[m] = {(static_cast<double>(m) - j) / std::sqrt(j), probs[m]};
    return out;
}

} // namespace

BruteForceEnsemble::BruteForceEnsemble(int n_atoms)
    : n_atoms_(n_atoms)
{
    if (n_atoms < 1)
        throw Error(ErrorCode::validation, "n_atoms must be >= 1");
    if (n_atoms > max_oracle_atoms) {
        std::ostringstream msg;
        msg << "brute-force oracle limited to " << max_oracle_atoms << " atoms, got " << n_atoms;
        throw Error(ErrorCode::oracle_scale, msg.str());
    }
}

CVector BruteForceEnsemble::ground() const
{
    CVector psi = CVector::Zero(static_cast<Eigen::Index>(size()));
    psi[0] = 1.0;
    return psi;
}

CVector BruteForceEnsemble::symmetric_state(int m) const
{
    if (m < 0 || m > n_atoms_)
        throw Error(ErrorCode::invalid_dimension, "excitation number out of range");
    CVector psi = CVector::Zero(static_cast<Eigen::Index>(size()));
    const double amp = 1.0 / std::sqrt(binomial(n_atoms_, m));
    for (std::size_t b = 0; b < size(); ++b)
        if (std::popcount(b) == m)
            psi[static_cast<Eigen::Index>(b)] = amp;
    return psi;
}

CVector BruteForceEnsemble::apply_collective(const CVector& psi, const Pauli& sigma) const
{
    CVector out = CVector::Zero(psi.size());
    for (int k = 0; k < n_atoms_; ++k) {
        const std::size_t bit = std::size_t{1} << k;
        for (std::size_t b = 0; b < size(); ++b) {
            const int in = (b & bit) ? 1 : 0;
            const auto src = static_cast<Eigen::Index>(b);
            for (int o = 0; o < 2; ++o) {
                const Complex c = sigma(o, in);
                if (c == Complex(0.0))
                    continue;
                const std::size_t dst = o ? (b | bit) : (b & ~bit);
                out[static_cast<Eigen::Index>(dst)] += 0.5 * c * psi[src];
            }
        }
    }
    return out;
}

CVector BruteForceEnsemble::apply_product(const CVector& psi, const Pauli& single) const
{
    CVector cur = psi;
    for (int k = 0; k < n_atoms_; ++k) {
        const std::size_t bit = std::size_t{1} << k;
        CVector next = CVector::Zero(psi.size());
        for (std::size_t b = 0; b < size(); ++b) {
            if (b & bit)
                continue;
            const auto i0 = static_cast<Eigen::Index>(b);
            const auto i1 = static_cast<Eigen::Index>(b | bit);
            next[i0] = single(0, 0) * cur[i0] + single(0, 1) * cur[i1];
            next[i1] = single(1, 0) * cur[i0] + single(1, 1) * cur[i1];
        }
        cur = std::move(next);
    }
    return cur;
}

CVector BruteForceEnsemble::apply_jx(const CVector& psi) const { return apply_collective(psi, sigma_x()); }
CVector BruteForceEnsemble::apply_jy(const CVector& psi) const { return apply_collective(psi, sigma_y()); }
CVector BruteForceEnsemble::apply_jz(const CVector& psi) const { return apply_collective(psi, sigma_z()); }

CVector BruteForceEnsemble::apply_j_minus(const CVector& psi) const
{
    return apply_jy(psi) - I * apply_jz(psi);
}

CVector BruteForceEnsemble::rotate_z(const CVector& psi, double theta) const
{
    const Pauli single = std::cos(0.5 * theta) * Pauli::Identity()
                       - I * std::sin(0.5 * theta) * sigma_z();
    return apply_product(psi, single);
}

std::vector<double> BruteForceEnsemble::jx_distribution(const CVector& psi) const
{
    std::vector<double> probs(static_cast<std::size_t>(n_atoms_ + 1), 0.0);
    for (std::size_t b = 0; b < size(); ++b)
        probs[static_cast<std::size_t>(std::popcount(b))] += std::norm(psi[static_cast<Eigen::Index>(b)]);
    return probs;
}

CVector BruteForceEnsemble::embed(const DickeState& state) const
{
    if (state.n_atoms() != n_atoms_)
        throw Error(ErrorCode::invalid_dimension, "atom number mismatch");
    CVector psi = CVector::Zero(static_cast<Eigen::Index>(size()));
    for (int m = 0; m <= n_atoms_; ++m)
        psi += state.amps()[m] * symmetric_state(m);
    return psi;
}

CVector BruteForceEnsemble::project(const CVector& psi) const
{
    CVector amps(n_atoms_ + 1);
    for (int m = 0; m <= n_atoms_; ++m)
        amps[m] = symmetric_state(m).dot(psi);
    return amps;
}

std::vector<HomodyneOutcome> brute_force_homodyne(int n_atoms, double phi, double kappa)
{
    const BruteForceEnsemble full(n_atoms);
    const CVector g = full.ground();
    CVector psi = phi * g + (kappa / std::sqrt(double(n_atoms))) * full.apply_j_minus(g);
    const double n = psi.norm();
    if (!(n > 0.0))
        throw Error(ErrorCode::impossible_post_selection, "phi = kappa = 0");
    psi /= n;
    const CVector rotated = full.rotate_z(psi, 0.5 * std::numbers::pi);
    return label_outcomes(full.jx_distribution(rotated), n_atoms);
}

std::vector<HomodyneOutcome> brute_force_homodyne(const DickeState& state)
{
    const BruteForceEnsemble full(state.n_atoms());
    const CVector rotated = full.rotate_z(full.embed(state), 0.5 * std::numbers::pi);
    return label_outcomes(full.jx_distribution(rotated), state.n_atoms());
}

} // namespace wva
