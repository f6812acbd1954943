#include "wva/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wva/error.hpp"

namespace wva {

namespace {

constexpr Complex I{0.0, 1.0};

void check_atoms(int n_atoms)
{
    if (n_atoms < 1 || n_atoms > max_atoms) {
        std::ostringstream msg;
        msg << "n_atoms must be in [1, " << max_atoms << "], got " << n_atoms;
        throw Error(ErrorCode::validation, msg.str());
    }
}

} // namespace

DickeState::DickeState(int n_atoms, CVector amps)
    : n_atoms_(n_atoms), amps_(std::move(amps))
{
    check_atoms(n_atoms);
    if (amps_.size() != n_atoms + 1)
        throw Error(ErrorCode::invalid_dimension, "Dicke state needs N_A + 1 amplitudes");
    const double n = amps_.norm();
    if (!(n > 0.0))
        throw Error(ErrorCode::invalid_state, "cannot normalize a zero Dicke state");
    amps_ /= n;
}

DickeState DickeState::basis(int n_atoms, int m)
{
    check_atoms(n_atoms);
    if (m < 0 || m > n_atoms)
        throw Error(ErrorCode::invalid_dimension, "Dicke index out of range");
    CVector amps = CVector::Zero(n_atoms + 1);
    amps[m] = 1.0;
    return DickeState(n_atoms, std::move(amps));
}

double lowering_coefficient(int n_atoms, int m)
{
    return std::sqrt(static_cast<double>(m + 1) * static_cast<double>(n_atoms - m));
}

CollectiveSpinOps build_spin_ops(int n_atoms)
{
    check_atoms(n_atoms);
    const int d = n_atoms + 1;
    const double j = 0.5 * n_atoms;

    CMatrix lower = CMatrix::Zero(d, d);  // J_-
    for (int m = 0; m + 1 < d; ++m)
        lower(m + 1, m) = lowering_coefficient(n_atoms, m);
    const CMatrix raise = lower.adjoint();

    CollectiveSpinOps ops;
    ops.n_atoms = n_atoms;
    ops.jx = CMatrix::Zero(d, d);
    for (int m = 0; m < d; ++m)
        ops.jx(m, m) = j - m;
    ops.jy = 0.5 * (raise + lower);
    ops.jz = (0.5 * I) * (lower - raise);
    return ops;
}

Quadratures hp_quadratures(const CollectiveSpinOps& ops)
{
    const double scale = 1.0 / std::sqrt(0.5 * ops.n_atoms);
    return {ops.jy * scale, ops.jz * scale};
}

PhotonEnsembleState::PhotonEnsembleState(int n_photons, int n_atoms, CMatrix amps, bool normalized)
    : n_photons_(n_photons), n_atoms_(n_atoms), amps_(std::move(amps)), normalized_(normalized)
{
    check_atoms(n_atoms);
    if (n_photons < 1)
        throw Error(ErrorCode::validation, "n_photons must be >= 1");
    if (amps_.rows() != n_photons + 1 || amps_.cols() != n_atoms + 1)
        throw Error(ErrorCode::invalid_dimension, "photon-ensemble amplitude shape mismatch");
}

PhotonEnsembleState raman_scatter_first_order(int n_photons, int n_atoms, double kappa)
{
    check_atoms(n_atoms);
    if (n_photons < 1)
        throw Error(ErrorCode::validation, "n_photons must be >= 1");
    if (!std::isfinite(kappa) || kappa < 0.0)
        throw Error(ErrorCode::validation, "kappa must be >= 0");
    const double n = n_photons;
    if (kappa * std::sqrt(n) > 0.3) {
        std::ostringstream msg;
        msg << "kappa * sqrt(N) = " << kappa * std::sqrt(n)
            << " exceeds the first-order bound 0.3";
        throw Error(ErrorCode::out_of_regime, msg.str());
    }

    CMatrix amps = CMatrix::Zero(n_photons + 1, n_atoms + 1);
    amps(0, 0) = 1.0;
    // <N-1,1| a_dag_{x-} a_{x+} |N,0> = sqrt(N) * sqrt(1)
    const double photon_element = std::sqrt(n) * 1.0;
    const double atom_element = lowering_coefficient(n_atoms, 0) / std::sqrt(double(n_atoms));
    amps(1, 1) = kappa * photon_element * atom_element;
    return PhotonEnsembleState(n_photons, n_atoms, std::move(amps), false);
}

Detection detect_photon(const PhotonEnsembleState& state, double phi)
{
    if (!std::isfinite(phi) || phi < 0.0 || phi >= 1.0)
        throw Error(ErrorCode::validation, "phi must be in [0, 1)");
    const int n = state.n_photons();
    const CMatrix& in = state.amps();

    // Row k of the input is |n-k, k>; the output has n-1 photons, row k'.
    CMatrix out = CMatrix::Zero(n, in.cols());
    for (int k = 0; k <= n; ++k) {
        const int write = n - k;
        if (write > 0)  // phi a_{x+}: |write, k> -> sqrt(write) |write-1, k>
            out.row(k) += phi * std::sqrt(double(write)) * in.row(k);
        if (k > 0)  // a_{x-}: |write, k> -> sqrt(k) |write, k-1>
            out.row(k - 1) += std::sqrt(double(k)) * in.row(k);
    }

    CVector atomic = out.row(0).transpose();
    const double weight = atomic.squaredNorm();
    if (weight < 1e-300)
        throw Error(ErrorCode::impossible_post_selection,
                    "photon detection has zero weight (phi = kappa = 0)");
    return {DickeState(state.n_atoms(), std::move(atomic)), weight};
}

CMatrix z_rotation(const CollectiveSpinOps& ops, double theta)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(ops.jz);
    const auto& v = eig.eigenvectors();
    CVector phases = (-I * theta * eig.eigenvalues().cast<Complex>()).array().exp();
    return v * phases.asDiagonal() * v.adjoint();
}

std::vector<HomodyneOutcome> atomic_homodyne_distribution(const DickeState& atomic)
{
    const int n = atomic.n_atoms();
    const auto ops = build_spin_ops(n);
    const CVector rotated = z_rotation(ops, 0.5 * std::numbers::pi) * atomic.amps();

    const double j = 0.5 * n;
    const double scale = 1.0 / std::sqrt(j);
    std::vector<HomodyneOutcome> dist(static_cast<std::size_t>(n + 1));
    for (int m = 0; m <= n; ++m)
        dist[m] = {(m - j) * scale, std::norm(rotated[m])};
    return dist;
}

double distribution_mean(const std::vector<HomodyneOutcome>& dist)
{
    double mean = 0.0;
    for (const auto& o : dist)
        mean += o.x * o.probability;
    return mean;
}

namespace {

// Antiderivative of (phi + sqrt(2) kappa x)^2 e^{-x^2} / (sqrt(pi) (phi^2 + kappa^2)).
double continuum_cdf(double x, double phi, double kappa)
{
    const double erf_half = 0.5 * std::erf(x);
    const double g = std::exp(-x * x) / (2.0 * std::sqrt(std::numbers::pi));
    const double zeroth = erf_half;
    const double first = -g;
    const double second = 0.5 * erf_half - x * g;
    const double num = phi * phi * zeroth + 2.0 * std::numbers::sqrt2 * phi * kappa * first
                     + 2.0 * kappa * kappa * second;
    return num / (phi * phi + kappa * kappa);
}

} // namespace

std::vector<double> continuum_bin_probabilities(const std::vector<double>& centres,
                                                double bin_width, double phi, double kappa)
{
    if (!(phi * phi + kappa * kappa > 0.0))
        throw Error(ErrorCode::impossible_post_selection, "continuum pdf undefined for phi = kappa = 0");
    std::vector<double> probs(centres.size());
    const double half = 0.5 * bin_width;
    for (std::size_t i = 0; i < centres.size(); ++i)
        probs[i] = continuum_cdf(centres[i] + half, phi, kappa)
                 - continuum_cdf(centres[i] - half, phi, kappa);
    return probs;
}

double continuum_tv_distance(const std::vector<HomodyneOutcome>& dist, double phi, double kappa)
{
    if (dist.size() < 2)
        throw Error(ErrorCode::invalid_dimension, "need at least two homodyne outcomes");
    std::vector<double> centres;
    centres.reserve(dist.size());
    for (const auto& o : dist)
        centres.push_back(o.x);
    const double width = centres[1] - centres[0];
    const auto binned = continuum_bin_probabilities(centres, width, phi, kappa);

    double diff = 0.0;
    double covered = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        diff += std::abs(dist[i].probability - binned[i]);
        covered += binned[i];
    }
    return 0.5 * (diff + std::max(0.0, 1.0 - covered));
}

} // namespace wva
