#pragma once

// Truncated Fock space of the measurement pointer.
//
// A Gaussian pointer of width w is the ground state of a fictional harmonic
// oscillator with annihilation operator a = (X/w + i w P)/sqrt(2). Pointer
// states are amplitude vectors over |0>..|D-1> of that oscillator.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace wva {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr int default_fock_dim = 32;

/// Maximum probability weight allowed in the top two Fock levels.
inline constexpr double leakage_limit = 1e-10;

/// Number of nodes of every position grid used for quadrature and sampling.
inline constexpr std::size_t grid_points = std::size_t{1} << 16;

class PointerState {
public:
    /// Stores `amps` as given. Throws invalid_dimension for fewer than two
    /// levels and validation for a non-positive width.
    PointerState(CVector amps, double width);

    /// Rescales `amps` to unit norm. Throws invalid_state for a zero vector.
    static PointerState normalized(CVector amps, double width);

    /// The Fock state |n>.
    static PointerState fock(int dim, double width, int n);

    int dim() const noexcept { return static_cast<int>(amps_.size()); }
    double width() const noexcept { return width_; }
    const CVector& amps() const noexcept { return amps_; }
    double norm() const { return amps_.norm(); }

private:
    CVector amps_;
    double width_;
};

class FockOperator {
public:
    explicit FockOperator(CMatrix entries);

    int dim() const noexcept { return static_cast<int>(entries_.rows()); }
    const CMatrix& entries() const noexcept { return entries_; }

    CVector operator*(const CVector& v) const { return entries_ * v; }
    FockOperator operator*(const FockOperator& o) const { return FockOperator(entries_ * o.entries_); }
    FockOperator operator-(const FockOperator& o) const { return FockOperator(entries_ - o.entries_); }
    FockOperator adjoint() const { return FockOperator(entries_.adjoint()); }

private:
    CMatrix entries_;
};

struct Ladder {
    FockOperator a;
    FockOperator a_dag;
};

/// Annihilation and creation operators truncated to `dim` levels:
/// a(n-1, n) = sqrt(n), a_dag = a^H.
Ladder make_ladder(int dim);

/// |0>, identified with psi0(x) = exp(-x^2 / 2w^2) w^{-1/2} pi^{-1/4}.
PointerState ground_state(int dim = default_fock_dim, double width = 1.0);

/// Orthonormal Hermite functions h_0(u)..h_{count-1}(u), computed with the
/// normalized three-term recurrence (no raw Hermite polynomials).
std::vector<double> hermite_functions(int count, double u);

/// psi(x) = sum_n amps[n] h_n(x/w) / sqrt(w).
Complex position_wavefunction(const PointerState& state, double x);

/// <psi0(x - d1) | psi0(x - d2)> = exp(-(d1 - d2)^2 / 4w^2).
double displaced_gaussian_overlap(double d1, double d2, double width);

/// <X> with X = w (a + a_dag) / sqrt(2). Throws invalid_state if the norm
/// deviates from one by more than 1e-9.
double mean_position(const PointerState& state);

/// Probability weight in the two highest Fock levels of `amps`, relative to
/// the total norm.
double leakage(const CVector& amps);

/// Throws truncation when leakage(amps) exceeds `limit`. Returns the leakage.
double require_low_leakage(const CVector& amps, double limit = leakage_limit);

/// Uniform grid over [-10w + min(0, lo_shift), 10w + max(0, hi_shift)].
struct PositionGrid {
    double lo = 0.0;
    double step = 0.0;
    std::size_t size = 0;

    double at(std::size_t i) const noexcept { return lo + step * static_cast<double>(i); }
    double hi() const noexcept { return at(size - 1); }
};

PositionGrid make_position_grid(double width, double lo_shift = 0.0, double hi_shift = 0.0,
                                std::size_t points = grid_points);

/// |psi(x)|^2 on every node of `grid`.
std::vector<double> grid_density(const PointerState& state, const PositionGrid& grid);

} // namespace wva
