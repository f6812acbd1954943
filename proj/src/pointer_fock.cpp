#include "wva/pointer_fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wva/error.hpp"

namespace wva {

namespace {

void check_dim(int dim)
{
    if (dim < 2) {
        std::ostringstream msg;
        msg << "Fock dimension must be >= 2, got " << dim;
        throw Error(ErrorCode::invalid_dimension, msg.str());
    }
}

void check_width(double width)
{
    if (!(width > 0.0) || !std::isfinite(width))
        throw Error(ErrorCode::validation, "width must be > 0");
}

} // namespace

PointerState::PointerState(CVector amps, double width)
    : amps_(std::move(amps)), width_(width)
{
    check_dim(static_cast<int>(amps_.size()));
    check_width(width_);
}

PointerState PointerState::normalized(CVector amps, double width)
{
    const double n = amps.norm();
    if (!(n > 0.0))
        throw Error(ErrorCode::invalid_state, "cannot normalize a zero pointer state");
    amps /= n;
    return PointerState(std::move(amps), width);
}

PointerState PointerState::fock(int dim, double width, int n)
{
    check_dim(dim);
    if (n < 0 || n >= dim)
        throw Error(ErrorCode::invalid_dimension, "Fock index outside truncation");
    CVector amps = CVector::Zero(dim);
    amps[n] = 1.0;
    return PointerState(std::move(amps), width);
}

FockOperator::FockOperator(CMatrix entries)
    : entries_(std::move(entries))
{
    if (entries_.rows() != entries_.cols())
        throw Error(ErrorCode::invalid_dimension, "Fock operator must be square");
}

Ladder make_ladder(int dim)
{
    check_dim(dim);
    CMatrix a = CMatrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n)
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    FockOperator ann(a);
    return {ann, ann.adjoint()};
}

PointerState ground_state(int dim, double width)
{
    return PointerState::fock(dim, width, 0);
}

std::vector<double> hermite_functions(int count, double u)
{
    std::vector<double> h(static_cast<std::size_t>(std::max(count, 0)));
    if (count <= 0)
        return h;
    // h_0 = pi^{-1/4} e^{-u^2/2}
    // h_{n+1} = sqrt(2/(n+1)) u h_n - sqrt(n/(n+1)) h_{n-1}
    h[0] = std::exp(-0.5 * u * u) / std::sqrt(std::sqrt(std::numbers::pi));
    if (count > 1)
        h[1] = std::numbers::sqrt2 * u * h[0];
    for (int n = 1; n + 1 < count; ++n) {
        const double np1 = n + 1.0;
        h[n + 1] = std::sqrt(2.0 / np1) * u * h[n] - std::sqrt(n / np1) * h[n - 1];
    }
    return h;
}

Complex position_wavefunction(const PointerState& state, double x)
{
    const double w = state.width();
    const auto h = hermite_functions(state.dim(), x / w);
    Complex psi = 0.0;
    for (int n = 0; n < state.dim(); ++n)
        psi += state.amps()[n] * h[n];
    return psi / std::sqrt(w);
}

double displaced_gaussian_overlap(double d1, double d2, double width)
{
    check_width(width);
    const double diff = d1 - d2;
    return std::exp(-diff * diff / (4.0 * width * width));
}

double mean_position(const PointerState& state)
{
    const double n2 = state.amps().squaredNorm();
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-9)
        throw Error(ErrorCode::invalid_state, "mean_position requires a normalized state");
    const auto& c = state.amps();
    double acc = 0.0;
    for (int n = 0; n + 1 < state.dim(); ++n)
        acc += std::sqrt(n + 1.0) * (std::conj(c[n]) * c[n + 1]).real();
    return state.width() * std::numbers::sqrt2 * acc;
}

double leakage(const CVector& amps)
{
    const auto d = amps.size();
    const double total = amps.squaredNorm();
    if (d < 2 || total == 0.0)
        return 0.0;
    return (std::norm(amps[d - 1]) + std::norm(amps[d - 2])) / total;
}

double require_low_leakage(const CVector& amps, double limit)
{
    const double l = leakage(amps);
    if (l > limit) {
        std::ostringstream msg;
        msg << "Fock truncation leakage " << l << " exceeds " << limit
            << " (dim " << amps.size() << ")";
        throw Error(ErrorCode::truncation, msg.str());
    }
    return l;
}

PositionGrid make_position_grid(double width, double lo_shift, double hi_shift, std::size_t points)
{
    check_width(width);
    if (points < 2)
        throw Error(ErrorCode::validation, "position grid needs at least two points");
    PositionGrid g;
    g.lo = -10.0 * width + std::min(0.0, lo_shift);
    const double hi = 10.0 * width + std::max(0.0, hi_shift);
    g.size = points;
    g.step = (hi - g.lo) / static_cast<double>(points - 1);
    return g;
}

std::vector<double> grid_density(const PointerState& state, const PositionGrid& grid)
{
    std::vector<double> pdf(grid.size);
    for (std::size_t i = 0; i < grid.size; ++i)
        pdf[i] = std::norm(position_wavefunction(state, grid.at(i)));
    return pdf;
}

} // namespace wva
