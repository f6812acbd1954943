#include "wva/weak_protocol.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wva/error.hpp"

namespace wva {

namespace {

void check_unit_interval(double v, const char* name)
{
    if (!std::isfinite(v) || v < 0.0) {
        std::ostringstream msg;
        msg << name << " must be >= 0";
        throw Error(ErrorCode::validation, msg.str());
    }
    if (v >= 1.0) {
        std::ostringstream msg;
        msg << name << " must be < 1";
        throw Error(ErrorCode::out_of_regime, msg.str());
    }
}

} // namespace

void ProtocolParams::validate() const
{
    check_unit_interval(kappa, "kappa");
    check_unit_interval(phi, "phi");
    if (!(width > 0.0) || !std::isfinite(width))
        throw Error(ErrorCode::validation, "width must be > 0");
    if (!(beta >= 0.0 && beta < 1.0))
        throw Error(ErrorCode::validation, "beta must be in [0, 1)");
}

JointState::JointState(CVector amps_plus, CVector amps_minus, double width, bool normalized)
    : plus_(std::move(amps_plus)), minus_(std::move(amps_minus)), width_(width),
      normalized_(normalized)
{
    if (plus_.size() != minus_.size())
        throw Error(ErrorCode::invalid_dimension, "joint state components differ in size");
    if (plus_.size() < 2)
        throw Error(ErrorCode::invalid_dimension, "Fock dimension must be >= 2");
}

JointState evolve_first_order(const ProtocolParams& params, int dim)
{
    params.validate();
    if (dim < 2)
        throw Error(ErrorCode::invalid_dimension, "Fock dimension must be >= 2");
    CVector plus = CVector::Zero(dim);
    CVector minus = CVector::Zero(dim);
    plus[0] = 1.0;
    minus[1] = params.kappa;
    return JointState(std::move(plus), std::move(minus), params.width, false);
}

JointState evolve_exact(const ProtocolParams& params, int dim)
{
    params.validate();
    if (dim < 2)
        throw Error(ErrorCode::invalid_dimension, "Fock dimension must be >= 2");

    // Coherent state |kappa>: c_n = e^{-kappa^2/2} kappa^n / sqrt(n!).
    const double k = params.kappa;
    CVector coherent(dim);
    coherent[0] = std::exp(-0.5 * k * k);
    for (int n = 1; n < dim; ++n)
        coherent[n] = coherent[n - 1] * (k / std::sqrt(static_cast<double>(n)));
    require_low_leakage(coherent);

    // (|z+>|k> + |z->|-k>)/sqrt(2): even Fock levels land on |x+>, odd on |x->.
    CVector plus = CVector::Zero(dim);
    CVector minus = CVector::Zero(dim);
    for (int n = 0; n < dim; ++n)
        (n % 2 == 0 ? plus : minus)[n] = coherent[n];
    return JointState(std::move(plus), std::move(minus), params.width, true);
}

ZComponents z_components(const JointState& state)
{
    const double s = 1.0 / std::numbers::sqrt2;
    return {(state.amps_plus() + state.amps_minus()) * s,
            (state.amps_plus() - state.amps_minus()) * s};
}

PostSelection post_select(const JointState& state, double phi)
{
    if (!std::isfinite(phi) || phi < 0.0 || phi >= 1.0)
        throw Error(ErrorCode::validation, "phi must be in [0, 1)");
    CVector projected = phi * state.amps_plus() + state.amps_minus();
    const double weight = projected.squaredNorm();
    if (weight < 1e-300)
        throw Error(ErrorCode::impossible_post_selection,
                    "post-selection has zero probability (phi = kappa = 0)");
    const double prob = weight / ((1.0 + phi * phi) * state.squared_norm());
    return {PointerState::normalized(std::move(projected), state.width()), prob, weight};
}

double weak_value(double phi)
{
    if (!(phi > 0.0))
        throw Error(ErrorCode::undefined_weak_value, "weak value 1/phi undefined for phi <= 0");
    return 1.0 / phi;
}

std::string_view to_string(Regime regime) noexcept
{
    switch (regime) {
    case Regime::weak_value: return "weak_value";
    case Regime::transition: return "transition";
    case Regime::dark_port: return "dark_port";
    case Regime::bright_port: return "bright_port";
    case Regime::invalid: return "invalid";
    }
    return "invalid";
}

Regime classify_regime(const ProtocolParams& params) noexcept
{
    try {
        params.validate();
    } catch (const Error&) {
        return Regime::invalid;
    }
    const double k = params.kappa;
    const double p = params.phi;
    if (p <= k)
        return Regime::dark_port;
    if (p > 0.2)
        return Regime::bright_port;
    if (k <= p / 5.0)
        return Regime::weak_value;
    return Regime::transition;
}

double conditional_pdf(const PointerState& pointer, double x)
{
    return std::norm(position_wavefunction(pointer, x));
}

double first_order_mean_position(double kappa, double phi, double width)
{
    return std::numbers::sqrt2 * width * kappa * phi / (phi * phi + kappa * kappa);
}

double two_gaussian_mean_position(double kappa, double phi, double width)
{
    const double d = std::numbers::sqrt2 * width * kappa;
    const double overlap = displaced_gaussian_overlap(d, -d, width);
    return 2.0 * d * phi / ((1.0 + phi * phi) + (phi * phi - 1.0) * overlap);
}

} // namespace wva
