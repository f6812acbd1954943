#pragma once

// Qubit (x+/x- basis) coupled to the pointer by H = chi sigma_z P.
//
// In Fock language H t = -i kappa sigma_z (a - a_dag), kappa = chi t / (sqrt(2) w).
// Sign convention: the sigma_z = +1 branch translates the pointer by
// +sqrt(2) w kappa. |x+> = (|z+> + |z->)/sqrt(2), |x-> = (|z+> - |z->)/sqrt(2),
// so sigma_z |x+> = |x->.

#include <string_view>

#include "wva/pointer_fock.hpp"

namespace wva {

struct ProtocolParams {
    double kappa = 0.0;
    double phi = 0.0;
    double width = 1.0;
    double beta = 0.0;

    /// Throws out_of_regime when kappa or phi is >= 1 and validation for any
    /// other range violation (negative values, width <= 0, beta outside [0, 1)).
    void validate() const;
};

class JointState {
public:
    JointState(CVector amps_plus, CVector amps_minus, double width, bool normalized);

    int dim() const noexcept { return static_cast<int>(plus_.size()); }
    double width() const noexcept { return width_; }
    const CVector& amps_plus() const noexcept { return plus_; }
    const CVector& amps_minus() const noexcept { return minus_; }
    bool is_normalized() const noexcept { return normalized_; }
    double squared_norm() const { return plus_.squaredNorm() + minus_.squaredNorm(); }

private:
    CVector plus_;
    CVector minus_;
    double width_;
    bool normalized_;
};

/// Unnormalized |x+>|0> + kappa |x->|1>.
JointState evolve_first_order(const ProtocolParams& params, int dim = default_fock_dim);

/// exp(-iHt)|x+>|0> from the conditional-displacement closed form:
/// |z+>|kappa> and |z->|-kappa> (coherent states), re-expressed in the x basis.
/// Throws truncation if the coherent amplitudes leak into the top two levels.
JointState evolve_exact(const ProtocolParams& params, int dim = default_fock_dim);

struct ZComponents {
    CVector up;    ///< pointer amplitudes on |z+>
    CVector down;  ///< pointer amplitudes on |z->
};

ZComponents z_components(const JointState& state);

struct PostSelection {
    PointerState pointer;  ///< normalized conditional pointer
    /// Exact probability: projector onto (phi|x+> + |x->)/sqrt(1 + phi^2),
    /// divided by the input norm.
    double probability;
    /// ||phi psi_+ + psi_-||^2 without either normalization. For first-order
    /// input this is phi^2 + kappa^2.
    double leading_order;
};

/// Throws impossible_post_selection when the projected weight is below 1e-300.
PostSelection post_select(const JointState& state, double phi);

/// <f|sigma_z|i> / <f|i> = 1/phi. Throws undefined_weak_value for phi <= 0.
double weak_value(double phi);

enum class Regime { weak_value, transition, dark_port, bright_port, invalid };

std::string_view to_string(Regime regime) noexcept;

/// invalid if params fail validation; dark_port if phi <= kappa; bright_port
/// if phi > 0.2; weak_value if kappa <= phi/5; transition otherwise.
Regime classify_regime(const ProtocolParams& params) noexcept;

/// |psi(x)|^2.
double conditional_pdf(const PointerState& pointer, double x);

/// sqrt(2) w kappa phi / (phi^2 + kappa^2): <X> of the first-order pointer.
double first_order_mean_position(double kappa, double phi, double width);

/// <X> of the exactly evolved, post-selected pointer, written as a
/// superposition of two Gaussians displaced by +-d, d = sqrt(2) w kappa:
/// 2 d phi / ((1 + phi^2) + (phi^2 - 1) <psi0(x-d)|psi0(x+d)>).
double two_gaussian_mean_position(double kappa, double phi, double width);

} // namespace wva
