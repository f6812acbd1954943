#pragma once

// Monte Carlo comparison of kappa estimators (weak-value, dark-port and
// bright-port post-selection) under a per-trial background-click rate beta.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wva/pointer_fock.hpp"
#include "wva/weak_protocol.hpp"

namespace wva {

inline constexpr int bootstrap_resamples = 1000;

/// Background clicks occur with probability beta per trial and carry a
/// homodyne sample drawn from the undisplaced |psi0|^2.
struct NoiseModel {
    double beta = 0.0;
    double width = 1.0;

    double background_pdf(double x) const;
};

struct TrialRecord {
    std::uint64_t trial_index = 0;
    bool detected = false;
    bool is_background = false;  ///< bookkeeping only; estimators ignore it
    std::optional<double> homodyne_sample;

    bool operator==(const TrialRecord&) const = default;
};

struct SummaryStats {
    std::string strategy;  ///< "weak_value" or "dark_port"
    std::string regime;    ///< classify_regime of the run parameters
    std::optional<double> kappa_hat;
    std::optional<double> rmse;  ///< bootstrap RMSE
    std::int64_t n_detections = 0;
    std::int64_t n_trials = 0;
    double detection_rate = 0.0;
    bool insufficient_data = false;
    bool snr_warning = false;

    // config echo
    double kappa = 0.0;
    double phi = 0.0;
    double beta = 0.0;
    double width = 1.0;
    std::uint64_t master_seed = 0;

    bool operator==(const SummaryStats&) const = default;
};

/// Inverse-CDF sampler of |psi(x)|^2 tabulated on a position grid.
class InverseCdfSampler {
public:
    InverseCdfSampler(const PointerState& pointer, const PositionGrid& grid);

    /// Maps u in [0, 1) to a position sample.
    double operator()(double u) const;

    const PositionGrid& grid() const noexcept { return grid_; }

private:
    PositionGrid grid_;
    std::vector<double> cdf_;
};

/// Success probability of one trial without background: exact evolution
/// followed by post-selection (zero when phi = kappa = 0).
double true_detection_probability(const ProtocolParams& params, int dim = default_fock_dim);

/// Simulates `n_trials` independent trials. Trial i draws from
/// StreamRng(master_seed, i), so the output does not depend on `threads`.
std::vector<TrialRecord> run_trials(const ProtocolParams& params, std::int64_t n_trials,
                                    std::uint64_t master_seed, unsigned threads = 1,
                                    int dim = default_fock_dim);

struct EstimatorOptions {
    double beta = 0.0;  ///< known noise level, used for the SNR warning
    int resamples = bootstrap_resamples;
    std::uint64_t bootstrap_seed = 42;
};

/// kappa_hat = mean(x over detections) * phi / (sqrt(2) w), bootstrap RMSE.
/// Throws insufficient_data with no detections and undefined_weak_value for phi <= 0.
SummaryStats estimate_weak_value(std::span<const TrialRecord> records, double phi, double width,
                                 const EstimatorOptions& options = {});

/// kappa_hat = sqrt(max(0, detection_rate - beta)), bootstrap RMSE.
SummaryStats estimate_dark_port(std::span<const TrialRecord> records, std::int64_t n_trials,
                                double beta_known, const EstimatorOptions& options = {});

/// Runs and estimates one strategy per phi (phi = 0 uses the dark-port
/// estimator). Every phi reuses `master_seed`, so the sweep is a paired
/// experiment.
std::vector<SummaryStats> sweep_phi(double kappa, double beta, std::span<const double> phi_grid,
                                    std::int64_t n_trials, std::uint64_t master_seed,
                                    double width = 1.0, unsigned threads = 1);

/// run_trials plus the matching estimator for a single configuration.
SummaryStats run_estimate(const ProtocolParams& params, std::int64_t n_trials,
                          std::uint64_t master_seed, unsigned threads = 1);

} // namespace wva
