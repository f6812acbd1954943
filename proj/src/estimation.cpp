#include "wva/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "wva/error.hpp"
#include "wva/rng.hpp"

namespace wva {

double NoiseModel::background_pdf(double x) const
{
    const double u = x / width;
    return std::exp(-u * u) / (std::sqrt(std::numbers::pi) * width);
}

InverseCdfSampler::InverseCdfSampler(const PointerState& pointer, const PositionGrid& grid)
    : grid_(grid), cdf_(grid.size, 0.0)
{
    const auto pdf = grid_density(pointer, grid);
    for (std::size_t i = 1; i < grid.size; ++i)
        cdf_[i] = cdf_[i - 1] + 0.5 * (pdf[i - 1] + pdf[i]) * grid.step;
    const double total = cdf_.back();
    if (!(total > 0.0))
        throw Error(ErrorCode::invalid_state, "pointer density vanishes on the grid");
    for (auto& c : cdf_)
        c /= total;
}

double InverseCdfSampler::operator()(double u) const
{
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t i = it == cdf_.begin() ? 0 : static_cast<std::size_t>(it - cdf_.begin()) - 1;
    i = std::min(i, grid_.size - 2);
    const double span = cdf_[i + 1] - cdf_[i];
    const double frac = span > 0.0 ? std::clamp((u - cdf_[i]) / span, 0.0, 1.0) : 0.0;
    return grid_.at(i) + frac * grid_.step;
}

double true_detection_probability(const ProtocolParams& params, int dim)
{
    params.validate();
    if (params.kappa == 0.0 && params.phi == 0.0)
        return 0.0;
    return post_select(evolve_exact(params, dim), params.phi).probability;
}

std::vector<TrialRecord> run_trials(const ProtocolParams& params, std::int64_t n_trials,
                                    std::uint64_t master_seed, unsigned threads, int dim)
{
    params.validate();
    if (n_trials < 1)
        throw Error(ErrorCode::validation, "n_trials must be >= 1");

    const double w = params.width;
    const double shift = std::numbers::sqrt2 * w * params.kappa;
    const PositionGrid grid = make_position_grid(w, -shift, shift);

    double p_true = 0.0;
    std::optional<InverseCdfSampler> signal;
    if (params.kappa > 0.0 || params.phi > 0.0) {
        const auto sel = post_select(evolve_exact(params, dim), params.phi);
        p_true = sel.probability;
        signal.emplace(sel.pointer, grid);
    }
    const InverseCdfSampler background(ground_state(dim, w), grid);
    const double beta = params.beta;

    std::vector<TrialRecord> records(static_cast<std::size_t>(n_trials));
    auto simulate = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            StreamRng rng(master_seed, i);
            const bool hit = rng.uniform() < p_true;
            const bool noise = rng.uniform() < beta;
            const double pick = rng.uniform();
            const double u = rng.uniform();

            TrialRecord& r = records[i];
            r.trial_index = i;
            r.detected = hit || noise;
            if (!r.detected)
                continue;
            // Both processes fired: keep the background click with
            // probability beta / (p_true + beta).
            r.is_background = noise && (!hit || pick < beta / (p_true + beta));
            r.homodyne_sample = r.is_background ? background(u) : (*signal)(u);
        }
    };

    const std::size_t n = records.size();
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, n);
    if (workers == 1) {
        simulate(0, n);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t begin = 0; begin < n; begin += chunk)
            pool.emplace_back(simulate, begin, std::min(n, begin + chunk));
    }
    return records;
}

namespace {

double rms_about(const std::vector<double>& values, double centre)
{
    double acc = 0.0;
    for (double v : values)
        acc += (v - centre) * (v - centre);
    return std::sqrt(acc / static_cast<double>(values.size()));
}

bool low_snr(double beta, double rate)
{
    return beta > 0.0 && beta >= 0.5 * rate;
}

} // namespace

SummaryStats estimate_weak_value(std::span<const TrialRecord> records, double phi, double width,
                                 const EstimatorOptions& options)
{
    if (!(phi > 0.0))
        throw Error(ErrorCode::undefined_weak_value, "weak-value estimator needs phi > 0");
    if (!(width > 0.0))
        throw Error(ErrorCode::validation, "width must be > 0");

    std::vector<double> xs;
    for (const auto& r : records)
        if (r.detected && r.homodyne_sample)
            xs.push_back(*r.homodyne_sample);
    if (xs.empty())
        throw Error(ErrorCode::insufficient_data, "no detections to estimate from");

    const double to_kappa = phi / (std::numbers::sqrt2 * width);
    const auto n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs)
        sum += x;
    const double kappa_hat = sum / n * to_kappa;

    std::vector<double> boot(static_cast<std::size_t>(options.resamples));
    for (std::size_t b = 0; b < boot.size(); ++b) {
        StreamRng rng(options.bootstrap_seed, b);
        double s = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k)
            s += xs[rng.below(xs.size())];
        boot[b] = s / n * to_kappa;
    }

    SummaryStats st;
    st.strategy = "weak_value";
    st.kappa_hat = kappa_hat;
    st.rmse = boot.empty() ? 0.0 : rms_about(boot, kappa_hat);
    st.n_detections = static_cast<std::int64_t>(xs.size());
    st.n_trials = static_cast<std::int64_t>(records.size());
    st.detection_rate = n / static_cast<double>(records.size());
    st.insufficient_data = xs.size() < 2;
    st.snr_warning = low_snr(options.beta, st.detection_rate);
    st.phi = phi;
    st.beta = options.beta;
    st.width = width;
    return st;
}

SummaryStats estimate_dark_port(std::span<const TrialRecord> records, std::int64_t n_trials,
                                double beta_known, const EstimatorOptions& options)
{
    const auto detections = std::count_if(records.begin(), records.end(),
                                           [](const TrialRecord& r) { return r.detected; });
    if (n_trials < 1 || n_trials < detections)
        throw Error(ErrorCode::validation, "n_trials must be >= 1 and cover every detection");
    if (!(beta_known >= 0.0 && beta_known < 1.0))
        throw Error(ErrorCode::validation, "beta must be in [0, 1)");

    const double rate = static_cast<double>(detections) / static_cast<double>(n_trials);
    auto kappa_of = [&](double r) { return std::sqrt(std::max(0.0, r - beta_known)); };
    const double kappa_hat = kappa_of(rate);

    // Resampling n_trials records with replacement draws the detection count
    // from Binomial(n_trials, rate).
    std::vector<double> boot(static_cast<std::size_t>(options.resamples));
    for (std::size_t b = 0; b < boot.size(); ++b) {
        StreamRng rng(options.bootstrap_seed, b);
        std::binomial_distribution<std::int64_t> count(n_trials, rate);
        boot[b] = kappa_of(static_cast<double>(count(rng)) / static_cast<double>(n_trials));
    }

    SummaryStats st;
    st.strategy = "dark_port";
    st.kappa_hat = kappa_hat;
    st.rmse = boot.empty() ? 0.0 : rms_about(boot, kappa_hat);
    st.n_detections = detections;
    st.n_trials = n_trials;
    st.detection_rate = rate;
    // A zero count makes every bootstrap replicate identical.
    st.insufficient_data = n_trials < 2 || detections == 0;
    st.snr_warning = low_snr(beta_known, rate);
    st.phi = 0.0;
    st.beta = beta_known;
    return st;
}

SummaryStats run_estimate(const ProtocolParams& params, std::int64_t n_trials,
                          std::uint64_t master_seed, unsigned threads)
{
    const auto records = run_trials(params, n_trials, master_seed, threads);
    EstimatorOptions opts;
    opts.beta = params.beta;
    opts.bootstrap_seed = mix64(master_seed);

    SummaryStats st;
    if (params.phi == 0.0) {
        st = estimate_dark_port(records, n_trials, params.beta, opts);
    } else {
        try {
            st = estimate_weak_value(records, params.phi, params.width, opts);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::insufficient_data)
                throw;
            st.strategy = "weak_value";
            st.n_trials = n_trials;
            st.insufficient_data = true;
            st.snr_warning = params.beta > 0.0;
        }
    }
    st.regime = std::string(to_string(classify_regime(params)));
    st.kappa = params.kappa;
    st.phi = params.phi;
    st.beta = params.beta;
    st.width = params.width;
    st.master_seed = master_seed;
    return st;
}

std::vector<SummaryStats> sweep_phi(double kappa, double beta, std::span<const double> phi_grid,
                                    std::int64_t n_trials, std::uint64_t master_seed,
                                    double width, unsigned threads)
{
    std::vector<SummaryStats> out;
    out.reserve(phi_grid.size());
    for (double phi : phi_grid)
        out.push_back(run_estimate({kappa, phi, width, beta}, n_trials, master_seed, threads));
    return out;
}

} // namespace wva
