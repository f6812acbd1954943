#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wva/error.hpp"
#include "wva/estimation.hpp"
#include "wva/rng.hpp"

using namespace wva;

namespace {

double detection_fraction(const std::vector<TrialRecord>& records)
{
    const auto hits = std::count_if(records.begin(), records.end(),
                                    [](const TrialRecord& r) { return r.detected; });
    return static_cast<double>(hits) / static_cast<double>(records.size());
}

double binomial_stderr(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

} // namespace

TEST_CASE("StreamRng is reproducible and keyed by stream")
{
    StreamRng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
    StreamRng u(1, 1);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
        CHECK(u.below(10) < 10u);
    }
}

TEST_CASE("inverse-CDF sampler reproduces the pointer moments")
{
    const auto g = ground_state(32, 1.5);
    const InverseCdfSampler sample(g, make_position_grid(1.5));
    const int n = 20000;
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sample((i + 0.5) / n);  // stratified quantiles
        m1 += x;
        m2 += x * x;
    }
    m1 /= n;
    m2 /= n;
    CHECK(std::abs(m1) < 1e-6);
    CHECK(m2 == doctest::Approx(1.5 * 1.5 / 2.0).epsilon(1e-3));
}

TEST_CASE("run_trials detection statistics")
{
    SUBCASE("noiseless weak-value rate")
    {
        const ProtocolParams p{0.01, 0.1, 1.0, 0.0};
        const auto rec = run_trials(p, 1'000'000, 42);
        const double f = detection_fraction(rec);
        const double se = binomial_stderr(0.0101, 1e6);
        CHECK(std::abs(f - 0.0101) < 3 * se);
        CHECK(std::abs(f - true_detection_probability(p)) < 3 * se);
        for (const auto& r : rec) {
            CHECK(r.detected == r.homodyne_sample.has_value());
            if (r.is_background)
                FAIL("background event with beta = 0");
        }
    }
    SUBCASE("no coupling: rate phi^2 and zero mean")
    {
        const ProtocolParams p{0.0, 0.1, 1.0, 0.0};
        const auto rec = run_trials(p, 1'000'000, 9);
        CHECK(std::abs(detection_fraction(rec) - 0.01) < 3 * binomial_stderr(0.01, 1e6));
        double sum = 0.0;
        int n = 0;
        for (const auto& r : rec)
            if (r.detected) {
                sum += *r.homodyne_sample;
                ++n;
            }
        CHECK(std::abs(sum / n) < 4.0 / std::sqrt(double(n)) / std::numbers::sqrt2);
    }
    SUBCASE("rate law with background: p + beta - p beta")
    {
        const ProtocolParams p{0.02, 0.05, 0.7, 0.01};
        const auto rec = run_trials(p, 400'000, 3);
        const double pt = true_detection_probability(p);
        const double expect = pt + p.beta - pt * p.beta;
        CHECK(std::abs(detection_fraction(rec) - expect) < 4 * binomial_stderr(expect, 4e5));

        double sum = 0.0;
        int count = 0;
        for (const auto& r : rec)
            if (r.is_background) {
                sum += *r.homodyne_sample;
                ++count;
            }
        REQUIRE(count > 100);
        CHECK(std::abs(sum / count) < 4.0 / std::sqrt(double(count)) * (p.width / std::numbers::sqrt2));
    }
    SUBCASE("determinism and thread independence")
    {
        const ProtocolParams p{0.01, 0.1, 1.0, 0.001};
        const auto a = run_trials(p, 50'000, 1234);
        const auto b = run_trials(p, 50'000, 1234);
        const auto c = run_trials(p, 50'000, 1234, 3);
        CHECK(a == b);
        CHECK(a == c);
        CHECK(a != run_trials(p, 50'000, 1235));
    }
    SUBCASE("validation")
    {
        CHECK_THROWS_AS(run_trials({0.01, 0.1, 1.0, 0.0}, 0, 1), Error);
        CHECK_THROWS_AS(run_trials({0.01, 0.1, 1.0, 1.0}, 10, 1), Error);
    }
}

TEST_CASE("estimate_weak_value")
{
    SUBCASE("noiseless recovery of kappa")
    {
        const auto rec = run_trials({0.01, 0.1, 1.0, 0.0}, 1'000'000, 42);
        const auto st = estimate_weak_value(rec, 0.1, 1.0);
        REQUIRE(st.kappa_hat);
        REQUIRE(st.rmse);
        CHECK(*st.rmse > 0.0);
        CHECK(std::abs(*st.kappa_hat - 0.01) < 4 * *st.rmse);
        CHECK(st.n_detections <= st.n_trials);
        CHECK_FALSE(st.snr_warning);
    }
    SUBCASE("no coupling gives zero")
    {
        const auto rec = run_trials({0.0, 0.1, 1.0, 0.0}, 300'000, 5);
        const auto st = estimate_weak_value(rec, 0.1, 1.0);
        CHECK(std::abs(*st.kappa_hat) < 4 * *st.rmse);
    }
    SUBCASE("background-dominated records")
    {
        const ProtocolParams p{0.001, 0.01, 1.0, 0.2};
        const auto rec = run_trials(p, 100'000, 8);
        EstimatorOptions opt;
        opt.beta = p.beta;
        const auto st = estimate_weak_value(rec, p.phi, p.width, opt);
        CHECK(st.snr_warning);
        CHECK(std::abs(*st.kappa_hat) < 4 * *st.rmse);
    }
    SUBCASE("is_background is ignored")
    {
        auto rec = run_trials({0.01, 0.1, 1.0, 0.01}, 100'000, 2);
        const auto before = estimate_weak_value(rec, 0.1, 1.0);
        for (auto& r : rec)
            r.is_background = !r.is_background;
        CHECK(estimate_weak_value(rec, 0.1, 1.0) == before);
    }
    SUBCASE("errors")
    {
        std::vector<TrialRecord> none(10);
        try {
            estimate_weak_value(none, 0.1, 1.0);
            FAIL("expected insufficient_data");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::insufficient_data);
        }
        CHECK_THROWS_AS(estimate_weak_value(none, 0.0, 1.0), Error);
    }
}

TEST_CASE("estimate_dark_port")
{
    SUBCASE("noiseless kappa = 0.02")
    {
        const auto rec = run_trials({0.02, 0.0, 1.0, 0.0}, 1'000'000, 42);
        const auto st = estimate_dark_port(rec, 1'000'000, 0.0);
        CHECK(std::abs(*st.kappa_hat - 0.02) < 4 * *st.rmse);
        CHECK(st.strategy == "dark_port");
    }
    SUBCASE("rate below beta clamps to zero")
    {
        std::vector<TrialRecord> rec(1000);
        rec[3].detected = true;
        rec[3].homodyne_sample = 0.1;
        const auto st = estimate_dark_port(rec, 1000, 0.01);
        CHECK(*st.kappa_hat == 0.0);
        CHECK(st.snr_warning);
    }
    SUBCASE("weak value beats dark port when kappa^2 << beta")
    {
        const double kappa = 0.003, beta = 1e-4;
        const std::int64_t n = 100'000;
        const auto dark = run_estimate({kappa, 0.0, 1.0, beta}, n, 42);
        const auto weak = run_estimate({kappa, 0.03, 1.0, beta}, n, 42);
        CHECK(*dark.rmse > *weak.rmse);
    }
}

TEST_CASE("sweep_phi")
{
    const std::vector<double> grid = {0.0, 0.03, 0.1, 0.3};
    SUBCASE("interior optimum under background")
    {
        const auto st = sweep_phi(0.003, 1e-4, grid, 1'000'000, 42);
        REQUIRE(st.size() == 4);
        CHECK(st[0].strategy == "dark_port");
        const auto best = std::min_element(st.begin(), st.end(), [](const auto& a, const auto& b) {
            return *a.rmse < *b.rmse;
        });
        CHECK(best != st.begin());
        CHECK(best != st.end() - 1);
        CHECK(*st[0].rmse > 2.0 * *best->rmse);
    }
    SUBCASE("without background the dark port is competitive")
    {
        const auto st = sweep_phi(0.003, 0.0, grid, 1'000'000, 42);
        double best_weak = 1.0;
        for (std::size_t i = 1; i < st.size(); ++i)
            best_weak = std::min(best_weak, *st[i].rmse);
        CHECK(*st[0].rmse < 2.0 * best_weak);
    }
    SUBCASE("deterministic")
    {
        CHECK(sweep_phi(0.01, 1e-3, grid, 20'000, 7) == sweep_phi(0.01, 1e-3, grid, 20'000, 7));
    }
    SUBCASE("single-trial budget is flagged")
    {
        for (const auto& s : sweep_phi(0.01, 0.0, grid, 1, 7))
            CHECK(s.insufficient_data);
    }
}
