#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "wva/error.hpp"
#include "wva/weak_protocol.hpp"

using namespace wva;

namespace {

double joint_distance(const JointState& a, const JointState& b)
{
    return std::sqrt((a.amps_plus() - b.amps_plus()).squaredNorm()
                     + (a.amps_minus() - b.amps_minus()).squaredNorm());
}

double max_elementwise(const JointState& a, const JointState& b)
{
    return std::max((a.amps_plus() - b.amps_plus()).cwiseAbs().maxCoeff(),
                    (a.amps_minus() - b.amps_minus()).cwiseAbs().maxCoeff());
}

} // namespace

TEST_CASE("evolve_first_order")
{
    const auto s = evolve_first_order({0.1, 0.0, 1.0, 0.0});
    CHECK_FALSE(s.is_normalized());
    CHECK(s.amps_plus()[0] == Complex(1));
    CHECK(s.amps_plus().tail(s.dim() - 1).norm() == 0.0);
    CHECK(s.amps_minus()[1] == Complex(0.1));
    CHECK(std::abs(s.amps_minus()[0]) + s.amps_minus().tail(s.dim() - 2).norm() == 0.0);

    const auto product = evolve_first_order({0.0, 0.3, 1.0, 0.0});
    CHECK(product.amps_minus().norm() == 0.0);

    for (double k : {0.0, 0.01, 0.2, 0.7})
        CHECK(evolve_first_order({k, 0.1, 1.0, 0.0}).squared_norm() == doctest::Approx(1 + k * k).epsilon(1e-15));

    try {
        evolve_first_order({1.0, 0.1, 1.0, 0.0});
        FAIL("expected out_of_regime");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::out_of_regime);
    }
}

TEST_CASE("evolve_exact")
{
    SUBCASE("kappa = 0 is the identity")
    {
        const auto s = evolve_exact({0.0, 0.1, 1.0, 0.0});
        CHECK(s.amps_plus()[0] == Complex(1));
        CHECK(s.squared_norm() == 1.0);
    }
    SUBCASE("z+ branch is a coherent state: <0|D(kappa)|0> = e^{-kappa^2/2}")
    {
        const auto z = z_components(evolve_exact({0.1, 0.0, 1.0, 0.0}));
        const Complex overlap = std::numbers::sqrt2 * z.up[0];
        CHECK(overlap.real() == doctest::Approx(0.995012479192682313).epsilon(1e-15));
        CHECK(overlap.imag() == 0.0);
        // z- branch is displaced the other way
        CHECK(z.down[1].real() < 0.0);
        CHECK(z.up[1].real() > 0.0);
    }
    SUBCASE("first-order agreement within kappa^2")
    {
        for (double k : {0.001, 0.01, 0.03, 0.05}) {
            const ProtocolParams p{k, 0.1, 1.0, 0.0};
            CHECK(joint_distance(evolve_exact(p), evolve_first_order(p)) <= k * k);
        }
    }
    SUBCASE("unitarity up to kappa = 0.3")
    {
        for (double k = 0.0; k <= 0.3 + 1e-12; k += 0.01)
            CHECK(std::abs(evolve_exact({k, 0.0, 1.0, 0.0}).squared_norm() - 1.0) < 1e-10);
    }
    SUBCASE("truncation guard")
    {
        try {
            evolve_exact({0.9, 0.1, 1.0, 0.0}, 3);
            FAIL("expected truncation");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::truncation);
        }
    }
}

TEST_CASE("evolve_exact matches the truncated matrix exponential")
{
    std::mt19937_64 gen(20240601);
    std::uniform_real_distribution<double> kappa(0.0, 0.2);
    std::uniform_real_distribution<double> width(0.2, 5.0);
    for (int i = 0; i < 20; ++i) {
        const double k = kappa(gen);
        const double w = width(gen);
        const auto closed = evolve_exact({k, 0.0, w, 0.0});
        const auto numeric = oracle::evolve_by_expm(k, w, default_fock_dim);
        CHECK(max_elementwise(closed, numeric) < 1e-10);
    }
}

TEST_CASE("post_select")
{
    const double phi = 0.1, kappa = 0.01;
    SUBCASE("first-order pointer is (phi|0> + kappa|1>) / norm")
    {
        const auto sel = post_select(evolve_first_order({kappa, phi, 1.0, 0.0}), phi);
        CHECK(sel.leading_order == doctest::Approx(0.0101).epsilon(1e-15));
        CHECK(sel.probability == doctest::Approx(0.0101 / (1.01 * 1.0001)).epsilon(1e-14));
        const double n = std::sqrt(phi * phi + kappa * kappa);
        CHECK(std::abs(sel.pointer.amps()[0] - phi / n) < 1e-15);
        CHECK(std::abs(sel.pointer.amps()[1] - kappa / n) < 1e-15);
        CHECK(mean_position(sel.pointer) == doctest::Approx(0.140021144789415351).epsilon(1e-13));
    }
    SUBCASE("exact pointer mean equals the two-Gaussian closed form")
    {
        const auto sel = post_select(evolve_exact({kappa, phi, 1.0, 0.0}), phi);
        // 2 d phi / ((1+phi^2) + (phi^2-1) e^{-d^2}), d = sqrt(2) kappa (mpmath)
        CHECK(mean_position(sel.pointer) == doctest::Approx(0.140035146908469241).epsilon(1e-12));
        CHECK(two_gaussian_mean_position(kappa, phi, 1.0) == doctest::Approx(0.140035146908469241).epsilon(1e-14));
        CHECK(mean_position(sel.pointer) > 0.0);
    }
    SUBCASE("dark port leaves |1>")
    {
        const auto sel = post_select(evolve_first_order({0.05, 0.0, 1.0, 0.0}), 0.0);
        CHECK(std::abs(sel.pointer.amps()[1]) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(std::abs(sel.pointer.amps()[0]) == 0.0);
    }
    SUBCASE("impossible post-selection")
    {
        try {
            post_select(evolve_first_order({0.0, 0.0, 1.0, 0.0}), 0.0);
            FAIL("expected impossible_post_selection");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::impossible_post_selection);
        }
    }
    SUBCASE("probability monotone in phi and kappa")
    {
        double prev = -1.0;
        for (double p = 0.0; p < 0.9; p += 0.05) {
            const double prob = post_select(evolve_exact({0.02, p, 1.0, 0.0}), p).probability;
            CHECK(prob > prev);
            prev = prob;
        }
        prev = -1.0;
        for (double k = 0.0; k < 0.9; k += 0.05) {
            const double prob = post_select(evolve_exact({k, 0.05, 1.0, 0.0}), 0.05).probability;
            CHECK(prob > prev);
            prev = prob;
        }
    }
}

TEST_CASE("displacement law across kappa/phi <= 0.1")
{
    for (double phi : {0.02, 0.05, 0.1, 0.2})
        for (double ratio : {0.001, 0.01, 0.05, 0.1})
            for (double w : {0.5, 1.0, 3.0}) {
                const double kappa = ratio * phi;
                const auto sel = post_select(evolve_first_order({kappa, phi, w, 0.0}), phi);
                const double mean = mean_position(sel.pointer);
                const double naive = std::numbers::sqrt2 * w * kappa / phi;
                CHECK(mean / naive <= 1.0);
                CHECK(mean / naive >= 1.0 - 2.0 * ratio * ratio);
                CHECK(std::abs(mean - first_order_mean_position(kappa, phi, w)) < 1e-12);
            }
}

TEST_CASE("weak_value")
{
    CHECK(weak_value(0.1) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(weak_value(1.0) == 1.0);
    try {
        weak_value(0.0);
        FAIL("expected undefined_weak_value");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::undefined_weak_value);
    }
    // displacement / (sqrt(2) w kappa) -> 1/phi as kappa/phi -> 0
    const double phi = 0.1;
    double prev_err = 1e9;
    for (double ratio : {0.1, 0.01, 0.001}) {
        const double kappa = ratio * phi;
        const auto sel = post_select(evolve_first_order({kappa, phi, 1.0, 0.0}), phi);
        const double amp = mean_position(sel.pointer) / (std::numbers::sqrt2 * kappa);
        const double err = std::abs(amp - weak_value(phi));
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 1e-4);
}

TEST_CASE("classify_regime")
{
    CHECK(classify_regime({0.01, 0.1, 1.0, 0.0}) == Regime::weak_value);
    CHECK(classify_regime({0.01, 0.0, 1.0, 0.0}) == Regime::dark_port);
    CHECK(classify_regime({0.0, 0.0, 1.0, 0.0}) == Regime::dark_port);
    CHECK(classify_regime({0.01, 0.5, 1.0, 0.0}) == Regime::bright_port);
    CHECK(classify_regime({0.05, 0.1, 1.0, 0.0}) == Regime::transition);
    CHECK(classify_regime({0.02, 0.1, 1.0, 0.0}) == Regime::weak_value);
    CHECK(classify_regime({1.5, 0.1, 1.0, 0.0}) == Regime::invalid);
    CHECK(classify_regime({0.01, 0.1, -1.0, 0.0}) == Regime::invalid);
    CHECK(to_string(Regime::bright_port) == "bright_port");
}

TEST_CASE("conditional_pdf")
{
    CHECK(conditional_pdf(ground_state(8, 1.0), 0.0) == doctest::Approx(0.564189583547756287).epsilon(1e-14));
    CHECK(conditional_pdf(PointerState::fock(8, 1.0, 1), 0.0) == 0.0);

    SUBCASE("integrates to one on the standard grid")
    {
        const auto sel = post_select(evolve_exact({0.05, 0.1, 1.3, 0.0}), 0.1);
        const auto grid = make_position_grid(1.3, -0.1, 0.1);
        const auto pdf = grid_density(sel.pointer, grid);
        double total = 0.0;
        for (std::size_t i = 0; i < grid.size; ++i)
            total += pdf[i] * grid.step * ((i == 0 || i + 1 == grid.size) ? 0.5 : 1.0);
        CHECK(std::abs(total - 1.0) < 1e-8);
    }

    SUBCASE("peak sits at sqrt(2) w kappa / phi for kappa/phi = 0.05")
    {
        const double phi = 0.1, kappa = 0.005, w = 1.0;
        const auto sel = post_select(evolve_first_order({kappa, phi, w, 0.0}), phi);
        const auto grid = make_position_grid(w);
        const auto pdf = grid_density(sel.pointer, grid);
        const auto peak = static_cast<std::size_t>(std::max_element(pdf.begin(), pdf.end()) - pdf.begin());
        const double expected = std::numbers::sqrt2 * w * kappa / phi;
        CHECK(std::abs(grid.at(peak) - expected) <= 0.02 * expected + grid.step);
    }

    SUBCASE("dark port pdf is even with a node at the origin")
    {
        const auto sel = post_select(evolve_exact({0.05, 0.0, 1.0, 0.0}), 0.0);
        CHECK(conditional_pdf(sel.pointer, 0.0) < 1e-12);
        const auto grid = make_position_grid(1.0);
        for (std::size_t i = 0; i < grid.size / 2; i += 97) {
            const std::size_t mirror = grid.size - 1 - i;
            CHECK(std::abs(grid.at(i) + grid.at(mirror)) < 1e-12);
            CHECK(std::abs(conditional_pdf(sel.pointer, grid.at(i))
                           - conditional_pdf(sel.pointer, grid.at(mirror))) < 1e-12);
        }
    }
}
