#include <doctest.h>

#include "scelab/error.hpp"
#include "scelab/metrics.hpp"
#include "scelab/payments.hpp"

#include <cmath>

using namespace scelab;

TEST_CASE("linear payments")
{
    const std::vector<double> s{1, 2, 3};
    const auto flat = linear_pay(s, 0.0, 2.5);
    CHECK(flat.values == std::vector<double>{2.5, 2.5, 2.5});
    const auto p = linear_pay(s, 2.0, 1.0);
    CHECK(p.values == std::vector<double>{3, 5, 7});
    CHECK(p.total == 15.0);
    CHECK_THROWS_AS(linear_pay(s, 1.0, -2.0), LiabilityError);
}

TEST_CASE("borda payoffs")
{
    const auto p = borda_payoffs(std::vector<double>{3, 2, 1}, 1.0);
    CHECK(p.values == std::vector<double>{2, 1, 0});
    CHECK(p.total == 3.0);
    const auto tie = borda_payoffs(std::vector<double>(4, 0.7), 1.0);
    CHECK(tie.values == std::vector<double>(4, 1.5));
    CHECK(tie.total == 6.0);
}

TEST_CASE("winner take all")
{
    Rng rng(Seed(1));
    const auto p = winner_take_all(std::vector<double>{3, 1}, 10.0, rng);
    CHECK(p.values == std::vector<double>{10, 0});
    CHECK(winner_take_all(std::vector<double>{3, 1}, 0.0, rng).values == std::vector<double>{0, 0});
    int first = 0;
    for (std::uint64_t s = 0; s < 10000; ++s) {
        Rng r{Seed(s)};
        if (winner_take_all(std::vector<double>{1, 1}, 1.0, r).values[0] == 1.0) ++first;
    }
    CHECK(std::abs(first / 10000.0 - 0.5) < 0.02);
}

TEST_CASE("borda conservation and rank invariance")
{
    Rng rng(Seed(2));
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(40);
        std::vector<double> s(n), t(n);
        for (auto& v : s) v = static_cast<double>(rng.below(6));  // plenty of ties
        for (std::size_t i = 0; i < n; ++i) t[i] = std::exp(s[i]) * 3.0 - 7.0;
        const double scale = rng.uniform() * 5.0;
        const auto p = borda_payoffs(s, scale);
        const auto q = borda_payoffs(t, scale);
        CHECK(p.values == q.values);
        CHECK(p.total == doctest::Approx(scale * static_cast<double>(n * (n - 1)) / 2.0).epsilon(1e-12));
        Rng w1{Seed(trial)}, w2{Seed(trial)};
        CHECK(winner_take_all(s, 4.0, w1).values == winner_take_all(t, 4.0, w2).values);
    }
}

TEST_CASE("calibration floor and errors")
{
    const auto cfg = paper_base();
    const auto huge = finish_calibration(cfg, 0.6, 1000.0, 1.0, 10);
    CHECK(huge.ir_binding);
    CHECK(huge.total_payment == 50.0 * cost(cfg, 0.6));
    CHECK(huge.total_payment_stderr == 0.0);
    const auto small = finish_calibration(cfg, 0.6, 0.1, 0.01, 10);
    CHECK_FALSE(small.ir_binding);
    CHECK(small.borda_scale == doctest::Approx(12.0));
    CHECK(small.total_payment == doctest::Approx(12.0 * 50 * 49 / 2));
    CHECK(finish_calibration(cfg, 0.6, 0.1, 0.08, 10).low_confidence);
    CHECK_THROWS_AS(finish_calibration(cfg, 0.6, 0.0, 0.0, 10), CalibrationError);

    CalibrationOptions o;
    o.replicates = 20;
    CHECK_THROWS_AS(calibrate_borda(cfg, Measurement::spot_check(0), 0.6, o, Seed(1)), CalibrationError);
}

TEST_CASE("cost coefficient scales the Borda scale")
{
    auto cfg = paper_base();
    CalibrationOptions o;
    o.replicates = 100;
    const auto a = calibrate_borda(cfg, Measurement::spot_check(50), 0.6, o, Seed(3));
    cfg.cost_coefficient = 2.0;
    const auto b = calibrate_borda(cfg, Measurement::spot_check(50), 0.6, o, Seed(3));
    CHECK(b.derivative_estimate == a.derivative_estimate);
    CHECK(b.borda_scale == doctest::Approx(2.0 * a.borda_scale).epsilon(1e-12));
    CHECK(a.total_payment >= a.ir_bound);
}

TEST_CASE("calibration is identical serial and parallel")
{
    const auto cfg = paper_base();
    CalibrationOptions o;
    o.replicates = 64;
    o.execution = Execution::serial;
    const auto s = calibrate_borda(cfg, Measurement::output_agreement(), 0.6, o, Seed(4));
    o.execution = Execution::parallel;
    const auto p = calibrate_borda(cfg, Measurement::output_agreement(), 0.6, o, Seed(4));
    CHECK(s.total_payment == p.total_payment);
    CHECK(s.derivative_stderr == p.derivative_stderr);
}
