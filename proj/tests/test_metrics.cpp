#include <doctest.h>

#include "scelab/error.hpp"
#include "scelab/metrics.hpp"
#include "scelab/oracles.hpp"

#include <cmath>

using namespace scelab;

TEST_CASE("full spot check has integrity one in every replicate")
{
    const auto per = integrity_per_replicate(paper_base(), Measurement::spot_check(100), 0.6, 20, Seed(1));
    for (const auto& r : per) {
        REQUIRE(r.has_value());
        CHECK(*r == doctest::Approx(1.0).epsilon(1e-12));
    }
    const auto mi = measurement_integrity(paper_base(), Measurement::spot_check(100), 0.6, 20, Seed(1));
    CHECK(mi.value == doctest::Approx(1.0));
    CHECK(mi.dropped == 0);
}

TEST_CASE("empty spot check fails every metric")
{
    const auto cfg = paper_base();
    const auto sc0 = Measurement::spot_check(0);
    CHECK_THROWS_AS(measurement_integrity(cfg, sc0, 0.6, 10, Seed(1)), UndefinedCorrelation);
    SensitivityOptions so;
    so.iterations = 20;
    CHECK_THROWS_AS(sensitivity_proxy(cfg, sc0, 0.6, so, Seed(1)), EstimationError);
    CalibrationOptions co;
    co.replicates = 10;
    CHECK_THROWS_AS(total_payment(cfg, sc0, 0.6, co, Seed(1)), CalibrationError);
}

TEST_CASE("integrity per replicate lies in [-1, 1]")
{
    for (auto m : {Measurement::spot_check(30), Measurement::output_agreement(), Measurement::determinant_mi()})
        for (const auto& r : integrity_per_replicate(paper_base(), m, 0.5, 30, Seed(2)))
            if (r) CHECK(std::abs(*r) <= 1.0 + 1e-12);
}

TEST_CASE("no manipulation means no score change")
{
    SensitivityOptions so;
    so.iterations = 50;
    so.manipulation.replace_prob = 0.0;
    const auto d = sensitivity_detail(paper_base(), Measurement::spot_check(100), 0.6, so, Seed(3));
    CHECK(d.delta_mu == 0.0);
    CHECK(d.estimate.value == 0.0);
}

TEST_CASE("full spot check sensitivity matches the replacement oracle")
{
    const auto cfg = paper_base();
    const double xi = 0.7;
    double eq = 0.0;
    for (int g = 0; g < 4; ++g) eq += cfg.prior[g] * (xi * cfg.gamma_work(g, g) + (1 - xi) * 0.25);
    const double expected = -0.5 * (eq - 0.25);
    SensitivityOptions so;
    so.iterations = 5000;
    const auto d = sensitivity_detail(cfg, Measurement::spot_check(100), xi, so, Seed(4));
    CHECK(std::abs(d.delta_mu - expected) <= 2.0 * d.delta_mu_stderr);
    CHECK(d.sigma_s > 0.0);
}

TEST_CASE("Gaussian surrogate integrity approaches the closed form")
{
    const auto t = theorem1_check({1.0, 1.0, 1.0}, 0.6, 200, 10000, Seed(5));
    CHECK(std::abs(t.mi_estimate - example1_sensitivity(1.0)) < 0.01);
}

TEST_CASE("metrics are identical serial and parallel")
{
    const auto cfg = paper_base();
    const auto m = Measurement::correlated_agreement();
    const auto s = measurement_integrity(cfg, m, 0.6, 40, Seed(6), Execution::serial);
    const auto p = measurement_integrity(cfg, m, 0.6, 40, Seed(6), Execution::parallel);
    CHECK(s.value == p.value);
    CHECK(s.stderr_value == p.stderr_value);
    SensitivityOptions so;
    so.iterations = 60;
    so.execution = Execution::serial;
    const auto a = sensitivity_proxy(cfg, m, 0.6, so, Seed(7));
    so.execution = Execution::parallel;
    const auto b = sensitivity_proxy(cfg, m, 0.6, so, Seed(7));
    CHECK(a.value == b.value);
}

TEST_CASE("spot check integrity rises with the checking ratio")
{
    const auto cfg = paper_base();
    double prev = 0.0;
    for (double x : {20.0, 60.0, 100.0}) {
        const auto mi = measurement_integrity(cfg, Measurement::spot_check(x), 0.6, 100, Seed(8));
        CHECK(mi.value > prev);
        prev = mi.value;
    }
}
