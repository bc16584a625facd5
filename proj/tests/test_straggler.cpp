#include "codedfog/straggler.hpp"

#include "codedfog/mapfn.hpp"

#include <doctest.h>

#include <cmath>

using namespace codedfog;

TEST_CASE("harmonic numbers and order statistic means") {
    CHECK(harmonic(0) == 0.0);
    CHECK(harmonic(1) == 1.0);
    CHECK(harmonic(3) == doctest::Approx(11.0 / 6.0));
    CHECK(exp_order_stat_mean(1, 1, 1.0) == doctest::Approx(1.0));
    CHECK(exp_order_stat_mean(2, 1, 1.0) == doctest::Approx(0.5));
    CHECK(exp_order_stat_mean(10, 5, 1.0) == doctest::Approx(0.6456349).epsilon(1e-6));
    CHECK(exp_order_stat_mean(10, 5, 2.0) == doctest::Approx(0.6456349 / 2).epsilon(1e-6));
    CHECK_THROWS_AS(exp_order_stat_mean(5, 6, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(exp_order_stat_mean(5, 0, 1.0), std::invalid_argument);
}

TEST_CASE("order statistic mean monotone in q and n") {
    for (int n = 2; n <= 12; ++n) {
        for (int q = 1; q < n; ++q) {
            CHECK(exp_order_stat_mean(n, q, 1.0) < exp_order_stat_mean(n, q + 1, 1.0));
            CHECK(exp_order_stat_mean(n + 1, q, 1.0) < exp_order_stat_mean(n, q, 1.0));
        }
    }
}

TEST_CASE("analytic latencies: closed forms") {
    const ShiftedExponential model{1.0, 1.0};
    CHECK(scheme_latency_analytic({SchemeKind::Uncoded, 10, 10}, model) ==
          doctest::Approx(0.1 + harmonic(10) / 10.0));
    CHECK(scheme_latency_analytic({SchemeKind::Mds, 10, 5}, model) ==
          doctest::Approx(0.2 + (harmonic(10) - harmonic(5)) / 5.0));
    // n = k MDS coincides with uncoded
    CHECK(scheme_latency_analytic({SchemeKind::Mds, 7, 7}, model) ==
          doctest::Approx(scheme_latency_analytic({SchemeKind::Uncoded, 7, 7}, model)));
    CHECK_THROWS_AS(scheme_latency_analytic({SchemeKind::Uncoded, 4, 2}, model),
                    std::invalid_argument);
    CHECK_THROWS_AS(scheme_latency_analytic({SchemeKind::Repetition, 4, 3}, model),
                    std::invalid_argument);
}

TEST_CASE("Monte Carlo agrees with the analytic mean within 3 SE") {
    const std::int64_t trials = 100000;
    SUBCASE("mds n=3 k=2, s=0") {
        const auto est = scheme_latency_mc({SchemeKind::Mds, 3, 2}, {0.0, 1.0}, trials, 1);
        CHECK(est.analyticMean == doctest::Approx((harmonic(3) - harmonic(1)) / 2.0));
        CHECK(std::abs(est.mcMean - est.analyticMean) <= 3 * est.mcStdErr);
    }
    SUBCASE("uncoded n=1") {
        const auto est = scheme_latency_mc({SchemeKind::Uncoded, 1, 1}, {0.5, 2.0}, trials, 2);
        CHECK(est.analyticMean == doctest::Approx(1.0));
        CHECK(std::abs(est.mcMean - est.analyticMean) <= 3 * est.mcStdErr);
    }
    SUBCASE("repetition n=4 k=2, s=0") {
        const auto est = scheme_latency_mc({SchemeKind::Repetition, 4, 2}, {0.0, 1.0}, trials, 3);
        CHECK(est.analyticMean == doctest::Approx(harmonic(2) / 4.0));
        CHECK(std::abs(est.mcMean - est.analyticMean) <= 3 * est.mcStdErr);
    }
}

TEST_CASE("samples respect the shift floor") {
    const ShiftedExponential model{2.0, 5.0};
    std::uint64_t state = 9;
    for (int i = 0; i < 1000; ++i) {
        CHECK(model.sample(0.25, state) >= 0.5);
    }
}

TEST_CASE("serial and parallel Monte Carlo aggregates are bit-identical") {
    const ExecutionScheme scheme{SchemeKind::Mds, 8, 5};
    const ShiftedExponential model{1.0, 2.0};
    const auto a = scheme_latency_mc(scheme, model, 20000, 17);
    const auto b = scheme_latency_mc_serial(scheme, model, 20000, 17);
    CHECK(a.mcMean == b.mcMean);
    CHECK(a.mcStdErr == b.mcStdErr);
    const auto again = scheme_latency_mc(scheme, model, 20000, 17);
    CHECK(a.mcMean == again.mcMean);
}

TEST_CASE("optimal MDS k and log-n speedup growth") {
    const ShiftedExponential model{1.0, 1.0};
    CHECK(optimal_mds_k(1, model).kStar == 1);
    CHECK(optimal_mds_k(1, model).speedup == doctest::Approx(1.0));
    const auto n10 = optimal_mds_k(10, model);
    const auto n100 = optimal_mds_k(100, model);
    CHECK(n10.speedup > 1.0);
    CHECK(n100.speedup > n10.speedup);
    // k* latency never exceeds uncoded at the same n
    CHECK(scheme_latency_analytic({SchemeKind::Mds, 10, n10.kStar}, model) <=
          scheme_latency_analytic({SchemeKind::Uncoded, 10, 10}, model));
}

TEST_CASE("model parameter validation") {
    CHECK_THROWS_AS(ShiftedExponential({-1.0, 1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(ShiftedExponential({0.0, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(scheme_latency_mc({SchemeKind::Uncoded, 2, 2}, {0.0, 1.0}, 0, 1),
                    std::invalid_argument);
}
