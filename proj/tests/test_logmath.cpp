#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ppmlink/logmath.hpp"

using namespace ppmlink;

TEST_CASE("log1m_exp matches direct evaluation across scales") {
    // midrange: direct form keeps enough precision to act as reference
    for (double x : {0.1, 0.5, 1.0, 5.0}) {
        const double direct = std::log(1.0 - std::exp(-x));
        CHECK(log1m_exp(x) == Catch::Approx(direct).epsilon(1e-12));
    }
    // tiny x: direct form cancels; the series is log(x) - x/2 - x^2/24 ...
    for (double x : {1e-12, 1e-6}) {
        CHECK(log1m_exp(x) == Catch::Approx(std::log(x) - x / 2.0).epsilon(1e-12));
    }
    // large x: log(1 - e^{-x}) = -e^{-x} - e^{-2x}/2 - ...
    for (double x : {30.0, 500.0}) {
        const double series = -std::exp(-x) - 0.5 * std::exp(-2.0 * x);
        CHECK(log1m_exp(x) == Catch::Approx(series).epsilon(1e-13));
    }
    CHECK(log1m_exp(0.0) == kNegInf);
    CHECK_THROWS_AS(log1m_exp(-1.0), std::domain_error);
}

TEST_CASE("log_sum_exp handles -inf and ordering") {
    CHECK(log_sum_exp(kNegInf, -1.5) == -1.5);
    CHECK(log_sum_exp(-1.5, kNegInf) == -1.5);
    CHECK(log_sum_exp(kNegInf, kNegInf) == kNegInf);
    CHECK(log_sum_exp(0.0, 0.0) == Catch::Approx(std::log(2.0)));
    CHECK(log_sum_exp(-1000.0, -1000.5) ==
          Catch::Approx(-1000.0 + std::log1p(std::exp(-0.5))));
}

TEST_CASE("Neumaier sum recovers mass lost by naive accumulation") {
    NeumaierSum s;
    s.add(1.0);
    for (int i = 0; i < 1000; ++i) s.add(1e-18);
    CHECK(s.value() == Catch::Approx(1.0 + 1e-15).epsilon(1e-15));
}

TEST_CASE("binomial coefficients: exact small values and lgamma consistency") {
    CHECK(binomial_exact_u64(0, 0) == 1);
    CHECK(binomial_exact_u64(5, 2) == 10);
    CHECK(binomial_exact_u64(52, 5) == 2598960);
    CHECK(binomial_exact_u64(56, 28) == 7648690600760440ULL);
    CHECK_THROWS_AS(binomial_exact_u64(57, 28), std::domain_error);
    CHECK_THROWS_AS(binomial_exact_u64(5, 6), std::domain_error);

    CHECK(log_binomial(10, 0) == 0.0);
    CHECK(log_binomial(10, 10) == 0.0);
    CHECK(log_binomial(40, 13) ==
          Catch::Approx(std::log(static_cast<double>(binomial_exact_u64(40, 13)))));
    // continuity across the exact/lgamma switch
    CHECK(log_binomial(200, 77) ==
          Catch::Approx(std::lgamma(201.0) - std::lgamma(78.0) - std::lgamma(124.0))
              .epsilon(1e-13));
}
