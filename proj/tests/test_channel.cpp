#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ppmlink/channel.hpp"
#include "ppmlink/oracle.hpp"

using namespace ppmlink;

TEST_CASE("click probabilities at reference points") {
    SECTION("no light, no clicks") {
        const auto cp = click_probabilities(0.0, 0.0);
        CHECK(cp.p_b == 0.0);
        CHECK(cp.p_c == 0.0);
        CHECK(cp.log_pb == kNegInf);
        CHECK(cp.log1m_pb == 0.0);
    }
    SECTION("n_s = 0 forces p_b = p_c") {
        const auto cp = click_probabilities(0.0, 0.5);
        CHECK(cp.p_b == cp.p_c);
        CHECK(cp.p_b == Catch::Approx(-std::expm1(-0.5)).epsilon(1e-15));
    }
    SECTION("high-precision reference at n_s = 1, n_b = 1e-3") {
        const auto cp = click_probabilities(1.0, 1e-3);
        CHECK(cp.p_b == Catch::Approx(9.9950016662500833194e-4).epsilon(1e-14));
        CHECK(cp.p_c == Catch::Approx(0.63248825439130644996).epsilon(1e-14));
        CHECK(cp.log1m_pb == -1e-3);
        CHECK(cp.log1m_pc == -1.001);
        CHECK(std::exp(cp.log_pb) == Catch::Approx(cp.p_b).epsilon(1e-14));
        CHECK(std::exp(cp.log_pc) == Catch::Approx(cp.p_c).epsilon(1e-14));
    }
    CHECK_THROWS_AS(click_probabilities(-1e-9, 0.1), std::domain_error);
    CHECK_THROWS_AS(click_probabilities(0.1, -1e-9), std::domain_error);
}

TEST_CASE("click probability ordering and monotonicity") {
    for (int i = 0; i < 200; ++i) {
        const double n_s = std::exp(counter_uniform(11, 2 * i) * 12.0 - 7.0);
        const double n_b = std::exp(counter_uniform(11, 2 * i + 1) * 12.0 - 9.0);
        const auto cp = click_probabilities(n_s, n_b);
        CHECK(cp.p_b >= 0.0);
        CHECK(cp.p_b < cp.p_c);  // strict for n_s > 0
        CHECK(cp.p_c <= 1.0);
        const auto cp2 = click_probabilities(n_s * 1.25, n_b);
        CHECK(cp2.p_c >= cp.p_c);
    }
}

TEST_CASE("sequence log-probabilities") {
    const auto cp = click_probabilities(1.0, 0.1);
    const double pb = cp.p_b, pc = cp.p_c;

    SECTION("noise-free edge cases") {
        const auto nf = click_probabilities(2.0, 0.0);
        CHECK(log_seq_prob_signal(1, nf, 7) == nf.log_pc);
        CHECK(log_seq_prob_signal(2, nf, 7) == kNegInf);
        CHECK(log_seq_prob_empty(0, nf, 7) == nf.log1m_pc);
        CHECK(log_seq_prob_empty(0, nf, 7) == -2.0);  // erasure probability e^{-n_s}
        CHECK(log_seq_prob_empty(1, nf, 7) == kNegInf);
    }
    SECTION("direct product evaluation at M = 4") {
        CHECK(log_seq_prob_signal(2, cp, 4) ==
              Catch::Approx(std::log(pc * pb * (1 - pb) * (1 - pb))).epsilon(1e-13));
        CHECK(log_seq_prob_empty(1, cp, 4) ==
              Catch::Approx(std::log((1 - pc) * pb * (1 - pb) * (1 - pb))).epsilon(1e-13));
    }
    SECTION("argument validation") {
        CHECK_THROWS_AS(log_seq_prob_signal(0, cp, 4), std::domain_error);
        CHECK_THROWS_AS(log_seq_prob_signal(5, cp, 4), std::domain_error);
        CHECK_THROWS_AS(log_seq_prob_empty(-1, cp, 4), std::domain_error);
        CHECK_THROWS_AS(log_seq_prob_empty(4, cp, 4), std::domain_error);  // k = M rejected
        CHECK_THROWS_AS(log_marginal_prob(5, cp, 4), std::domain_error);
    }
}

TEST_CASE("marginal sequence probability") {
    const auto cp = click_probabilities(1.0, 0.1);
    CHECK(log_marginal_prob(0, cp, 6) == log_seq_prob_empty(0, cp, 6));
    CHECK(log_marginal_prob(6, cp, 6) == log_seq_prob_signal(6, cp, 6));
    // frozen independent evaluation of ln(p_c(1)/2 + p_e(1)/2) at M = 2
    CHECK(log_marginal_prob(1, cp, 2) ==
          Catch::Approx(-1.14677352794459519).epsilon(1e-14));
    const double lin = 0.5 * std::exp(log_seq_prob_signal(1, cp, 2)) +
                       0.5 * std::exp(log_seq_prob_empty(1, cp, 2));
    CHECK(log_marginal_prob(1, cp, 2) == Catch::Approx(std::log(lin)).epsilon(1e-13));
}

namespace {

// exact-recurrence binomial weights paired with the module's log-probabilities
struct NormSums {
    double marginal = 0.0;
    double signal_branch = 0.0;  // should equal p_c
    double empty_branch = 0.0;   // should equal 1 - p_c
};

NormSums normalization_sums(std::int64_t M, const ClickProbs& cp) {
    NormSums out;
    NeumaierSum marg, sig, emp;
    double c_m = 1.0;  // C(M, k) by exact-ratio recurrence
    for (std::int64_t k = 0; k <= M; ++k) {
        marg.add(c_m * std::exp(log_marginal_prob(k, cp, M)));
        c_m = c_m * static_cast<double>(M - k) / static_cast<double>(k + 1);
    }
    // signal branch: C(M-1, k-1) p_c(k), k = 1..M
    double c = 1.0;
    for (std::int64_t k = 1; k <= M; ++k) {
        sig.add(c * std::exp(log_seq_prob_signal(k, cp, M)));
        c = c * static_cast<double>(M - k) / static_cast<double>(k);
    }
    // empty branch: C(M-1, k) p_e(k), k = 0..M-1
    c = 1.0;
    for (std::int64_t k = 0; k <= M - 1; ++k) {
        emp.add(c * std::exp(log_seq_prob_empty(k, cp, M)));
        c = c * static_cast<double>(M - 1 - k) / static_cast<double>(k + 1);
    }
    out.marginal = marg.value();
    out.signal_branch = sig.value();
    out.empty_branch = emp.value();
    return out;
}

}  // namespace

TEST_CASE("normalization identities over random draws") {
    for (int i = 0; i < 120; ++i) {
        const std::int64_t M =
            2 + static_cast<std::int64_t>(counter_uniform(77, 3 * i) * 999.0);
        const double n_s = std::exp(counter_uniform(77, 3 * i + 1) * 8.5 - 6.9);   // ~[1e-3, 5]
        const double n_b = std::exp(counter_uniform(77, 3 * i + 2) * 12.9 - 13.8); // ~[1e-6, 0.4]
        const auto cp = click_probabilities(n_s, n_b);
        const auto s = normalization_sums(M, cp);
        INFO("M=" << M << " n_s=" << n_s << " n_b=" << n_b);
        CHECK(std::abs(s.marginal - 1.0) < 1e-12);
        CHECK(std::abs(s.signal_branch / cp.p_c - 1.0) < 1e-12);
        CHECK(std::abs(s.empty_branch / (1.0 - cp.p_c) - 1.0) < 1e-12);
    }
}
