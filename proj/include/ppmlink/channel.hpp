#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "ppmlink/logmath.hpp"

namespace ppmlink {

/// Dimensionless description of one PPM frame seen by a Geiger-mode counter:
/// mean detected signal photons per pulse n_s, mean background photons per
/// bin n_b, PPM order M and decoding truncation depth K.
struct ChannelParams {
    double n_s = 0.0;
    double n_b = 0.0;
    std::int64_t M = 2;
    std::int64_t K = 2;

    ChannelParams(double ns, double nb, std::int64_t order, std::int64_t depth)
        : n_s(ns), n_b(nb), M(order), K(depth) {
        if (!(n_s >= 0.0) || !(n_b >= 0.0))
            throw std::domain_error("ChannelParams: photon numbers must be >= 0");
        if (M < 2) throw std::domain_error("ChannelParams: M must be >= 2");
        if (K < 1 || K > M) throw std::domain_error("ChannelParams: K must satisfy 1 <= K <= M");
    }

    /// Build from the per-bin average power n_a; the pulse then carries
    /// n_s = M * n_a to keep the average power fixed.
    static ChannelParams from_average_power(double n_a, double nb, std::int64_t order,
                                            std::int64_t depth) {
        if (!(n_a >= 0.0))
            throw std::domain_error("ChannelParams: n_a must be >= 0");
        return ChannelParams(static_cast<double>(order) * n_a, nb, order, depth);
    }
};

/// Per-bin click probabilities with their natural-log forms.
/// log1m_pb == -n_b and log1m_pc == -(n_s + n_b) hold exactly.
struct ClickProbs {
    double p_b = 0.0;
    double p_c = 0.0;
    double log_pb = kNegInf;
    double log1m_pb = 0.0;
    double log_pc = kNegInf;
    double log1m_pc = 0.0;

    /// n_s recovered without cancellation.
    double n_s() const { return log1m_pb - log1m_pc; }
    double n_b() const { return -log1m_pb; }
};

/// p_b = 1 - exp(-n_b), p_c = 1 - exp(-n_s - n_b).
inline ClickProbs click_probabilities(double n_s, double n_b) {
    if (!(n_s >= 0.0) || !(n_b >= 0.0))
        throw std::domain_error("click_probabilities: photon numbers must be >= 0");
    ClickProbs cp;
    cp.p_b = -std::expm1(-n_b);
    cp.p_c = -std::expm1(-(n_s + n_b));
    cp.log_pb = log1m_exp(n_b);
    cp.log1m_pb = -n_b;
    cp.log_pc = log1m_exp(n_s + n_b);
    cp.log1m_pc = -(n_s + n_b);
    return cp;
}

namespace detail {
// x * log_term with the 0 * (-inf) = 0 convention for zero exponents
inline double xlog(double x, double log_term) {
    return x == 0.0 ? 0.0 : x * log_term;
}
}  // namespace detail

/// ln of the probability of one specific k-click sequence whose clicks
/// include the pulse bin: p_c * p_b^(k-1) * (1-p_b)^(M-k).
inline double log_seq_prob_signal(std::int64_t k, const ClickProbs& cp, std::int64_t M) {
    if (k < 1 || k > M)
        throw std::domain_error("log_seq_prob_signal: require 1 <= k <= M");
    return cp.log_pc + detail::xlog(static_cast<double>(k - 1), cp.log_pb) +
           detail::xlog(static_cast<double>(M - k), cp.log1m_pb);
}

/// ln of the probability of one specific k-click sequence with no click in
/// the pulse bin: (1-p_c) * p_b^k * (1-p_b)^(M-k-1). k = M is rejected; its
/// multiplicity is zero so the value never enters any sum.
inline double log_seq_prob_empty(std::int64_t k, const ClickProbs& cp, std::int64_t M) {
    if (k < 0 || k > M - 1)
        throw std::domain_error("log_seq_prob_empty: require 0 <= k <= M-1");
    return cp.log1m_pc + detail::xlog(static_cast<double>(k), cp.log_pb) +
           detail::xlog(static_cast<double>(M - 1 - k), cp.log1m_pb);
}

/// ln p(k) with p(k) = (k/M) p_c(k) + (1 - k/M) p_e(k), the probability of a
/// specific k-click sequence marginalized over the M equiprobable inputs.
inline double log_marginal_prob(std::int64_t k, const ClickProbs& cp, std::int64_t M) {
    if (k < 0 || k > M)
        throw std::domain_error("log_marginal_prob: require 0 <= k <= M");
    if (k == 0) return log_seq_prob_empty(0, cp, M);
    if (k == M) return log_seq_prob_signal(M, cp, M);
    const double w = static_cast<double>(k) / static_cast<double>(M);
    return log_sum_exp(std::log(w) + log_seq_prob_signal(k, cp, M),
                       std::log1p(-w) + log_seq_prob_empty(k, cp, M));
}

}  // namespace ppmlink
