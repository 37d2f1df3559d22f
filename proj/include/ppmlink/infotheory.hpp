#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "ppmlink/channel.hpp"
#include "ppmlink/logmath.hpp"

namespace ppmlink {

/// Mutual information of one evaluation, in bits per time bin.
/// K_effective is the largest click count actually summed; tail_bound is a
/// certified upper bound (bits) on the total magnitude of omitted terms.
struct InfoResult {
    double bits_per_bin = 0.0;
    std::int64_t K_effective = 0;
    double tail_bound = 0.0;
};

/// Thrown when the certified tail bound cannot be brought below the requested
/// tolerance within the iteration cap; carries the partial result.
class ToleranceError : public std::runtime_error {
public:
    ToleranceError(std::string msg, InfoResult part)
        : std::runtime_error(std::move(msg)), partial(part) {}
    InfoResult partial;
};

/// Binary relative entropy D(p||q) in bits, with the 0*log(0/.) = 0
/// convention. Returns +inf when p > 0, q = 0 or p < 1, q = 1.
inline double relative_entropy_binary(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
        throw std::domain_error("relative_entropy_binary: arguments must lie in [0,1]");
    double out = 0.0;
    if (p > 0.0) {
        if (q == 0.0) return std::numeric_limits<double>::infinity();
        out += p * std::log2(p / q);
    }
    if (p < 1.0) {
        if (q == 1.0) return std::numeric_limits<double>::infinity();
        out += (1.0 - p) * std::log2((1.0 - p) / (1.0 - q));
    }
    return out;
}

namespace detail {

// D(p_c || p_b) in bits, assembled from exact differences so that it stays
// accurate when n_s << n_b. Uses ln((1-p_c)/(1-p_b)) = -n_s exactly.
inline double dkl_click_vs_background_bits(double n_s, double n_b) {
    if (n_s == 0.0) return 0.0;
    const ClickProbs cp = click_probabilities(n_s, n_b);
    const double delta = std::exp(-n_b) * (-std::expm1(-n_s));  // p_c - p_b
    const double one_m_pc = std::exp(-(n_s + n_b));
    double nats = 0.0;
    if (cp.p_b > 0.0)
        nats += cp.p_c * std::log1p(delta / cp.p_b);
    else
        nats += cp.p_c * (cp.log_pc - cp.log_pb);  // p_b = 0 => +inf
    nats += one_m_pc * (-n_s);
    return nats / kLn2;
}

// The two relative entropies of the generalized-OOK mixture,
// D(p_b || qbar) and D(p_c || qbar) with qbar = (1 - 1/M) p_b + p_c / M,
// in bits. M is continuous (> 1).
struct OokPair {
    double d_pb_qbar = 0.0;
    double d_pc_qbar = 0.0;
};

inline OokPair ook_relative_entropies(double m_real, double n_s, double n_b) {
    if (!(m_real > 1.0))
        throw std::domain_error("ook_relative_entropies: M must exceed 1");
    if (!(n_s >= 0.0) || !(n_b >= 0.0))
        throw std::domain_error("ook_relative_entropies: photon numbers must be >= 0");
    OokPair out;
    const double delta = std::exp(-n_b) * (-std::expm1(-n_s));  // p_c - p_b
    if (delta == 0.0) return out;
    const ClickProbs cp = click_probabilities(n_s, n_b);
    const double one_m_pc = std::exp(-(n_s + n_b));
    const double qbar = cp.p_b + delta / m_real;
    const double gap = delta * (1.0 - 1.0 / m_real);  // p_c - qbar

    double d1 = 0.0;  // nats
    if (cp.p_b > 0.0) d1 -= cp.p_b * std::log1p(delta / (m_real * cp.p_b));
    d1 -= (1.0 - cp.p_b) * std::log1p(-delta / (m_real * (1.0 - cp.p_b)));

    double d2 = cp.p_c * std::log1p(gap / qbar);  // nats
    if (one_m_pc > 0.0) d2 -= one_m_pc * std::log1p(gap / one_m_pc);

    out.d_pb_qbar = d1 / kLn2;
    out.d_pc_qbar = d2 / kLn2;
    return out;
}

// Per-k bracket of the information sum, written through the click likelihood
// ratio rho = p_c (1-p_b) / ((1-p_c) p_b), which is independent of k:
//   p(k)/p_e(k) = 1 + (k/M)(rho - 1),  so with
//   A_k = C(M-1,k-1) p_c(k),  B_k = C(M-1,k) p_e(k),
//   T(k) = A_k ln(p_c(k)/p(k)) + B_k ln(p_e(k)/p(k))
//        = A_k (ln rho - g_k) - B_k g_k,   g_k = ln(1 + (k/M)(rho - 1)).
// T(k) >= 0 and T(k) <= A_k ln rho, which yields certified tail bounds.
struct BracketKernel {
    double rho1;      // rho - 1, may be +inf
    double ln_rho;    // finite whenever p_b > 0
    double ln_rho1;   // ln(rho - 1)
    double m;         // M as double

    double g(std::int64_t k) const {
        if (std::isfinite(rho1)) return std::log1p(rho1 * (static_cast<double>(k) / m));
        return ln_rho1 + std::log(static_cast<double>(k) / m);
    }
    double ln_rho_minus_g(std::int64_t k, std::int64_t M) const {
        if (k == M) return 0.0;
        if (std::isfinite(rho1)) {
            const double z = rho1 * (static_cast<double>(k) / m);
            return std::log1p(rho1 * (static_cast<double>(M - k) / m) / (1.0 + z));
        }
        return std::log(m / static_cast<double>(k));
    }
};

inline BracketKernel make_kernel(const ClickProbs& cp) {
    BracketKernel kern{};
    const double n_s = cp.n_s();
    kern.ln_rho = cp.log_pc + n_s - cp.log_pb;
    kern.ln_rho1 = (n_s > 700.0 ? n_s : std::log(std::expm1(n_s))) - cp.log_pb;
    kern.rho1 = std::expm1(n_s) / cp.p_b;
    kern.m = 0.0;  // filled by caller
    return kern;
}

// Evaluates the truncated information sum. direct_threshold selects between
// the exact full march from k = 1 and the mode-anchored adaptive window.
inline InfoResult mutual_information_impl(const ChannelParams& p, double tol,
                                          std::int64_t direct_threshold,
                                          std::int64_t max_terms = 50'000'000) {
    if (!(tol > 0.0)) throw std::domain_error("mutual_information: tol must be > 0");
    const std::int64_t M = p.M;
    const std::int64_t K_top = p.K;
    const ClickProbs cp = click_probabilities(p.n_s, p.n_b);

    if (p.n_s == 0.0) return {0.0, 0, 0.0};
    if (cp.p_b == 0.0) {
        // noise-free M-ary erasure channel; only single-click frames occur
        const double bits = cp.p_c * std::log2(static_cast<double>(M)) / static_cast<double>(M);
        return {bits, 1, 0.0};
    }

    BracketKernel kern = make_kernel(cp);
    kern.m = static_cast<double>(M);
    const double step = cp.log_pb - cp.log1m_pb;         // adds one noise click
    const double pb_ratio = cp.p_b / (1.0 - cp.p_b);     // A_{k+1}/A_k modulo counts
    const double tol_nats_frame = tol * kLn2 * kern.m;   // per-frame budget

    NeumaierSum acc;  // per-frame nats
    std::int64_t terms = 0;
    std::int64_t k_hi = 0;
    double tail_nats = 0.0;

    auto term_at = [&](std::int64_t k, double lA, double lB) {
        return std::exp(lA) * kern.ln_rho_minus_g(k, M) - std::exp(lB) * kern.g(k);
    };
    auto lA_at = [&](std::int64_t k) {
        return cp.log_pc + log_binomial(M - 1, k - 1) +
               static_cast<double>(k - 1) * cp.log_pb +
               static_cast<double>(M - k) * cp.log1m_pb;
    };
    auto lB_at = [&](std::int64_t k) {
        if (k > M - 1) return kNegInf;
        return cp.log1m_pc + log_binomial(M - 1, k) + static_cast<double>(k) * cp.log_pb +
               static_cast<double>(M - 1 - k) * cp.log1m_pb;
    };

    if (K_top <= direct_threshold) {
        double lA = lA_at(1);
        double lB = lB_at(1);
        for (std::int64_t k = 1; k <= K_top; ++k) {
            acc.add(term_at(k, lA, lB));
            if (k < K_top) {
                lA += std::log(static_cast<double>(M - k) / static_cast<double>(k)) + step;
                lB += (M - 1 - k > 0)
                          ? std::log(static_cast<double>(M - 1 - k) / static_cast<double>(k + 1)) +
                                step
                          : kNegInf;
            }
        }
        k_hi = K_top;
    } else {
        const std::int64_t k_mode = std::min(
            K_top, std::max<std::int64_t>(
                       1, static_cast<std::int64_t>(std::floor(static_cast<double>(M - 1) * cp.p_b)) + 1));

        // upward from the anchor
        double lA = lA_at(k_mode);
        double lB = lB_at(k_mode);
        std::int64_t k = k_mode;
        while (true) {
            acc.add(term_at(k, lA, lB));
            k_hi = k;
            if (++terms > max_terms)
                throw ToleranceError("mutual_information: iteration cap exceeded",
                                     {acc.value() / (kern.m * kLn2), k_hi, tail_nats});
            if (k == K_top) break;
            const double lA_next = lA + std::log(static_cast<double>(M - k) /
                                                 static_cast<double>(k)) + step;
            const double lB_next =
                (M - 1 - k > 0)
                    ? lB + std::log(static_cast<double>(M - 1 - k) / static_cast<double>(k + 1)) +
                          step
                    : kNegInf;
            // certified bound on everything above k: sum_{j>k} T <= ln rho * sum_{j>k} A_j,
            // geometric once the count ratio drops below one
            const double r_up = (static_cast<double>(M - k - 1) / static_cast<double>(k + 1)) * pb_ratio;
            if (r_up < 1.0) {
                const double bound = kern.ln_rho * std::exp(lA_next) / (1.0 - r_up);
                if (bound < 0.25 * tol_nats_frame) {
                    tail_nats += bound;
                    break;
                }
            }
            lA = lA_next;
            lB = lB_next;
            ++k;
        }

        // downward from the anchor
        if (k_mode > 1) {
            double lA_dn = lA_at(k_mode);
            double lB_dn = lB_at(k_mode);
            for (std::int64_t j = k_mode - 1; j >= 1; --j) {
                lA_dn -= std::log(static_cast<double>(M - j) / static_cast<double>(j)) + step;
                lB_dn -= std::log(static_cast<double>(M - 1 - j) / static_cast<double>(j + 1)) + step;
                if (!std::isfinite(lB_dn)) lB_dn = lB_at(j);  // stepping off the k = M edge
                const double r_dn = j >= 2 ? (static_cast<double>(j - 1) /
                                              static_cast<double>(M - j + 1)) / pb_ratio
                                           : 0.0;
                if (r_dn < 1.0) {
                    const double bound = kern.ln_rho * std::exp(lA_dn) / (1.0 - r_dn);
                    if (bound < 0.25 * tol_nats_frame) {
                        tail_nats += bound;
                        break;
                    }
                }
                acc.add(term_at(j, lA_dn, lB_dn));
                if (++terms > max_terms)
                    throw ToleranceError("mutual_information: iteration cap exceeded",
                                         {acc.value() / (kern.m * kLn2), k_hi, tail_nats});
            }
        }
    }

    double bits = acc.value() / (kern.m * kLn2);
    if (bits < 0.0 && bits > -1e-15) bits = 0.0;  // roundoff at vanishing information
    return {bits, k_hi, tail_nats / (kern.m * kLn2)};
}

}  // namespace detail

/// Mutual information per time bin (bits) of the M-ary PPM channel with
/// decoding truncated at K clicks. For large K the sum is restricted to an
/// adaptive window around the click-count mode and the omitted mass is
/// certified against tol.
inline InfoResult mutual_information(const ChannelParams& params, double tol = 1e-12) {
    return detail::mutual_information_impl(params, tol, 4096);
}

/// Generalized on-off-keying upper bound on the complete-decoding mutual
/// information, per time bin, with M treated as a continuous parameter.
inline double mutual_information_ook_bound(double m_real, double n_s, double n_b) {
    const detail::OokPair d = detail::ook_relative_entropies(m_real, n_s, n_b);
    return (1.0 - 1.0 / m_real) * d.d_pb_qbar + d.d_pc_qbar / m_real;
}

/// Jensen lower bound on the complete-decoding mutual information per time
/// bin; equals the pulse-slot term of the OOK decomposition.
inline double mutual_information_lower_bound(std::int64_t M, double n_s, double n_b) {
    if (M < 2) throw std::domain_error("mutual_information_lower_bound: M must be >= 2");
    const detail::OokPair d =
        detail::ook_relative_entropies(static_cast<double>(M), n_s, n_b);
    return d.d_pc_qbar / static_cast<double>(M);
}

/// Leading-order small-pulse-energy approximation of the simple-decoding
/// information per bin: log2(e) (M-1) e^{-(M-1) n_b} n_s^2 / (2 M^2 (1-e^{-n_b})).
inline double simple_decoding_quadratic_approx(std::int64_t M, double n_s, double n_b) {
    if (M < 2) throw std::domain_error("simple_decoding_quadratic_approx: M must be >= 2");
    if (!(n_b > 0.0))
        throw std::domain_error("simple_decoding_quadratic_approx: n_b must be > 0");
    if (!(n_s >= 0.0))
        throw std::domain_error("simple_decoding_quadratic_approx: n_s must be >= 0");
    const double m = static_cast<double>(M);
    const double p_b = -std::expm1(-n_b);
    return kLog2e * (m - 1.0) * std::exp(-(m - 1.0) * n_b) * n_s * n_s / (2.0 * m * m * p_b);
}

}  // namespace ppmlink
