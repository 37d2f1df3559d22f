#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "ppmlink/infotheory.hpp"

namespace ppmlink {

enum class DecodingMode { simple, complete };

inline const char* to_string(DecodingMode m) {
    return m == DecodingMode::simple ? "simple" : "complete";
}

inline DecodingMode decoding_mode_from_string(const std::string& s) {
    if (s == "simple") return DecodingMode::simple;
    if (s == "complete") return DecodingMode::complete;
    throw std::domain_error("unknown decoding mode: " + s);
}

/// Outcome of the PPM-order optimization at fixed average power n_a.
struct OptimResult {
    std::int64_t M_star = 2;
    double pie_star = 0.0;           // bits per detected photon
    double n_s_star = 0.0;           // M_star * n_a
    double info_bits_per_bin = 0.0;  // information at the optimum
};

/// Vanishing-power limit of the photon information efficiency and the pulse
/// energy attaining it.
struct AsymptoticLimit {
    double pie_inf = 0.0;
    double n_s_inf = 0.0;
};

/// Closed-form simple-decoding asymptotics in the small-n_a regime.
struct SimpleAsymptotics {
    double pie_1 = 0.0;
    double n_s_1 = 0.0;
};

namespace detail {

inline double pie_unit_cost_objective(double n_s, double n_b) {
    return dkl_click_vs_background_bits(n_s, n_b) / n_s;
}

}  // namespace detail

/// Maximizes D(p_c||p_b)/n_s over n_s: the capacity-per-unit-cost limit of
/// the photon information efficiency for complete decoding. Grid scan over
/// a log-spaced bracket followed by golden-section refinement on ln n_s.
inline AsymptoticLimit asymptotic_pie(double n_b, double tol = 1e-10) {
    if (!(n_b > 0.0)) throw std::domain_error("asymptotic_pie: requires n_b > 0");
    if (!(tol > 0.0)) throw std::domain_error("asymptotic_pie: tol must be > 0");

    constexpr int kScanPoints = 200;
    const double lo = std::log(1e-6), hi = std::log(1e3);
    int best_i = 0;
    double best_v = -1.0;
    for (int i = 0; i < kScanPoints; ++i) {
        const double x = std::exp(lo + (hi - lo) * i / (kScanPoints - 1));
        const double v = detail::pie_unit_cost_objective(x, n_b);
        if (v > best_v) {
            best_v = v;
            best_i = i;
        }
    }
    if (best_i == 0 || best_i == kScanPoints - 1)
        throw std::runtime_error("asymptotic_pie: no interior maximum in the scan bracket");

    double la = lo + (hi - lo) * (best_i - 1) / (kScanPoints - 1);
    double lb = lo + (hi - lo) * (best_i + 1) / (kScanPoints - 1);
    constexpr double kInvGolden = 0.6180339887498948482;
    for (int it = 0; it < 400 && (lb - la) > tol; ++it) {
        const double l1 = lb - kInvGolden * (lb - la);
        const double l2 = la + kInvGolden * (lb - la);
        if (detail::pie_unit_cost_objective(std::exp(l1), n_b) <
            detail::pie_unit_cost_objective(std::exp(l2), n_b))
            la = l1;
        else
            lb = l2;
    }
    const double n_s_inf = std::exp(0.5 * (la + lb));
    return {detail::pie_unit_cost_objective(n_s_inf, n_b), n_s_inf};
}

/// Closed-form simple-decoding limits as n_a -> 0:
/// pie_1 = log2(e) n_a / (2 e n_b (1 - e^{-n_b})), n_s_1 = (1 + 1/n_b) n_a.
inline SimpleAsymptotics simple_decoding_asymptotics(double n_a, double n_b) {
    if (!(n_a > 0.0)) throw std::domain_error("simple_decoding_asymptotics: n_a must be > 0");
    if (!(n_b > 0.0)) throw std::domain_error("simple_decoding_asymptotics: n_b must be > 0");
    const double p_b = -std::expm1(-n_b);
    SimpleAsymptotics out;
    out.pie_1 = kLog2e * n_a / (2.0 * std::exp(1.0) * n_b * p_b);
    out.n_s_1 = (1.0 + 1.0 / n_b) * n_a;
    return out;
}

struct OptimizeOptions {
    bool exhaustive = false;           // scan every integer order (small instances)
    std::int64_t m_cap = 1'000'000'000;
    double tie_eps = 1e-12;            // bits/photon; ties break toward smaller M
};

namespace detail {

class PieObjective {
public:
    PieObjective(double n_a, double n_b, DecodingMode mode, double tol)
        : n_a_(n_a), n_b_(n_b), mode_(mode), tol_(tol) {}

    // information in bits/bin at order M, memoized
    double info(std::int64_t M) {
        auto it = cache_.find(M);
        if (it != cache_.end()) return it->second;
        const std::int64_t K = mode_ == DecodingMode::simple ? 1 : M;
        const double v =
            mutual_information(ChannelParams::from_average_power(n_a_, n_b_, M, K), tol_)
                .bits_per_bin;
        cache_.emplace(M, v);
        return v;
    }
    double pie(std::int64_t M) { return info(M) / n_a_; }

    // smallest M within tie_eps of the best value among all evaluated orders
    std::pair<std::int64_t, double> best(double tie_eps) const {
        std::int64_t arg = -1;
        double best_v = -std::numeric_limits<double>::infinity();
        for (const auto& [M, v] : cache_) {  // ascending M
            const double p = v / n_a_;
            if (p > best_v + tie_eps) {
                best_v = p;
                arg = M;
            }
        }
        return {arg, best_v};
    }

private:
    double n_a_, n_b_, tol_;
    DecodingMode mode_;
    std::map<std::int64_t, double> cache_;

public:
    double n_a() const { return n_a_; }
};

inline std::vector<std::int64_t> geometric_orders(std::int64_t lo, std::int64_t hi, double ratio) {
    std::vector<std::int64_t> out;
    double x = static_cast<double>(lo);
    std::int64_t m = lo;
    while (m < hi) {
        out.push_back(m);
        x *= ratio;
        m = std::max(m + 1, static_cast<std::int64_t>(std::ceil(x)));
    }
    out.push_back(hi);
    return out;
}

}  // namespace detail

/// Maximizes the photon information efficiency I^{(K)}/n_a over the integer
/// PPM order M >= 2 at fixed average detected power n_a. The search scans a
/// geometric grid spanning [2, 10 max(n_s_inf, 1 + 1/n_b)/n_a], then narrows
/// the bracket around the maximum without assuming unimodality, finishing
/// with an exhaustive integer scan of the final bracket.
inline OptimResult optimize_ppm_order(double n_a, double n_b, DecodingMode mode,
                                      double tol = 1e-12,
                                      const OptimizeOptions& opts = {}) {
    if (!(n_a > 0.0)) throw std::domain_error("optimize_ppm_order: n_a must be > 0");
    if (!(n_b >= 0.0)) throw std::domain_error("optimize_ppm_order: n_b must be >= 0");

    std::int64_t m_hi = opts.m_cap;
    if (n_b > 0.0) {
        const double n_s_inf = asymptotic_pie(n_b).n_s_inf;
        const double span = 10.0 * std::max(n_s_inf, 1.0 + 1.0 / n_b) / n_a;
        m_hi = span > static_cast<double>(opts.m_cap)
                   ? opts.m_cap
                   : static_cast<std::int64_t>(std::ceil(span));
    }
    m_hi = std::clamp<std::int64_t>(m_hi, 8, opts.m_cap);

    detail::PieObjective obj(n_a, n_b, mode, tol);

    if (opts.exhaustive) {
        for (std::int64_t M = 2; M <= m_hi; ++M) obj.info(M);
    } else {
        const auto grid = detail::geometric_orders(2, m_hi, 1.15);
        for (std::int64_t M : grid) obj.info(M);
        auto [arg, v] = obj.best(opts.tie_eps);
        auto pos = std::lower_bound(grid.begin(), grid.end(), arg);
        std::int64_t lo = pos == grid.begin() ? grid.front() : *(pos - 1);
        std::int64_t hi = (pos + 1) == grid.end() ? grid.back() : *(pos + 1);

        for (int pass = 0; pass < 60 && hi - lo > 512; ++pass) {
            const double ratio = std::pow(static_cast<double>(hi) / static_cast<double>(lo),
                                          1.0 / 32.0);
            const auto sub = detail::geometric_orders(lo, hi, std::max(ratio, 1.0000001));
            for (std::int64_t M : sub) obj.info(M);
            auto [sub_arg, sub_v] = obj.best(opts.tie_eps);
            sub_arg = std::clamp(sub_arg, lo, hi);
            auto it = std::lower_bound(sub.begin(), sub.end(), sub_arg);
            const std::ptrdiff_t j = it - sub.begin();
            const std::int64_t new_lo = sub[static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, j - 2))];
            const std::int64_t new_hi =
                sub[static_cast<std::size_t>(std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(sub.size()) - 1, j + 2))];
            if (new_lo == lo && new_hi == hi) break;
            lo = new_lo;
            hi = new_hi;
        }
        for (std::int64_t M = lo; M <= hi; ++M) obj.info(M);
    }

    auto [arg, best_pie] = obj.best(opts.tie_eps);
    if (arg < 2 || !std::isfinite(best_pie))
        throw std::runtime_error("optimize_ppm_order: objective not finite on the search range");

    OptimResult out;
    out.M_star = arg;
    out.info_bits_per_bin = obj.info(arg);
    out.pie_star = out.info_bits_per_bin / n_a;
    out.n_s_star = static_cast<double>(arg) * n_a;
    return out;
}

}  // namespace ppmlink
