#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ppmlink/channel.hpp"
#include "ppmlink/logmath.hpp"

namespace ppmlink {

// ---------------------------------------------------------------------------
// Counter-based pseudorandom stream: output i of a SplitMix64 sequence seeded
// with `seed` (Steele, Lea & Flood). Stateless, so independent sub-streams are
// just disjoint index ranges and merged results are order-independent.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t counter_rand(std::uint64_t seed, std::uint64_t index) {
    return splitmix64_finalize(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

/// Uniform double in [0, 1) from the 53 high bits of counter_rand.
inline double counter_uniform(std::uint64_t seed, std::uint64_t index) {
    return static_cast<double>(counter_rand(seed, index) >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Exact enumeration oracle
// ---------------------------------------------------------------------------

/// Exact mutual information in bits per time bin from the full joint
/// distribution over M inputs and 2^M click patterns, with every pattern of
/// more than K clicks merged into a single erasure outcome. Probabilities are
/// built bin by bin, independently of the analytic sequence formulas.
inline double brute_force_mi(std::int64_t M, double n_s, double n_b, std::int64_t K) {
    if (M < 2 || M > 20)
        throw std::domain_error("brute_force_mi: enumeration requires 2 <= M <= 20");
    if (K < 1 || K > M) throw std::domain_error("brute_force_mi: require 1 <= K <= M");
    const ClickProbs cp = click_probabilities(n_s, n_b);
    const int m = static_cast<int>(M);
    const std::uint32_t npat = 1u << m;

    std::vector<double> p_given_x(static_cast<std::size_t>(m));
    std::vector<double> lump(static_cast<std::size_t>(m), 0.0);
    NeumaierSum info;  // bits per frame

    for (std::uint32_t y = 0; y < npat; ++y) {
        const int k = std::popcount(y);
        double p_y = 0.0;
        for (int x = 0; x < m; ++x) {
            double p = 1.0;
            for (int j = 0; j < m; ++j) {
                const bool click = (y >> j) & 1u;
                if (j == x)
                    p *= click ? cp.p_c : 1.0 - cp.p_c;
                else
                    p *= click ? cp.p_b : 1.0 - cp.p_b;
            }
            p_given_x[static_cast<std::size_t>(x)] = p;
            p_y += p;
        }
        p_y /= m;
        if (k > K) {
            for (int x = 0; x < m; ++x) lump[static_cast<std::size_t>(x)] += p_given_x[static_cast<std::size_t>(x)];
            continue;
        }
        for (int x = 0; x < m; ++x) {
            const double p = p_given_x[static_cast<std::size_t>(x)];
            if (p > 0.0) info.add(p / m * std::log2(p / p_y));
        }
    }
    double lump_avg = 0.0;
    for (double v : lump) lump_avg += v;
    lump_avg /= m;
    if (lump_avg > 0.0)
        for (double v : lump)
            if (v > 0.0) info.add(v / m * std::log2(v / lump_avg));

    return info.value() / m;
}

// ---------------------------------------------------------------------------
// Monte Carlo frame simulator
// ---------------------------------------------------------------------------

/// Joint (input symbol, click pattern) counts from simulated frames.
/// Frame f consumes stream indices f*(M+1) .. f*(M+1)+M: one for the symbol,
/// one Bernoulli draw per bin.
struct FrameCounts {
    std::int64_t M = 0;
    std::uint64_t frames = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> joint;  // index x * 2^M + pattern

    std::uint64_t count(int x, std::uint32_t pattern) const {
        return joint[static_cast<std::size_t>(x) * (1u << M) + pattern];
    }

    /// Frames in which the pulse bin itself clicked.
    std::uint64_t pulse_bin_clicks() const {
        std::uint64_t total = 0;
        const std::uint32_t npat = 1u << M;
        for (int x = 0; x < M; ++x)
            for (std::uint32_t y = 0; y < npat; ++y)
                if ((y >> x) & 1u) total += count(x, y);
        return total;
    }

    /// Frames with exactly k clicks one of which is in the pulse bin.
    std::uint64_t signal_sequences_with_k_clicks(int k) const {
        std::uint64_t total = 0;
        const std::uint32_t npat = 1u << M;
        for (int x = 0; x < M; ++x)
            for (std::uint32_t y = 0; y < npat; ++y)
                if (std::popcount(y) == k && ((y >> x) & 1u)) total += count(x, y);
        return total;
    }
};

inline FrameCounts simulate_frames(std::int64_t M, double n_s, double n_b,
                                   std::uint64_t num_frames, std::uint64_t seed) {
    if (M < 2 || M > 16)
        throw std::domain_error("simulate_frames: joint counting requires 2 <= M <= 16");
    if (num_frames < 1) throw std::domain_error("simulate_frames: need at least one frame");
    const ClickProbs cp = click_probabilities(n_s, n_b);
    const int m = static_cast<int>(M);

    FrameCounts out;
    out.M = M;
    out.frames = num_frames;
    out.seed = seed;
    out.joint.assign(static_cast<std::size_t>(m) << m, 0);

    for (std::uint64_t f = 0; f < num_frames; ++f) {
        const std::uint64_t base = f * static_cast<std::uint64_t>(m + 1);
        int x = static_cast<int>(counter_uniform(seed, base) * m);
        if (x >= m) x = m - 1;
        std::uint32_t pattern = 0;
        for (int j = 0; j < m; ++j) {
            const double p = j == x ? cp.p_c : cp.p_b;
            if (counter_uniform(seed, base + 1 + static_cast<std::uint64_t>(j)) < p)
                pattern |= 1u << j;
        }
        ++out.joint[(static_cast<std::size_t>(x) << m) | pattern];
    }
    return out;
}

/// Plug-in mutual information of the empirical joint, in bits per time bin.
inline double plugin_mi_bits_per_bin(const FrameCounts& c) {
    const int m = static_cast<int>(c.M);
    const std::uint32_t npat = 1u << m;
    const double n = static_cast<double>(c.frames);

    std::vector<double> row(static_cast<std::size_t>(m), 0.0);
    std::vector<double> col(npat, 0.0);
    for (int x = 0; x < m; ++x)
        for (std::uint32_t y = 0; y < npat; ++y) {
            const double v = static_cast<double>(c.count(x, y));
            row[static_cast<std::size_t>(x)] += v;
            col[y] += v;
        }
    NeumaierSum info;
    for (int x = 0; x < m; ++x)
        for (std::uint32_t y = 0; y < npat; ++y) {
            const double v = static_cast<double>(c.count(x, y));
            if (v > 0.0)
                info.add(v / n * std::log2(v * n / (row[static_cast<std::size_t>(x)] * col[y])));
        }
    return info.value() / m;
}

struct BootstrapResult {
    double mean = 0.0;
    double se = 0.0;
    std::vector<double> values;
};

namespace detail {

// Walker/Vose alias table for sampling cell indices proportional to counts.
struct AliasTable {
    std::vector<double> prob;
    std::vector<std::uint32_t> alias;

    explicit AliasTable(const std::vector<double>& weights) {
        const std::size_t n = weights.size();
        prob.assign(n, 0.0);
        alias.assign(n, 0);
        double total = 0.0;
        for (double w : weights) total += w;
        std::vector<double> scaled(n);
        std::vector<std::uint32_t> small, large;
        for (std::size_t i = 0; i < n; ++i) {
            scaled[i] = weights[i] * static_cast<double>(n) / total;
            (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
        }
        while (!small.empty() && !large.empty()) {
            const std::uint32_t s = small.back();
            small.pop_back();
            const std::uint32_t l = large.back();
            prob[s] = scaled[s];
            alias[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        for (std::uint32_t i : large) prob[i] = 1.0;
        for (std::uint32_t i : small) prob[i] = 1.0;
    }

    std::uint32_t sample(double u) const {
        const double scaled = u * static_cast<double>(prob.size());
        auto i = static_cast<std::uint32_t>(scaled);
        if (i >= prob.size()) i = static_cast<std::uint32_t>(prob.size()) - 1;
        const double frac = scaled - static_cast<double>(i);
        return frac < prob[i] ? i : alias[i];
    }
};

}  // namespace detail

/// Nonparametric bootstrap of the plug-in information: resamples the
/// empirical joint `resamples` times and reports the spread of the
/// re-estimated values. Deterministic for a fixed seed.
inline BootstrapResult bootstrap_plugin_mi(const FrameCounts& c, int resamples,
                                           std::uint64_t seed) {
    if (resamples < 2) throw std::domain_error("bootstrap_plugin_mi: need >= 2 resamples");
    const int m = static_cast<int>(c.M);
    const std::uint32_t npat = 1u << m;
    const std::size_t cells = static_cast<std::size_t>(m) * npat;

    std::vector<double> weights;
    std::vector<std::uint32_t> occupied;  // indices of nonzero cells
    for (std::size_t i = 0; i < cells; ++i)
        if (c.joint[i] > 0) {
            weights.push_back(static_cast<double>(c.joint[i]));
            occupied.push_back(static_cast<std::uint32_t>(i));
        }
    const detail::AliasTable table(weights);
    const std::uint64_t boot_seed = splitmix64_finalize(c.seed ^ seed ^ 0xB005'7A9C'0FFEEULL);

    BootstrapResult out;
    out.values.reserve(static_cast<std::size_t>(resamples));
    FrameCounts re;
    re.M = c.M;
    re.frames = c.frames;
    for (int b = 0; b < resamples; ++b) {
        re.joint.assign(cells, 0);
        const std::uint64_t base = static_cast<std::uint64_t>(b) * c.frames;
        for (std::uint64_t f = 0; f < c.frames; ++f)
            ++re.joint[occupied[table.sample(counter_uniform(boot_seed, base + f))]];
        out.values.push_back(plugin_mi_bits_per_bin(re));
    }
    double mean = 0.0;
    for (double v : out.values) mean += v;
    mean /= static_cast<double>(resamples);
    double var = 0.0;
    for (double v : out.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(resamples - 1);
    out.mean = mean;
    out.se = std::sqrt(var);
    return out;
}

}  // namespace ppmlink
