#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace ppmlink {

inline constexpr double kLn2 = 0.6931471805599453094172321214581766;
inline constexpr double kLog2e = 1.4426950408889634073599246810018921;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(1 - exp(-x)) for x > 0, accurate for both tiny and large x.
/// Returns -inf at x = 0.
inline double log1m_exp(double x) {
    if (x <= 0.0) {
        if (x == 0.0) return kNegInf;
        throw std::domain_error("log1m_exp: argument must be nonnegative");
    }
    // split at ln 2 to keep full relative precision on either side
    if (x > kLn2) return std::log1p(-std::exp(-x));
    return std::log(-std::expm1(-x));
}

/// log(1 + exp(x)), overflow-safe.
inline double log1p_exp(double x) {
    if (x > 36.0) return x + std::exp(-x);  // exp(-x) below double epsilon of x
    if (x < -745.0) return 0.0;
    return std::log1p(std::exp(x));
}

/// log(exp(a) + exp(b)) with -inf handled.
inline double log_sum_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = a > b ? a : b;
    const double lo = a > b ? b : a;
    return hi + std::log1p(std::exp(lo - hi));
}

/// Neumaier-compensated accumulator for long sums of doubles.
class NeumaierSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Exact binomial coefficient as uint64; valid for n <= 56 (largest central
/// coefficient still below 2^53).
inline std::uint64_t binomial_exact_u64(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n)
        throw std::domain_error("binomial_exact_u64: invalid (n, k)");
    if (n > 56)
        throw std::domain_error("binomial_exact_u64: n too large for exact u64");
    std::uint64_t kk = static_cast<std::uint64_t>(k < n - k ? k : n - k);
    std::uint64_t c = 1;
    for (std::uint64_t i = 1; i <= kk; ++i) {
        // division is exact at every step: c holds C(n-k+i-1, i-1) * ...
        c = c * (static_cast<std::uint64_t>(n) - kk + i) / i;
    }
    return c;
}

/// ln C(n, k). Exact-arithmetic path for small n, lgamma beyond.
inline double log_binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n)
        throw std::domain_error("log_binomial: invalid (n, k)");
    if (k == 0 || k == n) return 0.0;
    if (n <= 56) return std::log(static_cast<double>(binomial_exact_u64(n, k)));
    const double dn = static_cast<double>(n);
    const double dk = static_cast<double>(k);
    return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0);
}

}  // namespace ppmlink
