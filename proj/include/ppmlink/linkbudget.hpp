#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppmlink/optimize.hpp"

namespace ppmlink {

inline constexpr double kPlanck = 6.62607015e-34;       // J s
inline constexpr double kLightSpeed = 2.99792458e8;     // m/s
inline constexpr double kAstronomicalUnit = 1.496e11;   // m
inline constexpr double kAstronomicalUnitCoarse = 1.5e11;  // rounded figure-matching value

/// Physical description of the free-space link.
struct LinkGeometry {
    double P_t = 4.0;        // transmitted optical power, W
    double B = 2e9;          // slot bandwidth, Hz
    double f_c = 2e14;       // carrier frequency, Hz
    double D_t = 0.22;       // transmitter antenna diameter, m
    double D_r = 11.8;       // receiver antenna diameter, m
    double eta_det = 0.025;  // detector efficiency
    double r = kAstronomicalUnit;  // range, m

    void validate() const {
        if (!(P_t > 0.0 && B > 0.0 && f_c > 0.0 && D_t > 0.0 && D_r > 0.0 && r > 0.0))
            throw std::domain_error("LinkGeometry: all fields must be strictly positive");
        if (!(eta_det > 0.0 && eta_det <= 1.0))
            throw std::domain_error("LinkGeometry: eta_det must lie in (0, 1]");
    }
};

class FarFieldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Overall transmission efficiency eta_det (pi f_c D_t D_r / (4 c r))^2.
inline double eta_total(const LinkGeometry& g) {
    g.validate();
    const double a = std::numbers::pi * g.f_c * g.D_t * g.D_r / (4.0 * kLightSpeed * g.r);
    return g.eta_det * a * a;
}

/// Mean detected signal photons per time bin: n_a = eta_tot P_t / (B h f_c).
/// Rejects geometries whose diffraction gain formula exceeds unit efficiency.
inline double detected_signal_level(const LinkGeometry& g) {
    const double eta = eta_total(g);
    if (eta > 1.0)
        throw FarFieldError("detected_signal_level: eta_tot > 1, range too short for the "
                            "far-field link budget");
    return eta * g.P_t / (g.B * kPlanck * g.f_c);
}

/// One optimized operating point of the link.
struct RangePoint {
    double r_m = 0.0;
    double n_b = 0.0;
    DecodingMode mode = DecodingMode::complete;
    double n_a = 0.0;
    std::int64_t M_star = 0;
    double n_s_star = 0.0;
    double pie_star = 0.0;
    double rate_bits_per_s = 0.0;
    double peak_power_w = 0.0;
    std::string error;  // empty on success

    bool ok() const { return error.empty(); }
};

/// Optimizes the PPM order at the given geometry and noise level and fills
/// the rate R* = B n_a PIE* and the peak power P* = B hf_c n_s* / eta_tot.
inline RangePoint max_rate(const LinkGeometry& g, double n_b, DecodingMode mode,
                           double tol = 1e-12) {
    RangePoint pt;
    pt.r_m = g.r;
    pt.n_b = n_b;
    pt.mode = mode;
    pt.n_a = detected_signal_level(g);
    const OptimResult opt = optimize_ppm_order(pt.n_a, n_b, mode, tol);
    pt.M_star = opt.M_star;
    pt.n_s_star = opt.n_s_star;
    pt.pie_star = opt.pie_star;
    pt.rate_bits_per_s = g.B * pt.n_a * pt.pie_star;
    pt.peak_power_w = g.B * kPlanck * g.f_c * pt.n_s_star / eta_total(g);
    return pt;
}

/// Row-per-(n_b, mode, r) sweep. Point failures are recorded in the row and
/// the sweep continues; ordering follows the input grids.
inline std::vector<RangePoint> range_sweep(const LinkGeometry& geom_template,
                                           const std::vector<double>& n_b_list,
                                           const std::vector<double>& r_grid_m,
                                           const std::vector<DecodingMode>& modes,
                                           double tol = 1e-12) {
    for (std::size_t i = 1; i < r_grid_m.size(); ++i)
        if (!(r_grid_m[i] > r_grid_m[i - 1]))
            throw std::domain_error("range_sweep: r grid must be strictly increasing");
    std::vector<RangePoint> rows;
    rows.reserve(n_b_list.size() * modes.size() * r_grid_m.size());
    for (double n_b : n_b_list) {
        for (DecodingMode mode : modes) {
            for (double r : r_grid_m) {
                LinkGeometry g = geom_template;
                g.r = r;
                try {
                    rows.push_back(max_rate(g, n_b, mode, tol));
                } catch (const std::exception& e) {
                    RangePoint pt;
                    pt.r_m = r;
                    pt.n_b = n_b;
                    pt.mode = mode;
                    pt.error = e.what();
                    rows.push_back(pt);
                }
            }
        }
    }
    return rows;
}

/// Least-squares slope of ln(y) against ln(x); requires positive samples.
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::domain_error("log_log_slope: need at least two paired samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::domain_error("log_log_slope: samples must be positive");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ppmlink
