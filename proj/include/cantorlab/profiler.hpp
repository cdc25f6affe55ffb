#pragma once

#include <span>
#include <vector>

#include "cantorlab/special_functions.hpp"

namespace cantorlab {

struct EnvelopeOptions {
    double step = 0.1;
    double kappa = 30;  // dual atoms are merged while t * cluster width / (m + alpha) <= 1/kappa
    int block_steps = 2048;
};

/// Window starts T with 5 per decade from T_lo while 2T <= t_max.
std::vector<double> default_windows(double T_lo, double t_max, int per_decade = 5);

/// max |L(sigma + it)| over t = T, T + step, ..., 2T for each window start T,
/// from the sharp approximate functional equation.
std::vector<double> sample_envelope(const LEvaluator& L, double sigma, std::span<const double> windows,
                                    const EnvelopeOptions& opts = {});

struct ProfileSamples {
    std::vector<double> sigma;
    std::vector<double> windows;
    std::vector<std::vector<double>> envelope;  // [sigma][window]
};
ProfileSamples sample_profile(const LEvaluator& L, std::span<const double> sigmas, std::span<const double> windows,
                              const EnvelopeOptions& opts = {});

struct MuProfile {
    std::vector<double> sigma_grid;
    std::vector<double> mu_hat;
    std::vector<int> clamped;        // 1 where mu_hat was raised to the floor
    double fit_intercept = 0;        // fitted profile at sigma_grid.front()
    std::vector<int> fit_slopes;     // left to right, increasing
    std::vector<double> breakpoints; // between consecutive slopes
    double rms = 0;
    double zero_crossing = 0;        // first sigma where the fitted profile reaches 0; NaN if it never does

    double eval(double sigma) const;
};

inline constexpr double mu_floor = -0.05;

/// Least-squares slope of log envelope against log T per sigma, then the best
/// convex nonincreasing profile with slopes in {0, -1, -2}.
MuProfile fit_mu(const ProfileSamples& samples);
/// The profile search alone, on given mu_hat values.
MuProfile fit_mu(std::span<const double> sigma, std::span<const double> mu_hat);

struct Exponents {
    double subconvex = 0;
    double d_star = 0;
    double rajchman = 0;
    double d_crit = 0;
};
Exponents exponent_formulas(double d, double mu_zeta, double eta);
double slope_level(double s);

}  // namespace cantorlab
