#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cantorlab/core.hpp"

namespace cantorlab {

/// Equal-weight self-similar measure on [theta0, theta1]: keep_count of base
/// subintervals survive at every scale.  Digits are spread evenly, so the
/// default 2-of-3 spec is the middle-thirds construction.
struct CantorSpec {
    double theta0 = 0.5;
    double theta1 = 2.0;
    int level = 12;
    int keep_count = 2;
    int base = 3;

    void validate() const;
    double width() const { return theta1 - theta0; }
    double center() const { return 0.5 * (theta0 + theta1); }
    double dimension() const;
    std::size_t atom_count() const;
    bool is_middle_thirds() const { return keep_count == 2 && base == 3; }
    // Kept digits shifted by -(base-1)/2.
    std::vector<double> centred_digits() const;
    bool symmetric_digits() const;
};

enum class Target { native, pushforward, reflected };

struct MeasureAtoms {
    std::vector<double> points;
    std::vector<double> weights;
    Target target = Target::native;
    int level = 0;
    int keep_count = 2;
    int base = 3;

    std::size_t size() const { return points.size(); }
    double lo() const { return points.empty() ? 0.0 : points.front(); }
    double hi() const { return points.empty() ? 0.0 : points.back(); }
};

/// Cell barycentres at spec.level, sorted ascending.  pushforward maps
/// theta to theta/2pi, reflected to 1 - theta/2pi.
MeasureAtoms build_atoms(const CantorSpec& spec, Target target = Target::native);

/// Merges each group of keep_count^(level - new_level) sibling atoms into its barycentre.
MeasureAtoms coarsen(const MeasureAtoms& atoms, int new_level);

enum class CoefficientModel { exact, level };

/// Fourier coefficient of the native measure, infinite product truncated once
/// the next factor is within 1e-18 of one.
cplx nu_hat(const CantorSpec& spec, std::int64_t n);
/// Scale factors only, without the e^{i n centre} phase.
cplx cosine_product(const CantorSpec& spec, std::int64_t n, int max_levels, bool stop_at_threshold);
/// Product over the first `levels` factors only; equals the transform of the level atoms.
cplx nu_hat_truncated(const CantorSpec& spec, std::int64_t n, int levels);
cplx nu_hat_model(const CantorSpec& spec, std::int64_t n, CoefficientModel model);
cplx nu_hat_empirical(const MeasureAtoms& atoms, std::int64_t n);

/// Coefficients for n = 0..N.
std::vector<cplx> coefficient_table(const CantorSpec& spec, std::int64_t N,
                                    CoefficientModel model = CoefficientModel::exact);

double strichartz_partial(const CantorSpec& spec, std::int64_t N);

struct StrichartzFit {
    double c_s = 0;
    double rel_rms = 0;
    std::vector<std::int64_t> N;
    std::vector<double> partial;
    std::vector<double> doubling_ratio;  // S(2N)/S(N)
};
StrichartzFit fit_strichartz(const CantorSpec& spec, std::span<const std::int64_t> Ns);

/// max |nu_hat(n)| over N < n <= 3N
double fourier_floor(const CantorSpec& spec, std::int64_t N);

struct WickConstants {
    double c_nu = 0;
    double c4 = 0;
    double c6 = 0;
    std::int64_t truncation_N = 0;

    double d4_prediction() const { return 2 * c_nu * c_nu - c4; }
    double d6_prediction() const { return 6 * c_nu * c_nu * c_nu - 9 * c_nu * c4 + 4 * c6; }
};
WickConstants wick_constants(const CantorSpec& spec, std::int64_t N);
WickConstants wick_constants(std::span<const cplx> table);

struct BallMassProfile {
    std::vector<double> delta;
    std::vector<double> mass;
    std::vector<bool> resolved;
    double slope = 0;
};
/// Largest mass of a closed interval of radius delta, for each delta.
BallMassProfile ball_mass_profile(const MeasureAtoms& atoms, std::span<const double> deltas);

/// Distance below which an external point is indistinguishable from an atom.
double atom_resolution(const MeasureAtoms& atoms);
double support_distance(const MeasureAtoms& atoms, double x);
double riesz_potential(const MeasureAtoms& atoms, double alpha_star);

struct CoefficientCache {
    CantorSpec spec;
    CoefficientModel model = CoefficientModel::exact;
    double threshold = 1e-18;
    std::vector<cplx> values;
    std::uint64_t checksum = 0;
};

/// Hash of the rows exactly as written to a cache file.
std::uint64_t table_checksum(std::span<const cplx> table);
void write_coefficient_cache(std::ostream& out, const CantorSpec& spec, CoefficientModel model,
                             std::span<const cplx> table);
CoefficientCache read_coefficient_cache(std::istream& in);

}  // namespace cantorlab
