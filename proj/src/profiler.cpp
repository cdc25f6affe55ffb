#include "cantorlab/profiler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace cantorlab {

namespace {

constexpr double t_ceiling = 2e5;

// Shift-dependent coarsening of the dual atoms: the level for shift m is the
// smallest at which a cluster's phase spread t * width / (m + alpha) stays below 1/kappa.
class DualAtoms {
public:
    explicit DualAtoms(const MeasureAtoms& fine) : lo_(fine.lo()), width_(fine.hi() - fine.lo()), base_(fine.base)
    {
        for (int level = 0; level <= fine.level; ++level) levels_.push_back(coarsen(fine, level));
    }

    const MeasureAtoms& for_shift(int m, double t_max, double kappa) const
    {
        std::size_t level = 0;
        double spread = t_max * width_ / (m + lo_);
        while (level + 1 < levels_.size() && spread > 1 / kappa) {
            spread /= base_;
            ++level;
        }
        return levels_[level];
    }

private:
    double lo_, width_;
    int base_;
    std::vector<MeasureAtoms> levels_;
};

double window_max(const std::vector<cplx>& coef, const DualAtoms& dual_atoms, double sigma, double T,
                  const EnvelopeOptions& opts)
{
    const double t_max = 2 * T;
    const auto steps_total = static_cast<std::int64_t>(std::llround(T / opts.step));
    OscillatorBank bank;
    std::vector<cplx> head, dual;
    double env = 0;
    std::int64_t k = 0;
    while (k <= steps_total) {
        const int M = PartialSumSpec::afe(T + k * opts.step).M;
        // grid points sharing this M
        std::int64_t k_end = k;
        while (k_end <= steps_total && PartialSumSpec::afe(T + k_end * opts.step).M == M) ++k_end;

        std::vector<double> freq;
        std::vector<cplx> amp;
        for (int n = 1; n <= M; ++n) {
            freq.push_back(-std::log(double(n)));
            amp.push_back(coef[n] * std::pow(double(n), -sigma));
        }
        for (int m = 0; m < M; ++m) {
            const auto& atoms = dual_atoms.for_shift(m, t_max, opts.kappa);
            for (std::size_t j = 0; j < atoms.size(); ++j) {
                const double a = m + atoms.points[j];
                freq.push_back(std::log(a));
                amp.push_back(atoms.weights[j] * std::pow(a, sigma - 1));
            }
        }
        std::vector<std::size_t> ends{static_cast<std::size_t>(M)};
        for (std::size_t e = M + 4096; e < freq.size(); e += 4096) ends.push_back(e);
        ends.push_back(freq.size());
        bank.assign(freq, amp, ends);

        for (std::int64_t k0 = k; k0 < k_end; k0 += opts.block_steps) {
            const int steps = static_cast<int>(std::min<std::int64_t>(opts.block_steps, k_end - k0));
            const double tb = T + k0 * opts.step;
            head.assign(steps, 0.0);
            dual.assign(steps, 0.0);
            bank.run(tb, opts.step, steps, [&](std::size_t seg, std::span<const cplx> sums) {
                auto& dst = seg == 0 ? head : dual;
                for (int i = 0; i < steps; ++i) dst[i] += sums[i];
            });
            // the reflected dual term carries e^{-pi t} and is dropped
            for (int i = 0; i < steps; ++i) {
                const cplx s(sigma, tb + i * opts.step);
                env = std::max(env, std::abs(head[i] + chi_plus(s) * dual[i]));
            }
        }
        k = k_end;
    }
    return env;
}

}  // namespace

std::vector<double> default_windows(double T_lo, double t_max, int per_decade)
{
    if (T_lo <= 0 || per_decade < 1) throw std::domain_error("default_windows: T_lo > 0, per_decade >= 1");
    std::vector<double> out;
    for (int i = 0;; ++i) {
        const double T = T_lo * std::pow(10.0, double(i) / per_decade);
        if (2 * T > t_max * (1 + 1e-12)) break;
        out.push_back(T);
    }
    return out;
}

std::vector<double> sample_envelope(const LEvaluator& L, double sigma, std::span<const double> windows,
                                    const EnvelopeOptions& opts)
{
    if (sigma < 0 || sigma > 2) throw std::domain_error("sample_envelope: sigma in [0, 2]");
    if (!(opts.step > 0) || !(opts.kappa > 0) || opts.block_steps < 1) throw std::domain_error("sample_envelope: bad options");
    double T_max = 0;
    for (double T : windows) {
        if (T < 50 || 2 * T > t_ceiling * (1 + 1e-12))
            throw std::domain_error("sample_envelope: windows must lie in [50, 2e5]");
        T_max = std::max(T_max, T);
    }
    const auto& coef = L.coefficients(CoefficientModel::level, PartialSumSpec::afe(2 * T_max).M + 1);
    const DualAtoms dual_atoms(L.pushforward());
    std::vector<double> out(windows.size());
    const auto count = static_cast<std::int64_t>(windows.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t w = 0; w < count; ++w) out[w] = window_max(coef, dual_atoms, sigma, windows[w], opts);
    return out;
}

ProfileSamples sample_profile(const LEvaluator& L, std::span<const double> sigmas, std::span<const double> windows,
                              const EnvelopeOptions& opts)
{
    ProfileSamples s;
    s.sigma.assign(sigmas.begin(), sigmas.end());
    s.windows.assign(windows.begin(), windows.end());
    for (double sigma : sigmas) s.envelope.push_back(sample_envelope(L, sigma, windows, opts));
    return s;
}

double MuProfile::eval(double sigma) const
{
    double v = fit_intercept;
    double x = sigma_grid.front();
    for (std::size_t i = 0; i < fit_slopes.size(); ++i) {
        const double end = i < breakpoints.size() ? breakpoints[i] : std::numeric_limits<double>::infinity();
        if (sigma <= end) return v + fit_slopes[i] * (sigma - x);
        v += fit_slopes[i] * (end - x);
        x = end;
    }
    return v;
}

MuProfile fit_mu(std::span<const double> sigma, std::span<const double> mu_hat)
{
    const std::size_t n = sigma.size();
    if (n < 5 || mu_hat.size() != n) throw std::domain_error("fit_mu: need >= 5 sigma points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(sigma[i] > sigma[i - 1])) throw std::domain_error("fit_mu: sigma grid must increase");

    MuProfile best;
    best.sigma_grid.assign(sigma.begin(), sigma.end());
    best.rms = std::numeric_limits<double>::infinity();
    std::size_t best_segments = 0;
    const std::vector<std::vector<int>> slope_sets{{0}, {-1}, {-2}, {-2, -1}, {-2, 0}, {-1, 0}, {-2, -1, 0}};

    auto consider = [&](const std::vector<int>& slopes, const std::vector<double>& cuts) {
        MuProfile p;
        p.sigma_grid = best.sigma_grid;
        p.fit_slopes = slopes;
        p.breakpoints = cuts;
        p.fit_intercept = 0;
        Kahan<double> shift;
        for (std::size_t i = 0; i < n; ++i) shift.add(mu_hat[i] - p.eval(sigma[i]));
        p.fit_intercept = shift.value() / n;
        Kahan<double> sq;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = mu_hat[i] - p.eval(sigma[i]);
            sq.add(r * r);
        }
        p.rms = std::sqrt(sq.value() / n);
        const bool better = p.rms < best.rms - 1e-12 ||
                            (std::abs(p.rms - best.rms) <= 1e-12 && slopes.size() < best_segments);
        if (better) {
            best = p;
            best_segments = slopes.size();
        }
    };
    for (const auto& slopes : slope_sets) {
        if (slopes.size() == 1) consider(slopes, {});
        // breakpoints strictly inside the grid
        if (slopes.size() == 2)
            for (std::size_t i = 1; i + 1 < n; ++i) consider(slopes, {sigma[i]});
        if (slopes.size() == 3)
            for (std::size_t i = 1; i + 1 < n; ++i)
                for (std::size_t j = i + 1; j + 1 < n; ++j) consider(slopes, {sigma[i], sigma[j]});
    }
    best.mu_hat.assign(mu_hat.begin(), mu_hat.end());
    best.clamped.assign(n, 0);
    best.zero_crossing = std::numeric_limits<double>::quiet_NaN();
    double x = sigma.front(), v = best.fit_intercept;
    if (v <= 0) best.zero_crossing = x;
    for (std::size_t i = 0; i < best.fit_slopes.size() && std::isnan(best.zero_crossing); ++i) {
        const double end = i < best.breakpoints.size() ? best.breakpoints[i] : sigma.back();
        const double v_end = v + best.fit_slopes[i] * (end - x);
        if (v_end <= 0 && best.fit_slopes[i] < 0) best.zero_crossing = x + v / -best.fit_slopes[i];
        x = end;
        v = v_end;
    }
    return best;
}

MuProfile fit_mu(const ProfileSamples& samples)
{
    if (samples.windows.size() < 4) throw std::domain_error("fit_mu: need >= 4 windows per sigma");
    std::vector<double> logT;
    for (double T : samples.windows) logT.push_back(std::log(T));
    std::vector<double> mu;
    std::vector<int> clamped;
    for (const auto& env : samples.envelope) {
        std::vector<double> logE;
        for (double e : env) logE.push_back(std::log(e));
        double slope = least_squares(logT, logE).slope;
        clamped.push_back(slope < mu_floor);
        mu.push_back(std::max(slope, mu_floor));
    }
    auto p = fit_mu(samples.sigma, mu);
    p.clamped = clamped;
    return p;
}

Exponents exponent_formulas(double d, double mu_zeta, double eta)
{
    if (!(d > 0 && d < 1)) throw std::domain_error("exponent_formulas: d in (0, 1)");
    if (!(mu_zeta > 0 && mu_zeta < 0.25)) throw std::domain_error("exponent_formulas: mu_zeta in (0, 1/4)");
    if (!(eta >= 0 && eta < 0.25)) throw std::domain_error("exponent_formulas: eta in [0, 1/4)");
    Exponents e;
    e.d_star = (1 - 4 * mu_zeta) / (1 - 2 * mu_zeta);
    e.subconvex = d >= e.d_star ? (1 - d) / (2 * (2 - d)) : mu_zeta;
    e.rajchman = (1 - d) * (1 + 2 * eta) / (2 * (2 - d + 4 * eta));
    e.d_crit = (11 + std::sqrt(297.0)) / 44;
    return e;
}

double slope_level(double s)
{
    if (!(s > 0 && s < 1)) throw std::domain_error("slope_level: s in (0, 1)");
    return s / (2 * (1 - s));
}

}  // namespace cantorlab
