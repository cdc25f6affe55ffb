#pragma once

#include <span>
#include <vector>

#include "cantorlab/core.hpp"
#include "cantorlab/measure.hpp"

namespace cantorlab {

inline cplx critical_point(double t) { return {0.5, t}; }

cplx log_gamma(cplx z);

/// Euler-Maclaurin with shift max(10, ceil(|t|/pi)) and up to twenty Bernoulli terms.
cplx hurwitz_zeta(cplx s, double alpha);

/// Sum of e^{in theta} n^{-s}.  Uses the direct series for Re s > 1.25, the
/// Hurwitz functional equation otherwise.
cplx periodic_zeta(double theta, cplx s);
cplx periodic_zeta_direct(double theta, cplx s);
cplx periodic_zeta_fe(double theta, cplx s);

/// log of Gamma(1-s)(2pi)^{s-1}
cplx log_chi(cplx s);
/// Gamma(1-s)(2pi)^{s-1} at s = 1/2 + it.  Underflows for |t| beyond ~450; use log_chi there.
cplx chi_factor(double t);
/// Gamma(1-s)(2pi)^{s-1} e^{+- i pi (1-s)/2}, the weights of the two dual Hurwitz terms.
cplx chi_plus(cplx s);
cplx chi_minus(cplx s);

/// x^e for x > 0, with the phase Im(e) log x reduced in extended precision.
cplx real_power(double x, cplx e);

/// H_{M-1}
double harmonic(int M);

/// sum_{n=lo}^{hi} n^{s-1} (n+h)^{-s}; zero when lo > hi.
cplx j_sum(int h, cplx s, int lo, int hi);

struct PartialSumSpec {
    int M = 1;
    int lo = 1;
    int hi = 0;

    /// m in [0, M-1] with M = floor(sqrt(t/2pi))
    static PartialSumSpec afe(double t);
    /// n in [1, M-1] with M = floor(sqrt t)
    static PartialSumSpec restriction(double t);
    static PartialSumSpec range(int lo, int hi);
};

enum class SumKind { P, Q, hurwitz, dual };

/// P: n^{s-1} e^{-in theta}; Q: m^{-s} e^{im theta}; hurwitz: (m+alpha)^{-s}; dual: (m+alpha)^{s-1}.
cplx partial_sum(double x, cplx s, const PartialSumSpec& range, SumKind kind);

enum class Method { direct, measure_average, afe, afe_smoothed };

struct EvalOptions {
    Method method = Method::measure_average;
    CoefficientModel model = CoefficientModel::level;
    double asymmetry = 1.0;         // afe: N = a sqrt(t/2pi), M = sqrt(t/2pi)/a
    double direct_tolerance = 1e-12;
    double smoothing_width = 4.0;   // afe_smoothed: weight e^{u^2/b^2}
};

struct LValue {
    cplx value;
    double error_bound = 0;  // direct: partial summation tail bound; others 0
    std::int64_t terms = 0;
};

/// L(s) = integral of F(theta, s) against the measure.  Holds the atoms and
/// coefficient tables so repeated calls do not rebuild them.
class LEvaluator {
public:
    explicit LEvaluator(const CantorSpec& spec);

    LValue eval(cplx s, const EvalOptions& opts = {}) const;

    const CantorSpec& spec() const { return spec_; }
    const MeasureAtoms& native() const { return native_; }
    const MeasureAtoms& pushforward() const { return pushforward_; }
    const MeasureAtoms& reflected() const { return reflected_; }
    /// sup_X |sum_{n<=X} nu_hat(n)|, bounded through the atoms.
    double partial_sum_bound() const { return partial_bound_; }
    const std::vector<cplx>& coefficients(CoefficientModel model, std::int64_t N) const;

private:
    LValue direct(cplx s, const EvalOptions& opts) const;
    LValue measure_average(cplx s) const;
    LValue afe(cplx s, const EvalOptions& opts) const;
    LValue afe_smoothed(cplx s, const EvalOptions& opts) const;

    CantorSpec spec_;
    MeasureAtoms native_, pushforward_, reflected_;
    double partial_bound_ = 0;
    mutable std::vector<cplx> exact_, level_;
};

LValue l_eval(cplx s, const CantorSpec& spec, const EvalOptions& opts = {});

/// Bank of z_j(t) = amp_j e^{i t freq_j} advanced on an arithmetic t-progression.
/// Oscillators are grouped into contiguous segments; run() hands every segment's
/// per-step sums to a sink while the segment is still cache resident.
class OscillatorBank {
public:
    void assign(std::span<const double> freq, std::span<const cplx> amp, std::span<const std::size_t> segment_ends);
    /// sink(segment, sums) with sums[k] = sum over the segment at t0 + k dt, k < steps
    template <class Sink>
    void run(double t0, double dt, int steps, Sink&& sink);

    std::size_t size() const { return freq_.size(); }
    std::size_t segments() const { return ends_.size(); }

private:
    void run_segment(std::size_t lo, std::size_t hi, double t0, double dt, int steps, cplx* out);

    std::vector<double> freq_, amp_re_, amp_im_;
    std::vector<double> z_re_, z_im_, r_re_, r_im_;
    std::vector<std::size_t> ends_;
    std::vector<cplx> buffer_;
};

template <class Sink>
void OscillatorBank::run(double t0, double dt, int steps, Sink&& sink)
{
    buffer_.resize(static_cast<std::size_t>(steps));
    std::size_t lo = 0;
    for (std::size_t s = 0; s < ends_.size(); ++s) {
        run_segment(lo, ends_[s], t0, dt, steps, buffer_.data());
        sink(s, std::span<const cplx>(buffer_.data(), buffer_.size()));
        lo = ends_[s];
    }
}

}  // namespace cantorlab
