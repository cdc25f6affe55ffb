#include "cantorlab/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace cantorlab {

namespace {

// B_{2k} / (2k)!, k = 1..20
constexpr std::array<double, 20> bernoulli_over_factorial = {
    8.33333333333333287e-02,  -1.38888888888888894e-03, 3.30687830687830710e-05,
    -8.26719576719576754e-07, 2.08767569878681002e-08,  -5.28419013868749322e-10,
    1.33825365306846789e-11,  -3.38968029632258272e-13, 8.58606205627784517e-15,
    -2.17486869855806192e-16, 5.50900282836022953e-18,  -1.39544646858125223e-19,
    3.53470703962946728e-21,  -8.95351742703754628e-23, 2.26795245233768293e-24,
    -5.74479066887220246e-26, 1.45517247561486496e-27,  -3.68599494066531029e-29,
    9.33673425709504507e-31,  -2.36502241570062995e-32,
};

// Stirling coefficients B_{2k} / (2k (2k-1))
constexpr std::array<double, 10> stirling = {
    1.0 / 12,           -1.0 / 360,          1.0 / 1260,        -1.0 / 1680,
    1.0 / 1188,         -691.0 / 360360,     1.0 / 156,         -3617.0 / 122400,
    43867.0 / 244188,   -174611.0 / 125400,
};

const cplx I{0.0, 1.0};

// Eulerian numbers A(k, i), k < 64
const std::vector<std::vector<double>>& eulerian()
{
    static const auto table = [] {
        std::vector<std::vector<double>> a(64);
        a[0] = {1.0};
        for (int k = 1; k < 64; ++k) {
            a[k].assign(k, 0.0);
            for (int i = 0; i < k; ++i) {
                double left = (i < static_cast<int>(a[k - 1].size())) ? a[k - 1][i] : 0.0;
                double right = (i >= 1 && i - 1 < static_cast<int>(a[k - 1].size())) ? a[k - 1][i - 1] : 0.0;
                a[k][i] = (i + 1) * left + (k - i) * right;
            }
        }
        return a;
    }();
    return table;
}

// sum_{j>=0} j^k z^j in the Abel sense
cplx geometric_moment(int k, cplx z)
{
    const cplx q = 1.0 - z;
    if (k == 0) return 1.0 / q;
    const auto& row = eulerian()[k];
    cplx poly = 0;
    for (int i = k - 1; i >= 0; --i) poly = poly * z + row[i];
    return z * poly / std::pow(q, k + 1);
}

bool near_integer_pole(cplx s)
{
    double n = std::round(s.real());
    return n <= 3 && n >= 0 && std::abs(s - n) < 0.05;
}

}  // namespace

cplx log_gamma(cplx z)
{
    if (z.real() < 0.5) {
        if (z.imag() == 0 && z.real() == std::round(z.real()))
            throw pole_error("log_gamma: nonpositive integer");
        return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
    }
    cplx shift = 0;
    while (std::abs(z) < 15.0) {
        shift += std::log(z);
        z += 1.0;
    }
    const cplx inv = 1.0 / z;
    const cplx inv2 = inv * inv;
    cplx series = 0;
    cplx p = inv;
    for (double c : stirling) {
        series += c * p;
        p *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(two_pi) + series - shift;
}

cplx hurwitz_zeta(cplx s, double alpha)
{
    if (!(alpha > 0)) throw std::domain_error("hurwitz_zeta: alpha must be positive");
    if (s == cplx(1.0, 0.0)) throw pole_error("hurwitz_zeta: pole at s = 1");
    const int shift = std::max(10, static_cast<int>(std::ceil(std::abs(s.imag()) / pi)));
    Kahan<cplx> acc;
    for (int m = 0; m < shift; ++m) acc.add(std::exp(-s * std::log(m + alpha)));
    const double a = shift + alpha;
    const double la = std::log(a);
    const cplx head = std::exp(-s * la);
    acc.add(std::exp((1.0 - s) * la) / (s - 1.0));
    acc.add(0.5 * head);
    // term_k = B_2k/(2k)! s(s+1)...(s+2k-2) a^{-s-2k+1}
    cplx rising = s;
    cplx power = head / a;
    const double inv_a2 = 1.0 / (a * a);
    double scale = std::abs(acc.value());
    for (std::size_t k = 0; k < bernoulli_over_factorial.size(); ++k) {
        cplx term = bernoulli_over_factorial[k] * rising * power;
        acc.add(term);
        if (std::abs(term) < 1e-18 * scale) break;
        rising *= (s + static_cast<double>(2 * k + 1)) * (s + static_cast<double>(2 * k + 2));
        power *= inv_a2;
    }
    return acc.value();
}

cplx periodic_zeta_direct(double theta, cplx s)
{
    if (s.real() <= 1.0) throw std::domain_error("periodic_zeta_direct: needs Re s > 1");
    const cplx z = std::polar(1.0, theta);
    const double gap = std::abs(1.0 - z);
    if (gap < 1e-12) throw std::domain_error("periodic_zeta_direct: theta on the pole lattice");
    const auto cut = static_cast<std::int64_t>(std::max(200.0, std::ceil(8 * (std::abs(s) + 30) / gap)));
    Kahan<cplx> acc;
    for (std::int64_t n = 1; n < cut; ++n)
        acc.add(std::polar(1.0, std::fmod(static_cast<double>(n) * theta, two_pi)) *
                std::exp(-s * std::log(static_cast<double>(n))));
    // sum_{j>=0} z^j (cut+j)^{-s} = sum_k binom(-s,k) cut^{-s-k} sum_j j^k z^j
    const double c = static_cast<double>(cut);
    cplx coef = std::exp(-s * std::log(c));
    Kahan<cplx> tail;
    for (int k = 0; k < 60; ++k) {
        cplx term = coef * geometric_moment(k, z);
        tail.add(term);
        if (k > 2 && std::abs(term) < 1e-18 * std::abs(tail.value())) break;
        coef *= (-s - static_cast<double>(k)) / (static_cast<double>(k + 1) * c);
    }
    acc.add(std::polar(1.0, std::fmod(c * theta, two_pi)) * tail.value());
    return acc.value();
}

cplx log_chi(cplx s)
{
    return log_gamma(1.0 - s) + (s - 1.0) * std::log(two_pi);
}

cplx chi_factor(double t)
{
    if (std::abs(t) < 1) throw std::domain_error("chi_factor: |t| < 1 outside the asymptotic regime");
    return std::exp(log_chi(critical_point(t)));
}

cplx chi_plus(cplx s)
{
    return std::exp(log_chi(s) + I * (pi / 2) * (1.0 - s));
}

cplx chi_minus(cplx s)
{
    return std::exp(log_chi(s) - I * (pi / 2) * (1.0 - s));
}

cplx periodic_zeta_fe(double theta, cplx s)
{
    double alpha = theta / two_pi;
    alpha -= std::floor(alpha);
    if (alpha <= 0 || alpha >= 1) throw std::domain_error("periodic_zeta_fe: theta on the pole lattice");
    if (near_integer_pole(s)) {
        // F is entire in s; mean value over a circle avoids the removable poles.
        constexpr int K = 32;
        const double r = 0.25;
        const double centre = std::round(s.real());
        const cplx s0(centre, s.imag());
        const cplx offset = s - s0;
        Kahan<cplx> acc;
        for (int k = 0; k < K; ++k) {
            cplx p = s0 + r * std::polar(1.0, two_pi * k / K);
            acc.add(periodic_zeta_fe(theta, p + offset));
        }
        return acc.value() / static_cast<double>(K);
    }
    const cplx lc = log_chi(s);
    const cplx w = 1.0 - s;
    const cplx e_plus = lc + I * (pi / 2) * w;
    const cplx e_minus = lc - I * (pi / 2) * w;
    cplx out = 0;
    if (e_plus.real() > -700) out += std::exp(e_plus) * hurwitz_zeta(w, alpha);
    if (e_minus.real() > -700) out += std::exp(e_minus) * hurwitz_zeta(w, 1.0 - alpha);
    return out;
}

cplx periodic_zeta(double theta, cplx s)
{
    const double r = std::fmod(std::abs(theta), two_pi);
    if (std::min(r, two_pi - r) < 1e-14) throw std::domain_error("periodic_zeta: theta = 0 mod 2pi");
    if (s.real() > 1.25) return periodic_zeta_direct(theta, s);
    return periodic_zeta_fe(theta, s);
}

double harmonic(int M)
{
    if (M < 2) throw std::domain_error("harmonic: M >= 2");
    Kahan<double> acc;
    for (int m = 1; m < M; ++m) acc.add(1.0 / m);
    return acc.value();
}

cplx real_power(double x, cplx e)
{
    const long double lx = std::log(static_cast<long double>(x));
    const long double ph = std::fmod(static_cast<long double>(e.imag()) * lx, 2 * std::numbers::pi_v<long double>);
    return std::polar(std::exp(e.real() * static_cast<double>(lx)), static_cast<double>(ph));
}

cplx j_sum(int h, cplx s, int lo, int hi)
{
    if (h < 0 || lo < 1) throw std::domain_error("j_sum: need h >= 0 and lo >= 1");
    Kahan<cplx> acc;
    for (int n = lo; n <= hi; ++n) {
        // the phase t log(n/(n+h)) is formed before rounding to double
        const long double ratio = std::log1p(static_cast<long double>(h) / n);
        const double ln = std::log(static_cast<double>(n));
        const double mod = std::exp((s.real() - 1) * ln - s.real() * std::log(static_cast<double>(n + h)));
        const long double ph = std::fmod(-static_cast<long double>(s.imag()) * ratio, 2 * std::numbers::pi_v<long double>);
        acc.add(std::polar(mod, static_cast<double>(ph)));
    }
    return acc.value();
}

PartialSumSpec PartialSumSpec::afe(double t)
{
    // exact at the jumps t = 2pi M^2, where the square root may round down
    t = std::abs(t);
    int M = static_cast<int>(std::floor(std::sqrt(t / two_pi)));
    while (two_pi * (M + 1.0) * (M + 1.0) <= t) ++M;
    while (M > 0 && two_pi * double(M) * M > t) --M;
    return {M, 0, M - 1};
}

PartialSumSpec PartialSumSpec::restriction(double t)
{
    int M = static_cast<int>(std::floor(std::sqrt(std::abs(t))));
    return {M, 1, M - 1};
}

PartialSumSpec PartialSumSpec::range(int lo, int hi)
{
    return {hi + 1, lo, hi};
}

cplx partial_sum(double x, cplx s, const PartialSumSpec& range, SumKind kind)
{
    Kahan<cplx> acc;
    switch (kind) {
    case SumKind::P:
    case SumKind::Q:
        if (range.lo < 1) throw std::domain_error("partial_sum: P and Q start at n = 1");
        for (int n = range.lo; n <= range.hi; ++n) {
            const cplx e = std::polar(1.0, std::fmod(n * x, two_pi));
            if (kind == SumKind::P)
                acc.add(real_power(n, s - 1.0) * std::conj(e));
            else
                acc.add(real_power(n, -s) * e);
        }
        break;
    case SumKind::hurwitz:
    case SumKind::dual:
        if (range.lo < 0 || range.lo + x <= 0) throw std::domain_error("partial_sum: nonpositive base");
        for (int m = range.lo; m <= range.hi; ++m)
            acc.add(real_power(m + x, kind == SumKind::hurwitz ? -s : s - 1.0));
        break;
    }
    return acc.value();
}

LEvaluator::LEvaluator(const CantorSpec& spec)
    : spec_(spec),
      native_(build_atoms(spec, Target::native)),
      pushforward_(build_atoms(spec, Target::pushforward)),
      reflected_(build_atoms(spec, Target::reflected))
{
    // |sum_{n<=X} e^{in theta}| <= 1/|sin(theta/2)|
    Kahan<double> acc;
    for (std::size_t k = 0; k < native_.size(); ++k)
        acc.add(native_.weights[k] / std::abs(std::sin(0.5 * native_.points[k])));
    partial_bound_ = acc.value();
}

const std::vector<cplx>& LEvaluator::coefficients(CoefficientModel model, std::int64_t N) const
{
    auto& table = model == CoefficientModel::exact ? exact_ : level_;
    if (static_cast<std::int64_t>(table.size()) <= N) table = coefficient_table(spec_, N, model);
    return table;
}

LValue LEvaluator::eval(cplx s, const EvalOptions& opts) const
{
    switch (opts.method) {
    case Method::direct:
        return direct(s, opts);
    case Method::measure_average:
        return measure_average(s);
    case Method::afe:
        return afe(s, opts);
    case Method::afe_smoothed:
        return afe_smoothed(s, opts);
    }
    throw std::invalid_argument("l_eval: unknown method");
}

LValue LEvaluator::direct(cplx s, const EvalOptions& opts) const
{
    const double sigma = s.real();
    if (sigma <= 1.25) throw std::domain_error("l_eval direct: needs Re s > 1.25");
    // |tail beyond N| <= B N^{-sigma} (1 + |s|/sigma) by partial summation
    const double k = partial_bound_ * (1 + std::abs(s) / sigma);
    double N = std::ceil(std::pow(k / opts.direct_tolerance, 1.0 / sigma));
    N = std::min(N, 2e7);
    const auto n_max = static_cast<std::int64_t>(N);
    const auto& c = coefficients(opts.model, n_max);
    Kahan<cplx> acc;
    for (std::int64_t n = 1; n <= n_max; ++n) acc.add(c[n] * std::exp(-s * std::log(static_cast<double>(n))));
    return {acc.value(), k * std::pow(N, -sigma), n_max};
}

LValue LEvaluator::measure_average(cplx s) const
{
    std::vector<cplx> vals(native_.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t k = 0; k < native_.size(); ++k) vals[k] = periodic_zeta(native_.points[k], s);
    Kahan<cplx> acc;
    for (std::size_t k = 0; k < native_.size(); ++k) acc.add(native_.weights[k] * vals[k]);
    return {acc.value(), 0.0, static_cast<std::int64_t>(native_.size())};
}

LValue LEvaluator::afe(cplx s, const EvalOptions& opts) const
{
    const double t = s.imag();
    if (std::abs(s.real() - 0.5) > 1e-12 || t < 50) throw std::domain_error("l_eval afe: needs s = 1/2 + it, t >= 50");
    const double root = std::sqrt(t / two_pi);
    const auto N = static_cast<std::int64_t>(std::floor(opts.asymmetry * root));
    const int M = static_cast<int>(std::floor(root / opts.asymmetry));
    const auto& c = coefficients(opts.model, N);
    Kahan<cplx> head;
    for (std::int64_t n = 1; n <= N; ++n) head.add(c[n] * std::exp(-s * std::log(static_cast<double>(n))));
    auto dual = [&](const MeasureAtoms& atoms) {
        Kahan<cplx> acc;
        for (std::size_t k = 0; k < atoms.size(); ++k)
            acc.add(atoms.weights[k] * partial_sum(atoms.points[k], s, PartialSumSpec::range(0, M - 1), SumKind::dual));
        return acc.value();
    };
    cplx out = head.value() + chi_plus(s) * dual(pushforward_);
    const cplx lm = log_chi(s) - I * (pi / 2) * (1.0 - s);
    if (lm.real() > -700) out += std::exp(lm) * dual(reflected_);
    return {out, 0.0, N + M};
}

namespace {

// Weights of the smoothed approximate functional equation.  The dual weight
// U(l) = (1/2pi) int R(y) e^{-(c+iy) l} dy is tabulated on a uniform l-grid
// with its derivative and read back by cubic Hermite interpolation.
class DualWeight {
public:
    DualWeight(cplx s, bool plus, double b, double l_lo, double l_hi)
    {
        const double c = 1.0;
        const double Y = 6.5 * b;
        const double hy = 0.05;
        const int ny = static_cast<int>(std::ceil(Y / hy));
        const cplx base = plus ? log_chi(s) + I * (pi / 2) * (1.0 - s) : log_chi(s) - I * (pi / 2) * (1.0 - s);
        std::vector<cplx> u(2 * ny + 1), R(2 * ny + 1);
        for (int j = -ny; j <= ny; ++j) {
            cplx uu(c, j * hy);
            cplx sh = s - uu;
            cplx lc = log_chi(sh) + (plus ? 1.0 : -1.0) * I * (pi / 2) * (1.0 - sh);
            u[j + ny] = uu;
            R[j + ny] = std::exp(lc - base + uu * uu / (b * b)) / uu * (hy / two_pi);
        }
        lo_ = l_lo;
        step_ = 1e-3;
        const int nl = static_cast<int>(std::ceil((l_hi - l_lo) / step_)) + 2;
        val_.resize(nl);
        der_.resize(nl);
        for (int i = 0; i < nl; ++i) {
            double l = lo_ + i * step_;
            Kahan<cplx> v, d;
            for (std::size_t j = 0; j < u.size(); ++j) {
                cplx e = R[j] * std::exp(-u[j] * l);
                v.add(e);
                d.add(-u[j] * e);
            }
            val_[i] = v.value();
            der_[i] = d.value();
        }
    }

    cplx operator()(double l) const
    {
        double x = (l - lo_) / step_;
        auto i = static_cast<std::size_t>(std::floor(x));
        if (x < 0 || i + 1 >= val_.size()) throw std::out_of_range("DualWeight: outside tabulated range");
        double f = x - static_cast<double>(i);
        double h00 = (1 + 2 * f) * (1 - f) * (1 - f), h10 = f * (1 - f) * (1 - f);
        double h01 = f * f * (3 - 2 * f), h11 = f * f * (f - 1);
        return h00 * val_[i] + h10 * step_ * der_[i] + h01 * val_[i + 1] + h11 * step_ * der_[i + 1];
    }

private:
    double lo_ = 0, step_ = 1e-3;
    std::vector<cplx> val_, der_;
};

}  // namespace

LValue LEvaluator::afe_smoothed(cplx s, const EvalOptions& opts) const
{
    const double t = s.imag();
    if (t < 50) throw std::domain_error("l_eval afe_smoothed: needs t >= 50");
    const double b = opts.smoothing_width;
    const double X = opts.asymmetry * std::sqrt(t / two_pi);
    // V(x) = erfc(b log x / 2)/2 drops below 1e-17 once b log x / 2 > 5.9
    const double reach = std::exp(2 * 5.9 / b);
    const auto N = static_cast<std::int64_t>(std::ceil(reach * X));
    const double dual_reach = reach * t / (two_pi * X);
    const int M = static_cast<int>(std::ceil(dual_reach));
    const auto& c = coefficients(opts.model, N);
    Kahan<cplx> head;
    for (std::int64_t n = 1; n <= N; ++n) {
        double v = 0.5 * std::erfc(0.5 * b * std::log(static_cast<double>(n) / X));
        if (v == 0) break;
        head.add(v * c[n] * std::exp(-s * std::log(static_cast<double>(n))));
    }
    const double l_lo = std::log(std::min(pushforward_.lo(), reflected_.lo()) * X) - 0.01;
    const double l_hi = std::log((M + 1.0) * X) + 0.01;
    cplx out = head.value();
    for (bool plus : {true, false}) {
        const cplx lw = plus ? log_chi(s) + I * (pi / 2) * (1.0 - s) : log_chi(s) - I * (pi / 2) * (1.0 - s);
        if (lw.real() < -700) continue;
        const MeasureAtoms& atoms = plus ? pushforward_ : reflected_;
        DualWeight U(s, plus, b, l_lo, l_hi);
        Kahan<cplx> acc;
        for (std::size_t k = 0; k < atoms.size(); ++k) {
            Kahan<cplx> inner;
            for (int m = 0; m <= M; ++m) {
                const double a = m + atoms.points[k];
                const double l = std::log(a);
                inner.add(std::exp((s - 1.0) * l) * U(l + std::log(X)));
            }
            acc.add(atoms.weights[k] * inner.value());
        }
        out += std::exp(lw) * acc.value();
    }
    return {out, 0.0, N + M};
}

LValue l_eval(cplx s, const CantorSpec& spec, const EvalOptions& opts)
{
    return LEvaluator(spec).eval(s, opts);
}

void OscillatorBank::assign(std::span<const double> freq, std::span<const cplx> amp,
                            std::span<const std::size_t> segment_ends)
{
    if (freq.size() != amp.size()) throw std::invalid_argument("OscillatorBank: size mismatch");
    if (!segment_ends.empty() && segment_ends.back() != freq.size())
        throw std::invalid_argument("OscillatorBank: segments must cover the bank");
    freq_.assign(freq.begin(), freq.end());
    amp_re_.resize(amp.size());
    amp_im_.resize(amp.size());
    for (std::size_t j = 0; j < amp.size(); ++j) {
        amp_re_[j] = amp[j].real();
        amp_im_[j] = amp[j].imag();
    }
    ends_.assign(segment_ends.begin(), segment_ends.end());
    z_re_.resize(freq.size());
    z_im_.resize(freq.size());
    r_re_.resize(freq.size());
    r_im_.resize(freq.size());
}

void OscillatorBank::run_segment(std::size_t lo, std::size_t hi, double t0, double dt, int steps, cplx* out)
{
    double* __restrict zr = z_re_.data();
    double* __restrict zi = z_im_.data();
    double* __restrict rr = r_re_.data();
    double* __restrict ri = r_im_.data();
    for (std::size_t j = lo; j < hi; ++j) {
        const double ph = std::fmod(t0 * freq_[j], two_pi);
        const double c = std::cos(ph), s = std::sin(ph);
        zr[j] = amp_re_[j] * c - amp_im_[j] * s;
        zi[j] = amp_re_[j] * s + amp_im_[j] * c;
        const double dph = dt * freq_[j];
        rr[j] = std::cos(dph);
        ri[j] = std::sin(dph);
    }
    for (int k = 0; k < steps; ++k) {
        double sr = 0, si = 0;
#pragma omp simd reduction(+ : sr, si)
        for (std::size_t j = lo; j < hi; ++j) {
            sr += zr[j];
            si += zi[j];
            const double a = zr[j] * rr[j] - zi[j] * ri[j];
            const double b = zr[j] * ri[j] + zi[j] * rr[j];
            zr[j] = a;
            zi[j] = b;
        }
        out[k] = {sr, si};
    }
}

}  // namespace cantorlab
