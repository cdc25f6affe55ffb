#include "cantorlab/moments.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "cantorlab/identities.hpp"

namespace cantorlab {

namespace {

int afe_M(double t) { return PartialSumSpec::afe(t).M; }

// A stretch of [a, b] on which M(t) = floor(sqrt(t/2pi)) is constant, cut into equal panels.
struct Piece {
    double lo, hi;
    int M;
    int panels;
    double width;
};

std::vector<Piece> aligned_pieces(double a, double b, double h)
{
    std::vector<Piece> out;
    double lo = a;
    while (lo < b) {
        const int M = afe_M(lo);
        const double jump = two_pi * (M + 1.0) * (M + 1.0);
        const double hi = std::min(b, jump);
        const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / h)));
        out.push_back({lo, hi, M, panels, (hi - lo) / panels});
        lo = hi;
    }
    return out;
}

// Gauss-Legendre quadrature over aligned pieces.  For every piece and node the
// integrand is requested on an arithmetic progression of t (one node per panel),
// in blocks; `block(M, t0, dt, steps, values)` fills values[k] = f(t0 + k dt).
template <class Block>
double integrate_aligned(double a, double b, const QuadratureOptions& opts, Block&& block, std::int64_t& count)
{
    const auto rule = gauss_legendre(opts.nodes);
    Kahan<double> total;
    std::vector<double> values;
    for (const auto& piece : aligned_pieces(a, b, opts.panel_width)) {
        for (int i = 0; i < opts.nodes; ++i) {
            const double offset = 0.5 * piece.width * (1 + rule.nodes[i]);
            const double w = 0.5 * piece.width * rule.weights[i];
            for (int k0 = 0; k0 < piece.panels; k0 += opts.block_steps) {
                const int steps = std::min(opts.block_steps, piece.panels - k0);
                values.assign(steps, 0.0);
                block(piece.M, piece.lo + offset + k0 * piece.width, piece.width, steps, values);
                for (double v : values) total.add(w * v);
                count += steps;
            }
        }
    }
    return total.value();
}

std::vector<std::size_t> chunk_ends(std::size_t begin, std::size_t end, std::size_t chunk)
{
    std::vector<std::size_t> out;
    for (std::size_t e = begin + chunk; e < end; e += chunk) out.push_back(e);
    out.push_back(end);
    return out;
}

double atom_angle(const MeasureAtoms& atoms, std::size_t k)
{
    return atoms.target == Target::native ? atoms.points[k] : two_pi * atoms.points[k];
}

}  // namespace

PartialSumSpec od_range(double t)
{
    const int top = static_cast<int>(std::ceil(std::sqrt(t))) - 1;
    return {top + 1, 1, top};
}

std::vector<cplx> hurwitz_partial_sums(const MeasureAtoms& atoms, cplx s, const PartialSumSpec& range)
{
    std::vector<cplx> out(atoms.size());
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < atoms.size(); ++k)
        out[k] = partial_sum(atoms.points[k], s, range, SumKind::hurwitz);
    return out;
}

OdResult od_t(double t, const MeasureAtoms& pushforward)
{
    if (t < 100) throw std::domain_error("od_t: needs t >= 100");
    const auto range = od_range(t);
    const auto S = hurwitz_partial_sums(pushforward, critical_point(t), range);
    Kahan<double> full, diag;
    for (std::size_t k = 0; k < pushforward.size(); ++k) {
        const double w = pushforward.weights[k];
        full.add(w * std::norm(S[k]));
        Kahan<double> d;
        for (int m = range.lo; m <= range.hi; ++m) d.add(1.0 / (m + pushforward.points[k]));
        diag.add(w * d.value());
    }
    OdResult out;
    out.M = range.hi + 1;
    out.full = full.value();
    out.diagonal = diag.value();
    out.od = out.full - out.diagonal;
    return out;
}

cplx od_prime_atoms(double t, const MeasureAtoms& atoms)
{
    const cplx s = critical_point(t);
    const int M = PartialSumSpec::restriction(t).M;
    std::vector<cplx> up(M), down(M);
    for (int n = 1; n < M; ++n) {
        up[n] = real_power(n, s - 1.0);
        down[n] = real_power(n, -s);
    }
    std::vector<cplx> per(atoms.size());
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        const double th = atom_angle(atoms, k);
        // sum over n < m of n^{s-1} e^{-in theta} m^{-s} e^{im theta}
        Kahan<cplx> prefix, acc;
        for (int m = 1; m < M; ++m) {
            const cplx e = std::polar(1.0, std::fmod(m * th, two_pi));
            acc.add(down[m] * e * prefix.value());
            prefix.add(up[m] * std::conj(e));
        }
        per[k] = acc.value();
    }
    Kahan<cplx> total;
    for (std::size_t k = 0; k < atoms.size(); ++k) total.add(atoms.weights[k] * per[k]);
    return total.value();
}

double od_t_twisted(double t, const MeasureAtoms& atoms)
{
    const int M = PartialSumSpec::restriction(t).M;
    const auto p = twisted_polynomial(atoms, critical_point(t), M);
    Kahan<double> acc;
    for (std::size_t k = 0; k < atoms.size(); ++k) acc.add(atoms.weights[k] * std::norm(p[k]));
    return acc.value() - harmonic(M);
}

FpResult fp_coefficients(double t, int k_max, const MeasureAtoms& pushforward, int grid_log2)
{
    if (t < 100) throw std::domain_error("fp_coefficients: needs t >= 100");
    if (k_max < 64) throw std::domain_error("fp_coefficients: k_max >= 64");
    const auto range = od_range(t);
    const int G = 1 << grid_log2;
    if (G < 8 * (range.hi + 1) || k_max > G / 4)
        throw std::domain_error("fp_coefficients: grid too coarse for M and k_max");
    const cplx s = critical_point(t);
    auto g = [&](double a) { return std::norm(partial_sum(a, s, range, SumKind::hurwitz)); };

    std::vector<double> x(G);
#pragma omp parallel for schedule(static)
    for (int j = 1; j < G; ++j) x[j] = g(static_cast<double>(j) / G);
    const double g0 = g(0.0), g1 = g(1.0);
    x[0] = 0.5 * (g0 + g1);

    std::unique_ptr<fftw_complex, decltype(&fftw_free)> out(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (G / 2 + 1))), &fftw_free);
    fftw_plan plan = fftw_plan_dft_r2c_1d(G, x.data(), out.get(), FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    FpResult res;
    res.t = t;
    res.M = range.hi + 1;
    res.grid = G;
    res.jump = std::abs(g1 - g0);
    res.F.resize(k_max + 1);
    for (int k = 0; k <= k_max; ++k) res.F[k] = cplx(out.get()[k][0], out.get()[k][1]) / static_cast<double>(G);

    Kahan<double> direct;
    const auto S = hurwitz_partial_sums(pushforward, s, range);
    for (std::size_t k = 0; k < pushforward.size(); ++k) direct.add(pushforward.weights[k] * std::norm(S[k]));
    res.direct = direct.value();

    Kahan<double> plus, minus;
    plus.add(res.F[0].real());
    minus.add(res.F[0].real());
    const double limit = 10 * res.jump / two_pi;
    for (int k = 1; k <= k_max; ++k) {
        const cplx nu = nu_hat_empirical(pushforward, k);
        // F_{-k} nu(-k) = conj(F_k nu(k))
        plus.add(2 * (res.F[k] * nu).real());
        minus.add(2 * (res.F[k] * std::conj(nu)).real());
        if (k * std::abs(res.F[k]) > limit) res.violations.push_back(k);
    }
    res.parseval_plus = plus.value();
    res.parseval_minus = minus.value();
    res.convention = std::abs(res.parseval_plus - res.direct) <= std::abs(res.parseval_minus - res.direct) ? "plus" : "minus";
    return res;
}

MomentResult second_moment_L(double T, const LEvaluator& L, double c_nu, const QuadratureOptions& opts)
{
    if (T < 1e3) throw std::domain_error("second_moment_L: needs T >= 1e3");
    if (opts.panel_width / opts.nodes > 0.05 + 1e-12)
        throw std::domain_error("second_moment_L: quadrature step above 0.05");
    const auto& atoms = L.pushforward();
    const int M_top = afe_M(2 * T) + 1;
    const auto& coef = L.coefficients(CoefficientModel::level, M_top);
    constexpr std::size_t chunk = 4096;

    OscillatorBank bank;
    int bank_M = -1;
    std::vector<cplx> head, dual;
    auto block = [&](int M, double t0, double dt, int steps, std::vector<double>& values) {
        if (M != bank_M) {
            std::vector<double> freq;
            std::vector<cplx> amp;
            for (int n = 1; n <= M; ++n) {
                freq.push_back(-std::log(static_cast<double>(n)));
                amp.push_back(coef[n] / std::sqrt(static_cast<double>(n)));
            }
            for (std::size_t k = 0; k < atoms.size(); ++k)
                for (int m = 0; m < M; ++m) {
                    const double a = m + atoms.points[k];
                    freq.push_back(std::log(a));
                    amp.push_back(atoms.weights[k] / std::sqrt(a));
                }
            auto ends = chunk_ends(M, freq.size(), chunk);
            ends.insert(ends.begin(), static_cast<std::size_t>(M));
            bank.assign(freq, amp, ends);
            bank_M = M;
        }
        head.assign(steps, 0.0);
        dual.assign(steps, 0.0);
        bank.run(t0, dt, steps, [&](std::size_t seg, std::span<const cplx> sums) {
            auto& dst = seg == 0 ? head : dual;
            for (int k = 0; k < steps; ++k) dst[k] += sums[k];
        });
        for (int k = 0; k < steps; ++k) {
            const double t = t0 + k * dt;
            values[k] = std::norm(head[k] + chi_plus(critical_point(t)) * dual[k]);
        }
    };

    MomentResult res;
    res.T = T;
    res.value = integrate_aligned(T, 2 * T, opts, block, res.quadrature_points);
    res.main_term = c_nu * T;
    res.ratio = res.value / res.main_term;
    if (opts.refinement_check) {
        QuadratureOptions fine = opts;
        fine.panel_width /= 2;
        fine.refinement_check = false;
        std::int64_t ignored = 0;
        bank_M = -1;
        const double v = integrate_aligned(T, 2 * T, fine, block, ignored);
        res.refinement_delta = std::abs(v - res.value) / res.value;
    }
    return res;
}

MvBreakdown mv_fourth(double alpha, int M)
{
    if (M < 2) throw std::domain_error("mv_fourth: M >= 2");
    struct Pair {
        double logq;
        int m1, m2;
    };
    std::vector<Pair> pairs;
    pairs.reserve(static_cast<std::size_t>(M) * M / 2);
    Kahan<double> sum_a, sum_a2;
    for (int m1 = 1; m1 < M; ++m1) {
        const double a = 1.0 / (m1 + alpha);
        sum_a.add(a);
        sum_a2.add(a * a);
        for (int m2 = m1; m2 < M; ++m2) pairs.push_back({std::log(m1 + alpha) + std::log(m2 + alpha), m1, m2});
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.logq < y.logq; });
    MvBreakdown out;
    out.pairs = pairs.size();
    out.diagonal_closed_form = 2 * sum_a.value() * sum_a.value() - sum_a2.value();
    Kahan<double> diag, generic, accidental;
    auto adjacent = [](const Pair& p, const Pair& q) {
        return (p.m1 == q.m1 && std::abs(p.m2 - q.m2) == 1) || (p.m2 == q.m2 && std::abs(p.m1 - q.m1) == 1) ||
               (p.m1 == q.m2 && std::abs(p.m2 - q.m1) == 1) || (p.m2 == q.m1 && std::abs(p.m1 - q.m2) == 1);
    };
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        const auto& p = pairs[j];
        const double c2 = (p.m1 == p.m2 ? 1.0 : 4.0) * std::exp(-p.logq);
        diag.add(c2);
        if (pairs.size() == 1) continue;
        double gap = std::numeric_limits<double>::infinity();
        std::size_t nb = j;
        if (j > 0 && p.logq - pairs[j - 1].logq < gap) {
            gap = p.logq - pairs[j - 1].logq;
            nb = j - 1;
        }
        if (j + 1 < pairs.size() && pairs[j + 1].logq - p.logq < gap) {
            gap = pairs[j + 1].logq - p.logq;
            nb = j + 1;
        }
        if (gap <= 4 * std::numeric_limits<double>::epsilon() * std::abs(p.logq) + 1e-300)
            throw collision_error("mv_fourth: coinciding products at alpha = " + std::to_string(alpha));
        (adjacent(p, pairs[nb]) ? generic : accidental).add(c2 / gap);
    }
    out.diagonal = diag.value();
    out.generic_part = generic.value();
    out.accidental_part = accidental.value();
    out.error_sum = out.generic_part + out.accidental_part;
    return out;
}

GridScan mv_integral_ratio(std::span<const int> Ms, const MeasureAtoms& pushforward)
{
    GridScan scan;
    scan.name = "mv_ratio";
    scan.columns = {"M", "mv_integral", "ratio", "accidental_share", "diagonal"};
    for (int M : Ms) {
        if (M < 20 || M > 200) throw std::domain_error("mv_integral_ratio: M outside [20, 200]");
        std::vector<MvBreakdown> per(pushforward.size());
#pragma omp parallel for schedule(dynamic, 16)
        for (std::size_t k = 0; k < pushforward.size(); ++k) per[k] = mv_fourth(pushforward.points[k], M);
        Kahan<double> mv, acc, diag;
        for (std::size_t k = 0; k < per.size(); ++k) {
            const double w = pushforward.weights[k];
            mv.add(w * per[k].error_sum);
            acc.add(w * per[k].accidental_part);
            diag.add(w * per[k].diagonal);
        }
        const double lm = std::log(static_cast<double>(M));
        scan.add_row({double(M), mv.value(), mv.value() / (double(M) * M * lm * lm), acc.value() / mv.value(),
                      diag.value()});
    }
    return scan;
}

Od4Result od4(double T, const MeasureAtoms& pushforward, const QuadratureOptions& opts)
{
    if (T < 300 || T > 3e4) throw std::domain_error("od4: T outside [300, 3e4]");
    const auto& atoms = pushforward;
    OscillatorBank bank;
    int bank_M = -1;
    std::vector<double> weights;
    auto block = [&](int M, double t0, double dt, int steps, std::vector<double>& values) {
        if (M != bank_M) {
            std::vector<double> freq;
            std::vector<cplx> amp;
            std::vector<std::size_t> ends;
            for (std::size_t k = 0; k < atoms.size(); ++k) {
                for (int m = 1; m < M; ++m) {
                    const double a = m + atoms.points[k];
                    freq.push_back(-std::log(a));
                    amp.push_back(1.0 / std::sqrt(a));
                }
                ends.push_back(freq.size());
            }
            bank.assign(freq, amp, ends);
            bank_M = M;
        }
        bank.run(t0, dt, steps, [&](std::size_t seg, std::span<const cplx> sums) {
            const double w = atoms.weights[seg];
            for (int k = 0; k < steps; ++k) {
                const double n2 = std::norm(sums[k]);
                values[k] += w * n2 * n2;
            }
        });
    };
    Od4Result res;
    res.T = T;
    res.fourth = integrate_aligned(T, 2 * T, opts, block, res.quadrature_points);

    // the diagonal depends on t only through M(t)
    Kahan<double> diag;
    for (const auto& piece : aligned_pieces(T, 2 * T, opts.panel_width)) {
        Kahan<double> avg;
        for (std::size_t k = 0; k < atoms.size(); ++k) {
            Kahan<double> a1, a2;
            for (int m = 1; m < piece.M; ++m) {
                const double a = 1.0 / (m + atoms.points[k]);
                a1.add(a);
                a2.add(a * a);
            }
            avg.add(atoms.weights[k] * (2 * a1.value() * a1.value() - a2.value()));
        }
        diag.add((piece.hi - piece.lo) * avg.value());
    }
    res.diagonal = diag.value();
    res.od4 = res.fourth - res.diagonal;
    return res;
}

GridScan od4_scan(std::span<const double> Ts, const MeasureAtoms& pushforward)
{
    GridScan scan;
    scan.name = "od4";
    scan.columns = {"T", "od4_over_T", "fourth_over_TlogT2", "fourth", "diagonal"};
    for (double T : Ts) {
        auto r = od4(T, pushforward);
        const double lt = std::log(T);
        scan.add_row({T, r.od4 / T, r.fourth / (T * lt * lt), r.fourth, r.diagonal});
    }
    return scan;
}

double lebesgue_closed_form(double t, double delta)
{
    return std::log(t / two_pi) + 2 * euler_gamma - 2 * std::log(2 * std::sin(pi * delta));
}

MomentResult lebesgue_alpha_oracle(double t, double delta)
{
    if (!(delta > 0 && delta < 0.5)) throw std::domain_error("lebesgue_alpha_oracle: need 0 < delta < 1/2");
    if (t < 1e3) throw std::domain_error("lebesgue_alpha_oracle: needs t >= 1e3");
    const cplx s = critical_point(t);
    const auto rule = gauss_legendre(8);
    // panels of half an oscillation of alpha^{-it}
    std::vector<std::pair<double, double>> panels;
    for (double a = delta; a < 1 - delta;) {
        const double b = std::min(1 - delta, a + pi * a / t);
        panels.emplace_back(a, b);
        a = b;
    }
    std::vector<double> part(panels.size());
#pragma omp parallel for schedule(static)
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const auto [a, b] = panels[p];
        double acc = 0;
        for (int i = 0; i < 8; ++i) {
            const double x = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i];
            acc += rule.weights[i] * std::norm(hurwitz_zeta(s, x));
        }
        part[p] = 0.5 * (b - a) * acc;
    }
    MomentResult res;
    res.T = t;
    res.value = kahan_sum(part);
    res.main_term = lebesgue_closed_form(t, delta);
    res.ratio = std::abs(res.value - res.main_term) / res.main_term;
    res.quadrature_points = static_cast<std::int64_t>(8 * panels.size());
    return res;
}

JensenResult jensen_looseness(std::span<const double> ts, const LEvaluator& L)
{
    const auto& fwd = L.pushforward();
    const auto& ref = L.reflected();
    Kahan<double> bound, l2;
    for (double t : ts) {
        const cplx w = cplx(0.5, -t);  // 1 - s at s = 1/2 + it
        std::vector<cplx> zf(fwd.size()), zr(ref.size());
#pragma omp parallel for schedule(static)
        for (std::size_t k = 0; k < fwd.size(); ++k) {
            zf[k] = hurwitz_zeta(w, fwd.points[k]);
            zr[k] = hurwitz_zeta(w, ref.points[k]);
        }
        Kahan<double> nf, nr;
        Kahan<cplx> sf, sr;
        for (std::size_t k = 0; k < fwd.size(); ++k) {
            nf.add(fwd.weights[k] * std::norm(zf[k]));
            nr.add(ref.weights[k] * std::norm(zr[k]));
            sf.add(fwd.weights[k] * zf[k]);
            sr.add(ref.weights[k] * zr[k]);
        }
        const cplx s = critical_point(t);
        cplx value = chi_plus(s) * sf.value();
        const cplx lm = log_chi(s) - cplx(0, pi / 2) * (1.0 - s);
        if (lm.real() > -700) value += std::exp(lm) * sr.value();
        bound.add(8 * (nf.value() + nr.value()));
        l2.add(std::norm(value));
    }
    JensenResult res;
    res.points = ts.size();
    res.mean_bound = bound.value() / ts.size();
    res.mean_l2 = l2.value() / ts.size();
    res.looseness = std::sqrt(res.mean_bound / res.mean_l2);
    return res;
}

}  // namespace cantorlab
