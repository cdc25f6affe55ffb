#pragma once

#include <span>
#include <string>
#include <vector>

#include "cantorlab/core.hpp"
#include "cantorlab/measure.hpp"
#include "cantorlab/special_functions.hpp"

namespace cantorlab {

struct MomentResult {
    double T = 0;
    double value = 0;
    double main_term = 0;
    double ratio = 0;
    std::int64_t quadrature_points = 0;
    double refinement_delta = 0;  // |value(h) - value(h/2)| / value(h) when requested
};

struct MvBreakdown {
    double diagonal = 0;
    double diagonal_closed_form = 0;
    double error_sum = 0;
    double generic_part = 0;
    double accidental_part = 0;
    std::size_t pairs = 0;
};

/// Shifts m in [1, ceil(sqrt t) - 1], i.e. 1 <= m < sqrt t.
PartialSumSpec od_range(double t);

/// S(alpha) = sum over `range` of (m + alpha)^{-s}, for every atom.
std::vector<cplx> hurwitz_partial_sums(const MeasureAtoms& atoms, cplx s, const PartialSumSpec& range);

struct OdResult {
    double od = 0;        // sum over m != m' (real by symmetry)
    double diagonal = 0;  // sum_m int (m+alpha)^{-1}
    double full = 0;      // int |S|^2
    int M = 0;
};
/// Off-diagonal part of the nu-tilde average of |S|^2 on 1 <= m < sqrt t.
OdResult od_t(double t, const MeasureAtoms& pushforward);

/// OD' regrouped per atom: int sum_{n<m<M} n^{s-1} m^{-s} e^{i(m-n)theta}, M = floor(sqrt t).
cplx od_prime_atoms(double t, const MeasureAtoms& atoms);
/// The truncated-range variant of OD on the twisted polynomial: int |P|^2 - H_{M-1} = 2 Re OD'.
double od_t_twisted(double t, const MeasureAtoms& atoms);

struct FpResult {
    double t = 0;
    int M = 0;
    int grid = 0;
    std::vector<cplx> F;      // F_k for k = 0..k_max; F_{-k} = conj F_k
    double direct = 0;        // int |S|^2 d nu-tilde from the atoms
    double parseval_plus = 0;   // sum F_k nu_hat(k)
    double parseval_minus = 0;  // sum F_k conj nu_hat(k)
    std::string convention;     // "plus" or "minus", whichever reproduces `direct`
    double jump = 0;            // |g(1) - g(0)|
    std::vector<int> violations;  // k with |k F_k| > 10 jump / 2pi
};
/// F_k = int_0^1 |S(alpha)|^2 e^{-2 pi i k alpha} d alpha by the endpoint-averaged
/// trapezoid rule on 2^grid_log2 points, transformed with FFTW.
FpResult fp_coefficients(double t, int k_max, const MeasureAtoms& pushforward, int grid_log2 = 16);

struct QuadratureOptions {
    double panel_width = 0.4;
    int nodes = 8;
    int block_steps = 2048;
    bool refinement_check = false;
};

/// Integral over [T, 2T] of |L(1/2+it)|^2 with the sharp approximate functional
/// equation, on Gauss-Legendre panels aligned to the jumps of M(t).
MomentResult second_moment_L(double T, const LEvaluator& L, double c_nu, const QuadratureOptions& opts = {});

/// Product-variable apparatus for S(alpha)^2 with 1 <= m1 <= m2 < M.
MvBreakdown mv_fourth(double alpha, int M);
/// columns M, integral of MV, ratio to M^2 (log M)^2, accidental share, diagonal
GridScan mv_integral_ratio(std::span<const int> Ms, const MeasureAtoms& pushforward);

struct Od4Result {
    double T = 0;
    double fourth = 0;     // int_T^{2T} int |S_M|^4
    double diagonal = 0;   // int_T^{2T} int sum_j |c_j(M(t))|^2
    double od4 = 0;
    std::int64_t quadrature_points = 0;
};
/// S_M(alpha) = sum_{m=1}^{M-1} (m+alpha)^{-1/2-it}, M = floor(sqrt(t/2pi)).
Od4Result od4(double T, const MeasureAtoms& pushforward, const QuadratureOptions& opts = {0.5, 8, 2048, false});
/// columns T, OD4/T, fourth/(T log^2 T), fourth, diagonal
GridScan od4_scan(std::span<const double> Ts, const MeasureAtoms& pushforward);

/// int_delta^{1-delta} |zeta(1/2+it, alpha)|^2 d alpha against
/// log(t/2pi) + 2 gamma - 2 log(2 sin pi delta); ratio is the relative deviation.
MomentResult lebesgue_alpha_oracle(double t, double delta);
double lebesgue_closed_form(double t, double delta);

struct JensenResult {
    double looseness = 0;
    double mean_bound = 0;  // mean of 8 (int |zeta|^2 d nu-tilde + int |zeta|^2 d nu-tilde')
    double mean_l2 = 0;     // mean of |L|^2
    std::size_t points = 0;
};
/// sqrt(mean bound / mean |L|^2) over the t-points, with L and the bound built
/// from the same per-atom Hurwitz values at 1/2 - it.
JensenResult jensen_looseness(std::span<const double> ts, const LEvaluator& L);

}  // namespace cantorlab
