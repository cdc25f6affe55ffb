#pragma once

#include <map>
#include <string>
#include <vector>

#include "cantorlab/core.hpp"
#include "cantorlab/measure.hpp"

namespace cantorlab {

struct IdentityReport {
    std::string name;
    cplx lhs;
    cplx rhs;
    double residual = 0;
    double tolerance = 0;
    bool pass = false;
    std::map<std::string, double> params;
};

IdentityReport make_report(std::string name, cplx lhs, cplx rhs, double tolerance,
                           std::map<std::string, double> params = {});

/// Sum over 1 <= n <= M-1 of n^{s-1} e^{-in theta}, evaluated at every atom
/// (theta = 2 pi alpha for pushforward atoms).
std::vector<cplx> twisted_polynomial(const MeasureAtoms& atoms, cplx s, int M);

/// Q(theta) against conj P(theta) on the critical line.
IdentityReport check_conjugacy(double theta, double t);

/// TRI(theta) = sum_{m <= n < M} n^{s-1} m^{-s} e^{i(m-n)theta} as a double sum
/// against H_{M-1} + sum_l conj(J_l) e^{-il theta}, M = floor(sqrt t).
IdentityReport check_tri(double theta, double t);

/// OD' = sum_{h=1}^{M-2} nu_hat(h) J_h^{[1, M-1-h]}, with nu_hat taken from the atoms.
cplx od_prime(const MeasureAtoms& atoms, double t);

struct HCancellation {
    IdentityReport norm;        // int |P|^2 = H + 2 Re OD'
    IdentityReport triangle;    // int TRI = H + conj OD'
    IdentityReport difference;  // int |P|^2 - int TRI = OD'
    cplx od_prime;
    double harmonic = 0;
    double p_norm = 0;          // int |P|^2
};
HCancellation check_h_cancellation(double t, const MeasureAtoms& atoms);

/// Per t: M, H_{M-1}, quotient int|P|^2 / H_{M-1}, 2 Re OD', lower-bound flag.
/// meta holds the slope of 2 Re OD' against log t and its standard error.
GridScan restriction_scan(std::span<const double> t_grid, const MeasureAtoms& atoms);
std::vector<double> default_restriction_grid();

/// sum_{m=k+2}^{M-1} [m^{-s} - (m+1)^{-s}][(m-k)^{s-1} - (m-1-k)^{s-1}]
/// against [J_k - 2J_{k+1} + J_{k+2}] on [2, M-2-k] plus four boundary terms.
IdentityReport check_swap(int k, double t, int M);
cplx swap_boundary(int k, cplx s, int M);

/// B(K) = sum_{k>K} nu_hat(k) = int e^{i(K+1)theta}/(1-e^{i theta}) in the Abel sense,
/// B2(K) = int e^{i(K+1)theta}/(1-e^{i theta})^2.
struct TailKernels {
    explicit TailKernels(const MeasureAtoms& atoms);
    cplx B(long K) const;
    cplx B2(long K) const;
    cplx nu(long k) const;
    cplx a_infinity() const { return B(0); }
    /// A(inf) - int e^{i theta}/(1-e^{i theta})^2
    cplx beta() const;

private:
    std::vector<double> theta_;
    std::vector<double> weight_;
    std::vector<cplx> k1_, k2_;
};

struct AbelPieces {
    cplx piece_I;
    cplx piece_II;
    cplx piece_III;
    cplx a_infinity;
    cplx beta;
    cplx od_prime;   // direct J-sum value
    double residual = 0;  // |(I)+(II)+(III) - OD'|
};
AbelPieces abel_decomposition(double t, const MeasureAtoms& atoms);

/// Delta^2 [B - B2](K) = bridge_sign * nu_hat(K+2).
inline constexpr int bridge_sign = -1;

/// The three difference identities at K, and the running sum
/// sum_{k=1}^{K} B(k) = B(K) - B2(K) - beta.
std::vector<IdentityReport> check_bridge(long K, const MeasureAtoms& atoms);

/// dOD2 = sum_{h=3}^{M-2} nu_hat(h) [J_h^{[1,M-1-h]} - J_{h-2}^{[1,M+1-h]}], M = floor(sqrt t).
struct Dod2 {
    cplx value;
    double abs_sum = 0;  // sum |nu_hat(h)| |J_h - J_{h-2}|
};
Dod2 dod2(double t, const MeasureAtoms& atoms);
/// columns t, M, |dOD2|, abs_sum / |dOD2|
GridScan dod2_scan(std::span<const double> t_grid, const MeasureAtoms& atoms);

}  // namespace cantorlab
