#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <ostream>
#include <vector>

#include "cantorlab/core.hpp"
#include "cantorlab/measure.hpp"

namespace cantorlab {

struct MultisetCollision {
    std::int64_t S = 0;
    std::int64_t P = 0;
    std::vector<std::vector<int>> multisets;  // each nondecreasing
};

/// All k-element multisets from {1..max_element} grouped by (sum, product);
/// only groups with two or more members, sorted by S then P.
std::vector<MultisetCollision> multiset_collisions(int k, int max_element);

/// k! / prod m_v! for a nondecreasing multiset
std::int64_t permutation_count(const std::vector<int>& multiset);

struct D2kResult {
    int k = 0;
    int N = 0;
    double box = 0;          // sum over product-matched ordered k-tuples with entries <= N
    double wick_box = 0;     // Wick pairing from C_nu, C4, C6 truncated at N
    double wick_limit = 0;   // the same at N = 10^6
    double off_diagonal = 0; // box - wick_box
    double estimate = 0;     // wick_limit + off_diagonal
};
/// D_{2k} for k in {1, 2, 3}.  The box sum converges slowly in N through its
/// Wick part; `estimate` replaces that part by its N = 10^6 value.
D2kResult d2k(const CantorSpec& spec, int k, int N);

/// W_delta for 0 <= delta <= delta_max (k = 2): product-matched pairs grouped by sum defect.
std::map<int, double> trig_decomposition(const CantorSpec& spec, int k, int N, int delta_max);
/// W_0 + 2 sum_{delta > 0} W_delta cos(delta phi)
double trig_reconstruct(const std::map<int, double>& W, double phi);

/// (2/P) sum over unordered pairs of distinct multisets in a collision group of
/// mult(M) mult(M') Re R(M) conj R(M'), where R is the product of the scale factors.
double vo_group(const CantorSpec& spec, const MultisetCollision& group);
double vo_2k(const CantorSpec& spec, int k, int N);

struct CollisionRecord {
    std::array<int, 4> tuple{};  // (m1, m2) and (m3, m4), each pair nondecreasing
    std::int64_t h = 0;          // (m3 + m4) - (m1 + m2)
    std::int64_t p = 0;          // m1 m2 - m3 m4
    std::int64_t alpha_num = 0;  // alpha* = p / h in lowest terms, den > 0
    std::int64_t alpha_den = 1;
};
/// Builds the record and re-verifies (m1+a)(m2+a) = (m3+a)(m4+a) at a = p/h in integers.
CollisionRecord make_collision(int m1, int m2, int m3, int m4);

struct CollisionAtlas {
    int M = 0;
    int record_h_max = 0;
    std::vector<CollisionRecord> records;                           // 0 < |h| <= record_h_max
    std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> multiplicity;  // (h, p), 0 < |h| <= record_h_max
    std::vector<std::int64_t> max_multiplicity;                     // index h = 1..2M-4: max over p of mu(h, p)
    double fitted_C = 0;                                            // max mu / (M tau(2h) log M)
    std::int64_t pair_count = 0;                                    // tuples with h != 0, h > 0 orientation
};
/// Pairs m1 <= m2 and m3 <= m4 with entries in [1, M-1] and nonzero sum defect.
CollisionAtlas collision_atlas(int M, int record_h_max = 0);
void write_atlas_csv(std::ostream& os, const CollisionAtlas& atlas);

struct VoidCheck {
    int M = 0;
    int h_max = 0;
    std::int64_t singularities = 0;  // alpha* examined
    std::int64_t in_support = 0;     // frac(alpha*) in [1/(4pi), 1/pi]
    std::vector<CollisionRecord> witnesses;
};
/// Exhaustive over 1 <= |h| <= h_max; every comparison with pi is exact.
VoidCheck small_h_void(int M, int h_max);
/// Whether num/den lies in [1/(4pi), 1/pi], decided with rational brackets of pi.
bool in_support_window(std::int64_t num, std::int64_t den);

std::int64_t tau(std::int64_t n);
struct DivisorLogSum {
    double value = 0;
    double ratio = 0;  // value / (X log^2 X)
};
DivisorLogSum divisor_log_sum(std::int64_t X);

}  // namespace cantorlab
