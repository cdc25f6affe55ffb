#include <doctest.h>

#include <cmath>
#include <random>

#include "cantorlab/identities.hpp"
#include "cantorlab/special_functions.hpp"

using namespace cantorlab;

namespace {

const MeasureAtoms& native_atoms()
{
    static const MeasureAtoms atoms = build_atoms(CantorSpec{});
    return atoms;
}

cplx power(double x, cplx e) { return std::exp(e * std::log(x)); }

}  // namespace

TEST_CASE("conjugacy of P and Q")
{
    for (double t : {10.0, 1e3, 1e5})
        for (double th : {0.5, 1.25, 2.0}) CHECK(check_conjugacy(th, t).pass);
}

TEST_CASE("triangular identity")
{
    auto r = check_tri(1.0, 4.0);
    CHECK(r.lhs == cplx(1, 0));
    CHECK(r.residual == 0.0);
    CHECK(check_tri(1.25, 1e4).pass);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> th(0.5, 2.0);
    for (int i = 0; i < 10; ++i) CHECK(check_tri(th(rng), 1e3).pass);
}

TEST_CASE("H cancellation")
{
    auto h = check_h_cancellation(1e4, native_atoms());
    CHECK(h.norm.pass);
    CHECK(h.triangle.pass);
    CHECK(h.difference.pass);
    // OD' stops at h = M-2: the next J-range [1, 0] is empty
    const int M = 100;
    CHECK(j_sum(M - 1, critical_point(1e4), 1, 0) == cplx(0, 0));
    CHECK(h.harmonic == doctest::Approx(harmonic(M)));
}

TEST_CASE("restriction scan")
{
    auto grid = default_restriction_grid();
    CHECK(grid.size() == 24);
    auto scan = restriction_scan(grid, native_atoms());
    for (const auto& row : scan.rows) {
        CHECK(row[3] >= 0);
        CHECK(row[7] == 1.0);
    }
    CHECK(scan.meta.count("slope") == 1);
    CHECK_THROWS(restriction_scan(std::vector<double>{50.0}, native_atoms()));
}

TEST_CASE("swap identity: brute expansion at M = 6")
{
    // Each factor of the summand expanded into its four products, summed separately.
    const int k = 1, M = 6;
    const cplx s = 0.5;
    cplx expanded = 0;
    for (int m = k + 2; m <= M - 1; ++m) expanded += power(m, -s) * power(m - k, s - 1.0);
    for (int m = k + 2; m <= M - 1; ++m) expanded -= power(m, -s) * power(m - 1 - k, s - 1.0);
    for (int m = k + 2; m <= M - 1; ++m) expanded -= power(m + 1, -s) * power(m - k, s - 1.0);
    for (int m = k + 2; m <= M - 1; ++m) expanded += power(m + 1, -s) * power(m - 1 - k, s - 1.0);
    auto r = check_swap(k, 0.0, M);
    CHECK(std::abs(r.lhs - expanded) < 1e-15);
    CHECK(r.residual <= 1e-15);
    for (int MM = 5; MM <= 8; ++MM)
        for (int kk = 1; kk <= MM - 4; ++kk) CHECK(check_swap(kk, 3.0, MM).residual <= 1e-15);
}

TEST_CASE("swap identity lattice")
{
    for (int k : {1, 3, 7})
        for (int M : {20, 100, 316})
            for (double t : {1e3, 1e4}) CHECK(check_swap(k, t, M).pass);
    const int M = static_cast<int>(std::floor(std::sqrt(1e3)));
    CHECK(check_swap(3, 1e3, M).pass);
    CHECK(check_swap(M - 4, 1e3, M).pass);
    CHECK_THROWS_AS(check_swap(M - 3, 1e3, M), std::domain_error);
    CHECK_THROWS_AS(check_swap(0, 1e3, M), std::domain_error);
}

TEST_CASE("abel decomposition")
{
    auto a = abel_decomposition(1e3, native_atoms());
    CHECK(std::abs(a.a_infinity.real() + 0.5) < 1e-10);
    CHECK(a.residual <= 1e-8);
    for (double t : geometric_grid(300, 1e5, 10)) {
        auto p = abel_decomposition(t, native_atoms());
        CHECK(std::abs(p.piece_I) <= 10);
        CHECK(std::abs(p.piece_II) <= 10);
        CHECK(p.residual <= 1e-8);
    }
    // any probability measure avoiding 0 has Re A(inf) = -1/2
    MeasureAtoms two{{0.3, 2.9}, {0.25, 0.75}, Target::native};
    CHECK(std::abs(TailKernels(two).a_infinity().real() + 0.5) < 1e-14);
}

TEST_CASE("bridge identities")
{
    const auto& atoms = native_atoms();
    for (long K = 0; K <= 50; ++K)
        for (const auto& r : check_bridge(K, atoms)) CHECK_MESSAGE(r.pass, r.name << " K=" << K);

    // B2 by its geometric series, damped and summed directly on a two-atom measure
    MeasureAtoms two{{0.8, 1.9}, {0.5, 0.5}, Target::native};
    TailKernels tk(two);
    for (long K : {0L, 5L}) {
        cplx series = 0;
        const double r = 1 - 1e-5;
        for (std::size_t a = 0; a < 2; ++a) {
            const cplx z = r * std::polar(1.0, two.points[a]);
            cplx term = std::pow(z, K + 1);
            for (long j = 0; j < 6000000; ++j) {
                series += 0.5 * double(j + 1) * term;
                term *= z;
            }
        }
        CHECK(std::abs(series - tk.B2(K)) < 1e-3);
    }
}

TEST_CASE("dOD2")
{
    const auto& atoms = native_atoms();
    auto grid = geometric_grid(300, 1e5, 12);
    auto scan = dod2_scan(grid, atoms);
    for (const auto& row : scan.rows) {
        CHECK(row[2] >= 0.5);
        CHECK(row[2] <= 1.7);
        // Below t ~ 2000 (M <= 40) the ratio sits between 2.7 and 3.1.
        CHECK(row[3] >= 2.5);
        if (row[0] >= 2000) {
            CHECK(row[3] >= 3);
            CHECK(row[3] <= 40);
        }
    }
    CHECK_THROWS(dod2_scan(std::vector<double>{200.0}, atoms));
}
