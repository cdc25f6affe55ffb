#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "cantorlab/combinatorics.hpp"

using namespace cantorlab;

namespace {

// cosine product written out, without the phase
double r_direct(int n)
{
    double r = 1;
    for (int j = 1; j <= 60; ++j) r *= std::cos(1.5 * n / std::pow(3.0, j));
    return r;
}

cplx nu_direct(int n, double phi) { return std::polar(r_direct(n), n * phi); }

CantorSpec shifted(double phi)
{
    CantorSpec spec;
    const double half = 0.5 * spec.width();
    spec.theta0 = phi - half;
    spec.theta1 = phi + half;
    return spec;
}

}  // namespace

TEST_CASE("multiset collisions")
{
    CHECK(multiset_collisions(2, 500).empty());
    auto g = multiset_collisions(3, 9);
    REQUIRE_FALSE(g.empty());
    CHECK(g[0].S == 13);
    CHECK(g[0].P == 36);
    CHECK(g[0].multisets == std::vector<std::vector<int>>{{1, 6, 6}, {2, 2, 9}});

    // exhaustive oracle at max 14
    std::map<std::pair<long, long>, std::vector<std::vector<int>>> brute;
    for (int a = 1; a <= 14; ++a)
        for (int b = a; b <= 14; ++b)
            for (int c = b; c <= 14; ++c) brute[{a + b + c, long(a) * b * c}].push_back({a, b, c});
    std::size_t groups = 0;
    for (const auto& [key, ms] : brute) groups += ms.size() >= 2;
    auto found = multiset_collisions(3, 14);
    CHECK(found.size() == groups);
    for (std::size_t i = 0; i < found.size(); ++i) {
        if (i > 0) CHECK(std::make_pair(found[i - 1].S, found[i - 1].P) < std::make_pair(found[i].S, found[i].P));
        auto ms = found[i].multisets;
        std::sort(ms.begin(), ms.end());
        CHECK(ms == brute[{found[i].S, found[i].P}]);
        for (const auto& m : found[i].multisets) {
            CHECK(m[0] + m[1] + m[2] == found[i].S);
            CHECK(long(m[0]) * m[1] * m[2] == found[i].P);
        }
    }
    CHECK_THROWS_AS(multiset_collisions(3, 2000), budget_error);
    CHECK_THROWS(multiset_collisions(1, 10));
}

TEST_CASE("permutation counts")
{
    CHECK(permutation_count({1, 6, 6}) == 3);
    CHECK(permutation_count({2, 2, 9}) == 3);
    CHECK(permutation_count({1, 2, 3}) == 6);
    CHECK(permutation_count({4, 4, 4}) == 1);
    CHECK(permutation_count({1, 1, 2, 2}) == 6);
}

TEST_CASE("d2k against ordered-tuple brute force")
{
    const CantorSpec spec;
    const double phi = spec.center();
    SUBCASE("k = 1")
    {
        auto r = d2k(spec, 1, 1000);
        CHECK(std::abs(r.box - wick_constants(spec, 1000).c_nu) <= 1e-12);
    }
    SUBCASE("k = 2")
    {
        const int N = 30;
        std::map<long, cplx> by_product;
        for (int a = 1; a <= N; ++a)
            for (int b = 1; b <= N; ++b)
                by_product[long(a) * b] += nu_direct(a, phi) * nu_direct(b, phi) / std::sqrt(double(a) * b);
        double brute = 0;
        for (const auto& [P, v] : by_product) brute += std::norm(v);
        CHECK(d2k(spec, 2, N).box == doctest::Approx(brute).epsilon(1e-12));
    }
    SUBCASE("k = 3")
    {
        const int N = 12;
        std::map<long, cplx> by_product;
        for (int a = 1; a <= N; ++a)
            for (int b = 1; b <= N; ++b)
                for (int c = 1; c <= N; ++c)
                    by_product[long(a) * b * c] +=
                        nu_direct(a, phi) * nu_direct(b, phi) * nu_direct(c, phi) / std::sqrt(double(a) * b * c);
        double brute = 0;
        for (const auto& [P, v] : by_product) brute += std::norm(v);
        CHECK(d2k(spec, 3, N).box == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("D4 and D6 values")
{
    const CantorSpec spec;
    auto d4 = d2k(spec, 2, 3000);
    CHECK(d4.estimate == doctest::Approx(2.115789).epsilon(1e-6));
    CHECK(d4.box == doctest::Approx(2.096737).epsilon(1e-6));
    CHECK(std::abs(d4.wick_box - wick_constants(spec, 3000).d4_prediction()) < 1e-12);
    // the off-diagonal part is stable in N while the box drifts
    auto d4_small = d2k(spec, 2, 200);
    CHECK(std::abs(d4_small.estimate - d4.estimate) < 0.003);
    CHECK(std::abs(d4_small.box - d4.box) > 0.05);
    auto d6 = d2k(spec, 3, 280);
    CHECK(d6.estimate == doctest::Approx(5.014341).epsilon(1e-6));
    CHECK_THROWS_AS(d2k(spec, 2, 4000), budget_error);
    CHECK_THROWS_AS(d2k(spec, 3, 500), budget_error);
    CHECK_THROWS(d2k(spec, 4, 10));
}

TEST_CASE("trigonometric decomposition in the centre")
{
    const CantorSpec spec;
    const int N = 200;
    auto W = trig_decomposition(spec, 2, N, 2 * N);
    CHECK(std::abs(W[0] - wick_constants(spec, N).d4_prediction()) <= 1e-8);
    for (double phi : {0.9, 1.25, 2.0, 2.9, 4.4})
        CHECK(std::abs(trig_reconstruct(W, phi) - d2k(shifted(phi), 2, N).box) <= 1e-8);

    // over 64 equispaced centres only delta = 0 survives when every delta < 64
    auto small = trig_decomposition(spec, 2, 20, 40);
    double mean = 0;
    for (int i = 0; i < 64; ++i) mean += trig_reconstruct(small, two_pi * i / 64) / 64;
    CHECK(mean == doctest::Approx(small[0]).epsilon(1e-12));
}

TEST_CASE("Vieta obstruction")
{
    const CantorSpec spec;
    CHECK(vo_2k(spec, 2, 300) == 0.0);
    const double vo = vo_2k(spec, 3, 300);
    CHECK(vo == doctest::Approx(-0.0019481).epsilon(1e-4));
    CHECK(std::abs(vo / -0.00195 - 1) <= 0.2);

    auto g = multiset_collisions(3, 9).front();
    const double hand = 2.0 / 36 * (3 * r_direct(1) * r_direct(6) * r_direct(6)) * (3 * r_direct(2) * r_direct(2) * r_direct(9));
    CHECK(vo_group(spec, g) == doctest::Approx(hand).epsilon(1e-12));
}

TEST_CASE("collision records")
{
    auto r = make_collision(1, 6, 2, 3);
    CHECK(r.h == -2);
    CHECK(r.p == 0);
    CHECK(r.alpha_num == 0);
    CHECK(r.alpha_den == 1);
    auto q = make_collision(2, 5, 1, 4);
    CHECK(q.h == -2);
    CHECK(q.p == 6);
    CHECK(q.alpha_num == -3);
    CHECK(q.alpha_den == 1);
    CHECK_THROWS(make_collision(1, 4, 2, 3));
    CHECK_THROWS(make_collision(0, 4, 2, 3));
}

TEST_CASE("collision atlas against brute force")
{
    const int M = 25;
    std::map<std::pair<long, long>, long> brute;
    for (int a = 1; a < M; ++a)
        for (int b = a; b < M; ++b)
            for (int c = 1; c < M; ++c)
                for (int d = c; d < M; ++d) {
                    const long h = c + d - a - b;
                    if (h != 0) ++brute[{h, long(a) * b - long(c) * d}];
                }
    auto atlas = collision_atlas(M, 2 * M);
    CHECK(atlas.multiplicity == brute);
    CHECK(atlas.records.size() == 2 * static_cast<std::size_t>(atlas.pair_count));
    for (int h = 1; h <= 2 * M - 4; ++h) {
        long best = 0;
        for (const auto& [key, mu] : brute)
            if (key.first == h) best = std::max(best, mu);
        CHECK(atlas.max_multiplicity[h] == best);
    }

    std::ostringstream csv;
    write_atlas_csv(csv, collision_atlas(6, 1));
    CHECK(csv.str().rfind("m1,m2,m3,m4,h,p,alpha_star_num,alpha_star_den\n", 0) == 0);

    auto big = collision_atlas(200);
    CHECK(big.fitted_C <= 5);
    CHECK(double(big.max_multiplicity[4]) / (200 * tau(8) * std::log(200.0)) <= big.fitted_C);
    CHECK_THROWS_AS(collision_atlas(600), budget_error);
}

TEST_CASE("small-h void")
{
    CHECK(in_support_window(1, 4));
    CHECK(in_support_window(1, 12));
    CHECK_FALSE(in_support_window(1, 13));
    CHECK_FALSE(in_support_window(1, 3));
    CHECK(in_support_window(7, 22));
    CHECK(in_support_window(113, 355));
    CHECK(in_support_window(-3, 4));  // frac(-3/4) = 1/4
    CHECK_FALSE(in_support_window(5, 1));

    auto v = small_h_void(200, 3);
    CHECK(v.singularities > 0);
    CHECK(v.in_support == 0);
    // h = 4 already reaches the support window: 1/4
    auto w = small_h_void(40, 4);
    CHECK(w.in_support > 0);
    for (const auto& rec : w.witnesses) CHECK(in_support_window(rec.alpha_num, rec.alpha_den));
}

TEST_CASE("divisor counts")
{
    CHECK(tau(1) == 1);
    CHECK(tau(12) == 6);
    CHECK(tau(8) == 4);
    CHECK(tau(2 * 4) == 4);
    CHECK(tau(997) == 2);
    CHECK(tau(720720) == 240);
    Kahan<double> acc;
    for (int h = 2; h <= 1000; ++h) acc.add(tau(h) * std::log(double(h)));
    CHECK(divisor_log_sum(1000).value == doctest::Approx(acc.value()).epsilon(1e-12));
    auto big = divisor_log_sum(1000000);
    CHECK(big.ratio > 0);
    CHECK(big.ratio <= 1);
}
