#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "cantorlab/measure.hpp"

using namespace cantorlab;

namespace {

// r_n for the 2-of-3 construction, accumulated directly to j = 60.
double product_oracle(double w, double n, int levels = 60)
{
    double r = 1;
    for (int j = 1; j <= levels; ++j) r *= std::cos(w * n / std::pow(3.0, j));
    return r;
}

}  // namespace

TEST_CASE("atoms: level 1 and level 12")
{
    CantorSpec spec;
    spec.level = 1;
    auto a = build_atoms(spec);
    REQUIRE(a.size() == 2);
    CHECK(a.points[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(a.points[1] == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(a.weights[0] == 0.5);

    spec.level = 12;
    auto b = build_atoms(spec);
    CHECK(b.size() == 4096);
    CHECK(std::abs(std::accumulate(b.weights.begin(), b.weights.end(), 0.0) - 1) < 1e-15);
    CHECK(b.lo() >= spec.theta0);
    CHECK(b.hi() <= spec.theta1);
    CHECK(std::is_sorted(b.points.begin(), b.points.end()));
}

TEST_CASE("atoms: pushforwards stay inside [1/4pi, 1/pi]")
{
    CantorSpec spec;
    auto p = build_atoms(spec, Target::pushforward);
    CHECK(p.lo() >= 1 / (4 * pi));
    CHECK(p.hi() <= 1 / pi);
    auto r = build_atoms(spec, Target::reflected);
    CHECK(r.lo() >= 1 - 1 / pi);
    CHECK(r.hi() <= 1 - 1 / (4 * pi));
    CHECK(std::is_sorted(r.points.begin(), r.points.end()));
}

TEST_CASE("atoms: invalid interval")
{
    CantorSpec spec;
    spec.theta0 = 2.5;
    CHECK_THROWS_AS(build_atoms(spec), std::domain_error);
    spec = {};
    spec.theta1 = 7.0;
    CHECK_THROWS_AS(build_atoms(spec), std::domain_error);
}

TEST_CASE("nu_hat: values and self-similarity")
{
    CantorSpec spec;
    CHECK(std::abs(nu_hat(spec, 0) - cplx(1, 0)) < 1e-15);
    const cplx v = nu_hat(spec, 1);
    CHECK(std::abs(v) == doctest::Approx(std::abs(product_oracle(1.5, 1))).epsilon(1e-14));
    CHECK(std::arg(v) == doctest::Approx(1.25).epsilon(1e-14));
    for (int n = 1; n <= 100; ++n) {
        cplx a = cosine_product(spec, 3 * n, 4096, true);
        cplx b = cosine_product(spec, n, 4096, true);
        CHECK(std::abs(a - std::cos(1.5 * n) * b) < 1e-15);
    }
    CHECK(std::abs(nu_hat(spec, -7) - std::conj(nu_hat(spec, 7))) < 1e-15);
    for (int n : {2, 17, 1000, 123456})
        CHECK(std::abs(nu_hat(spec, n)) == doctest::Approx(std::abs(product_oracle(1.5, n))).epsilon(1e-12));
}

TEST_CASE("nu_hat_empirical: equals the truncated product")
{
    CantorSpec spec;
    auto atoms = build_atoms(spec);
    CHECK(std::abs(nu_hat_empirical(atoms, 0) - 1.0) < 1e-15);
    const cplx oracle = std::polar(product_oracle(1.5, 50, 12), 50 * 1.25);
    CHECK(std::abs(nu_hat_empirical(atoms, 50) - oracle) < 1e-13);
    double worst = 0;
    for (int n = 1; n <= 10000; n += 7)
        worst = std::max(worst, std::abs(nu_hat_empirical(atoms, n) - nu_hat_truncated(spec, n, 12)));
    CHECK(worst < 1e-13);

    CantorSpec fine = spec;
    fine.level = 14;
    auto atoms14 = build_atoms(fine);
    const double diff = std::abs(nu_hat_empirical(atoms, 1000) - nu_hat_empirical(atoms14, 1000));
    CHECK(diff < 1.5 * 1000 * std::pow(3.0, -12));
    CHECK_THROWS_AS(nu_hat_empirical(MeasureAtoms{}, 1), std::domain_error);
}

TEST_CASE("generalised digit sets")
{
    for (auto [keep, base] : {std::pair{3, 4}, std::pair{5, 7}}) {
        CantorSpec spec;
        spec.keep_count = keep;
        spec.base = base;
        spec.level = 5;
        auto atoms = build_atoms(spec);
        CHECK(atoms.size() == static_cast<std::size_t>(std::pow(keep, 5)));
        for (int n : {1, 9, 250})
            CHECK(std::abs(nu_hat_empirical(atoms, n) - nu_hat_truncated(spec, n, 5)) < 1e-13);
        CHECK(spec.dimension() == doctest::Approx(std::log(keep) / std::log(base)));
    }
}

TEST_CASE("strichartz partial sums")
{
    CantorSpec spec;
    CHECK(strichartz_partial(spec, 1) == doctest::Approx(std::norm(nu_hat(spec, 1))).epsilon(1e-15));
    std::vector<std::int64_t> Ns;
    for (int e = 10; e <= 16; ++e) Ns.push_back(std::int64_t{1} << e);
    auto fit = fit_strichartz(spec, Ns);
    const double target = std::pow(2.0, 1 - spec.dimension());
    // Individual doubling ratios oscillate log-periodically between about 1.2 and 1.5;
    // their mean over the dyadic range follows 2^{1-d}.
    double mean = std::accumulate(fit.doubling_ratio.begin(), fit.doubling_ratio.end(), 0.0) /
                  fit.doubling_ratio.size();
    CHECK(std::abs(mean - target) <= 0.1);
    for (double r : fit.doubling_ratio) CHECK(r > 1.0);
    CHECK(fit.c_s > 0);
    for (std::size_t i = 1; i < fit.partial.size(); ++i) CHECK(fit.partial[i] >= fit.partial[i - 1]);
}

TEST_CASE("strichartz tail slope")
{
    CantorSpec spec;
    const std::int64_t top = 10 * 4096;
    auto table = coefficient_table(spec, top);
    std::vector<double> suffix(top + 2, 0.0);
    for (std::int64_t n = top; n >= 1; --n) suffix[n] = suffix[n + 1] + std::norm(table[n]) / n;
    std::vector<double> lx, ly;
    for (std::int64_t N = 64; N <= 4096; N *= 2) {
        lx.push_back(std::log(static_cast<double>(N)));
        ly.push_back(std::log(suffix[N + 1]));
    }
    const double slope = least_squares(lx, ly).slope;
    CHECK(slope >= -spec.dimension() - 0.1);
    CHECK(slope <= -spec.dimension() + 0.1);
}

TEST_CASE("wick constants")
{
    CantorSpec spec;
    auto w = wick_constants(spec, 1000000);
    CHECK(w.c_nu == doctest::Approx(1.156).epsilon(0.01 / 1.156));
    // frozen at N = 10^6
    CHECK(w.c_nu == doctest::Approx(1.15587).epsilon(2e-5));
    CHECK(w.c4 == doctest::Approx(0.57979).epsilon(5e-5));
    CHECK(w.c6 == doctest::Approx(0.41813).epsilon(5e-5));
    CHECK(w.c4 > 0);
    CHECK(w.c4 < w.c_nu);
    CHECK(w.c6 < w.c4);
    CHECK(w.d4_prediction() == doctest::Approx(2.115).epsilon(0.02));
    CHECK(w.d6_prediction() == doctest::Approx(5.01).epsilon(0.02));

    auto small = wick_constants(spec, 1000);
    auto mid = wick_constants(spec, 10000);
    CHECK(small.c_nu <= mid.c_nu);
    CHECK(mid.c_nu <= w.c_nu);
}

TEST_CASE("fourier floor does not decay")
{
    CantorSpec spec;
    for (std::int64_t N = 1; N <= 100000; N *= 2) CHECK(fourier_floor(spec, N) >= 0.1);
}

TEST_CASE("ball mass profile")
{
    CantorSpec spec;
    auto atoms = build_atoms(spec, Target::pushforward);
    const double width = atoms.hi() - atoms.lo();
    std::vector<double> deltas{width, width / 6};
    for (double d = width / 12; d > 1e-7; d /= 1.7) deltas.push_back(d);
    auto prof = ball_mass_profile(atoms, deltas);
    CHECK(prof.mass[0] == doctest::Approx(1.0));
    CHECK(prof.mass[1] == doctest::Approx(0.5).epsilon(1e-3));
    CHECK_FALSE(prof.resolved.back());
    CHECK(prof.slope == doctest::Approx(spec.dimension()).epsilon(0.15 / spec.dimension()));
}

TEST_CASE("riesz potential")
{
    CantorSpec spec;
    auto atoms = build_atoms(spec, Target::pushforward);
    CHECK(riesz_potential(atoms, 2.0) <= 1.0);
    CHECK(support_distance(atoms, 1.0 / 3) == doctest::Approx(1.0 / 3 - 1 / pi).epsilon(0.01));
    CHECK(std::isfinite(riesz_potential(atoms, 1.0 / 3)));
    CHECK_THROWS_AS(riesz_potential(atoms, atoms.points[100]), singularity_error);

    // potential(eta) eta^{1-d} stays bounded; off-support points to the right of the hull
    double lo = 1e300, hi = 0;
    for (double eta = 1e-3; eta <= 1e-1; eta *= 1.5) {
        double p = riesz_potential(atoms, atoms.hi() + eta) * std::pow(eta, 1 - spec.dimension());
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    CHECK(hi / lo < 10);
}

TEST_CASE("coefficient cache round trip")
{
    CantorSpec spec;
    auto table = coefficient_table(spec, 200);
    std::stringstream buf;
    write_coefficient_cache(buf, spec, CoefficientModel::exact, table);
    auto cache = read_coefficient_cache(buf);
    REQUIRE(cache.values.size() == table.size());
    for (std::size_t n = 0; n < table.size(); ++n) CHECK(cache.values[n] == table[n]);
    CHECK(cache.checksum == table_checksum(table));
    CHECK(cache.spec.level == spec.level);

    std::stringstream bad("# theta0=0.5\nn,re,im\n0,1,0\n2,0,0\n");
    CHECK_THROWS(read_coefficient_cache(bad));
}
