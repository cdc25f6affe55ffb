#include "cantorlab/identities.hpp"

#include <cmath>
#include <cstdio>

#include "cantorlab/special_functions.hpp"

namespace cantorlab {

namespace {

int restriction_M(double t) { return PartialSumSpec::restriction(t).M; }

double atom_angle(const MeasureAtoms& atoms, std::size_t k)
{
    return atoms.target == Target::native ? atoms.points[k] : two_pi * atoms.points[k];
}

// n^{s-1} and n^{-s} for n = 0..M-1 (index 0 unused)
struct Powers {
    std::vector<cplx> up, down;
    Powers(cplx s, int M) : up(std::max(M, 1)), down(std::max(M, 1))
    {
        for (int n = 1; n < M; ++n) {
            up[n] = real_power(n, s - 1.0);
            down[n] = real_power(n, -s);
        }
    }
};

std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

}  // namespace

IdentityReport make_report(std::string name, cplx lhs, cplx rhs, double tolerance,
                           std::map<std::string, double> params)
{
    IdentityReport r{std::move(name), lhs, rhs, std::abs(lhs - rhs), tolerance, false, std::move(params)};
    r.pass = r.residual <= r.tolerance;
    return r;
}

std::vector<cplx> twisted_polynomial(const MeasureAtoms& atoms, cplx s, int M)
{
    Powers pw(s, M);
    std::vector<cplx> out(atoms.size());
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        const double th = atom_angle(atoms, k);
        Kahan<cplx> acc;
        for (int n = 1; n < M; ++n) acc.add(pw.up[n] * std::polar(1.0, -std::fmod(n * th, two_pi)));
        out[k] = acc.value();
    }
    return out;
}

IdentityReport check_conjugacy(double theta, double t)
{
    const cplx s = critical_point(t);
    const auto range = PartialSumSpec::restriction(t);
    const cplx p = partial_sum(theta, s, range, SumKind::P);
    const cplx q = partial_sum(theta, s, range, SumKind::Q);
    return make_report("conjugacy", q, std::conj(p), 1e-15 * std::max(1.0, std::abs(p)),
                       {{"theta", theta}, {"t", t}, {"M", range.M}});
}

IdentityReport check_tri(double theta, double t)
{
    const cplx s = critical_point(t);
    const int M = restriction_M(t);
    Powers pw(s, M);
    Kahan<cplx> lhs;
    for (int n = 1; n < M; ++n)
        for (int m = 1; m <= n; ++m) lhs.add(pw.up[n] * pw.down[m] * std::polar(1.0, std::fmod((m - n) * theta, two_pi)));
    Kahan<cplx> rhs;
    rhs.add(M >= 2 ? harmonic(M) : 0.0);
    for (int l = 1; l <= M - 2; ++l)
        rhs.add(std::conj(j_sum(l, s, 1, M - 1 - l)) * std::polar(1.0, -std::fmod(l * theta, two_pi)));
    return make_report("tri", lhs.value(), rhs.value(), 1e-12, {{"theta", theta}, {"t", t}, {"M", M}});
}

cplx od_prime(const MeasureAtoms& atoms, double t)
{
    const cplx s = critical_point(t);
    const int M = restriction_M(t);
    Kahan<cplx> acc;
    for (int h = 1; h <= M - 2; ++h) acc.add(nu_hat_empirical(atoms, h) * j_sum(h, s, 1, M - 1 - h));
    return acc.value();
}

HCancellation check_h_cancellation(double t, const MeasureAtoms& atoms)
{
    const cplx s = critical_point(t);
    const int M = restriction_M(t);
    if (M < 2) throw std::domain_error("check_h_cancellation: needs t >= 4");
    Powers pw(s, M);
    std::vector<double> norm(atoms.size());
    std::vector<cplx> tri(atoms.size());
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        const double th = atom_angle(atoms, k);
        Kahan<cplx> p, prefix, triangle;
        for (int n = 1; n < M; ++n) {
            const cplx e = std::polar(1.0, std::fmod(n * th, two_pi));
            prefix.add(pw.down[n] * e);
            const cplx pn = pw.up[n] * std::conj(e);
            p.add(pn);
            triangle.add(pn * prefix.value());
        }
        norm[k] = std::norm(p.value());
        tri[k] = triangle.value();
    }
    Kahan<double> pn;
    Kahan<cplx> tn;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        pn.add(atoms.weights[k] * norm[k]);
        tn.add(atoms.weights[k] * tri[k]);
    }
    HCancellation out;
    out.harmonic = harmonic(M);
    out.od_prime = od_prime(atoms, t);
    out.p_norm = pn.value();
    const std::map<std::string, double> params{{"t", t}, {"M", M}};
    out.norm = make_report("h_cancellation_norm", out.p_norm, out.harmonic + 2 * out.od_prime.real(), 1e-8, params);
    out.triangle = make_report("h_cancellation_tri", tn.value(), out.harmonic + std::conj(out.od_prime), 1e-8, params);
    out.difference = make_report("h_cancellation_difference", out.p_norm - tn.value(), out.od_prime, 1e-8, params);
    return out;
}

std::vector<double> default_restriction_grid() { return geometric_grid(200, 2e5, 24); }

GridScan restriction_scan(std::span<const double> t_grid, const MeasureAtoms& atoms)
{
    for (double t : t_grid)
        if (t < 1e2 || t > 1e6) throw std::domain_error("restriction_scan: t outside [1e2, 1e6]");
    GridScan scan;
    scan.name = "restriction";
    scan.columns = {"t", "M", "harmonic", "quotient", "two_re_od", "od_re", "od_im", "lower_ok"};
    std::vector<std::vector<double>> rows(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        const int M = restriction_M(t);
        const double H = harmonic(M);
        auto p = twisted_polynomial(atoms, critical_point(t), M);
        Kahan<double> norm;
        for (std::size_t k = 0; k < atoms.size(); ++k) norm.add(atoms.weights[k] * std::norm(p[k]));
        const cplx od = od_prime(atoms, t);
        rows[i] = {t, double(M), H, norm.value() / H, 2 * od.real(), od.real(), od.imag(),
                   od.real() >= -0.5 * H ? 1.0 : 0.0};
    }
    scan.rows = std::move(rows);
    std::vector<double> x, y;
    for (const auto& r : scan.rows) {
        x.push_back(std::log(r[0]));
        y.push_back(r[4]);
    }
    if (x.size() >= 3) {
        auto fit = least_squares(x, y);
        scan.meta["slope"] = format_double(fit.slope);
        scan.meta["slope_stderr"] = format_double(fit.slope_stderr);
    }
    return scan;
}

cplx swap_boundary(int k, cplx s, int M)
{
    const double a = M - 1 - k;
    const cplx head = real_power(a, s - 1.0);
    return head * real_power(M - 1.0, -s) - head * real_power(M, -s) - real_power(k + 2.0, -s) +
           real_power(k + 3.0, -s);
}

IdentityReport check_swap(int k, double t, int M)
{
    if (k < 1 || k > M - 4) throw std::domain_error("check_swap: need 1 <= k <= M-4");
    const cplx s = critical_point(t);
    auto pw = [](double x, cplx e) { return real_power(x, e); };
    Kahan<cplx> lhs;
    for (int m = k + 2; m <= M - 1; ++m)
        lhs.add((pw(m, -s) - pw(m + 1, -s)) * (pw(m - k, s - 1.0) - pw(m - 1 - k, s - 1.0)));
    const int hi = M - 2 - k;
    Kahan<cplx> rhs;
    rhs.add(j_sum(k, s, 2, hi));
    rhs.add(-2.0 * j_sum(k + 1, s, 2, hi));
    rhs.add(j_sum(k + 2, s, 2, hi));
    rhs.add(swap_boundary(k, s, M));
    return make_report("swap", lhs.value(), rhs.value(), 1e-12, {{"k", k}, {"t", t}, {"M", M}});
}

TailKernels::TailKernels(const MeasureAtoms& atoms)
{
    theta_.resize(atoms.size());
    weight_ = atoms.weights;
    k1_.resize(atoms.size());
    k2_.resize(atoms.size());
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        theta_[k] = atom_angle(atoms, k);
        const cplx q = 1.0 - std::polar(1.0, theta_[k]);
        if (std::abs(q) < 1e-12) throw pole_error("TailKernels: atom at theta = 0 mod 2pi");
        k1_[k] = 1.0 / q;
        k2_[k] = k1_[k] * k1_[k];
    }
}

cplx TailKernels::B(long K) const
{
    Kahan<cplx> acc;
    for (std::size_t k = 0; k < theta_.size(); ++k)
        acc.add(weight_[k] * std::polar(1.0, std::fmod((K + 1) * theta_[k], two_pi)) * k1_[k]);
    return acc.value();
}

cplx TailKernels::B2(long K) const
{
    Kahan<cplx> acc;
    for (std::size_t k = 0; k < theta_.size(); ++k)
        acc.add(weight_[k] * std::polar(1.0, std::fmod((K + 1) * theta_[k], two_pi)) * k2_[k]);
    return acc.value();
}

cplx TailKernels::nu(long n) const
{
    Kahan<cplx> acc;
    for (std::size_t k = 0; k < theta_.size(); ++k)
        acc.add(weight_[k] * std::polar(1.0, std::fmod(n * theta_[k], two_pi)));
    return acc.value();
}

cplx TailKernels::beta() const { return a_infinity() - B2(0); }

AbelPieces abel_decomposition(double t, const MeasureAtoms& atoms)
{
    if (t < 100) throw std::domain_error("abel_decomposition: needs t >= 100");
    const cplx s = critical_point(t);
    const int M = restriction_M(t);
    TailKernels tk(atoms);
    std::vector<cplx> B(M);
    for (int h = 0; h < M; ++h) B[h] = tk.B(h);
    AbelPieces out;
    out.a_infinity = B[0];
    out.beta = tk.beta();
    out.piece_I = out.a_infinity * j_sum(1, s, 1, M - 2);

    std::vector<cplx> down(M + 1);
    for (int n = 1; n <= M; ++n) down[n] = real_power(n, -s);
    Kahan<cplx> two, three;
    for (int n = 1; n <= M - 2; ++n) {
        const cplx up = real_power(n, s - 1.0);
        two.add(-down[M - 1] * up * B[M - 1 - n]);
        Kahan<cplx> inner;
        for (int h = 1; h <= M - 2 - n; ++h) inner.add(B[h] * (down[n + h + 1] - down[n + h]));
        three.add(up * inner.value());
    }
    out.piece_II = two.value();
    out.piece_III = three.value();
    out.od_prime = od_prime(atoms, t);
    out.residual = std::abs(out.piece_I + out.piece_II + out.piece_III - out.od_prime);
    return out;
}

std::vector<IdentityReport> check_bridge(long K, const MeasureAtoms& atoms)
{
    if (K < 0) throw std::domain_error("check_bridge: K >= 0");
    TailKernels tk(atoms);
    const std::map<std::string, double> params{{"K", double(K)}};
    std::vector<IdentityReport> out;
    out.push_back(make_report("delta_B", tk.B(K + 1) - tk.B(K), -tk.nu(K + 1), 1e-12, params));
    out.push_back(make_report("delta_B2", tk.B2(K + 1) - tk.B2(K), -tk.B(K), 1e-10, params));
    auto D = [&](long k) { return tk.B(k) - tk.B2(k); };
    out.push_back(make_report("bridge", D(K + 2) - 2.0 * D(K + 1) + D(K), double(bridge_sign) * tk.nu(K + 2), 1e-10, params));
    Kahan<cplx> sb;
    for (long k = 1; k <= K; ++k) sb.add(tk.B(k));
    out.push_back(make_report("beta_peel", sb.value(), tk.B(K) - tk.B2(K) - tk.beta(), 1e-10, params));
    return out;
}

Dod2 dod2(double t, const MeasureAtoms& atoms)
{
    const cplx s = critical_point(t);
    const int M = restriction_M(t);
    Kahan<cplx> acc;
    Kahan<double> abs_acc;
    for (int h = 3; h <= M - 2; ++h) {
        const cplx nu = nu_hat_empirical(atoms, h);
        const cplx d = j_sum(h, s, 1, M - 1 - h) - j_sum(h - 2, s, 1, M + 1 - h);
        acc.add(nu * d);
        abs_acc.add(std::abs(nu) * std::abs(d));
    }
    return {acc.value(), abs_acc.value()};
}

GridScan dod2_scan(std::span<const double> t_grid, const MeasureAtoms& atoms)
{
    GridScan scan;
    scan.name = "dod2";
    scan.columns = {"t", "M", "abs_dod2", "cancellation"};
    for (double t : t_grid) {
        if (t < 300 || t > 1e5) throw std::domain_error("dod2_scan: t outside [300, 1e5]");
        auto d = dod2(t, atoms);
        scan.add_row({t, double(restriction_M(t)), std::abs(d.value), d.abs_sum / std::abs(d.value)});
    }
    return scan;
}

}  // namespace cantorlab
