#include "cantorlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace cantorlab {

namespace {

constexpr double factor_threshold = 1e-18;

std::string format_line(std::int64_t n, cplx v)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g", static_cast<long long>(n), v.real(), v.imag());
    return buf;
}

// One factor of the product at scale base^-j for frequency x = n*w.
cplx level_factor(const std::vector<double>& digits, double x_scaled)
{
    if (digits.size() == 2 && digits[0] == -digits[1])
        return std::cos(x_scaled * digits[1]);
    cplx acc = 0;
    for (double c : digits) acc += std::polar(1.0, x_scaled * c);
    return acc / static_cast<double>(digits.size());
}

}  // namespace

void CantorSpec::validate() const
{
    if (!(theta0 > 0 && theta0 < theta1 && theta1 < two_pi))
        throw std::domain_error("CantorSpec: need 0 < theta0 < theta1 < 2pi");
    if (level < 1) throw std::domain_error("CantorSpec: level must be >= 1");
    if (keep_count < 2 || base < 2 || keep_count >= base)
        throw std::domain_error("CantorSpec: need 2 <= keep_count < base");
    if (std::pow(static_cast<double>(keep_count), level) > 1e8)
        throw budget_error("CantorSpec: atom count above 1e8");
}

double CantorSpec::dimension() const
{
    return std::log(static_cast<double>(keep_count)) / std::log(static_cast<double>(base));
}

std::size_t CantorSpec::atom_count() const
{
    std::size_t n = 1;
    for (int i = 0; i < level; ++i) n *= static_cast<std::size_t>(keep_count);
    return n;
}

std::vector<double> CantorSpec::centred_digits() const
{
    std::vector<double> d(keep_count);
    for (int i = 0; i < keep_count; ++i) {
        int digit = static_cast<int>(std::floor(i * (base - 1.0) / (keep_count - 1) + 0.5));
        d[i] = digit - 0.5 * (base - 1);
    }
    return d;
}

bool CantorSpec::symmetric_digits() const
{
    auto d = centred_digits();
    for (std::size_t i = 0; i < d.size(); ++i)
        if (std::abs(d[i] + d[d.size() - 1 - i]) > 1e-12) return false;
    return true;
}

MeasureAtoms build_atoms(const CantorSpec& spec, Target target)
{
    spec.validate();
    const auto digits = spec.centred_digits();
    // Offsets accumulate in long double so every atom is the correctly rounded point.
    std::vector<long double> offsets{0.0L};
    long double scale = spec.width();
    for (int j = 1; j <= spec.level; ++j) {
        scale /= spec.base;
        std::vector<long double> next;
        next.reserve(offsets.size() * digits.size());
        for (long double p : offsets)
            for (double c : digits) next.push_back(p + scale * c);
        offsets = std::move(next);
    }
    std::vector<double> pts;
    pts.reserve(offsets.size());
    for (long double p : offsets) pts.push_back(static_cast<double>(spec.center() + p));
    MeasureAtoms atoms;
    atoms.level = spec.level;
    atoms.keep_count = spec.keep_count;
    atoms.base = spec.base;
    atoms.target = target;
    atoms.weights.assign(pts.size(), 1.0 / static_cast<double>(pts.size()));
    switch (target) {
    case Target::native:
        atoms.points = std::move(pts);
        break;
    case Target::pushforward:
        atoms.points.reserve(pts.size());
        for (double p : pts) atoms.points.push_back(p / two_pi);
        break;
    case Target::reflected:
        atoms.points.reserve(pts.size());
        for (auto it = pts.rbegin(); it != pts.rend(); ++it) atoms.points.push_back(1.0 - *it / two_pi);
        break;
    }
    return atoms;
}

MeasureAtoms coarsen(const MeasureAtoms& atoms, int new_level)
{
    if (new_level >= atoms.level) return atoms;
    if (new_level < 0) throw std::domain_error("coarsen: negative level");
    std::size_t block = 1;
    for (int i = new_level; i < atoms.level; ++i) block *= static_cast<std::size_t>(atoms.keep_count);
    MeasureAtoms out;
    out.target = atoms.target;
    out.level = new_level;
    out.keep_count = atoms.keep_count;
    out.base = atoms.base;
    for (std::size_t i = 0; i < atoms.size(); i += block) {
        Kahan<double> w, m;
        for (std::size_t k = i; k < i + block; ++k) {
            w.add(atoms.weights[k]);
            m.add(atoms.weights[k] * atoms.points[k]);
        }
        out.weights.push_back(w.value());
        out.points.push_back(m.value() / w.value());
    }
    return out;
}

cplx cosine_product(const CantorSpec& spec, std::int64_t n, int max_levels, bool stop_at_threshold)
{
    const auto digits = spec.centred_digits();
    const double x = static_cast<double>(n) * spec.width();
    double cmax = 0;
    for (double c : digits) cmax = std::max(cmax, std::abs(c));
    cplx r = 1.0;
    double scale = 1.0;
    for (int j = 1; j <= max_levels; ++j) {
        scale /= spec.base;
        const double xs = x * scale;
        if (stop_at_threshold && 0.5 * xs * xs * cmax * cmax < factor_threshold) break;
        r *= level_factor(digits, xs);
    }
    return r;
}

cplx nu_hat_truncated(const CantorSpec& spec, std::int64_t n, int levels)
{
    if (n < 0) return std::conj(nu_hat_truncated(spec, -n, levels));
    if (n == 0) return 1.0;
    return std::polar(1.0, static_cast<double>(n) * spec.center()) * cosine_product(spec, n, levels, false);
}

cplx nu_hat(const CantorSpec& spec, std::int64_t n)
{
    if (n < 0) return std::conj(nu_hat(spec, -n));
    if (n == 0) return 1.0;
    return std::polar(1.0, static_cast<double>(n) * spec.center()) * cosine_product(spec, n, 4096, true);
}

cplx nu_hat_model(const CantorSpec& spec, std::int64_t n, CoefficientModel model)
{
    return model == CoefficientModel::exact ? nu_hat(spec, n) : nu_hat_truncated(spec, n, spec.level);
}

cplx nu_hat_empirical(const MeasureAtoms& atoms, std::int64_t n)
{
    if (atoms.size() == 0) throw std::domain_error("nu_hat_empirical: no atoms");
    const double scale = atoms.target == Target::native ? 1.0 : two_pi;
    const auto nn = static_cast<double>(n);
    Kahan<cplx> acc;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        // n x split into its rounded product and the exact rounding error
        const double x = scale * atoms.points[k];
        const double p = nn * x;
        const double e = std::fma(nn, x, -p);
        acc.add(atoms.weights[k] * std::polar(1.0, p) * cplx(1.0, e));
    }
    return acc.value();
}

std::vector<cplx> coefficient_table(const CantorSpec& spec, std::int64_t N, CoefficientModel model)
{
    spec.validate();
    if (N < 0) throw std::domain_error("coefficient_table: N < 0");
    std::vector<cplx> t(static_cast<std::size_t>(N) + 1);
#pragma omp parallel for schedule(static)
    for (std::int64_t n = 0; n <= N; ++n) t[n] = nu_hat_model(spec, n, model);
    return t;
}

double strichartz_partial(const CantorSpec& spec, std::int64_t N)
{
    if (N < 1) throw std::domain_error("strichartz_partial: N >= 1");
    Kahan<double> acc;
    for (std::int64_t n = 1; n <= N; ++n) acc.add(std::norm(nu_hat(spec, n)));
    return acc.value();
}

StrichartzFit fit_strichartz(const CantorSpec& spec, std::span<const std::int64_t> Ns)
{
    if (Ns.empty()) throw std::invalid_argument("fit_strichartz: empty grid");
    std::int64_t top = *std::max_element(Ns.begin(), Ns.end());
    std::vector<double> cum(static_cast<std::size_t>(2 * top) + 1, 0.0);
    Kahan<double> acc;
    for (std::int64_t n = 1; n <= 2 * top; ++n) {
        acc.add(std::norm(nu_hat(spec, n)));
        cum[n] = acc.value();
    }
    StrichartzFit fit;
    const double e = 1 - spec.dimension();
    double sxy = 0, sxx = 0;
    for (auto N : Ns) {
        fit.N.push_back(N);
        fit.partial.push_back(cum[N]);
        fit.doubling_ratio.push_back(cum[2 * N] / cum[N]);
        double x = std::pow(static_cast<double>(N), e);
        sxy += x * cum[N];
        sxx += x * x;
    }
    fit.c_s = sxy / sxx;
    double ss = 0;
    for (std::size_t i = 0; i < fit.N.size(); ++i) {
        double model = fit.c_s * std::pow(static_cast<double>(fit.N[i]), e);
        ss += std::pow(fit.partial[i] / model - 1, 2);
    }
    fit.rel_rms = std::sqrt(ss / fit.N.size());
    return fit;
}

double fourier_floor(const CantorSpec& spec, std::int64_t N)
{
    double best = 0;
    for (std::int64_t n = N + 1; n <= 3 * N; ++n) best = std::max(best, std::abs(nu_hat(spec, n)));
    return best;
}

WickConstants wick_constants(std::span<const cplx> table)
{
    if (table.size() < 2) throw std::domain_error("wick_constants: empty table");
    Kahan<double> c2, c4, c6;
    for (std::size_t n = 1; n < table.size(); ++n) {
        double a = std::norm(table[n]) / static_cast<double>(n);
        c2.add(a);
        c4.add(a * a);
        c6.add(a * a * a);
    }
    return {c2.value(), c4.value(), c6.value(), static_cast<std::int64_t>(table.size()) - 1};
}

WickConstants wick_constants(const CantorSpec& spec, std::int64_t N)
{
    if (N < 1) throw std::domain_error("wick_constants: N >= 1");
    return wick_constants(coefficient_table(spec, N));
}

double atom_resolution(const MeasureAtoms& atoms)
{
    if (atoms.size() < 2) return 0;
    return (atoms.hi() - atoms.lo()) * std::pow(static_cast<double>(atoms.base), -atoms.level);
}

double support_distance(const MeasureAtoms& atoms, double x)
{
    auto it = std::lower_bound(atoms.points.begin(), atoms.points.end(), x);
    double d = std::numeric_limits<double>::infinity();
    if (it != atoms.points.end()) d = std::min(d, *it - x);
    if (it != atoms.points.begin()) d = std::min(d, x - *std::prev(it));
    return d;
}

BallMassProfile ball_mass_profile(const MeasureAtoms& atoms, std::span<const double> deltas)
{
    if (atoms.size() == 0) throw std::domain_error("ball_mass_profile: no atoms");
    BallMassProfile prof;
    const double width = atoms.hi() - atoms.lo();
    const double floor = 3 * atom_resolution(atoms);
    std::vector<double> cum(atoms.size() + 1, 0.0);
    for (std::size_t i = 0; i < atoms.size(); ++i) cum[i + 1] = cum[i] + atoms.weights[i];
    std::vector<double> lx, ly;
    double prev = std::numeric_limits<double>::infinity();
    for (double delta : deltas) {
        if (!(delta > 0) || delta >= prev)
            throw std::invalid_argument("ball_mass_profile: deltas must be positive and decreasing");
        prev = delta;
        // An optimal closed interval can be shifted until its left end meets an atom.
        double best = 0;
        std::size_t j = 0;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            j = std::max(j, i);
            while (j < atoms.size() && atoms.points[j] <= atoms.points[i] + 2 * delta * (1 + 1e-12)) ++j;
            best = std::max(best, cum[j] - cum[i]);
        }
        best = std::min(best, 1.0);
        bool ok = delta >= floor && delta <= width / 4;
        prof.delta.push_back(delta);
        prof.mass.push_back(best);
        prof.resolved.push_back(ok);
        if (ok) {
            lx.push_back(std::log(delta));
            ly.push_back(std::log(best));
        }
    }
    if (lx.size() >= 2) prof.slope = least_squares(lx, ly).slope;
    return prof;
}

double riesz_potential(const MeasureAtoms& atoms, double alpha_star)
{
    if (atoms.size() == 0) throw std::domain_error("riesz_potential: no atoms");
    if (support_distance(atoms, alpha_star) <= atom_resolution(atoms))
        throw singularity_error("riesz_potential: point within atom resolution of the support");
    Kahan<double> acc;
    for (std::size_t k = 0; k < atoms.size(); ++k)
        acc.add(atoms.weights[k] / std::abs(atoms.points[k] - alpha_star));
    return acc.value();
}

std::uint64_t table_checksum(std::span<const cplx> table)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t n = 0; n < table.size(); ++n) {
        h = fnv1a(format_line(static_cast<std::int64_t>(n), table[n]), h);
        h = fnv1a("\n", h);
    }
    return h;
}

void write_coefficient_cache(std::ostream& out, const CantorSpec& spec, CoefficientModel model,
                             std::span<const cplx> table)
{
    char head[256];
    std::snprintf(head, sizeof head, "# theta0=%.17g theta1=%.17g keep=%d base=%d level=%d model=%s threshold=%g",
                  spec.theta0, spec.theta1, spec.keep_count, spec.base, spec.level,
                  model == CoefficientModel::exact ? "exact" : "level", factor_threshold);
    out << head << '\n' << "n,re,im\n";
    for (std::size_t n = 0; n < table.size(); ++n) out << format_line(static_cast<std::int64_t>(n), table[n]) << '\n';
}

CoefficientCache read_coefficient_cache(std::istream& in)
{
    CoefficientCache cache;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw std::runtime_error("coefficient cache: missing parameter header");
    std::istringstream hs(line.substr(2));
    std::string kv;
    while (hs >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::runtime_error("coefficient cache: bad header field " + kv);
        auto key = kv.substr(0, eq);
        auto val = kv.substr(eq + 1);
        if (key == "theta0") cache.spec.theta0 = std::stod(val);
        else if (key == "theta1") cache.spec.theta1 = std::stod(val);
        else if (key == "keep") cache.spec.keep_count = std::stoi(val);
        else if (key == "base") cache.spec.base = std::stoi(val);
        else if (key == "level") cache.spec.level = std::stoi(val);
        else if (key == "model") cache.model = val == "level" ? CoefficientModel::level : CoefficientModel::exact;
        else if (key == "threshold") cache.threshold = std::stod(val);
    }
    if (!std::getline(in, line) || line != "n,re,im") throw std::runtime_error("coefficient cache: missing column header");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    std::int64_t expect = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        long long n = 0;
        double re = 0, im = 0;
        if (std::sscanf(line.c_str(), "%lld,%lf,%lf", &n, &re, &im) != 3)
            throw std::runtime_error("coefficient cache: malformed row '" + line + "'");
        if (n != expect) throw std::runtime_error("coefficient cache: rows out of order");
        ++expect;
        cache.values.emplace_back(re, im);
        h = fnv1a(line, h);
        h = fnv1a("\n", h);
    }
    cache.checksum = h;
    return cache;
}

}  // namespace cantorlab
