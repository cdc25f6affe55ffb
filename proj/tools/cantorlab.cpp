#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "cantorlab/acceptance.hpp"
#include "cantorlab/combinatorics.hpp"
#include "cantorlab/identities.hpp"
#include "cantorlab/moments.hpp"
#include "cantorlab/profiler.hpp"

using namespace cantorlab;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0, exit_fail = 1, exit_usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Settings {
    CantorSpec spec;
    int threads = 0;
    std::string cache_path;
    std::int64_t cache_N = 100000;
    std::string json_path;
    std::string csv_path;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

Table from_scan(const GridScan& s) { return {s.columns, s.rows}; }

void write_csv(const std::string& path, const Table& t)
{
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt::format("{:.17g}", row[i]);
        out << "\n";
    }
}

std::string with_suffix(const std::string& path, const std::string& suffix)
{
    std::filesystem::path p(path);
    return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

// Checksum of the coefficient cache in use: the file at cache_path when it
// exists, otherwise the level table the evaluators build on the fly.
std::uint64_t cache_checksum(const Settings& s)
{
    if (!s.cache_path.empty() && std::filesystem::exists(s.cache_path)) {
        std::ifstream in(s.cache_path);
        auto cache = read_coefficient_cache(in);
        if (cache.spec.theta0 != s.spec.theta0 || cache.spec.theta1 != s.spec.theta1 ||
            cache.spec.level != s.spec.level)
            throw UsageError("coefficient cache " + s.cache_path + " was built for a different measure");
        return cache.checksum;
    }
    return table_checksum(coefficient_table(s.spec, s.cache_N, CoefficientModel::level));
}

class Report {
public:
    Report(std::string command, std::string config_text, const Settings& s)
        : settings_(s)
    {
        doc_["command"] = command;
        doc_["config"] = config_text;
        doc_["config_hash"] = fmt::format("{:016x}", fnv1a(config_text));
        doc_["cache_checksum"] = fmt::format("{:016x}", cache_checksum(s));
        doc_["spec"] = {{"theta0", s.spec.theta0}, {"theta1", s.spec.theta1}, {"level", s.spec.level}};
    }

    json& results() { return doc_["results"]; }

    void line(const std::string& s) { std::cout << s << "\n"; }

    void table(const std::string& name, const Table& t, const std::string& suffix = "")
    {
        json rows = json::array();
        for (const auto& r : t.rows) {
            json row;
            for (std::size_t i = 0; i < t.columns.size(); ++i) row[t.columns[i]] = r[i];
            rows.push_back(row);
        }
        doc_["tables"][name] = rows;
        if (!settings_.csv_path.empty()) write_csv(with_suffix(settings_.csv_path, suffix), t);
    }

    void finish()
    {
        if (settings_.json_path.empty()) return;
        std::ofstream out(settings_.json_path);
        if (!out) throw UsageError("cannot write " + settings_.json_path);
        out << doc_.dump(2) << "\n";
    }

private:
    const Settings& settings_;
    json doc_;
};

Method parse_method(const std::string& m)
{
    if (m == "direct") return Method::direct;
    if (m == "average") return Method::measure_average;
    if (m == "afe") return Method::afe;
    if (m == "afe-smoothed") return Method::afe_smoothed;
    throw UsageError("unknown method " + m);
}

// Effective settings of the global options and the active command; output
// paths and the thread count do not change results and are left out.
std::string config_text(const CLI::App& app, const std::string& command)
{
    std::istringstream all(app.config_to_str(true, false));
    std::string out, line;
    while (std::getline(all, line)) {
        const std::string key = line.substr(0, line.find('='));
        const auto dot = key.find('.');
        const bool keep = dot == std::string::npos ? key != "json" && key != "csv" && key != "threads"
                                                   : key.substr(0, dot) == command;
        if (keep) out += line + "\n";
    }
    return out;
}

std::string band(double value, double target, double tol)
{
    return fmt::format("{:.6f} ({} +- {}: {})", value, target, tol, std::abs(value - target) <= tol ? "in band" : "outside band");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cantor-measure Dirichlet series lab"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML or INI file; command-line flags override its values");
    Settings s;
    app.add_option("--theta0", s.spec.theta0, "support start")->capture_default_str();
    app.add_option("--theta1", s.spec.theta1, "support end")->capture_default_str();
    app.add_option("--level", s.spec.level, "atom level")->capture_default_str()->check(CLI::Range(1, 16));
    app.add_option("--threads", s.threads, "OpenMP threads, 0 = runtime default")->check(CLI::NonNegativeNumber);
    app.add_option("--cache", s.cache_path, "coefficient cache file");
    app.add_option("--cache-N", s.cache_N, "table length for the checksum when no cache file exists")
        ->capture_default_str()
        ->check(CLI::Range(std::int64_t{1}, std::int64_t{10000000}));
    app.add_option("--json", s.json_path, "write the JSON report here");
    app.add_option("--csv", s.csv_path, "write the command's table here");

    // constants
    auto* constants = app.add_subcommand("constants", "Wick constants and the Strichartz fit");
    std::int64_t constants_N = 1000000;
    constants->add_option("--N", constants_N)->capture_default_str()->check(CLI::Range(std::int64_t{10}, std::int64_t{10000000}));

    // coeffs
    auto* coeffs = app.add_subcommand("coeffs", "build the coefficient cache (file: header, then n,re,im)");
    std::int64_t coeffs_N = 100000;
    std::string coeffs_model = "exact";
    coeffs->add_option("--N", coeffs_N)->capture_default_str()->check(CLI::Range(std::int64_t{1}, std::int64_t{10000000}));
    coeffs->add_option("--model", coeffs_model)->capture_default_str()->check(CLI::IsMember({"exact", "level"}));

    // eval
    auto* eval = app.add_subcommand("eval", "L(sigma+it) at a point or on a t-grid; CSV t,sigma,re,im,abs");
    double eval_sigma = 0.5;
    std::vector<double> eval_t{1000};
    int eval_count = 0;
    std::string eval_method = "average";
    eval->add_option("--sigma", eval_sigma)->capture_default_str();
    eval->add_option("--t", eval_t, "one t, or lo hi with --count")->capture_default_str();
    eval->add_option("--count", eval_count, "geometric grid size between two --t values");
    eval->add_option("--method", eval_method)->capture_default_str()->check(CLI::IsMember({"direct", "average", "afe", "afe-smoothed"}));

    // identities
    auto* idents = app.add_subcommand("identities", "identity suite; CSV index,residual,tolerance,pass (names in the JSON report)");

    // od-scan
    auto* od_scan = app.add_subcommand("od-scan", "off-diagonal averages; CSV t,M,od,diagonal,full,ratio");
    std::vector<double> od_t_list{300, 1e3, 3e3, 1e4};
    od_scan->add_option("--t", od_t_list)->capture_default_str();

    // restriction-scan
    auto* restr = app.add_subcommand("restriction-scan",
                                     "restriction quotient; CSV t,M,harmonic,quotient,two_re_od,od_re,od_im,lower_ok");
    std::vector<double> restr_t;
    restr->add_option("--t", restr_t, "default: 24 points on [200, 2e5]");

    // moment2
    auto* moment2 = app.add_subcommand("moment2", "second moment of L over [T, 2T]; CSV T,value,main_term,ratio,refinement");
    std::vector<double> m2_T{1e3, 1e4};
    bool m2_refine = false;
    moment2->add_option("--T", m2_T)->capture_default_str();
    moment2->add_flag("--refine", m2_refine, "repeat on half-width panels");

    // moment4
    auto* moment4 = app.add_subcommand(
        "moment4", "MV ratios (CSV M,mv_integral,ratio,accidental_share,diagonal) and OD4 "
                   "(second CSV, suffix _od4: T,od4_over_T,fourth_over_TlogT2,fourth,diagonal)");
    std::vector<int> m4_M{20, 50, 100};
    std::vector<double> m4_T{300, 3e3, 3e4};
    moment4->add_option("--M", m4_M)->capture_default_str();
    moment4->add_option("--T", m4_T)->capture_default_str();

    // vieta
    auto* vieta = app.add_subcommand("vieta", "D2k, W_delta and VO6; CSV delta,W");
    int v_k = 2, v_N = 3000, v_W_N = 200, v_vo_N = 300;
    vieta->add_option("--k", v_k)->capture_default_str()->check(CLI::Range(1, 3));
    vieta->add_option("--N", v_N)->capture_default_str();
    vieta->add_option("--W-N", v_W_N, "N for the W_delta table")->capture_default_str();
    vieta->add_option("--vo-N", v_vo_N)->capture_default_str();

    // atlas
    auto* atlas = app.add_subcommand("atlas", "collision atlas; CSV m1,m2,m3,m4,h,p,alpha_star_num,alpha_star_den");
    int a_M = 200, a_record_h = 0, a_h_max = 3;
    bool a_void = false;
    atlas->add_option("--M", a_M)->capture_default_str();
    atlas->add_option("--record-h", a_record_h, "store explicit records for |h| up to this")->capture_default_str();
    atlas->add_flag("--void-check", a_void);
    atlas->add_option("--h-max", a_h_max, "void check range")->capture_default_str();

    // mu-profile
    auto* mu = app.add_subcommand("mu-profile", "envelope regression and profile fit; CSV sigma,mu_hat,window_count");
    std::vector<double> mu_sigma{0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2};
    double mu_T_lo = 100, mu_t_max = 2e4;
    mu->add_option("--sigma", mu_sigma)->capture_default_str();
    mu->add_option("--T-lo", mu_T_lo)->capture_default_str();
    mu->add_option("--t-max", mu_t_max)->capture_default_str();

    // exponents
    auto* expo = app.add_subcommand("exponents", "closed-form exponents");
    double e_d = std::log(2.0) / std::log(3.0), e_mu = 13.0 / 84, e_eta = 0.0614, e_s = 2.0 / 3;
    expo->add_option("--d", e_d)->capture_default_str();
    expo->add_option("--mu-zeta", e_mu)->capture_default_str();
    expo->add_option("--eta", e_eta)->capture_default_str();
    expo->add_option("--s", e_s, "slope-level argument")->capture_default_str();

    // accept
    auto* accept = app.add_subcommand("accept", "acceptance suite; CSV id,pass,seconds");
    std::vector<int> accept_only;
    accept->add_option("--only", accept_only, "criterion ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    auto* cmd = app.get_subcommands().front();
    try {
        s.spec.validate();
        if (s.threads > 0) omp_set_num_threads(s.threads);
        Report report(cmd->get_name(), config_text(app, cmd->get_name()), s);
        auto& res = report.results();
        int status = exit_ok;

        if (cmd == constants) {
            auto w = wick_constants(s.spec, constants_N);
            std::vector<std::int64_t> Ns;
            for (int e = 10; e <= 16; ++e) Ns.push_back(std::int64_t{1} << e);
            auto fit = fit_strichartz(s.spec, Ns);
            const double mean_doubling = std::accumulate(fit.doubling_ratio.begin(), fit.doubling_ratio.end(), 0.0) /
                                         fit.doubling_ratio.size();
            report.line("c_nu = " + band(w.c_nu, 1.156, 0.01));
            report.line(fmt::format("C4 = {:.6f}, C6 = {:.6f}", w.c4, w.c6));
            report.line(fmt::format("Wick D4 = {:.6f}, D6 = {:.6f}", w.d4_prediction(), w.d6_prediction()));
            report.line(fmt::format("Strichartz c = {:.6f}, mean doubling ratio {:.4f} vs 2^(1-d) = {:.4f}", fit.c_s,
                                    mean_doubling, std::pow(2.0, 1 - s.spec.dimension())));
            res = {{"N", constants_N},     {"c_nu", w.c_nu},          {"c4", w.c4},
                   {"c6", w.c6},           {"d4_wick", w.d4_prediction()}, {"d6_wick", w.d6_prediction()},
                   {"strichartz_c", fit.c_s}, {"mean_doubling_ratio", mean_doubling}};
            Table t{{"N", "partial", "doubling_ratio"}, {}};
            for (std::size_t i = 0; i < fit.N.size(); ++i)
                t.rows.push_back({double(fit.N[i]), fit.partial[i], i < fit.doubling_ratio.size() ? fit.doubling_ratio[i] : NAN});
            report.table("strichartz", t);
        } else if (cmd == coeffs) {
            if (s.cache_path.empty()) throw UsageError("coeffs: --cache is required");
            const auto model = coeffs_model == "exact" ? CoefficientModel::exact : CoefficientModel::level;
            auto table = coefficient_table(s.spec, coeffs_N, model);
            {
                std::ofstream out(s.cache_path);
                if (!out) throw UsageError("cannot write " + s.cache_path);
                write_coefficient_cache(out, s.spec, model, table);
            }
            const auto sum = table_checksum(table);
            report.line(fmt::format("wrote {} coefficients to {} (checksum {:016x})", coeffs_N, s.cache_path, sum));
            res = {{"N", coeffs_N}, {"model", coeffs_model}, {"checksum", fmt::format("{:016x}", sum)}};
        } else if (cmd == eval) {
            std::vector<double> ts = eval_t;
            if (eval_count > 0) {
                if (eval_t.size() != 2) throw UsageError("eval: --count needs --t lo hi");
                ts = geometric_grid(eval_t[0], eval_t[1], eval_count);
            }
            LEvaluator L(s.spec);
            EvalOptions opts;
            opts.method = parse_method(eval_method);
            Table t{{"t", "sigma", "re", "im", "abs"}, {}};
            for (double tt : ts) {
                auto v = L.eval(cplx(eval_sigma, tt), opts).value;
                t.rows.push_back({tt, eval_sigma, v.real(), v.imag(), std::abs(v)});
                report.line(fmt::format("L({} + {}i) = {:.12g} {:+.12g}i", eval_sigma, tt, v.real(), v.imag()));
            }
            res = {{"method", eval_method}, {"points", ts.size()}};
            report.table("values", t);
        } else if (cmd == idents) {
            const auto atoms = build_atoms(s.spec);
            std::vector<IdentityReport> reps;
            for (double t : {10.0, 1e3, 1e5})
                for (double th : {0.5, 1.25, 2.0}) reps.push_back(check_conjugacy(th, t));
            for (double t : {1e3, 1e4})
                for (double th : {0.5, 1.25, 2.0, 3.0}) reps.push_back(check_tri(th, t));
            auto h = check_h_cancellation(1e4, atoms);
            reps.insert(reps.end(), {h.norm, h.triangle, h.difference});
            for (int k : {1, 3, 7})
                for (int M : {20, 100, 316})
                    for (double t : {1e3, 1e4}) reps.push_back(check_swap(k, t, M));
            for (long K = 0; K <= 50; ++K)
                for (auto& r : check_bridge(K, atoms)) reps.push_back(r);
            const double a_inf = TailKernels(atoms).a_infinity().real();
            reps.push_back(make_report("a_infinity", a_inf, -0.5, 1e-10));
            Table t{{"index", "residual", "tolerance", "pass"}, {}};
            std::map<std::string, std::pair<double, bool>> worst;
            json list = json::array();
            for (std::size_t i = 0; i < reps.size(); ++i) {
                const auto& r = reps[i];
                t.rows.push_back({double(i), r.residual, r.tolerance, r.pass ? 1.0 : 0.0});
                auto& w = worst.try_emplace(r.name, 0.0, true).first->second;
                w.first = std::max(w.first, r.residual);
                w.second = w.second && r.pass;
                list.push_back({{"name", r.name}, {"residual", r.residual}, {"tolerance", r.tolerance}, {"pass", r.pass}, {"params", r.params}});
            }
            bool all = true;
            for (const auto& [name, w] : worst) {
                report.line(fmt::format("{:28s} max residual {:.3g} {}", name, w.first, w.second ? "pass" : "FAIL"));
                all = all && w.second;
            }
            res = {{"reports", list}, {"all_pass", all}};
            report.table("identities", t);
            if (!all) status = exit_fail;
        } else if (cmd == od_scan) {
            LEvaluator L(s.spec);
            Table t{{"t", "M", "od", "diagonal", "full", "ratio"}, {}};
            for (double tt : od_t_list) {
                auto r = od_t(tt, L.pushforward());
                t.rows.push_back({tt, double(r.M), r.od, r.diagonal, r.full, std::abs(r.od) / r.diagonal});
                report.line(fmt::format("t={:g}: OD={:.6f} diagonal={:.6f} |OD|/diagonal={:.4f}", tt, r.od, r.diagonal,
                                        std::abs(r.od) / r.diagonal));
            }
            report.table("od", t);
        } else if (cmd == restr) {
            const auto atoms = build_atoms(s.spec);
            auto grid = restr_t.empty() ? default_restriction_grid() : restr_t;
            auto scan = restriction_scan(grid, atoms);
            for (const auto& row : scan.rows)
                report.line(fmt::format("t={:.1f} M={:g} quotient={:.4f} 2ReOD'={:.4f} lower={}", row[0], row[1], row[3],
                                        row[4], row[7] == 1.0 ? "ok" : "VIOLATED"));
            if (scan.meta.count("slope"))
                report.line("slope of 2Re OD' vs log t: " + scan.meta.at("slope") + " +- " + scan.meta.at("slope_stderr"));
            res = scan.meta;
            report.table("restriction", from_scan(scan));
        } else if (cmd == moment2) {
            LEvaluator L(s.spec);
            const double c = wick_constants(s.spec, 1000000).c_nu;
            QuadratureOptions opts;
            opts.refinement_check = m2_refine;
            Table t{{"T", "value", "main_term", "ratio", "refinement"}, {}};
            for (double T : m2_T) {
                auto r = second_moment_L(T, L, c, opts);
                t.rows.push_back({T, r.value, r.main_term, r.ratio, r.refinement_delta});
                report.line(fmt::format("T={:g}: integral {:.6f}, C_nu T = {:.6f}, ratio {:.5f}", T, r.value, r.main_term,
                                        r.ratio));
            }
            report.table("moment2", t);
        } else if (cmd == moment4) {
            LEvaluator L(s.spec);
            auto mvs = mv_integral_ratio(m4_M, L.pushforward());
            for (const auto& row : mvs.rows)
                report.line(fmt::format("M={:g}: MV ratio {:.4f}, accidental share {:.3f}", row[0], row[2], row[3]));
            report.table("mv", from_scan(mvs));
            auto ods = od4_scan(m4_T, L.pushforward());
            for (const auto& row : ods.rows)
                report.line(fmt::format("T={:g}: OD4/T {:.4f}, fourth/(T log^2 T) {:.4f}", row[0], row[1], row[2]));
            report.table("od4", from_scan(ods), "_od4");
        } else if (cmd == vieta) {
            auto d = d2k(s.spec, v_k, v_N);
            report.line(fmt::format("D{}(N={}) estimate {:.6f} (box {:.6f}, Wick at N {:.6f}, Wick limit {:.6f})", 2 * v_k,
                                    v_N, d.estimate, d.box, d.wick_box, d.wick_limit));
            auto W = trig_decomposition(s.spec, 2, v_W_N, 2 * v_W_N);
            Table t{{"delta", "W"}, {}};
            for (const auto& [delta, w] : W) t.rows.push_back({double(delta), w});
            const double vo = vo_2k(s.spec, 3, v_vo_N);
            report.line(fmt::format("W_0(N={}) = {:.6f}", v_W_N, W.at(0)));
            report.line(fmt::format("VO6(N={}) = {:.7f}", v_vo_N, vo));
            res = {{"k", v_k},         {"N", v_N},         {"estimate", d.estimate}, {"box", d.box},
                   {"wick_box", d.wick_box}, {"wick_limit", d.wick_limit}, {"off_diagonal", d.off_diagonal},
                   {"vo6", vo},        {"vo_N", v_vo_N}};
            report.table("W", t);
        } else if (cmd == atlas) {
            auto a = collision_atlas(a_M, a_record_h);
            report.line(fmt::format("M={}: {} collisions, fitted C = {:.4f}", a_M, a.pair_count, a.fitted_C));
            res = {{"M", a_M}, {"pairs", a.pair_count}, {"fitted_C", a.fitted_C}, {"records", a.records.size()}};
            if (a_void) {
                auto v = small_h_void(a_M, a_h_max);
                report.line(fmt::format("h<={}: {} in-support singularities (of {})", a_h_max, v.in_support, v.singularities));
                res["void"] = {{"h_max", a_h_max}, {"singularities", v.singularities}, {"in_support", v.in_support}};
            }
            if (!s.csv_path.empty()) {
                std::ofstream out(s.csv_path);
                if (!out) throw UsageError("cannot write " + s.csv_path);
                write_atlas_csv(out, a);
            }
        } else if (cmd == mu) {
            LEvaluator L(s.spec);
            auto windows = default_windows(mu_T_lo, mu_t_max);
            auto samples = sample_profile(L, mu_sigma, windows);
            auto p = fit_mu(samples);
            Table t{{"sigma", "mu_hat", "window_count"}, {}};
            for (std::size_t i = 0; i < p.sigma_grid.size(); ++i) {
                t.rows.push_back({p.sigma_grid[i], p.mu_hat[i], double(windows.size())});
                report.line(fmt::format("sigma={:.2f} mu_hat={:.4f}{}", p.sigma_grid[i], p.mu_hat[i],
                                        p.clamped[i] ? " (floored)" : ""));
            }
            std::string slopes;
            for (int sl : p.fit_slopes) slopes += fmt::format("{} ", sl);
            report.line(fmt::format("fit: value {:.4f} at sigma={:.2f}, slopes {}, rms {:.4f}", p.fit_intercept,
                                    p.sigma_grid.front(), slopes, p.rms));
            res = {{"fit_intercept", p.fit_intercept}, {"fit_slopes", p.fit_slopes}, {"breakpoints", p.breakpoints},
                   {"rms", p.rms}, {"windows", windows}};
            res["zero_crossing"] = std::isnan(p.zero_crossing) ? json(nullptr) : json(p.zero_crossing);
            report.table("mu", t);
        } else if (cmd == expo) {
            auto e = exponent_formulas(e_d, e_mu, e_eta);
            const double sl = slope_level(e_s);
            report.line(fmt::format("subconvex {:.6f} (d* = {:.6f})", e.subconvex, e.d_star));
            report.line(fmt::format("rajchman {:.6f}", e.rajchman));
            report.line(fmt::format("d_crit {:.6f}", e.d_crit));
            report.line(fmt::format("slope_level({:.4f}) = {:.6f}", e_s, sl));
            res = {{"subconvex", e.subconvex}, {"d_star", e.d_star}, {"rajchman", e.rajchman},
                   {"d_crit", e.d_crit},       {"slope_level", sl}};
        } else if (cmd == accept) {
            std::set<int> only(accept_only.begin(), accept_only.end());
            Table t{{"id", "pass", "seconds"}, {}};
            json list = json::array();
            auto results = run_acceptance(only, [&](const CriterionResult& r) {
                report.line(format_result(r));
                std::cout.flush();
            });
            int passed = 0;
            for (const auto& r : results) {
                passed += r.pass;
                t.rows.push_back({double(r.id), r.pass ? 1.0 : 0.0, r.seconds});
                list.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
            }
            report.line(fmt::format("{}/{} criteria pass", passed, results.size()));
            res = list;
            report.table("acceptance", t);
            if (passed != static_cast<int>(results.size())) status = exit_fail;
        }
        report.finish();
        return status;
    } catch (const UsageError& e) {
        std::cerr << cmd->get_name() << ": " << e.what() << "\n";
        return exit_usage;
    } catch (const std::domain_error& e) {
        std::cerr << cmd->get_name() << ": " << e.what() << "\n";
        return exit_usage;
    } catch (const budget_error& e) {
        std::cerr << cmd->get_name() << ": " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << cmd->get_name() << ": " << e.what() << "\n";
        return exit_fail;
    }
}
