#include "cantorlab/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cantorlab {

namespace {

using i128 = __int128;

// Nondecreasing k-multisets of [1, max_element] with sum S, appended flat to `out`.
void multisets_with_sum(int k, int max_element, std::int64_t S, std::vector<int>& out)
{
    std::vector<int> cur(k);
    auto rec = [&](auto&& self, int pos, int lo, std::int64_t rem) -> void {
        const int left = k - pos;
        if (left == 1) {
            if (rem >= lo && rem <= max_element) {
                cur[pos] = static_cast<int>(rem);
                out.insert(out.end(), cur.begin(), cur.end());
            }
            return;
        }
        for (int v = lo; v <= max_element; ++v) {
            if (static_cast<std::int64_t>(v) * left > rem) break;
            if (rem - v > static_cast<std::int64_t>(max_element) * (left - 1)) continue;
            cur[pos] = v;
            self(self, pos + 1, v, rem - v);
        }
    };
    rec(rec, 0, 1, S);
}

double multiset_count(int k, int n)
{
    // C(n + k - 1, k)
    double c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n + i - 1) / i;
    return c;
}

// All nondecreasing k-multisets of [1, N] in lexicographic order, flat.
template <class F>
void for_each_multiset(int k, int N, F&& f)
{
    std::vector<int> cur(k, 1);
    while (true) {
        f(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == N) --i;
        if (i < 0) return;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[i];
    }
}

std::int64_t factorial(int n)
{
    std::int64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

std::vector<double> scale_factors(const CantorSpec& spec, int N)
{
    std::vector<double> r(N + 1);
    for (int n = 0; n <= N; ++n) r[n] = cosine_product(spec, n, 64, true).real();
    return r;
}

void check_d2k_budget(int k, int N)
{
    if (k < 1 || k > 3) throw std::domain_error("d2k: k in {1, 2, 3}");
    if (N < 1) throw std::domain_error("d2k: N >= 1");
    const int limit = k == 1 ? 10000000 : k == 2 ? 3000 : 400;
    if (N > limit) throw budget_error("d2k: N = " + std::to_string(N) + " above the budget " + std::to_string(limit));
}

}  // namespace

std::int64_t permutation_count(const std::vector<int>& multiset)
{
    std::int64_t c = factorial(static_cast<int>(multiset.size()));
    for (std::size_t i = 0; i < multiset.size();) {
        std::size_t j = i;
        while (j < multiset.size() && multiset[j] == multiset[i]) ++j;
        c /= factorial(static_cast<int>(j - i));
        i = j;
    }
    return c;
}

namespace {

double group_obstruction(const std::vector<double>& r, const MultisetCollision& group)
{
    std::vector<double> terms;
    for (const auto& m : group.multisets) {
        double R = 1;
        for (int x : m) R *= r[x];
        terms.push_back(double(permutation_count(m)) * R);
    }
    Kahan<double> pairs;
    for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t j = i + 1; j < terms.size(); ++j) pairs.add(terms[i] * terms[j]);
    return 2.0 / double(group.P) * pairs.value();
}

}  // namespace

std::vector<MultisetCollision> multiset_collisions(int k, int max_element)
{
    if (k < 2) throw std::domain_error("multiset_collisions: k >= 2");
    if (max_element < 1) throw std::domain_error("multiset_collisions: max_element >= 1");
    if (multiset_count(k, max_element) > 2e8 || k * std::log(double(max_element)) > std::log(9e18))
        throw budget_error("multiset_collisions: enumeration above budget");
    std::vector<MultisetCollision> out;
    std::vector<int> flat;
    std::vector<std::pair<std::int64_t, std::size_t>> keyed;
    for (std::int64_t S = k; S <= static_cast<std::int64_t>(k) * max_element; ++S) {
        flat.clear();
        multisets_with_sum(k, max_element, S, flat);
        const std::size_t count = flat.size() / k;
        keyed.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            std::int64_t P = 1;
            for (int j = 0; j < k; ++j) P *= flat[i * k + j];
            keyed[i] = {P, i};
        }
        std::sort(keyed.begin(), keyed.end());
        for (std::size_t i = 0; i < count;) {
            std::size_t j = i;
            while (j < count && keyed[j].first == keyed[i].first) ++j;
            if (j - i >= 2) {
                MultisetCollision g{S, keyed[i].first, {}};
                for (std::size_t q = i; q < j; ++q) {
                    const int* m = &flat[keyed[q].second * k];
                    g.multisets.emplace_back(m, m + k);
                }
                out.push_back(std::move(g));
            }
            i = j;
        }
    }
    return out;
}

D2kResult d2k(const CantorSpec& spec, int k, int N)
{
    check_d2k_budget(k, N);
    const auto nu = coefficient_table(spec, N);
    D2kResult res;
    res.k = k;
    res.N = N;
    std::vector<std::pair<std::int64_t, cplx>> terms;
    terms.reserve(static_cast<std::size_t>(multiset_count(k, N)));
    for_each_multiset(k, N, [&](const std::vector<int>& m) {
        std::int64_t P = 1;
        cplx v = 1;
        for (int x : m) {
            P *= x;
            v *= nu[x];
        }
        terms.emplace_back(P, double(permutation_count(m)) * v / std::sqrt(double(P)));
    });
    std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Kahan<double> box;
    for (std::size_t i = 0; i < terms.size();) {
        Kahan<cplx> g;
        std::size_t j = i;
        for (; j < terms.size() && terms[j].first == terms[i].first; ++j) g.add(terms[j].second);
        box.add(std::norm(g.value()));
        i = j;
    }
    res.box = box.value();
    auto wick = [k](const WickConstants& w) {
        return k == 1 ? w.c_nu : k == 2 ? w.d4_prediction() : w.d6_prediction();
    };
    res.wick_box = wick(wick_constants(nu));
    res.wick_limit = wick(wick_constants(spec, 1000000));
    res.off_diagonal = res.box - res.wick_box;
    res.estimate = res.wick_limit + res.off_diagonal;
    return res;
}

std::map<int, double> trig_decomposition(const CantorSpec& spec, int k, int N, int delta_max)
{
    if (k != 2) throw std::domain_error("trig_decomposition: k = 2 only");
    if (N < 1 || N > 1000) throw budget_error("trig_decomposition: N in [1, 1000]");
    if (delta_max < 0) throw std::domain_error("trig_decomposition: delta_max >= 0");
    const auto r = scale_factors(spec, N);
    struct Term {
        std::int64_t P;
        int S;
        double v;
    };
    std::vector<Term> terms;
    for (int a = 1; a <= N; ++a)
        for (int b = a; b <= N; ++b)
            terms.push_back({std::int64_t(a) * b, a + b, (a == b ? 1.0 : 2.0) * r[a] * r[b] / std::sqrt(double(a) * b)});
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) {
        return x.P != y.P ? x.P < y.P : x.S < y.S;
    });
    std::vector<Kahan<double>> W(delta_max + 1);
    for (std::size_t i = 0; i < terms.size();) {
        std::size_t j = i;
        while (j < terms.size() && terms[j].P == terms[i].P) ++j;
        for (std::size_t x = i; x < j; ++x)
            for (std::size_t y = i; y < j; ++y) {
                const int delta = terms[x].S - terms[y].S;
                if (delta >= 0 && delta <= delta_max) W[delta].add(terms[x].v * terms[y].v);
            }
        i = j;
    }
    std::map<int, double> out;
    for (int d = 0; d <= delta_max; ++d) out[d] = W[d].value();
    return out;
}

double trig_reconstruct(const std::map<int, double>& W, double phi)
{
    Kahan<double> acc;
    for (const auto& [d, w] : W) acc.add(d == 0 ? w : 2 * w * std::cos(d * phi));
    return acc.value();
}

double vo_group(const CantorSpec& spec, const MultisetCollision& group)
{
    int top = 0;
    for (const auto& m : group.multisets) top = std::max(top, m.back());
    return group_obstruction(scale_factors(spec, top), group);
}

double vo_2k(const CantorSpec& spec, int k, int N)
{
    if (k < 2 || k > 3) throw std::domain_error("vo_2k: k in {2, 3}");
    if (N < 1 || N > 400) throw budget_error("vo_2k: N in [1, 400]");
    const auto r = scale_factors(spec, N);
    Kahan<double> acc;
    for (const auto& g : multiset_collisions(k, N)) acc.add(group_obstruction(r, g));
    return acc.value();
}

CollisionRecord make_collision(int m1, int m2, int m3, int m4)
{
    if (std::min({m1, m2, m3, m4}) < 1) throw std::domain_error("make_collision: positive entries");
    if (m1 > m2) std::swap(m1, m2);
    if (m3 > m4) std::swap(m3, m4);
    CollisionRecord rec;
    rec.tuple = {m1, m2, m3, m4};
    rec.h = std::int64_t(m3) + m4 - m1 - m2;
    rec.p = std::int64_t(m1) * m2 - std::int64_t(m3) * m4;
    if (rec.h == 0) throw std::domain_error("make_collision: h = 0");
    const std::int64_t g = std::gcd(rec.p, rec.h);
    rec.alpha_num = rec.p / g;
    rec.alpha_den = rec.h / g;
    if (rec.alpha_den < 0) {
        rec.alpha_num = -rec.alpha_num;
        rec.alpha_den = -rec.alpha_den;
    }
    const i128 n = rec.alpha_num, d = rec.alpha_den;
    const i128 lhs = (d * m1 + n) * (d * m2 + n);
    const i128 rhs = (d * m3 + n) * (d * m4 + n);
    if (lhs != rhs) throw std::logic_error("make_collision: products differ at alpha*");
    return rec;
}

CollisionAtlas collision_atlas(int M, int record_h_max)
{
    if (M < 3) throw std::domain_error("collision_atlas: M >= 3");
    if (M > 500) throw budget_error("collision_atlas: M <= 500");
    if (record_h_max < 0) throw std::domain_error("collision_atlas: record_h_max >= 0");
    // pair products grouped by sum
    const int top = M - 1;
    std::vector<std::vector<std::pair<int, int>>> by_sum(2 * top + 1);
    for (int a = 1; a <= top; ++a)
        for (int b = a; b <= top; ++b) by_sum[a + b].emplace_back(a, b);
    double estimate = 0;
    for (int s = 2; s + 1 <= 2 * top; ++s)
        for (int h = 1; h <= std::min(record_h_max, 2 * top - s); ++h)
            estimate += double(by_sum[s].size()) * by_sum[s + h].size();
    if (2 * estimate > 2e7) throw budget_error("collision_atlas: too many records; lower record_h_max");

    CollisionAtlas atlas;
    atlas.M = M;
    atlas.record_h_max = record_h_max;
    const std::int64_t pmax = std::int64_t(top) * top;
    std::vector<std::int32_t> count(2 * pmax + 1, 0);
    std::vector<std::int64_t> touched;
    atlas.max_multiplicity.assign(2 * top - 1, 0);
    for (int h = 1; h <= 2 * top - 2; ++h) {
        touched.clear();
        for (int s = 2; s + h <= 2 * top; ++s)
            for (auto [a, b] : by_sum[s])
                for (auto [c, d] : by_sum[s + h]) {
                    const std::int64_t p = std::int64_t(a) * b - std::int64_t(c) * d;
                    if (count[p + pmax]++ == 0) touched.push_back(p);
                    ++atlas.pair_count;
                    if (h <= record_h_max) {
                        atlas.records.push_back(make_collision(a, b, c, d));
                        atlas.records.push_back(make_collision(c, d, a, b));
                    }
                }
        std::int64_t best = 0;
        for (std::int64_t p : touched) {
            const std::int64_t mu = count[p + pmax];
            best = std::max(best, mu);
            if (h <= record_h_max) {
                atlas.multiplicity[{h, p}] = mu;
                atlas.multiplicity[{-h, -p}] = mu;
            }
            count[p + pmax] = 0;
        }
        atlas.max_multiplicity[h] = best;
        const double C = double(best) / (M * double(tau(2 * h)) * std::log(double(M)));
        atlas.fitted_C = std::max(atlas.fitted_C, C);
    }
    return atlas;
}

void write_atlas_csv(std::ostream& os, const CollisionAtlas& atlas)
{
    os << "m1,m2,m3,m4,h,p,alpha_star_num,alpha_star_den\n";
    for (const auto& r : atlas.records)
        os << r.tuple[0] << ',' << r.tuple[1] << ',' << r.tuple[2] << ',' << r.tuple[3] << ',' << r.h << ',' << r.p
           << ',' << r.alpha_num << ',' << r.alpha_den << '\n';
}

bool in_support_window(std::int64_t num, std::int64_t den)
{
    if (den <= 0) throw std::domain_error("in_support_window: den > 0");
    // fractional part x = r/den; 1/(4pi) <= x <= 1/pi  <=>  4 pi r >= den  and  pi r <= den
    const i128 r = ((num % den) + den) % den;
    const i128 d = i128(den) * 1000000000000000;
    const i128 pi_lo = 3141592653589793, pi_hi = 3141592653589794;  // 1e15 pi lies strictly between
    auto decided = [](bool yes, bool no) {
        if (yes == no) throw std::logic_error("in_support_window: undecided at this precision");
        return yes;
    };
    const bool lower = decided(4 * pi_lo * r >= d, 4 * pi_hi * r < d);
    const bool upper = decided(pi_hi * r <= d, pi_lo * r > d);
    return lower && upper;
}

VoidCheck small_h_void(int M, int h_max)
{
    if (M < 3 || M > 500) throw budget_error("small_h_void: M in [3, 500]");
    if (h_max < 1) throw std::domain_error("small_h_void: h_max >= 1");
    const int top = M - 1;
    std::vector<std::vector<std::pair<int, int>>> by_sum(2 * top + 1);
    for (int a = 1; a <= top; ++a)
        for (int b = a; b <= top; ++b) by_sum[a + b].emplace_back(a, b);
    VoidCheck out;
    out.M = M;
    out.h_max = h_max;
    // (m3,m4; m1,m2) gives the same alpha* as (m1,m2; m3,m4), so h > 0 covers |h| <= h_max
    for (int h = 1; h <= h_max; ++h)
        for (int s = 2; s + h <= 2 * top; ++s)
            for (auto [a, b] : by_sum[s])
                for (auto [c, d] : by_sum[s + h]) {
                    const std::int64_t p = std::int64_t(a) * b - std::int64_t(c) * d;
                    ++out.singularities;
                    if (in_support_window(p, h)) {
                        ++out.in_support;
                        if (out.witnesses.size() < 100) out.witnesses.push_back(make_collision(a, b, c, d));
                    }
                }
    return out;
}

std::int64_t tau(std::int64_t n)
{
    if (n < 1) throw std::domain_error("tau: n >= 1");
    std::int64_t count = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        count *= e + 1;
    }
    return n > 1 ? 2 * count : count;
}

DivisorLogSum divisor_log_sum(std::int64_t X)
{
    if (X < 2 || X > 10000000) throw std::domain_error("divisor_log_sum: X in [2, 1e7]");
    std::vector<std::int32_t> t(X + 1, 0);
    for (std::int64_t d = 1; d <= X; ++d)
        for (std::int64_t m = d; m <= X; m += d) ++t[m];
    Kahan<double> acc;
    for (std::int64_t h = 2; h <= X; ++h) acc.add(t[h] * std::log(double(h)));
    const double lx = std::log(double(X));
    return {acc.value(), acc.value() / (double(X) * lx * lx)};
}

}  // namespace cantorlab
