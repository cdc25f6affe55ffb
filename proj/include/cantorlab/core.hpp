#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cantorlab {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;

struct pole_error : std::domain_error {
    using std::domain_error::domain_error;
};

struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct collision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct singularity_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Neumaier variant of compensated summation; order of add() calls fixes the result.
template <class T>
class Kahan {
public:
    void add(T x)
    {
        T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    Kahan& operator+=(T x)
    {
        add(x);
        return *this;
    }
    T value() const { return sum_ + comp_; }

private:
    T sum_{};
    T comp_{};
};

template <>
class Kahan<cplx> {
public:
    void add(cplx x)
    {
        re_.add(x.real());
        im_.add(x.imag());
    }
    Kahan& operator+=(cplx x)
    {
        add(x);
        return *this;
    }
    cplx value() const { return {re_.value(), im_.value()}; }

private:
    Kahan<double> re_;
    Kahan<double> im_;
};

inline double kahan_sum(std::span<const double> xs)
{
    Kahan<double> acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

// Parameter -> value table with free-form metadata, written out by the cli.
struct GridScan {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, std::string> meta;

    void add_row(std::vector<double> row) { rows.push_back(std::move(row)); }
    std::vector<double> column(std::size_t i) const
    {
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r.at(i));
        return out;
    }
};

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double slope_stderr = 0;
    double rms = 0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

std::vector<double> geometric_grid(double lo, double hi, int count);

// Gauss-Legendre nodes/weights on [-1,1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace cantorlab
