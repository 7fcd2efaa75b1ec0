#include "conc/numerics.hpp"

#include <algorithm>
#include <numeric>

namespace conc {

double log_sum_exp_weighted(std::span<const double> terms, std::span<const double> weights) {
    if (terms.size() != weights.size())
        throw std::invalid_argument("log_sum_exp_weighted: size mismatch");
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < terms.size(); ++i)
        if (weights[i] > 0.0) m = std::max(m, terms[i]);
    if (!std::isfinite(m)) return -std::numeric_limits<double>::infinity();
    KahanSum acc;
    for (std::size_t i = 0; i < terms.size(); ++i)
        if (weights[i] > 0.0) acc.add(weights[i] * std::exp(terms[i] - m));
    return m + std::log(acc.value());
}

GoldenResult golden_max(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_iter) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > rel_tol * (std::fabs(a) + std::fabs(b)); ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? GoldenResult{x1, f1} : GoldenResult{x2, f2};
}

GoldenResult grid_then_golden_max(const std::function<double(double)>& f, double a,
                                  double b, int grid_points, double rel_tol,
                                  bool log_spaced) {
    if (!(b > a)) return {a, f(a)};
    if (grid_points < 3) grid_points = 3;
    std::vector<double> xs(static_cast<std::size_t>(grid_points));
    if (log_spaced && a > 0.0) {
        double la = std::log(a), lb = std::log(b);
        for (int i = 0; i < grid_points; ++i)
            xs[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (grid_points - 1));
    } else {
        for (int i = 0; i < grid_points; ++i)
            xs[static_cast<std::size_t>(i)] = a + (b - a) * i / (grid_points - 1);
    }
    std::size_t best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double v = f(xs[i]);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double lo = xs[best == 0 ? 0 : best - 1];
    double hi = xs[best + 1 < xs.size() ? best + 1 : xs.size() - 1];
    GoldenResult g = golden_max(f, lo, hi, rel_tol);
    if (g.fx < best_val) return {xs[best], best_val};
    return g;
}

namespace {
std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a == 0 ? 1 : a;
}
}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    std::int64_t g = gcd64(n, d);
    num = n / g;
    den = d / g;
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const { return Rational(num * o.num, den * o.den); }

std::string Rational::str() const {
    return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace conc
