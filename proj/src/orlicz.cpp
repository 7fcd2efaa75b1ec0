#include "conc/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "conc/numerics.hpp"

namespace conc {

double lp_norm(std::span<const double> field, std::span<const double> weights, double p) {
    if (field.size() != weights.size()) throw std::invalid_argument("lp_norm: size mismatch");
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    double m = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i)
        if (weights[i] > 0.0) m = std::max(m, std::fabs(field[i]));
    if (m == 0.0) return 0.0;
    // ||f||_p = m * (sum w (|f|/m)^p)^{1/p}; the ratio powers live in [0,1]
    KahanSum acc;
    for (std::size_t i = 0; i < field.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        double r = std::fabs(field[i]) / m;
        acc.add(weights[i] * std::pow(r, p));
    }
    return m * std::pow(acc.value(), 1.0 / p);
}

double moment_sup(std::span<const double> field, std::span<const double> weights, double alpha) {
    if (!(alpha >= 1.0)) throw std::invalid_argument("moment_sup: alpha must be >= 1");
    double m = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i)
        if (weights[i] > 0.0) m = std::max(m, std::fabs(field[i]));
    if (m == 0.0) return 0.0;
    double p_max = 50.0 * (1.0 + std::log(static_cast<double>(field.size())));
    auto ratio = [&](double p) { return lp_norm(field, weights, p) / std::pow(p, 1.0 / alpha); };
    GoldenResult g = grid_then_golden_max(ratio, 1.0, p_max, 256, 1e-8, /*log_spaced=*/true);
    // the sup may sit at the left endpoint p = 1
    double at_one = ratio(1.0);
    return std::max(g.fx, at_one);
}

namespace detail {

double psi_norm_streaming(const AtomFold& fold, double alpha) {
    if (!(alpha >= 1.0)) throw std::invalid_argument("psi_norm: alpha must be >= 1");

    // Pass 1: sup |f|, and the smallest positive weight among points
    // attaining the sup (ties included within one ulp).
    double max_abs = 0.0;
    fold([&](double v, double w) {
        if (w > 0.0) max_abs = std::max(max_abs, v);
    });
    if (max_abs == 0.0) return 0.0;
    double w_min_at_max = std::numeric_limits<double>::infinity();
    fold([&](double v, double w) {
        if (w > 0.0 && v >= max_abs * (1.0 - 1e-15)) w_min_at_max = std::min(w_min_at_max, w);
    });

    const double log2 = std::log(2.0);
    // log of integral exp((|f|/r)^alpha) dmu, max-shifted
    auto log_integral = [&](double r) {
        double shift = std::pow(max_abs / r, alpha);
        KahanSum acc;
        fold([&](double v, double w) {
            if (w <= 0.0) return;
            double u = v > 0.0 ? std::pow(v / r, alpha) : 0.0;
            acc.add(w * std::exp(u - shift));
        });
        return shift + std::log(acc.value());
    };

    // Bracket: at r_hi every exponential is <= 2, so the integral is <= 2;
    // at r_lo the sup atom alone contributes w * (2/w) = 2 and the rest is
    // positive, so the integral exceeds 2.  Widen by doubling if rounding
    // spoils either sign.
    double r_hi = max_abs / std::pow(log2, 1.0 / alpha);
    double r_lo = max_abs / std::pow(std::log(2.0 / w_min_at_max), 1.0 / alpha);
    int guard = 0;
    while (log_integral(r_hi) > log2 && guard++ < 64) r_hi *= 2.0;
    guard = 0;
    while (log_integral(r_lo) < log2 && guard++ < 64) r_lo *= 0.5;

    // Bisection: the integral is continuous and strictly decreasing in r.
    double lo = r_lo, hi = r_hi;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double li = log_integral(mid);
        if (std::fabs(std::exp(li) - 2.0) <= 1e-10) return mid;
        if (li > log2)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-16 * hi) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

double psi_norm(std::span<const double> field, std::span<const double> weights, double alpha) {
    if (field.size() != weights.size()) throw std::invalid_argument("psi_norm: size mismatch");
    auto fold = [&](const detail::AtomVisitor& visit) {
        for (std::size_t i = 0; i < field.size(); ++i) visit(std::fabs(field[i]), weights[i]);
    };
    return detail::psi_norm_streaming(fold, alpha);
}

}  // namespace conc
