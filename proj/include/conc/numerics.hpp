#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace conc {

// Compensated (Kahan) accumulator.  Used wherever the spec demands that a
// sum of dyadic weights comes out exact (restriction masses, variances).
class KahanSum {
  public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double kahan_sum(std::span<const double> xs) {
    KahanSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

// log(sum_i w_i * exp(u_i)) evaluated with the max-shifted exponent so that
// exponents up to ~700 are safe.  Zero-weight terms are skipped.
double log_sum_exp_weighted(std::span<const double> log_scale_free_terms,
                            std::span<const double> weights);

// Golden-section maximization of a unimodal-ish function on [a, b].
// Returns the located maximizer; use after a coarse bracketing scan.
struct GoldenResult {
    double x;
    double fx;
};
GoldenResult golden_max(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_iter = 200);

// Coarse log-spaced grid scan followed by golden refinement around the best
// node.  Robust against mild multimodality of p -> ||f||_p / p^{1/alpha} or
// t -> 2 log MGF / t^2 ratios.
GoldenResult grid_then_golden_max(const std::function<double(double)>& f, double a,
                                  double b, int grid_points, double rel_tol,
                                  bool log_spaced);

// Exact rational arithmetic on int64 numerator/denominator, enough for the
// hypercube-chain quantities where acceptance demands zero tolerance.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
};

}  // namespace conc
