#include "conc/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "conc/numerics.hpp"
#include "conc/rng.hpp"

namespace conc {

namespace {

// G7/K15 nodes on [0, 1]: {abscissa, gauss weight, kronrod weight}
constexpr double kGk[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

double gk15(const std::function<double(double)>& f, double a, double b, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double y0 = f(mid);
    double g7 = kGk[0][1] * y0;
    double k15 = kGk[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        double dx = half * kGk[i][0];
        double yi = f(mid + dx) + f(mid - dx);
        g7 += kGk[i][1] * yi;
        k15 += kGk[i][2] * yi;
    }
    g7 *= half;
    k15 *= half;
    err = std::pow(200.0 * std::fabs(g7 - k15), 1.5);
    return k15;
}

}  // namespace

double adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, int max_intervals) {
    struct Interval {
        double a, b, value, err;
    };
    std::vector<Interval> work;
    double err0;
    double v0 = gk15(f, a, b, err0);
    work.push_back({a, b, v0, err0});

    for (int round = 0; round < max_intervals; ++round) {
        double total_err = 0.0;
        for (const auto& iv : work) total_err += iv.err;
        if (total_err <= abs_tol) {
            KahanSum acc;
            for (const auto& iv : work) acc.add(iv.value);
            return acc.value();
        }
        // split the worst interval
        std::size_t worst = 0;
        for (std::size_t i = 1; i < work.size(); ++i)
            if (work[i].err > work[worst].err) worst = i;
        Interval iv = work[worst];
        double m = 0.5 * (iv.a + iv.b);
        if (!(m > iv.a && m < iv.b))
            throw std::runtime_error("quadrature: interval collapsed before reaching tolerance");
        double e1, e2;
        double v1 = gk15(f, iv.a, m, e1);
        double v2 = gk15(f, m, iv.b, e2);
        work[worst] = {iv.a, m, v1, e1};
        work.push_back({m, iv.b, v2, e2});
    }
    throw std::runtime_error("quadrature: tolerance not met after max subdivisions");
}

RestrictedMoments quad_restricted_moments(const DensitySpec& spec, double threshold) {
    if (threshold < 0.0) throw std::invalid_argument("quad_restricted_moments: threshold < 0");
    const double r = threshold;
    RestrictedMoments out;
    const double tol = 1e-12;

    switch (spec.family) {
        case DensityFamily::TwoSidedExponential: {
            // restricted to {|x| >= R}; symmetric, so integrate the right half
            double hi = r + 60.0;
            double mass2 = adaptive_gauss_kronrod([](double x) { return std::exp(-x); }, r, hi, tol);
            double sec2 =
                adaptive_gauss_kronrod([](double x) { return x * x * std::exp(-x); }, r, hi, tol);
            out.mass = mass2;  // 2 * (1/2) * integral
            out.mean = 0.0;    // odd integrand over a symmetric set
            out.second_moment = sec2 / mass2;
            out.variance = out.second_moment;
            break;
        }
        case DensityFamily::ExponentialRadial2d: {
            // s := (x1^2 + x2^2)/2 is standard exponential; A_R = {s >= R^2/2}
            double s0 = r * r / 2.0;
            double hi = s0 + 60.0;
            double mass = adaptive_gauss_kronrod([](double s) { return std::exp(-s); }, s0, hi, tol);
            double first =
                adaptive_gauss_kronrod([](double s) { return s * std::exp(-s); }, s0, hi, tol);
            out.mass = mass;
            out.mean = 0.0;  // of the coordinate x1
            // Var(x1) = E[x1^2 | A] = (1/2) E[x1^2 + x2^2 | A] = E[s | A]
            out.second_moment = first / mass;
            out.variance = out.second_moment;
            break;
        }
        case DensityFamily::Gaussian1d: {
            double hi = r + 14.0;
            auto phi = [](double x) {
                return std::exp(-x * x / 2.0) / 2.5066282746310005024157652848110;
            };
            double mass2 = adaptive_gauss_kronrod(phi, r, hi, tol);
            double sec2 = adaptive_gauss_kronrod([&](double x) { return x * x * phi(x); }, r, hi, tol);
            out.mass = 2.0 * mass2;
            out.mean = 0.0;
            out.second_moment = sec2 / mass2;
            out.variance = out.second_moment;
            break;
        }
        case DensityFamily::UniformCubeProduct: {
            if (r >= 1.0)
                throw std::invalid_argument("quad_restricted_moments: cube threshold >= 1 has zero mass");
            double mass2 = adaptive_gauss_kronrod([](double) { return 0.5; }, r, 1.0, tol);
            double sec2 =
                adaptive_gauss_kronrod([](double x) { return 0.5 * x * x; }, r, 1.0, tol);
            out.mass = 2.0 * mass2;
            out.mean = 0.0;
            out.second_moment = sec2 / mass2;
            out.variance = out.second_moment;
            break;
        }
    }
    return out;
}

double SampleCloud::dist(std::size_t i, std::size_t j) const {
    double acc = 0.0;
    for (int d = 0; d < dim; ++d) {
        double t = coord(i, d) - coord(j, d);
        acc += (metric == CloudMetric::Euclidean) ? t * t : std::fabs(t);
    }
    return (metric == CloudMetric::Euclidean) ? std::sqrt(acc) : acc;
}

FiniteMetricProbabilitySpace SampleCloud::to_space() const {
    if (n > kDenseMetricCap)
        throw std::invalid_argument("SampleCloud::to_space: N exceeds the dense-metric cap of " +
                                    std::to_string(kDenseMetricCap));
    FiniteMetricProbabilitySpace s;
    s.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.labels.push_back("s" + std::to_string(i));
    s.weights.assign(n, 1.0 / static_cast<double>(n));
    s.distance.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        s.distance[i * n + i] = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = dist(i, j);
            if (!(d > 0.0))
                throw std::runtime_error("SampleCloud::to_space: coincident sample points");
            s.distance[i * n + j] = d;
            s.distance[j * n + i] = d;
        }
    }
    s.fully_validated = true;  // Euclidean / ell^1 metrics hold by construction
    return s;
}

SampleCloud sample_space(const DensitySpec& spec, int dimension, std::size_t n,
                         std::uint64_t seed, CloudMetric metric) {
    if (n < 1 || n > kSampleCap)
        throw std::invalid_argument("sample_space: N out of range");
    int dim = dimension;
    if (spec.family == DensityFamily::Gaussian1d) dim = 1;
    if (spec.family == DensityFamily::ExponentialRadial2d) dim = 2;
    if (dim < 1) throw std::invalid_argument("sample_space: dimension must be >= 1");

    SampleCloud cloud;
    cloud.dim = dim;
    cloud.n = n;
    cloud.metric = metric;
    cloud.points.resize(n * static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < n; ++i) {
        SplitMix64 g(derive_stream(seed, i));
        switch (spec.family) {
            case DensityFamily::Gaussian1d:
                cloud.points[i] = g.next_normal();
                break;
            case DensityFamily::TwoSidedExponential:
                for (int d = 0; d < dim; ++d) {
                    double x = g.next_exponential();
                    cloud.points[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] =
                        (g.next_u64() & 1) ? x : -x;
                }
                break;
            case DensityFamily::ExponentialRadial2d: {
                double s = g.next_exponential();
                double a = 6.283185307179586 * g.next_unit();
                double rad = std::sqrt(2.0 * s);
                cloud.points[i * 2] = rad * std::cos(a);
                cloud.points[i * 2 + 1] = rad * std::sin(a);
                break;
            }
            case DensityFamily::UniformCubeProduct:
                for (int d = 0; d < dim; ++d)
                    cloud.points[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] =
                        g.next_range(-1.0, 1.0);
                break;
        }
    }
    return cloud;
}

SubsetMask gradient_level_mask(std::span<const double> gradfield, double level) {
    if (!(level > 0.0)) throw std::invalid_argument("gradient_level_mask: level must be positive");
    SubsetMask m;
    m.member.resize(gradfield.size());
    for (std::size_t i = 0; i < gradfield.size(); ++i) m.member[i] = gradfield[i] <= level ? 1 : 0;
    return m;
}

std::vector<CheckReport> check_two_sided_deviation(std::span<const double> field_values,
                                                   std::span<const double> gradfield, double l0,
                                                   double c, double sigma_sq,
                                                   std::span<const double> t_grid) {
    std::size_t n = field_values.size();
    if (gradfield.size() != n)
        throw std::invalid_argument("check_two_sided_deviation: field/gradient size mismatch");
    if (!(l0 > 0.0)) throw std::invalid_argument("check_two_sided_deviation: L0 must be positive");

    double frac_ge_l0 = 0.0;
    for (double g : gradfield) frac_ge_l0 += (g >= l0) ? 1.0 : 0.0;
    frac_ge_l0 /= static_cast<double>(n);
    if (frac_ge_l0 > 0.5)
        throw std::invalid_argument(
            "check_two_sided_deviation: hypothesis mu{|grad f| >= L0} <= 1/2 is violated");

    std::vector<double> sorted_f(field_values.begin(), field_values.end());
    std::sort(sorted_f.begin(), sorted_f.end());
    std::vector<double> sorted_g(gradfield.begin(), gradfield.end());
    std::sort(sorted_g.begin(), sorted_g.end());

    // empirical (mu x mu){|f(x) - f(y)| >= t} via the sorted order
    auto pair_tail = [&](double t) {
        if (t <= 0.0) return 1.0;
        std::size_t count_le = 0;
        for (std::size_t i = 0; i < n; ++i) {
            auto it = std::upper_bound(sorted_f.begin(), sorted_f.end(), sorted_f[i] - t);
            count_le += static_cast<std::size_t>(it - sorted_f.begin());
        }
        return 2.0 * static_cast<double>(count_le) / (static_cast<double>(n) * static_cast<double>(n));
    };
    auto grad_tail = [&](double level) {  // mu{|grad f| > level}
        auto it = std::upper_bound(sorted_g.begin(), sorted_g.end(), level);
        return static_cast<double>(sorted_g.end() - it) / static_cast<double>(n);
    };

    std::vector<CheckReport> out;
    for (double t : t_grid) {
        double p_hat = pair_tail(t);
        double guard = 3.9 * std::sqrt(std::max(p_hat * (1.0 - p_hat), 1e-12) / static_cast<double>(n));
        double bound = std::numeric_limits<double>::infinity();
        double level = l0;
        for (int step = 0; step < 160; ++step) {  // log-spaced L grid
            double term = std::exp(-t * t / (c * sigma_sq * level * level)) + grad_tail(level);
            bound = std::min(bound, term);
            level *= 1.06;
            if (grad_tail(level) == 0.0 && step > 40) {
                bound = std::min(bound, std::exp(-t * t / (c * sigma_sq * level * level)));
                break;
            }
        }
        bound *= 2.0;
        CheckReport rep = make_check("thm-7.1-two-sided-deviation(t=" + std::to_string(t) + ")",
                                     std::max(0.0, p_hat - guard), bound, c, 0.0,
                                     "empirical tail " + std::to_string(p_hat) + ", 3.9-sigma guard " +
                                         std::to_string(guard));
        out.push_back(std::move(rep));
    }
    return out;
}

std::vector<double> convex_clip_extension(const ConvexOracle& oracle,
                                          std::span<const double> eval_points, int dim,
                                          double lip_budget) {
    if (dim < 1) throw std::invalid_argument("convex_clip_extension: dimension must be >= 1");
    if (eval_points.size() % static_cast<std::size_t>(dim) != 0)
        throw std::invalid_argument("convex_clip_extension: point array is not N x dim");
    std::size_t n = eval_points.size() / static_cast<std::size_t>(dim);
    if (n == 0) throw std::invalid_argument("convex_clip_extension: no eval points");

    auto point = [&](std::size_t i) {
        return eval_points.subspan(i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
    };

    std::vector<double> values(n);
    std::vector<std::vector<double>> grads(n);
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = oracle.value(point(i));
        grads[i] = oracle.subgradient(point(i));
        if (grads[i].size() != static_cast<std::size_t>(dim))
            throw std::invalid_argument("convex_clip_extension: subgradient dimension mismatch");
    }

    // spot-check the subgradient inequality f(y) >= f(x) + <v_x, y - x>
    SplitMix64 rng(0xc0feeULL);
    std::size_t checks = std::min<std::size_t>(4 * n, 2000);
    for (std::size_t t = 0; t < checks; ++t) {
        std::size_t x = rng.next_index(n), y = rng.next_index(n);
        double lin = values[x];
        for (int d = 0; d < dim; ++d)
            lin += grads[x][static_cast<std::size_t>(d)] *
                   (point(y)[static_cast<std::size_t>(d)] - point(x)[static_cast<std::size_t>(d)]);
        if (values[y] < lin - 1e-9 * (1.0 + std::fabs(values[y])))
            throw std::invalid_argument(
                "convex_clip_extension: oracle violates the subgradient inequality");
    }

    std::vector<std::size_t> anchors;
    for (std::size_t i = 0; i < n; ++i) {
        double norm2 = 0.0;
        for (int d = 0; d < dim; ++d)
            norm2 += grads[i][static_cast<std::size_t>(d)] * grads[i][static_cast<std::size_t>(d)];
        if (std::sqrt(norm2) <= lip_budget) anchors.push_back(i);
    }
    if (anchors.empty())
        throw std::invalid_argument("convex_clip_extension: empty anchor set (no point has "
                                    "|subgradient| <= L)");

    std::vector<double> g(n, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a : anchors) {
            double tangent = values[a];
            for (int d = 0; d < dim; ++d)
                tangent += grads[a][static_cast<std::size_t>(d)] *
                           (point(i)[static_cast<std::size_t>(d)] - point(a)[static_cast<std::size_t>(d)]);
            g[i] = std::max(g[i], tangent);
        }
    }
    return g;
}

}  // namespace conc
