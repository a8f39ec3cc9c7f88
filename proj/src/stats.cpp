#include "rso/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rso/errors.hpp"
#include "rso/numerics.hpp"

namespace rso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sample_mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_var(const std::vector<double>& v, double mean) {
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Incomplete beta by continued fraction (Lentz), for beta/beta-prime CDFs.
double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-12) break;
    }
    return h;
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double log_pdf(const DistributionSpec& d, double x) {
    switch (d.family) {
        case DistFamily::Exponential:
            if (x < 0.0) return -kInf;
            return -std::log(d.p0) - x / d.p0;
        case DistFamily::Normal: {
            const double z = (x - d.p0) / d.p1;
            return -0.5 * z * z - std::log(d.p1) - 0.918938533204672742;  // log sqrt(2 pi)
        }
        case DistFamily::Gamma:
            if (x <= 0.0) return -kInf;
            return (d.p0 - 1.0) * std::log(x) - x / d.p1 - std::lgamma(d.p0) -
                   d.p0 * std::log(d.p1);
        case DistFamily::Uniform:
            if (x < d.p0 || x > d.p1) return -kInf;
            return -std::log(d.p1 - d.p0);
        case DistFamily::Triangular: {
            const double lo = d.p0, mode = d.p1, hi = d.p2;
            if (x < lo || x > hi) return -kInf;
            if (x < mode) return std::log(2.0 * (x - lo)) - std::log((hi - lo) * (mode - lo));
            if (x > mode) return std::log(2.0 * (hi - x)) - std::log((hi - lo) * (hi - mode));
            return std::log(2.0 / (hi - lo));
        }
        case DistFamily::Beta: {
            const double z = (x - d.p2) / d.p3;
            if (z <= 0.0 || z >= 1.0) return -kInf;
            return (d.p0 - 1.0) * std::log(z) + (d.p1 - 1.0) * std::log1p(-z) +
                   std::lgamma(d.p0 + d.p1) - std::lgamma(d.p0) - std::lgamma(d.p1) -
                   std::log(d.p3);
        }
        case DistFamily::BetaPrime: {
            const double z = (x - d.p2) / d.p3;
            if (z <= 0.0) return -kInf;
            return (d.p0 - 1.0) * std::log(z) - (d.p0 + d.p1) * std::log1p(z) +
                   std::lgamma(d.p0 + d.p1) - std::lgamma(d.p0) - std::lgamma(d.p1) -
                   std::log(d.p3);
        }
        case DistFamily::GenLogistic: {
            const double z = (x - d.p1) / d.p2;
            return std::log(d.p0) - z - (d.p0 + 1.0) * std::log1p(std::exp(-z)) -
                   std::log(d.p2);
        }
        case DistFamily::EmpiricalKde: return -kInf;
    }
    return -kInf;
}

double log_likelihood(const DistributionSpec& d, const std::vector<double>& samples) {
    double ll = 0.0;
    for (double x : samples) {
        const double lp = log_pdf(d, x);
        if (!std::isfinite(lp)) return -kInf;
        ll += lp;
    }
    return ll;
}

std::optional<DistributionSpec> fit_gamma_mle(const std::vector<double>& samples) {
    for (double x : samples)
        if (x <= 0.0) return std::nullopt;
    const double mean = sample_mean(samples);
    double mean_log = 0.0;
    for (double x : samples) mean_log += std::log(x);
    mean_log /= static_cast<double>(samples.size());
    const double s = std::log(mean) - mean_log;
    if (!(s > 0.0)) return std::nullopt;
    double k = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    for (int it = 0; it < 40; ++it) {
        const double f = std::log(k) - digamma(k) - s;
        const double fp = 1.0 / k - trigamma(k);
        const double step = f / fp;
        k -= step;
        if (k <= 0.0) {
            k = 1e-3;
            break;
        }
        if (std::abs(step) < 1e-12 * k) break;
    }
    return DistributionSpec::gamma(k, mean / k);
}

// Nelder-Mead MLE over transformed (unconstrained) parameters.
std::optional<DistributionSpec> fit_by_simplex(
    const std::vector<double>& samples, std::vector<double> x0,
    const std::function<std::optional<DistributionSpec>(const std::vector<double>&)>& decode) {
    auto objective = [&](const std::vector<double>& params) {
        const auto spec = decode(params);
        if (!spec) return 1e100;
        const double ll = log_likelihood(*spec, samples);
        return std::isfinite(ll) ? -ll : 1e100;
    };
    const std::vector<double> best = nelder_mead(objective, std::move(x0));
    auto spec = decode(best);
    if (!spec) return std::nullopt;
    if (!std::isfinite(log_likelihood(*spec, samples))) return std::nullopt;
    return spec;
}

}  // namespace

std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x0, double scale, int max_iter) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += scale;
    for (std::size_t i = 0; i <= n; ++i) values[i] = f(simplex[i]);

    auto order = [&] {
        std::vector<std::size_t> idx(n + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return values[a] < values[b];
        });
        std::vector<std::vector<double>> s2;
        std::vector<double> v2;
        for (std::size_t i : idx) {
            s2.push_back(simplex[i]);
            v2.push_back(values[i]);
        }
        simplex.swap(s2);
        values.swap(v2);
    };

    for (int it = 0; it < max_iter; ++it) {
        order();
        if (std::abs(values[n] - values[0]) < 1e-10 * (1.0 + std::abs(values[0]))) break;
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);

        auto blend = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j)
                p[j] = centroid[j] + t * (simplex[n][j] - centroid[j]);
            return p;
        };

        const std::vector<double> reflected = blend(-1.0);
        const double fr = f(reflected);
        if (fr < values[0]) {
            const std::vector<double> expanded = blend(-2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if (fr < values[n - 1]) {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            const std::vector<double> contracted = blend(0.5);
            const double fc = f(contracted);
            if (fc < values[n]) {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    order();
    return simplex[0];
}

KsResult ks_test(const std::vector<double>& samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw FitDataTooSmall("KS test needs samples");
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double F = cdf(sorted[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(std::abs(F - lo), std::abs(hi - F)));
    }
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_sf(std::sqrt(n) * d);
    return r;
}

double distribution_cdf(const DistributionSpec& d, double x) {
    switch (d.family) {
        case DistFamily::Exponential:
            return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x / d.p0);
        case DistFamily::Normal: {
            // Sampling resamples below the bound: a truncated normal.
            const double lb_mass = d.lower_bound > -1e300
                                       ? normal_cdf((d.lower_bound - d.p0) / d.p1)
                                       : 0.0;
            if (x < d.lower_bound) return 0.0;
            const double raw = normal_cdf((x - d.p0) / d.p1);
            return (raw - lb_mass) / (1.0 - lb_mass);
        }
        case DistFamily::Gamma:
            return x <= 0.0 ? 0.0 : regularized_lower_gamma(d.p0, x / d.p1);
        case DistFamily::Uniform:
            if (x <= d.p0) return 0.0;
            if (x >= d.p1) return 1.0;
            return (x - d.p0) / (d.p1 - d.p0);
        case DistFamily::Triangular: {
            const double lo = d.p0, mode = d.p1, hi = d.p2;
            if (x <= lo) return 0.0;
            if (x >= hi) return 1.0;
            if (x <= mode) return (x - lo) * (x - lo) / ((hi - lo) * (mode - lo));
            return 1.0 - (hi - x) * (hi - x) / ((hi - lo) * (hi - mode));
        }
        case DistFamily::Beta: {
            const double z = (x - d.p2) / d.p3;
            return regularized_incomplete_beta(d.p0, d.p1, z);
        }
        case DistFamily::BetaPrime: {
            const double z = (x - d.p2) / d.p3;
            if (z <= 0.0) return 0.0;
            return regularized_incomplete_beta(d.p0, d.p1, z / (1.0 + z));
        }
        case DistFamily::GenLogistic: {
            const double z = (x - d.p1) / d.p2;
            return std::pow(1.0 + std::exp(-z), -d.p0);
        }
        case DistFamily::EmpiricalKde:
            throw InvalidDistributionParams("no closed-form CDF for a KDE");
    }
    throw InvalidDistributionParams("unknown family");
}

double regularized_lower_gamma(double a, double x) {
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) {
        // series expansion
        double term = 1.0 / a;
        double sum = term;
        for (int k = 1; k < 500; ++k) {
            term *= x / (a + k);
            sum += term;
            if (term < sum * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    // continued fraction for the upper tail
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int k = 1; k < 500; ++k) {
        const double an = -k * (k - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    const double upper = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    return 1.0 - upper;
}

std::optional<DistributionSpec> fit_mle(DistFamily family, const std::vector<double>& samples) {
    if (samples.size() < 2) return std::nullopt;
    const double mean = sample_mean(samples);
    const double var = sample_var(samples, mean);
    const double sd = std::sqrt(var);
    const double lo = *std::min_element(samples.begin(), samples.end());
    const double hi = *std::max_element(samples.begin(), samples.end());
    const double span = hi - lo;
    if (!(span > 0.0)) return std::nullopt;

    switch (family) {
        case DistFamily::Exponential:
            if (lo < 0.0 || !(mean > 0.0)) return std::nullopt;
            return DistributionSpec::exponential(mean);
        case DistFamily::Normal:
            // Fit plain Gaussian moments; the spec keeps the bound far below
            // the data so the truncation mass is negligible.
            return DistributionSpec::normal(mean, sd, lo - 10.0 * span);
        case DistFamily::Gamma:
            return fit_gamma_mle(samples);
        case DistFamily::Uniform:
            return DistributionSpec::uniform(lo, hi);
        case DistFamily::Triangular: {
            // MLE for lo/hi sits at the sample extremes (widened a hair so the
            // extremes keep positive density); the mode is found by simplex.
            const double eps = 1e-6 * span;
            auto decode = [&](const std::vector<double>& p) -> std::optional<DistributionSpec> {
                const double mode = lo + (hi - lo) / (1.0 + std::exp(-p[0]));
                try {
                    return DistributionSpec::triangular(lo - eps, mode, hi + eps);
                } catch (const InvalidDistributionParams&) {
                    return std::nullopt;
                }
            };
            return fit_by_simplex(samples, {0.0}, decode);
        }
        case DistFamily::Beta: {
            const double eps = 1e-3 * span;
            const double b_lo = lo - eps, b_scale = span + 2.0 * eps;
            auto decode = [&](const std::vector<double>& p) -> std::optional<DistributionSpec> {
                try {
                    return DistributionSpec::beta(std::exp(p[0]), std::exp(p[1]), b_lo, b_scale);
                } catch (const InvalidDistributionParams&) {
                    return std::nullopt;
                }
            };
            // moment-based init on the rescaled data
            const double m = (mean - b_lo) / b_scale;
            const double v = var / (b_scale * b_scale);
            double a0 = 1.0, b0 = 1.0;
            if (v > 0.0 && v < m * (1.0 - m)) {
                const double c = m * (1.0 - m) / v - 1.0;
                a0 = std::max(0.05, m * c);
                b0 = std::max(0.05, (1.0 - m) * c);
            }
            return fit_by_simplex(samples, {std::log(a0), std::log(b0)}, decode);
        }
        case DistFamily::BetaPrime: {
            const double loc = lo - 1e-3 * span;
            auto decode = [&](const std::vector<double>& p) -> std::optional<DistributionSpec> {
                try {
                    return DistributionSpec::beta_prime(std::exp(p[0]), std::exp(p[1]), loc,
                                                        std::exp(p[2]));
                } catch (const InvalidDistributionParams&) {
                    return std::nullopt;
                }
            };
            return fit_by_simplex(samples, {0.5, 1.0, std::log(std::max(mean - loc, 1e-6))},
                                  decode);
        }
        case DistFamily::GenLogistic: {
            auto decode = [&](const std::vector<double>& p) -> std::optional<DistributionSpec> {
                try {
                    return DistributionSpec::gen_logistic(std::exp(p[0]), p[1], std::exp(p[2]));
                } catch (const InvalidDistributionParams&) {
                    return std::nullopt;
                }
            };
            return fit_by_simplex(
                samples, {0.0, mean, std::log(std::max(sd * 0.55, 1e-6))}, decode);
        }
        case DistFamily::EmpiricalKde:
            return std::nullopt;  // fitted via fit_kde, not MLE
    }
    return std::nullopt;
}

}  // namespace rso
