#include "rso/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rso/errors.hpp"
#include "rso/numerics.hpp"

namespace rso {

namespace {

double sample_exponential(double mean, RngStream& rng) {
    return -mean * std::log(rng.uniform01());
}

double sample_unit_normal(RngStream& rng) {
    // Marsaglia polar method; unconsumed second deviate is discarded so the
    // draw count per sample stays path-independent.
    double u, v, s;
    do {
        u = 2.0 * rng.uniform01() - 1.0;
        v = 2.0 * rng.uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
}

double sample_bounded_normal(double mean, double sd, double lb, RngStream& rng) {
    // Resample below the bound rather than clamping; clamping would put an
    // atom at the bound and shift the mean.
    for (;;) {
        const double x = mean + sd * sample_unit_normal(rng);
        if (x >= lb) return x;
    }
}

// Marsaglia-Tsang squeeze; shape < 1 handled with the boost trick.
double sample_gamma(double shape, double scale, RngStream& rng) {
    if (shape < 1.0) {
        const double u = rng.uniform01();
        return sample_gamma(shape + 1.0, scale, rng) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = sample_unit_normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return scale * d * v;
    }
}

double sample_triangular(double lo, double mode, double hi, RngStream& rng) {
    const double u = rng.uniform01();
    const double fc = (mode - lo) / (hi - lo);
    if (u < fc) return lo + std::sqrt(u * (hi - lo) * (mode - lo));
    return hi - std::sqrt((1.0 - u) * (hi - lo) * (hi - mode));
}

double sample_beta(double a, double b, RngStream& rng) {
    const double x = sample_gamma(a, 1.0, rng);
    const double y = sample_gamma(b, 1.0, rng);
    return x / (x + y);
}

double sample_kde(const std::vector<double>& samples, double bw, RngStream& rng) {
    // Gaussian-kernel KDE sampling: uniform training point plus kernel noise,
    // resampled while negative (lengths of stay cannot be negative).
    for (;;) {
        const double base = samples[static_cast<std::size_t>(rng.below(samples.size()))];
        const double x = base + bw * sample_unit_normal(rng);
        if (x >= 0.0) return x;
    }
}

}  // namespace

const char* family_name(DistFamily f) {
    switch (f) {
        case DistFamily::Exponential: return "exponential";
        case DistFamily::Normal: return "normal";
        case DistFamily::Gamma: return "gamma";
        case DistFamily::Uniform: return "uniform";
        case DistFamily::Triangular: return "triangular";
        case DistFamily::Beta: return "beta";
        case DistFamily::BetaPrime: return "beta_prime";
        case DistFamily::GenLogistic: return "gen_logistic";
        case DistFamily::EmpiricalKde: return "empirical_kde";
    }
    return "?";
}

DistFamily family_from_name(const std::string& name) {
    if (name == "exponential") return DistFamily::Exponential;
    if (name == "normal") return DistFamily::Normal;
    if (name == "gamma") return DistFamily::Gamma;
    if (name == "uniform") return DistFamily::Uniform;
    if (name == "triangular") return DistFamily::Triangular;
    if (name == "beta") return DistFamily::Beta;
    if (name == "beta_prime") return DistFamily::BetaPrime;
    if (name == "gen_logistic") return DistFamily::GenLogistic;
    if (name == "empirical_kde") return DistFamily::EmpiricalKde;
    throw InvalidDistributionParams("unknown distribution family: " + name);
}

DistributionSpec DistributionSpec::exponential(double mean) {
    DistributionSpec d;
    d.family = DistFamily::Exponential;
    d.p0 = mean;
    d.validate();
    return d;
}

DistributionSpec DistributionSpec::normal(double mean, double sd, double lower_bound) {
    DistributionSpec d;
    d.family = DistFamily::Normal;
    d.p0 = mean;
    d.p1 = sd;
    d.lower_bound = lower_bound;
    d.validate();
    return d;
}

DistributionSpec DistributionSpec::gamma(double shape, double scale) {
    DistributionSpec d;
    d.family = DistFamily::Gamma;
    d.p0 = shape;
    d.p1 = scale;
    d.validate();
    return d;
}

DistributionSpec DistributionSpec::uniform(double lo, double hi) {
    DistributionSpec d;
    d.family = DistFamily::Uniform;
    d.p0 = lo;
    d.p1 = hi;
    d.validate();
    return d;
}

DistributionSpec DistributionSpec::triangular(double lo, double mode, double hi) {
    DistributionSpec d;
    d.family = DistFamily::Triangular;
    d.p0 = lo;
    d.p1 = mode;
    d.p2 = hi;
    d.validate();
    return d;
}

DistributionSpec DistributionSpec::beta(double a, double b, double loc, double scale) {
    DistributionSpec d;
    d.family = DistFamily::Beta;
    d.p0 = a;
    d.p1 = b;
    d.p2 = loc;
    d.p3 = scale;
    d.validate();
    return d;
}

DistributionSpec DistributionSpec::beta_prime(double a, double b, double loc, double scale) {
    DistributionSpec d;
    d.family = DistFamily::BetaPrime;
    d.p0 = a;
    d.p1 = b;
    d.p2 = loc;
    d.p3 = scale;
    d.validate();
    return d;
}

DistributionSpec DistributionSpec::gen_logistic(double c, double loc, double scale) {
    DistributionSpec d;
    d.family = DistFamily::GenLogistic;
    d.p0 = c;
    d.p1 = loc;
    d.p2 = scale;
    d.validate();
    return d;
}

DistributionSpec DistributionSpec::empirical_kde(std::vector<double> samples, double bandwidth) {
    DistributionSpec d;
    d.family = DistFamily::EmpiricalKde;
    d.p0 = bandwidth;
    d.samples = std::make_shared<const std::vector<double>>(std::move(samples));
    d.validate();
    return d;
}

void DistributionSpec::validate() const {
    switch (family) {
        case DistFamily::Exponential:
            if (!(p0 > 0.0)) throw InvalidDistributionParams("exponential: mean must be > 0");
            break;
        case DistFamily::Normal:
            if (!(p1 > 0.0)) throw InvalidDistributionParams("normal: sd must be > 0");
            break;
        case DistFamily::Gamma:
            if (!(p0 > 0.0) || !(p1 > 0.0))
                throw InvalidDistributionParams("gamma: shape and scale must be > 0");
            break;
        case DistFamily::Uniform:
            if (!(p1 > p0)) throw InvalidDistributionParams("uniform: need hi > lo");
            break;
        case DistFamily::Triangular:
            if (!(p0 <= p1 && p1 <= p2 && p2 > p0))
                throw InvalidDistributionParams("triangular: need lo <= mode <= hi, hi > lo");
            break;
        case DistFamily::Beta:
            if (!(p0 > 0.0) || !(p1 > 0.0) || !(p3 > 0.0))
                throw InvalidDistributionParams("beta: shapes and scale must be > 0");
            break;
        case DistFamily::BetaPrime:
            if (!(p0 > 0.0) || !(p1 > 0.0) || !(p3 > 0.0))
                throw InvalidDistributionParams("beta_prime: shapes and scale must be > 0");
            break;
        case DistFamily::GenLogistic:
            if (!(p0 > 0.0) || !(p2 > 0.0))
                throw InvalidDistributionParams("gen_logistic: c and scale must be > 0");
            break;
        case DistFamily::EmpiricalKde:
            if (!(p0 > 0.0)) throw InvalidDistributionParams("empirical_kde: bandwidth must be > 0");
            if (!samples || samples->empty())
                throw InvalidDistributionParams("empirical_kde: training samples required");
            break;
    }
}

double DistributionSpec::mean() const {
    switch (family) {
        case DistFamily::Exponential: return p0;
        case DistFamily::Normal: return p0;  // bound at 0.01 shifts this negligibly
        case DistFamily::Gamma: return p0 * p1;
        case DistFamily::Uniform: return 0.5 * (p0 + p1);
        case DistFamily::Triangular: return (p0 + p1 + p2) / 3.0;
        case DistFamily::Beta: return p2 + p3 * p0 / (p0 + p1);
        case DistFamily::BetaPrime:
            if (p1 <= 1.0) throw InvalidDistributionParams("beta_prime: mean undefined for b <= 1");
            return p2 + p3 * p0 / (p1 - 1.0);
        case DistFamily::GenLogistic: return p1 + p2 * (kEulerGamma + digamma(p0));
        case DistFamily::EmpiricalKde:
            return std::accumulate(samples->begin(), samples->end(), 0.0) /
                   static_cast<double>(samples->size());
    }
    throw InvalidDistributionParams("unknown family");
}

double sample(const DistributionSpec& dist, RngStream& rng) {
    switch (dist.family) {
        case DistFamily::Exponential: return sample_exponential(dist.p0, rng);
        case DistFamily::Normal:
            return sample_bounded_normal(dist.p0, dist.p1, dist.lower_bound, rng);
        case DistFamily::Gamma: return sample_gamma(dist.p0, dist.p1, rng);
        case DistFamily::Uniform: return rng.uniform(dist.p0, dist.p1);
        case DistFamily::Triangular: return sample_triangular(dist.p0, dist.p1, dist.p2, rng);
        case DistFamily::Beta: return dist.p2 + dist.p3 * sample_beta(dist.p0, dist.p1, rng);
        case DistFamily::BetaPrime: {
            const double x = sample_gamma(dist.p0, 1.0, rng);
            const double y = sample_gamma(dist.p1, 1.0, rng);
            return dist.p2 + dist.p3 * (x / y);
        }
        case DistFamily::GenLogistic: {
            // Inverse CDF of the type-I generalised logistic.
            const double u = rng.uniform01();
            const double z = -std::log(std::pow(u, -1.0 / dist.p0) - 1.0);
            return dist.p1 + dist.p2 * z;
        }
        case DistFamily::EmpiricalKde: return sample_kde(*dist.samples, dist.p0, rng);
    }
    throw InvalidDistributionParams("unknown family");
}

double interarrival_for_occupancy(double rho, double mean_service_time, int n_servers) {
    if (!(rho > 0.0) || !(rho < 1.0))
        throw OccupancyOutOfRange("occupancy must lie strictly between 0 and 1, got " +
                                  std::to_string(rho));
    if (!(mean_service_time > 0.0) || n_servers < 1)
        throw InvalidDistributionParams("service time must be > 0 and servers >= 1");
    return mean_service_time / (rho * static_cast<double>(n_servers));
}

}  // namespace rso
