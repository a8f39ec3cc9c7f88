#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rso/rng.hpp"

namespace rso {

enum class DistFamily {
    Exponential,   // mean
    Normal,        // mean, sd, lower_bound (resample below bound)
    Gamma,         // shape, scale
    Uniform,       // lo, hi
    Triangular,    // lo, mode, hi
    Beta,          // a, b, loc, scale
    BetaPrime,     // a, b, loc, scale
    GenLogistic,   // c, loc, scale
    EmpiricalKde,  // training samples, gaussian bandwidth
};

const char* family_name(DistFamily f);
DistFamily family_from_name(const std::string& name);

// Declarative description of a sampling distribution; times are in minutes.
struct DistributionSpec {
    DistFamily family = DistFamily::Exponential;
    double p0 = 1.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double p3 = 0.0;
    double lower_bound = 0.0;  // Normal only; 0.01 for service/interarrival times
    // EmpiricalKde keeps its training set out-of-line so specs stay cheap to copy.
    std::shared_ptr<const std::vector<double>> samples;

    static DistributionSpec exponential(double mean);
    static DistributionSpec normal(double mean, double sd, double lower_bound = 0.01);
    static DistributionSpec gamma(double shape, double scale);
    static DistributionSpec uniform(double lo, double hi);
    static DistributionSpec triangular(double lo, double mode, double hi);
    static DistributionSpec beta(double a, double b, double loc, double scale);
    static DistributionSpec beta_prime(double a, double b, double loc, double scale);
    static DistributionSpec gen_logistic(double c, double loc, double scale);
    static DistributionSpec empirical_kde(std::vector<double> samples, double bandwidth);

    // Throws InvalidDistributionParams.
    void validate() const;

    // Analytic mean (training-sample mean for KDE).
    double mean() const;
};

double sample(const DistributionSpec& dist, RngStream& rng);

// Mean interarrival time that puts the target subsystem at occupancy rho:
// mean_service_time / (rho * n_servers). Throws OccupancyOutOfRange unless
// 0 < rho < 1.
double interarrival_for_occupancy(double rho, double mean_service_time, int n_servers);

}  // namespace rso
