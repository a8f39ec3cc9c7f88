#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rso/distributions.hpp"

namespace rso {

struct KsResult {
    double statistic = 0.0;  // sup |F_n - F|
    double p_value = 0.0;    // asymptotic Kolmogorov distribution
};

// One-sample Kolmogorov-Smirnov test of `samples` against `cdf`.
KsResult ks_test(const std::vector<double>& samples, const std::function<double(double)>& cdf);

// CDF of a parametric DistributionSpec (EmpiricalKde unsupported).
double distribution_cdf(const DistributionSpec& dist, double x);

// Maximum-likelihood fit of `family` to the samples. Closed forms where they
// exist; Nelder-Mead over the log-likelihood otherwise. Returns nothing when
// the family cannot represent the data (e.g. non-positive values for gamma)
// or the optimiser fails to converge to a usable spec.
std::optional<DistributionSpec> fit_mle(DistFamily family, const std::vector<double>& samples);

// Downhill simplex minimiser; returns the best point found.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x0, double scale = 0.5, int max_iter = 600);

double regularized_lower_gamma(double a, double x);  // P(a, x)

}  // namespace rso
