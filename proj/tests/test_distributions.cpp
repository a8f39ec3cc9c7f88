#include <cmath>

#include "doctest.h"
#include "rso/distributions.hpp"
#include "rso/errors.hpp"

using namespace rso;

namespace {

double sample_mean(const DistributionSpec& dist, int n, std::uint64_t seed) {
    RngStream rng(seed, 42);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += sample(dist, rng);
    return sum / n;
}

double sample_sd(const DistributionSpec& dist, int n, std::uint64_t seed) {
    RngStream rng(seed, 42);
    std::vector<double> xs(n);
    double sum = 0.0;
    for (double& x : xs) {
        x = sample(dist, rng);
        sum += x;
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (n - 1));
}

}  // namespace

TEST_CASE("exponential sample mean converges to the parameter") {
    const auto dist = DistributionSpec::exponential(1.0);
    const double mean = sample_mean(dist, 1000000, 7);
    CHECK(mean > 0.99);
    CHECK(mean < 1.01);
}

TEST_CASE("bounded normal never goes below the bound") {
    const auto dist = DistributionSpec::normal(2.0, 0.2, 0.01);
    RngStream rng(3, 42);
    for (int i = 0; i < 200000; ++i) CHECK(sample(dist, rng) >= 0.01);
}

TEST_CASE("tightly bounded normal keeps its mean via resampling, not clamping") {
    // bound at the mean: resampling keeps the upper half only
    const auto dist = DistributionSpec::normal(1.0, 0.5, 1.0);
    const double mean = sample_mean(dist, 200000, 11);
    // mean of a half-normal above 1.0: 1 + 0.5*sqrt(2/pi) = 1.3989
    CHECK(mean == doctest::Approx(1.3989).epsilon(0.01));
}

TEST_CASE("gamma(11.11, 0.45) has mean 5 and sd 1.5") {
    const auto dist = DistributionSpec::gamma(11.11, 0.45);
    CHECK(sample_mean(dist, 400000, 5) == doctest::Approx(5.0).epsilon(0.01));
    CHECK(sample_sd(dist, 400000, 5) == doctest::Approx(1.5).epsilon(0.02));
}

TEST_CASE("uniform, triangular, beta and logistic means match theory") {
    CHECK(sample_mean(DistributionSpec::uniform(3.0, 9.0), 200000, 1) ==
          doctest::Approx(6.0).epsilon(0.01));
    CHECK(sample_mean(DistributionSpec::triangular(0.0, 1.0, 5.0), 200000, 2) ==
          doctest::Approx(2.0).epsilon(0.01));
    const auto beta = DistributionSpec::beta(2.0, 3.0, 1.0, 10.0);
    CHECK(sample_mean(beta, 200000, 3) == doctest::Approx(beta.mean()).epsilon(0.01));
    const auto gl = DistributionSpec::gen_logistic(14.76, 0.74, 1.54);
    CHECK(sample_mean(gl, 400000, 4) == doctest::Approx(gl.mean()).epsilon(0.01));
    const auto bp = DistributionSpec::beta_prime(3.0, 4.0, 0.0, 2.0);
    CHECK(sample_mean(bp, 400000, 6) == doctest::Approx(bp.mean()).epsilon(0.02));
}

TEST_CASE("kde sampling recovers the training mean") {
    std::vector<double> train;
    RngStream rng(17, 0);
    for (int i = 0; i < 2000; ++i) train.push_back(rng.uniform(2.0, 8.0));
    const auto dist = DistributionSpec::empirical_kde(train, 0.1);
    const double train_mean = dist.mean();
    CHECK(sample_mean(dist, 1000000, 19) == doctest::Approx(train_mean).epsilon(0.01));
}

TEST_CASE("kde over a single atom is the kernel around it") {
    const auto dist = DistributionSpec::empirical_kde(std::vector<double>(50, 5.0), 0.1);
    CHECK(sample_mean(dist, 100000, 23) == doctest::Approx(5.0).epsilon(0.002));
    CHECK(sample_sd(dist, 100000, 23) == doctest::Approx(0.1).epsilon(0.03));
}

TEST_CASE("identical stream ids reproduce identical sequences") {
    RngStream a(99, 4), b(99, 4), c(99, 5);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next_u64();
        all_equal = all_equal && x == b.next_u64();
        any_diff = any_diff || x != c.next_u64();
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("interarrival targeting follows lambda = mu / rho") {
    CHECK(interarrival_for_occupancy(0.5, 1.0, 1) == doctest::Approx(2.0));
    CHECK(interarrival_for_occupancy(0.8, 5.0, 1) == doctest::Approx(6.25));
    CHECK(interarrival_for_occupancy(0.5, 1.0, 4) == doctest::Approx(0.5));
    CHECK_THROWS_AS(interarrival_for_occupancy(1.2, 1.0, 1), OccupancyOutOfRange);
    CHECK_THROWS_AS(interarrival_for_occupancy(0.0, 1.0, 1), OccupancyOutOfRange);
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(DistributionSpec::exponential(-1.0), InvalidDistributionParams);
    CHECK_THROWS_AS(DistributionSpec::uniform(4.0, 2.0), InvalidDistributionParams);
    CHECK_THROWS_AS(DistributionSpec::empirical_kde({1.0, 2.0}, 0.0), InvalidDistributionParams);
    CHECK_THROWS_AS(DistributionSpec::gamma(0.0, 1.0), InvalidDistributionParams);
}
