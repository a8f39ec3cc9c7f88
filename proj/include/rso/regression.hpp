#pragma once

#include <string>
#include <vector>

namespace rso {

inline constexpr const char* kUnitsOccupancy = "occupancy-fraction";
inline constexpr const char* kUnitsInstructionsPerArrival = "instructions-per-arrival";
inline constexpr const char* kUnitsInstructions1e4 = "instructions-x1e4";
inline constexpr const char* kUnitsSeconds = "seconds";

// Polynomial regression model: value = c0 + c1 x (+ c2 x^2), with the domain
// it was fitted on and its goodness of fit.
struct RegressionModel {
    int degree = 1;
    std::vector<double> coeffs;  // c0, c1, (c2)
    double fit_lo = 0.0;
    double fit_hi = 1.0;
    double r_squared = 0.0;
    double residual_sd = 0.0;
    std::string x_units;
    std::string y_units;

    double evaluate(double x) const {
        double acc = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) acc = coeffs[i] + x * acc;
        return acc;
    }

    // Evaluation outside the fit domain clamps x to the domain edge (the G/G
    // theta curves plateau below 50% occupancy; extrapolating the quadratic
    // would bend upward spuriously).
    double evaluate_clamped(double x) const {
        if (x < fit_lo) x = fit_lo;
        if (x > fit_hi) x = fit_hi;
        return evaluate(x);
    }
};

// Ordinary least squares polynomial fit. Throws SingularFit when the design
// matrix is rank deficient (degenerate x values or too few points).
RegressionModel fit_polynomial(const std::vector<double>& x, const std::vector<double>& y,
                               int degree);

}  // namespace rso
