#include "rso/regression.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "rso/errors.hpp"

namespace rso {

RegressionModel fit_polynomial(const std::vector<double>& x, const std::vector<double>& y,
                               int degree) {
    if (degree < 0 || degree > 8) throw SingularFit("unsupported polynomial degree");
    if (x.size() != y.size()) throw SingularFit("x and y lengths differ");
    const Eigen::Index n = static_cast<Eigen::Index>(x.size());
    const Eigen::Index p = degree + 1;
    if (n < p) throw SingularFit("fewer points than coefficients");

    Eigen::MatrixXd design(n, p);
    Eigen::VectorXd response(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double pow_x = 1.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            design(i, j) = pow_x;
            pow_x *= x[static_cast<std::size_t>(i)];
        }
        response(i) = y[static_cast<std::size_t>(i)];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < p) throw SingularFit("design matrix rank deficient");
    const Eigen::VectorXd beta = qr.solve(response);

    const Eigen::VectorXd residual = response - design * beta;
    const double ss_res = residual.squaredNorm();
    const double mean_y = response.mean();
    const double ss_tot = (response.array() - mean_y).square().sum();

    RegressionModel model;
    model.degree = degree;
    model.coeffs.assign(beta.data(), beta.data() + p);
    model.fit_lo = *std::min_element(x.begin(), x.end());
    model.fit_hi = *std::max_element(x.begin(), x.end());
    model.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res < 1e-12 ? 1.0 : 0.0);
    model.residual_sd = n > p ? std::sqrt(ss_res / static_cast<double>(n - p)) : 0.0;
    return model;
}

}  // namespace rso
