#include "bclab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bclab/errors.hpp"

namespace bclab {

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0)) throw ValidationError("QuadratureConfig.rel_tol must be > 0");
    if (!(tail_cut > 0.0)) throw ValidationError("QuadratureConfig.tail_cut must be > 0");
}

double integrate(const RealFn& f, double a, double b, const std::vector<double>& breaks,
                 double rel_tol, double abs_floor, const char* operation) {
    std::vector<double> pts{a};
    for (double x : breaks)
        if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());

    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] <= pts[i]) continue;
        double err = 0.0;
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            f, pts[i], pts[i + 1], 20, rel_tol * 0.1, &err);
        total_err += err;
    }
    if (!std::isfinite(total) || total_err > rel_tol * std::fabs(total) + abs_floor) {
        const double achieved = total != 0.0 ? total_err / std::fabs(total) : total_err;
        throw NumericError(operation, achieved);
    }
    return total;
}

GaussHermiteRule gauss_hermite(int n) {
    if (n < 1) throw UsageError("gauss_hermite: nodes must be >= 1");
    GaussHermiteRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const double pim4 = std::pow(std::numbers::pi, -0.25);
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * rule.nodes[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * rule.nodes[1];
        else
            z = 2.0 * z - rule.nodes[i - 2];
        double pp = 0.0;
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) <= 1e-15 * std::max(1.0, std::fabs(z))) {
                converged = true;
                break;
            }
        }
        if (!converged) throw NumericError("gauss_hermite: Newton iteration", std::fabs(z));
        rule.nodes[i] = z;
        rule.nodes[n - 1 - i] = -z;
        rule.weights[i] = 2.0 / (pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
}

const GaussHermiteRule& gauss_hermite_64() {
    static const GaussHermiteRule rule = gauss_hermite(64);
    return rule;
}

double tail_bound(const RealFn& h, double h_min, double cut, double x_start) {
    double x = std::max(x_start, 1e-300);
    for (int i = 0; i < 2000; ++i) {
        if (h(x) - h_min >= cut) return x;
        x *= 2.0;
    }
    throw NumericError("tail_bound: integrand exponent does not grow", x);
}

} // namespace bclab
