#pragma once

#include <functional>
#include <vector>

namespace bclab {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    // Integrands e^{-h} are truncated where h exceeds its minimum by tail_cut.
    double tail_cut = 60.0;

    void validate() const;
};

using RealFn = std::function<double(double)>;

// Adaptive Gauss-Kronrod on [a, b] split at the given interior breakpoints.
// Throws NumericError when the estimated error exceeds rel_tol * |result|
// (with a floor of abs_floor).
double integrate(const RealFn& f, double a, double b, const std::vector<double>& breaks,
                 double rel_tol, double abs_floor = 0.0, const char* operation = "integrate");

struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights; // for the weight e^{-x^2}
};

// Gauss-Hermite rule with the given number of nodes (computed once and cached for 64).
const GaussHermiteRule& gauss_hermite_64();
GaussHermiteRule gauss_hermite(int nodes);

// Smallest X (doubling from x_start) with h(X) - h_min >= cut, assuming h is
// nondecreasing on [x_start, inf).
double tail_bound(const RealFn& h, double h_min, double cut, double x_start = 1.0);

} // namespace bclab
