#pragma once

#include <string_view>
#include <vector>

#include "bclab/model.hpp"

namespace bclab {

enum class PhaseRegion { SinglePhase, SecondOrderCurve, FirstOrderCurve, Coexistence, TricriticalPoint };

std::string_view to_string(PhaseRegion region);

// Tricritical data. The tricritical K is 3/(2 log 4), i.e. the second-order
// curve evaluated at beta_c; "3/2 log4" in the literature means 3/(2 log 4).
struct CriticalConstants {
    double beta_c;
    double K_at_beta_c;
    double ell_c; // K''(beta_c) - 5/(4 beta_c), conjectured second derivative of K_1 at beta_c
};

const CriticalConstants& critical_constants();

// Convenience: log 4.
double beta_critical();

// K(beta) = (e^beta + 2)/(4 beta): the second-order curve for beta <= beta_c and the
// spinodal curve beyond.
double second_order_K(double beta);

// order-th derivative of K(beta), 1 <= order <= 12, via Leibniz on e^beta * 1/(4 beta).
double second_order_K_deriv(double beta, int order);

// First-order curve K_1(beta) for beta > beta_c: the smallest K at which
// min over x in [1e-4, 1] of G_{beta,K}(x) reaches 0. Found by bisection on K over
// [K(beta)/2, K(beta)] to a bracket below 1e-12; results are memoized per beta.
double first_order_K(double beta);

// Minimum of G_{beta,K} over [delta, 1] and where it is attained; the inner problem
// of first_order_K, exposed for diagnostics.
struct RestrictedMinimum {
    double x;
    double value;
};
RestrictedMinimum restricted_minimum(const ModelParams& params, double delta = 1e-4);

PhaseRegion classify(const ModelParams& params);

struct ConjectureEstimates {
    std::vector<double> h;
    std::vector<double> K1_prime_est;  // (K_1(b_c + h) - K(b_c)) / h
    std::vector<double> K1_second_est; // (K_1(b_c + 2h) - 2 K_1(b_c + h) + K(b_c)) / h^2
    double K_prime_ref;                // K'(beta_c)
    double ell_c_ref;
};

// One-sided finite-difference estimates of K_1'(beta_c) and K_1''(beta_c).
// h_grid must be strictly decreasing with every entry >= 1e-4.
ConjectureEstimates verify_tricritical_conjectures(const std::vector<double>& h_grid);

// Forward third-difference estimate of K_1'''(beta_c), Richardson-combined over
// h = 1e-2 and 5e-3.
double first_order_K_third_deriv_estimate();

} // namespace bclab
