#pragma once

// Mean-field Blume-Capel building blocks: the tilted single-spin measure rho_beta,
// its cumulant generating function c_beta and the free-energy functional
//
//     G_{beta,K}(x) = beta K x^2 - c_beta(2 beta K x).
//
// Global minimizers of G on [-1,1] are the equilibrium magnetizations.

namespace bclab {

// A point (beta, K) in the open positive quadrant.
class ModelParams {
public:
    ModelParams(double beta, double kappa);

    double beta() const noexcept { return beta_; }
    double kappa() const noexcept { return kappa_; }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
    double beta_;
    double kappa_;
};

// Single spin in Lambda = {1, 0, -1}.
class SpinValue {
public:
    explicit SpinValue(int value);
    int value() const noexcept { return value_; }

private:
    int value_;
};

// Mass that rho_beta puts on each of +1 and -1: e^{-beta}/(1 + 2e^{-beta}) = 1/(e^beta + 2).
double spin_weight(double beta);

// c_beta(t) = log((1 + e^{-beta}(e^t + e^{-t})) / (1 + 2e^{-beta})).
// Even in t by construction and overflow-free for any finite t.
double cumulant(double beta, double t);

// d^order/dt^order c_beta(t) for order in {1,2,3,4}, closed form.
double cumulant_deriv(double beta, double t, int order);

double free_energy(const ModelParams& params, double x);

// order 1: 2 beta K (x - c'(2 beta K x)); order 2: 2 beta K - (2 beta K)^2 c''(2 beta K x).
double free_energy_deriv(const ModelParams& params, double x, int order);

} // namespace bclab
