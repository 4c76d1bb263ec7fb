#include "bclab/model.hpp"

#include <cmath>
#include <string>

#include "bclab/errors.hpp"

namespace bclab {

namespace {

void require_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw DomainError("beta must be a finite positive number, got " + std::to_string(beta));
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v))
        throw DomainError(std::string(name) + " must be finite");
}

// Below this |t| the direct hyperbolic forms cannot overflow.
constexpr double kDirectLimit = 30.0;

// Normalized pieces of D(t) = 1 + 2e^{-beta} cosh t:
//   w = 1/D, u = 2e^{-beta} cosh t / D, s = 2e^{-beta} sinh t / D, v = e^{-beta}/D.
// Every derivative of log D is a polynomial in these four.
struct Pieces {
    double w, u, s, v;
};

Pieces pieces(double beta, double t) {
    const double a = std::fabs(t);
    if (a <= kDirectLimit) {
        const double r = std::exp(-beta);
        const double d = 1.0 + 2.0 * r * std::cosh(a);
        return {1.0 / d, 2.0 * r * std::cosh(a) / d, 2.0 * r * std::sinh(t) / d, r / d};
    }
    const double shift = a > beta ? a - beta : 0.0;
    const double ep = std::exp(a - beta - shift);
    const double em = std::exp(-a - beta - shift);
    const double e0 = std::exp(-shift);
    const double ds = e0 + ep + em;
    const double sign = t < 0.0 ? -1.0 : 1.0;
    return {e0 / ds, (ep + em) / ds, sign * (ep - em) / ds, std::exp(-beta - shift) / ds};
}

} // namespace

ModelParams::ModelParams(double beta, double kappa) : beta_(beta), kappa_(kappa) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw DomainError("ModelParams: beta must be finite and > 0, got " + std::to_string(beta));
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw DomainError("ModelParams: K must be finite and > 0, got " + std::to_string(kappa));
}

SpinValue::SpinValue(int value) : value_(value) {
    if (value < -1 || value > 1)
        throw DomainError("SpinValue: spin must be one of -1, 0, 1, got " + std::to_string(value));
}

double spin_weight(double beta) {
    require_beta(beta);
    return 1.0 / (std::exp(beta) + 2.0);
}

double cumulant(double beta, double t) {
    require_beta(beta);
    require_finite(t, "cumulant: t");
    const double a = std::fabs(t);
    if (a <= kDirectLimit) {
        // 1 + e^{-b}(e^a + e^{-a}) = (1 + 2e^{-b}) (1 + 4q sinh^2(a/2)), q = 1/(e^b + 2)
        const double sh = std::sinh(0.5 * a);
        return std::log1p(4.0 * spin_weight(beta) * sh * sh);
    }
    const double shift = a > beta ? a - beta : 0.0;
    const double sum = std::exp(-shift) + std::exp(a - beta - shift) + std::exp(-a - beta - shift);
    return shift + std::log(sum) - std::log1p(2.0 * std::exp(-beta));
}

double cumulant_deriv(double beta, double t, int order) {
    require_beta(beta);
    require_finite(t, "cumulant_deriv: t");
    if (order < 1 || order > 4)
        throw UsageError("cumulant_deriv: order must be 1..4, got " + std::to_string(order));
    const auto [w, u, s, v] = pieces(beta, t);
    switch (order) {
    case 1:
        return s;
    case 2:
        return u * w + 4.0 * v * v;
    case 3:
        return s * (w * (w - u) - 8.0 * v * v);
    default:
        return u * w * (1.0 - 6.0 * u + 6.0 * u * u) + 16.0 * v * v * (1.0 - 3.0 * u + 3.0 * u * u)
               - 96.0 * v * v * v * v;
    }
}

double free_energy(const ModelParams& params, double x) {
    require_finite(x, "free_energy: x");
    const double bk = params.beta() * params.kappa();
    return bk * x * x - cumulant(params.beta(), 2.0 * bk * x);
}

double free_energy_deriv(const ModelParams& params, double x, int order) {
    require_finite(x, "free_energy_deriv: x");
    const double tbk = 2.0 * params.beta() * params.kappa();
    switch (order) {
    case 1:
        return tbk * (x - cumulant_deriv(params.beta(), tbk * x, 1));
    case 2:
        return tbk - tbk * tbk * cumulant_deriv(params.beta(), tbk * x, 2);
    default:
        throw UsageError("free_energy_deriv: order must be 1 or 2, got " + std::to_string(order));
    }
}

} // namespace bclab
