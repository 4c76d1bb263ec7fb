#pragma once
// Independent reference computations used only by the tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// Direct transcription of the cumulant, no overflow protection.
inline double naive_cumulant(double beta, double t) {
    const double r = std::exp(-beta);
    return std::log((1.0 + r * (std::exp(t) + std::exp(-t))) / (1.0 + 2.0 * r));
}

inline double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Five-point stencil for the first derivative.
inline double five_point(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}

// P(S_n = s), s = -n..n, by summing exp(-beta H) over all 3^n configurations.
inline std::vector<double> brute_force_law(int n, double beta, double K) {
    std::vector<double> w(static_cast<std::size_t>(2 * n + 1), 0.0);
    std::vector<int> spin(static_cast<std::size_t>(n), -1);
    std::int64_t total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    for (std::int64_t c = 0; c < total; ++c) {
        std::int64_t code = c;
        int S = 0, Q = 0;
        for (int i = 0; i < n; ++i) {
            const int v = static_cast<int>(code % 3) - 1;
            code /= 3;
            S += v;
            Q += v * v;
        }
        const double H = Q - K / n * static_cast<double>(S) * S;
        w[static_cast<std::size_t>(S + n)] += std::exp(-beta * H);
    }
    double Z = 0.0;
    for (double x : w) Z += x;
    for (double& x : w) x /= Z;
    return w;
}

// Golden-section minimization of f on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a, double b, int iters = 200) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    for (int i = 0; i < iters; ++i) {
        if (f(c) < f(d)) b = d;
        else a = c;
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    return 0.5 * (a + b);
}

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240601);
    return gen;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

} // namespace oracle
