#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bclab/model.hpp"
#include "bclab/quadrature.hpp"

namespace bclab {

inline constexpr int kDefaultNMax = 20000;

// Exact law of the total spin S_n in log space. Immutable once built.
class SpinLawExact {
public:
    SpinLawExact(int n, std::vector<double> log_weights);

    int n() const { return n_; }
    double log_Z() const { return log_Z_; }
    // Unnormalized log weight of S_n = s, |s| <= n.
    double log_weight(int s) const { return log_weights_[static_cast<std::size_t>(s + n_)]; }
    double probability(int s) const;
    double log_probability(int s) const { return log_weight(s) - log_Z_; }
    const std::vector<double>& log_weights() const { return log_weights_; }

private:
    int n_;
    std::vector<double> log_weights_; // index s + n
    double log_Z_;
};

SpinLawExact finite_size_law(int n, const ModelParams& params, int n_max = kDefaultNMax);

// E |S_n / n^{1-gamma}|^power.
double abs_moment(const SpinLawExact& law, double power, double gamma);

// P{ |S_n / n^{1-gamma}| >= a } and its logarithm.
double tail_mass(const SpinLawExact& law, double gamma, double a);
double log_tail_mass(const SpinLawExact& law, double gamma, double a);

// A bounded continuous test function with its non-smooth points listed.
struct TestFunction {
    std::function<double(double)> f;
    std::vector<double> kinks;

    static TestFunction constant(double c);
    static TestFunction clipped_abs(double j); // min(|x|, j)
    static TestFunction gaussian_bump(double center = 0.0, double width = 1.0);
    static TestFunction tanh_fn();
};

// E f(S_n/n^{1-g} + W/n^{1/2-g}) with W ~ N(0, 1/(2 beta K)) independent of S_n.
double hs_lhs(int n, const ModelParams& params, double gamma_bar, const TestFunction& f,
              const QuadratureConfig& quad = {}, int n_max = kDefaultNMax);
double hs_lhs(const SpinLawExact& law, const ModelParams& params, double gamma_bar,
              const TestFunction& f, const QuadratureConfig& quad = {});

// Ratio of integrals of f and 1 against exp(-n G(x / n^{g})).
double hs_rhs(int n, const ModelParams& params, double gamma_bar, const TestFunction& f,
              const QuadratureConfig& quad = {});

// CDF at x of the convolved law appearing in hs_lhs.
double hs_convolved_cdf(const SpinLawExact& law, const ModelParams& params, double gamma_bar, double x);

struct McEstimate {
    double mean;
    double std_error;
    long sweeps;
    std::uint64_t seed;
};

inline constexpr int kMcBatches = 20;

// Single-site Metropolis estimate of E|S_n/n|. burn_in defaults to 10% of sweeps.
McEstimate mc_estimate(int n, const ModelParams& params, long sweeps, std::optional<long> burn_in,
                       std::uint64_t seed);

} // namespace bclab
