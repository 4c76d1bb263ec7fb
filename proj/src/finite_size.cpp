#include "bclab/finite_size.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "bclab/errors.hpp"
#include "bclab/minima.hpp"

namespace bclab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& v) {
    double mx = kNegInf;
    for (double x : v) mx = std::max(mx, x);
    if (mx == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double x : v) acc += std::exp(x - mx);
    return mx + std::log(acc);
}

// Neumaier-compensated sum of terms taken in descending magnitude.
double stable_sum(std::vector<double> terms) {
    std::sort(terms.begin(), terms.end(), [](double a, double b) { return std::fabs(a) > std::fabs(b); });
    double sum = 0.0;
    double comp = 0.0;
    for (double t : terms) {
        const double s = sum + t;
        if (std::fabs(sum) >= std::fabs(t))
            comp += (sum - s) + t;
        else
            comp += (t - s) + sum;
        sum = s;
    }
    return sum + comp;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

void check_gamma(double gamma, const char* op) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw DomainError(std::string(op) + ": gamma must lie in [0,1), got " + std::to_string(gamma));
}

struct HsScales {
    double mean_step; // 1 / n^{1-g}
    double sigma;     // (2 beta K)^{-1/2} / n^{1/2-g}
};

HsScales hs_scales(int n, const ModelParams& params, double gamma_bar) {
    const double nd = n;
    return {std::pow(nd, gamma_bar - 1.0),
            1.0 / std::sqrt(2.0 * params.beta() * params.kappa()) * std::pow(nd, gamma_bar - 0.5)};
}

// E f(mu + sigma Z), Z standard normal.
double gaussian_expectation(const TestFunction& tf, double mu, double sigma, const QuadratureConfig& quad) {
    if (tf.kinks.empty()) {
        const auto& gh = gauss_hermite_64();
        double acc = 0.0;
        for (std::size_t i = 0; i < gh.nodes.size(); ++i)
            acc += gh.weights[i] * tf.f(mu + std::numbers::sqrt2 * sigma * gh.nodes[i]);
        return acc / std::sqrt(std::numbers::pi);
    }
    const double half_width = std::sqrt(2.0 * quad.tail_cut) * sigma;
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    auto integrand = [&](double x) {
        const double z = (x - mu) / sigma;
        return tf.f(x) * norm * std::exp(-0.5 * z * z);
    };
    return integrate(integrand, mu - half_width, mu + half_width, tf.kinks, quad.rel_tol, quad.rel_tol,
                     "hs_lhs: Gaussian integral");
}

} // namespace

SpinLawExact::SpinLawExact(int n, std::vector<double> log_weights)
    : n_(n), log_weights_(std::move(log_weights)) {
    if (n < 1) throw DomainError("SpinLawExact: n must be >= 1");
    if (log_weights_.size() != static_cast<std::size_t>(2 * n + 1))
        throw UsageError("SpinLawExact: expected 2n+1 log weights");
    log_Z_ = log_sum_exp(log_weights_);
}

double SpinLawExact::probability(int s) const {
    if (s < -n_ || s > n_) return 0.0;
    return std::exp(log_probability(s));
}

SpinLawExact finite_size_law(int n, const ModelParams& params, int n_max) {
    if (n < 1) throw DomainError("finite_size_law: n must be >= 1, got " + std::to_string(n));
    if (n > n_max)
        throw ResourceError("finite_size_law: n = " + std::to_string(n) + " exceeds n_max = "
                            + std::to_string(n_max) + "; use mc_estimate for larger systems");
    const double beta = params.beta();
    const double coupling = beta * params.kappa() / n;
    std::vector<double> lf(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) lf[i] = std::lgamma(i + 1.0);

    std::vector<double> lw(static_cast<std::size_t>(2 * n + 1), kNegInf);
#pragma omp parallel for schedule(dynamic, 16)
    for (int s = 0; s <= n; ++s) {
        double mx = kNegInf;
        for (int occ = s; occ <= n; occ += 2) {
            const int np = (occ + s) / 2;
            const int nm = (occ - s) / 2;
            mx = std::max(mx, -lf[np] - lf[nm] - lf[n - occ] - beta * occ);
        }
        double acc = 0.0;
        for (int occ = s; occ <= n; occ += 2) {
            const int np = (occ + s) / 2;
            const int nm = (occ - s) / 2;
            acc += std::exp(-lf[np] - lf[nm] - lf[n - occ] - beta * occ - mx);
        }
        const double value = lf[n] + mx + std::log(acc) + coupling * static_cast<double>(s) * s;
        lw[static_cast<std::size_t>(n + s)] = value;
        lw[static_cast<std::size_t>(n - s)] = value;
    }
    return SpinLawExact(n, std::move(lw));
}

double abs_moment(const SpinLawExact& law, double power, double gamma) {
    if (!(power > 0.0)) throw DomainError("abs_moment: power must be > 0");
    check_gamma(gamma, "abs_moment");
    const int n = law.n();
    const double scale = std::pow(static_cast<double>(n), gamma - 1.0);
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(2 * n));
    for (int s = -n; s <= n; ++s) {
        if (s == 0) continue;
        terms.push_back(std::pow(std::abs(s) * scale, power) * law.probability(s));
    }
    return stable_sum(std::move(terms));
}

double log_tail_mass(const SpinLawExact& law, double gamma, double a) {
    if (!(a >= 0.0)) throw DomainError("tail_mass: threshold must be >= 0");
    check_gamma(gamma, "tail_mass");
    const int n = law.n();
    const double scale = std::pow(static_cast<double>(n), gamma - 1.0);
    std::vector<double> selected;
    for (int s = -n; s <= n; ++s) {
        if (std::abs(s) * scale >= a) selected.push_back(law.log_weight(s));
    }
    if (selected.empty()) return kNegInf;
    return std::min(0.0, log_sum_exp(selected) - law.log_Z());
}

double tail_mass(const SpinLawExact& law, double gamma, double a) {
    return std::exp(log_tail_mass(law, gamma, a));
}

TestFunction TestFunction::constant(double c) {
    return {[c](double) { return c; }, {}};
}

TestFunction TestFunction::clipped_abs(double j) {
    return {[j](double x) { return std::min(std::fabs(x), j); }, {-j, 0.0, j}};
}

TestFunction TestFunction::gaussian_bump(double center, double width) {
    return {[center, width](double x) {
                const double z = (x - center) / width;
                return std::exp(-0.5 * z * z);
            },
            {}};
}

TestFunction TestFunction::tanh_fn() {
    return {[](double x) { return std::tanh(x); }, {}};
}

double hs_lhs(const SpinLawExact& law, const ModelParams& params, double gamma_bar, const TestFunction& f,
              const QuadratureConfig& quad) {
    check_gamma(gamma_bar, "hs_lhs");
    quad.validate();
    const int n = law.n();
    const HsScales sc = hs_scales(n, params, gamma_bar);
    std::vector<double> terms(static_cast<std::size_t>(2 * n + 1), 0.0);
    for (int s = -n; s <= n; ++s) {
        const double p = law.probability(s);
        if (p == 0.0) continue;
        terms[static_cast<std::size_t>(s + n)] = p * gaussian_expectation(f, s * sc.mean_step, sc.sigma, quad);
    }
    return stable_sum(std::move(terms));
}

double hs_lhs(int n, const ModelParams& params, double gamma_bar, const TestFunction& f,
              const QuadratureConfig& quad, int n_max) {
    return hs_lhs(finite_size_law(n, params, n_max), params, gamma_bar, f, quad);
}

double hs_rhs(int n, const ModelParams& params, double gamma_bar, const TestFunction& f,
              const QuadratureConfig& quad) {
    if (n < 1) throw DomainError("hs_rhs: n must be >= 1");
    check_gamma(gamma_bar, "hs_rhs");
    quad.validate();
    const double nd = n;
    const double stretch = std::pow(nd, gamma_bar);
    const auto mins = local_minima(params, 0.0, 1.0);
    double g_min = 0.0;
    for (const auto& m : mins) g_min = std::min(g_min, m.value);

    auto exponent = [&](double x) { return nd * free_energy(params, x / stretch); };
    const double n_g_min = nd * g_min;
    const double X = tail_bound(exponent, n_g_min, quad.tail_cut, stretch);

    std::vector<double> breaks{0.0};
    for (const auto& m : mins) {
        breaks.push_back(m.x * stretch);
        breaks.push_back(-m.x * stretch);
    }
    auto weight = [&](double x) { return std::exp(-(exponent(x) - n_g_min)); };
    const double denom = integrate(weight, -X, X, breaks, quad.rel_tol, 0.0, "hs_rhs: normalization");
    for (double k : f.kinks) breaks.push_back(k);
    const double numer = integrate([&](double x) { return f.f(x) * weight(x); }, -X, X, breaks, quad.rel_tol,
                                   quad.rel_tol * denom, "hs_rhs: numerator");
    return numer / denom;
}

double hs_convolved_cdf(const SpinLawExact& law, const ModelParams& params, double gamma_bar, double x) {
    check_gamma(gamma_bar, "hs_convolved_cdf");
    const int n = law.n();
    const HsScales sc = hs_scales(n, params, gamma_bar);
    std::vector<double> terms(static_cast<std::size_t>(2 * n + 1), 0.0);
    for (int s = -n; s <= n; ++s) {
        const double p = law.probability(s);
        if (p == 0.0) continue;
        terms[static_cast<std::size_t>(s + n)] = p * normal_cdf((x - s * sc.mean_step) / sc.sigma);
    }
    return stable_sum(std::move(terms));
}

McEstimate mc_estimate(int n, const ModelParams& params, long sweeps, std::optional<long> burn_in,
                       std::uint64_t seed) {
    if (n < 1) throw DomainError("mc_estimate: n must be >= 1");
    if (sweeps < kMcBatches)
        throw UsageError("mc_estimate: sweeps must be >= " + std::to_string(kMcBatches)
                         + " (one per batch), got " + std::to_string(sweeps));
    const long warmup = burn_in.value_or(sweeps / 10);
    if (warmup < 0) throw UsageError("mc_estimate: burn_in must be >= 0");

    std::mt19937_64 rng(seed);
    auto uniform01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto site = [&rng, n] {
        return static_cast<int>((static_cast<unsigned __int128>(rng()) * static_cast<unsigned>(n)) >> 64);
    };

    const double beta = params.beta();
    const double k_over_n = params.kappa() / n;
    std::vector<int> spin(static_cast<std::size_t>(n));
    long total = 0;
    for (auto& w : spin) {
        w = static_cast<int>(rng() % 3) - 1;
        total += w;
    }

    auto sweep = [&] {
        for (int step = 0; step < n; ++step) {
            const int i = site();
            const int old_value = spin[static_cast<std::size_t>(i)];
            const int shift = 1 + static_cast<int>(rng() & 1u);
            const int new_value = (old_value + 1 + shift) % 3 - 1;
            const long new_total = total + new_value - old_value;
            const double dH = static_cast<double>(new_value * new_value - old_value * old_value)
                              - k_over_n * (static_cast<double>(new_total) * new_total
                                            - static_cast<double>(total) * total);
            if (dH <= 0.0 || uniform01() < std::exp(-beta * dH)) {
                spin[static_cast<std::size_t>(i)] = new_value;
                total = new_total;
            }
        }
    };

    for (long t = 0; t < warmup; ++t) sweep();
    const long batch = sweeps / kMcBatches;
    std::vector<double> batch_means(kMcBatches, 0.0);
    for (int b = 0; b < kMcBatches; ++b) {
        double acc = 0.0;
        for (long t = 0; t < batch; ++t) {
            sweep();
            acc += std::fabs(static_cast<double>(total)) / n;
        }
        batch_means[static_cast<std::size_t>(b)] = acc / batch;
    }
    double mean = 0.0;
    for (double m : batch_means) mean += m;
    mean /= kMcBatches;
    double var = 0.0;
    for (double m : batch_means) var += (m - mean) * (m - mean);
    var /= (kMcBatches - 1);
    return {mean, std::sqrt(var / kMcBatches), sweeps, seed};
}

} // namespace bclab
