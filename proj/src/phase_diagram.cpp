#include "bclab/phase_diagram.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "bclab/errors.hpp"
#include "bclab/minima.hpp"

namespace bclab {

namespace {

constexpr double kCurveTol = 1e-12;
constexpr double kRestrictDelta = 1e-4;
constexpr int kMaxKOrder = 12;

class FirstOrderMemo {
public:
    bool find(double beta, double& out) const {
        std::shared_lock lock(mutex_);
        auto it = table_.find(std::bit_cast<std::uint64_t>(beta));
        if (it == table_.end()) return false;
        out = it->second;
        return true;
    }
    void store(double beta, double value) {
        std::unique_lock lock(mutex_);
        table_[std::bit_cast<std::uint64_t>(beta)] = value;
    }

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::uint64_t, double> table_;
};

FirstOrderMemo& memo() {
    static FirstOrderMemo instance;
    return instance;
}

double solve_first_order_K(double beta) {
    const double k_spinodal = second_order_K(beta);
    auto phi = [beta](double kappa) {
        return restricted_minimum(ModelParams(beta, kappa), kRestrictDelta).value;
    };

    double hi = k_spinodal;
    if (phi(hi) > 0.0) throw NumericError("first_order_K: no negative minimum at the spinodal", phi(hi));
    double lo = 0.5 * k_spinodal;
    for (int i = 0; phi(lo) <= 0.0; ++i) {
        if (i > 60) throw NumericError("first_order_K: could not bracket K_1 from below", lo);
        hi = lo;
        lo *= 0.5;
    }
    while (hi - lo > kCurveTol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (phi(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::string_view to_string(PhaseRegion region) {
    switch (region) {
    case PhaseRegion::SinglePhase: return "SinglePhase";
    case PhaseRegion::SecondOrderCurve: return "SecondOrderCurve";
    case PhaseRegion::FirstOrderCurve: return "FirstOrderCurve";
    case PhaseRegion::Coexistence: return "Coexistence";
    case PhaseRegion::TricriticalPoint: return "TricriticalPoint";
    }
    return "?";
}

double beta_critical() { return std::log(4.0); }

const CriticalConstants& critical_constants() {
    static const CriticalConstants constants = [] {
        const double bc = beta_critical();
        return CriticalConstants{bc, second_order_K(bc), second_order_K_deriv(bc, 2) - 5.0 / (4.0 * bc)};
    }();
    return constants;
}

double second_order_K(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw DomainError("second_order_K: beta must be > 0, got " + std::to_string(beta));
    return (std::exp(beta) + 2.0) / (4.0 * beta);
}

double second_order_K_deriv(double beta, int order) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw DomainError("second_order_K_deriv: beta must be > 0, got " + std::to_string(beta));
    if (order < 1 || order > kMaxKOrder)
        throw UsageError("second_order_K_deriv: order must be in 1.." + std::to_string(kMaxKOrder)
                         + ", got " + std::to_string(order));
    // d^i (1/beta) = (-1)^i i! / beta^{i+1}
    auto inv_deriv = [beta](int i) {
        double v = 1.0 / beta;
        for (int k = 1; k <= i; ++k) v *= -static_cast<double>(k) / beta;
        return v;
    };
    double leibniz = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= order; ++i) {
        leibniz += binom * inv_deriv(i);
        binom = binom * (order - i) / (i + 1);
    }
    return std::exp(beta) * leibniz / 4.0 + inv_deriv(order) / 2.0;
}

RestrictedMinimum restricted_minimum(const ModelParams& params, double delta) {
    const auto mins = local_minima(params, delta, 1.0);
    RestrictedMinimum best{delta, std::numeric_limits<double>::infinity()};
    for (const auto& m : mins) {
        if (m.value < best.value) best = {m.x, m.value};
    }
    return best;
}

double first_order_K(double beta) {
    if (!(beta > beta_critical()) || !std::isfinite(beta))
        throw DomainError("first_order_K: requires beta > beta_c = log 4, got " + std::to_string(beta));
    double cached;
    if (memo().find(beta, cached)) return cached;
    const double value = solve_first_order_K(beta);
    memo().store(beta, value);
    return value;
}

PhaseRegion classify(const ModelParams& params) {
    const double beta = params.beta();
    const double kappa = params.kappa();
    const auto& cc = critical_constants();
    if (std::fabs(beta - cc.beta_c) <= kCurveTol && std::fabs(kappa - cc.K_at_beta_c) <= kCurveTol)
        return PhaseRegion::TricriticalPoint;
    if (beta <= cc.beta_c) {
        const double k2 = second_order_K(beta);
        if (kappa < k2 - kCurveTol) return PhaseRegion::SinglePhase;
        if (kappa > k2 + kCurveTol) return PhaseRegion::Coexistence;
        return PhaseRegion::SecondOrderCurve;
    }
    const double k1 = first_order_K(beta);
    if (kappa < k1 - kCurveTol) return PhaseRegion::SinglePhase;
    if (kappa > k1 + kCurveTol) return PhaseRegion::Coexistence;
    return PhaseRegion::FirstOrderCurve;
}

ConjectureEstimates verify_tricritical_conjectures(const std::vector<double>& h_grid) {
    if (h_grid.empty()) throw UsageError("verify_tricritical_conjectures: h_grid is empty");
    for (std::size_t i = 0; i < h_grid.size(); ++i) {
        if (!(h_grid[i] >= 1e-4))
            throw UsageError("verify_tricritical_conjectures: every h must be >= 1e-4");
        if (i > 0 && !(h_grid[i] < h_grid[i - 1]))
            throw UsageError("verify_tricritical_conjectures: h_grid must be strictly decreasing");
    }
    const auto& cc = critical_constants();
    ConjectureEstimates out;
    out.K_prime_ref = second_order_K_deriv(cc.beta_c, 1);
    out.ell_c_ref = cc.ell_c;
    for (double h : h_grid) {
        const double k1 = first_order_K(cc.beta_c + h);
        const double k2 = first_order_K(cc.beta_c + 2.0 * h);
        out.h.push_back(h);
        out.K1_prime_est.push_back((k1 - cc.K_at_beta_c) / h);
        out.K1_second_est.push_back((k2 - 2.0 * k1 + cc.K_at_beta_c) / (h * h));
    }
    return out;
}

double first_order_K_third_deriv_estimate() {
    const auto& cc = critical_constants();
    auto third = [&](double h) {
        const double k1 = first_order_K(cc.beta_c + h);
        const double k2 = first_order_K(cc.beta_c + 2.0 * h);
        const double k3 = first_order_K(cc.beta_c + 3.0 * h);
        return (k3 - 3.0 * k2 + 3.0 * k1 - cc.K_at_beta_c) / (h * h * h);
    };
    return 2.0 * third(5e-3) - third(1e-2);
}

} // namespace bclab
