#include "bclab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <boost/math/quadrature/gauss.hpp>

#include "bclab/errors.hpp"
#include "bclab/minima.hpp"
#include "bclab/phase_diagram.hpp"

namespace bclab {

namespace {

constexpr double kSaturationLog = -700.0;
constexpr int kCdfCells = 4000;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* kThreePointBanner =
    "three-point-limit conjecture: g has global minima {0, +-x_bar}; no x_bar comparison is made";

void check_n_list(const std::vector<std::int64_t>& n_list, const char* who) {
    if (n_list.empty()) throw UsageError(std::string(who) + ": n_list is empty");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1) throw UsageError(std::string(who) + ": every n must be >= 1");
        if (i > 0 && n_list[i] <= n_list[i - 1])
            throw UsageError(std::string(who) + ": n_list must be strictly increasing");
    }
}

ReportConstants base_constants(const SequenceSpec& spec) {
    const auto gl = gl_polynomial(spec);
    const XBar xb = xbar(gl.g);
    ReportConstants c{xb.value, std::nullopt, std::nullopt, gl.exps.alpha0, gl.exps.theta, regime_of(spec),
                      xb.minimum_set, {}};
    if (xb.minimum_set == MinimumSet::ThreePoint) c.banner = kThreePointBanner;
    return c;
}

double scaled_e_exponent(const ReportConstants& c, double alpha) {
    return c.regime == Regime::Below ? c.theta * alpha : c.theta * c.alpha0.value();
}

} // namespace

double thermo_magnetization(const ModelParams& params) {
    const auto mins = local_minima(params, 0.0, 1.0);
    const LocalMinimum* best = nullptr;
    for (const auto& m : mins) {
        if (m.x <= 0.0) continue;
        if (!best || m.value < best->value || (m.value == best->value && m.x > best->x)) best = &m;
    }
    if (!best) return 0.0;

    const double beta = params.beta();
    if (beta <= beta_critical()) return params.kappa() <= second_order_K(beta) ? 0.0 : best->x;
    return classify(params) == PhaseRegion::SinglePhase ? 0.0 : best->x;
}

AsymptoticsReport run_thermo_asymptotics(const SequenceSpec& spec, const std::vector<std::int64_t>& n_list) {
    check_n_list(n_list, "run_thermo_asymptotics");
    AsymptoticsReport report{{}, base_constants(spec)};
    const double exponent = report.constants.theta * spec.alpha();
    for (std::int64_t n : n_list) {
        const double nd = static_cast<double>(n);
        const ModelParams mp = params_at(spec, nd);
        const double m = thermo_magnetization(mp);
        report.rows.push_back({n, mp.beta(), mp.kappa(), m, kNaN, std::pow(nd, exponent) * m, kNaN});
    }
    return report;
}

AsymptoticsReport run_finite_size_asymptotics(const SequenceSpec& spec, const std::vector<std::int64_t>& n_list,
                                              Estimator estimator, const FiniteSizeOptions& options) {
    check_n_list(n_list, "run_finite_size_asymptotics");
    AsymptoticsReport report{{}, base_constants(spec)};
    auto& c = report.constants;
    if (c.regime == Regime::At) c.z_bar = limit_constant(gl_polynomial(spec).g, options.quad);
    if (c.regime == Regime::Above) c.y_bar = limit_constant(g_tilde(spec), options.quad);
    if (estimator == Estimator::Exact && n_list.back() > options.n_max)
        throw ResourceError("run_finite_size_asymptotics: n = " + std::to_string(n_list.back())
                            + " exceeds n_max = " + std::to_string(options.n_max)
                            + "; use the MonteCarlo estimator");

    const double m_exp = c.theta * spec.alpha();
    const double e_exp = scaled_e_exponent(c, spec.alpha());
    for (std::int64_t n : n_list) {
        const double nd = static_cast<double>(n);
        const ModelParams mp = params_at(spec, nd);
        const double m = thermo_magnetization(mp);
        double e = 0.0;
        if (estimator == Estimator::Exact) {
            e = abs_moment(finite_size_law(static_cast<int>(n), mp, options.n_max), 1.0, 0.0);
        } else {
            e = mc_estimate(static_cast<int>(n), mp, options.mc_sweeps, std::nullopt,
                            options.seed ^ static_cast<std::uint64_t>(n))
                    .mean;
        }
        report.rows.push_back({n, mp.beta(), mp.kappa(), m, e, std::pow(nd, m_exp) * m, std::pow(nd, e_exp) * e});
    }
    return report;
}

std::vector<ComparisonRow> estimator_comparison(const SequenceSpec& base, double alpha,
                                                const std::vector<std::int64_t>& n_list, int n_max) {
    check_n_list(n_list, "estimator_comparison");
    const SequenceSpec spec = base.with_alpha(alpha);
    require_valid(spec);
    std::vector<ComparisonRow> out;
    for (std::int64_t n : n_list) {
        const ModelParams mp = params_at(spec, static_cast<double>(n));
        const double m = thermo_magnetization(mp);
        const double e = abs_moment(finite_size_law(static_cast<int>(n), mp, n_max), 1.0, 0.0);
        out.push_back({n, e, m, m > 0.0 ? e / m : std::numeric_limits<double>::infinity()});
    }
    return out;
}

MdpReport mdp_rate_estimate(const SequenceSpec& base, double alpha, double a,
                            const std::vector<std::int64_t>& n_list, int n_max) {
    check_n_list(n_list, "mdp_rate_estimate");
    const SequenceSpec spec = base.with_alpha(alpha);
    if (regime_of(spec) != Regime::Below)
        throw UsageError("mdp_rate_estimate: alpha must be below alpha0 = " + scaling_exponents(spec).alpha0.str());
    const auto gl = gl_polynomial(spec);
    const XBar xb = xbar(gl.g);
    if (!(a > xb.value))
        throw DomainError("mdp_rate_estimate: threshold a = " + format_double(a) + " must exceed x_bar = "
                          + format_double(xb.value) + " (the rate function vanishes at its minimizer)");
    MdpReport report{{}, a, 1.0 - alpha / gl.exps.alpha0_value(), gl.g(a) - gl.g(xb.value)};
    const double gamma = gl.exps.theta * alpha;
    for (std::int64_t n : n_list) {
        const ModelParams mp = params_at(spec, static_cast<double>(n));
        const double lt = log_tail_mass(finite_size_law(static_cast<int>(n), mp, n_max), gamma, a);
        const double rate = -std::pow(static_cast<double>(n), -report.speed_exponent) * lt;
        report.rows.push_back({n, lt, rate, !(lt >= kSaturationLog)});
    }
    return report;
}

double weak_limit_distance(const SequenceSpec& base, double alpha, int n, int n_max, const QuadratureConfig& quad) {
    quad.validate();
    const SequenceSpec spec = base.with_alpha(alpha);
    const Regime regime = regime_of(spec);
    if (regime == Regime::Below)
        throw UsageError("weak_limit_distance: alpha must be >= alpha0 = " + scaling_exponents(spec).alpha0.str());
    const auto gl = gl_polynomial(spec);
    const EvenPolynomial target = regime == Regime::At ? gl.g : g_tilde(spec);
    const double gamma_bar = gl.exps.theta * gl.exps.alpha0_value();

    const ModelParams mp = params_at(spec, n);
    const SpinLawExact law = finite_size_law(n, mp, n_max);

    const XBar xb = xbar(target);
    const double p_min = std::min(0.0, target(xb.value));
    auto density = [&](double x) { return std::exp(-(target(x) - p_min)); };
    const double X = tail_bound([&](double x) { return target(x); }, p_min, quad.tail_cut, std::max(xb.value, 1.0));

    // Cumulative mass of the target on [0, x_i]; both laws are symmetric, so x >= 0 suffices.
    std::vector<double> grid(kCdfCells + 1), mass(kCdfCells + 1, 0.0);
    for (int i = 0; i <= kCdfCells; ++i) grid[i] = X * i / kCdfCells;
    for (int i = 1; i <= kCdfCells; ++i)
        mass[i] = mass[i - 1] + boost::math::quadrature::gauss<double, 15>::integrate(density, grid[i - 1], grid[i]);
    const double half = mass[kCdfCells];

    std::vector<double> gaps(kCdfCells + 1, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i <= kCdfCells; ++i) {
        const double target_cdf = 0.5 + 0.5 * mass[i] / half;
        gaps[i] = std::fabs(hs_convolved_cdf(law, mp, gamma_bar, grid[i]) - target_cdf);
    }
    return std::clamp(*std::max_element(gaps.begin(), gaps.end()), 0.0, 1.0);
}

KappaEstimate kappa_fluctuation_estimate(const SequenceSpec& base, double alpha,
                                         const std::vector<std::int64_t>& n_list, int n_max) {
    check_n_list(n_list, "kappa_fluctuation_estimate");
    if (n_list.size() < 2) throw UsageError("kappa_fluctuation_estimate: need at least two n values");
    const SequenceSpec spec = base.with_alpha(alpha);
    if (regime_of(spec) != Regime::Below)
        throw UsageError("kappa_fluctuation_estimate: alpha must be below alpha0");
    KappaEstimate out{{}, {}, 0.0, scaling_exponents(spec).kappa(alpha)};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::int64_t n : n_list) {
        const ModelParams mp = params_at(spec, static_cast<double>(n));
        const double m = thermo_magnetization(mp);
        const SpinLawExact law = finite_size_law(static_cast<int>(n), mp, n_max);
        double acc = 0.0;
        for (int s = -law.n(); s <= law.n(); ++s)
            acc += std::fabs(std::abs(s) / static_cast<double>(n) - m) * law.probability(s);
        out.n.push_back(n);
        out.fluctuation.push_back(acc);
        const double lx = std::log(static_cast<double>(n)), ly = std::log(acc);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double k = static_cast<double>(n_list.size());
    out.fitted_exponent = -(k * sxy - sx * sy) / (k * sxx - sx * sx);
    return out;
}

double aitken_extrapolate(double a0, double a1, double a2) {
    const double denom = a2 - 2.0 * a1 + a0;
    if (denom == 0.0 || !std::isfinite(denom)) return a2;
    return (a2 * a0 - a1 * a1) / denom;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_report_csv(const AsymptoticsReport& report, std::ostream& out) {
    out << "n,beta_n,kappa_n,m_thermo,e_finite,scaled_m,scaled_e\n";
    for (const auto& r : report.rows) {
        out << r.n << ',' << format_double(r.beta_n) << ',' << format_double(r.kappa_n) << ','
            << format_double(r.m_thermo) << ',' << format_double(r.e_finite) << ',' << format_double(r.scaled_m)
            << ',' << format_double(r.scaled_e) << '\n';
    }
}

nlohmann::json report_constants_json(const AsymptoticsReport& report, const SequenceSpec& spec) {
    const auto& c = report.constants;
    nlohmann::json doc;
    doc["spec"] = spec_to_json(spec);
    doc["x_bar"] = c.x_bar;
    doc["y_bar"] = c.y_bar ? nlohmann::json(*c.y_bar) : nlohmann::json(nullptr);
    doc["z_bar"] = c.z_bar ? nlohmann::json(*c.z_bar) : nlohmann::json(nullptr);
    doc["alpha0"] = c.alpha0.str();
    doc["theta"] = c.theta;
    doc["regime"] = to_string(c.regime);
    doc["minimum_set"] = to_string(c.minimum_set);
    if (!c.banner.empty()) doc["banner"] = c.banner;
    return doc;
}

std::string sidecar_path(const std::string& csv_path) {
    const auto slash = csv_path.find_last_of('/');
    const auto dot = csv_path.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return csv_path.substr(0, dot) + ".json";
    return csv_path + ".json";
}

} // namespace bclab
