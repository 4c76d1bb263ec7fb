#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bclab/finite_size.hpp"
#include "bclab/model.hpp"
#include "bclab/sequences.hpp"

namespace bclab {

// m(beta, K): the positive global minimizer of G on [0, 1], or 0 in the single-phase
// region. Past beta_c the region is read off K_1 (within 1e-12), so the positive
// point is returned on the first-order curve itself.
double thermo_magnetization(const ModelParams& params);

struct ReportRow {
    std::int64_t n;
    double beta_n;
    double kappa_n;
    double m_thermo;
    double e_finite; // NaN when not computed
    double scaled_m;
    double scaled_e; // NaN when not computed
};

struct ReportConstants {
    double x_bar;
    std::optional<double> y_bar;
    std::optional<double> z_bar;
    Rational alpha0;
    double theta;
    Regime regime;
    MinimumSet minimum_set;
    std::string banner; // non-empty for runs whose limit is only conjectured
};

struct AsymptoticsReport {
    std::vector<ReportRow> rows;
    ReportConstants constants;
};

enum class Estimator { Exact, MonteCarlo };

struct FiniteSizeOptions {
    int n_max = kDefaultNMax;
    long mc_sweeps = 20000;
    std::uint64_t seed = 0;
    QuadratureConfig quad{};
};

AsymptoticsReport run_thermo_asymptotics(const SequenceSpec& spec, const std::vector<std::int64_t>& n_list);

AsymptoticsReport run_finite_size_asymptotics(const SequenceSpec& spec, const std::vector<std::int64_t>& n_list,
                                              Estimator estimator = Estimator::Exact,
                                              const FiniteSizeOptions& options = {});

struct ComparisonRow {
    std::int64_t n;
    double e_finite;
    double m_thermo;
    double ratio;
};
std::vector<ComparisonRow> estimator_comparison(const SequenceSpec& spec, double alpha,
                                                const std::vector<std::int64_t>& n_list,
                                                int n_max = kDefaultNMax);

struct MdpRow {
    std::int64_t n;
    double log_tail;
    double rate_est;
    bool saturated; // tail mass below e^{-700}
};
struct MdpReport {
    std::vector<MdpRow> rows;
    double a;
    double speed_exponent; // u = 1 - alpha/alpha0
    double target;         // g(a) - g(x_bar)
};
MdpReport mdp_rate_estimate(const SequenceSpec& spec, double alpha, double a,
                            const std::vector<std::int64_t>& n_list, int n_max = kDefaultNMax);

// Kolmogorov distance between the Gaussian-smoothed finite-n law and its limit.
double weak_limit_distance(const SequenceSpec& spec, double alpha, int n, int n_max = kDefaultNMax,
                           const QuadratureConfig& quad = {});

struct KappaEstimate {
    std::vector<std::int64_t> n;
    std::vector<double> fluctuation; // E| |S_n/n| - m(beta_n, K_n) |
    double fitted_exponent;
    double conjectured_kappa;
};
KappaEstimate kappa_fluctuation_estimate(const SequenceSpec& spec, double alpha,
                                         const std::vector<std::int64_t>& n_list, int n_max = kDefaultNMax);

// Aitken delta-squared limit of three consecutive terms.
double aitken_extrapolate(double a0, double a1, double a2);

// Columns: n,beta_n,kappa_n,m_thermo,e_finite,scaled_m,scaled_e; 17 significant digits.
void write_report_csv(const AsymptoticsReport& report, std::ostream& out);
nlohmann::json report_constants_json(const AsymptoticsReport& report, const SequenceSpec& spec);
// "dir/report.csv" -> "dir/report.json"
std::string sidecar_path(const std::string& csv_path);

std::string format_double(double v);

} // namespace bclab
