// Acceptance runner: one PASS/FAIL line per criterion.
// Usage: bclab_acceptance [criterion-number ...]
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bclab/cli.hpp"
#include "bclab/errors.hpp"
#include "bclab/finite_size.hpp"
#include "bclab/harness.hpp"
#include "bclab/phase_diagram.hpp"
#include "bclab/sequences.hpp"
#include "oracles.hpp"

using namespace bclab;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

class Detail {
public:
    template <class T>
    Detail& operator<<(const T& v) {
        os_ << v;
        return *this;
    }
    Detail& num(double v) {
        os_ << fmt("%.6g", v);
        return *this;
    }
    std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
};

const double kLog4 = std::log(4.0);

SequenceSpec seq1(double alpha) { return SequenceSpec(Seq1Params{1.0, 0, 1.0}, alpha); }

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

double last_three_aitken(const std::vector<double>& v) {
    const std::size_t k = v.size();
    return aitken_extrapolate(v[k - 3], v[k - 2], v[k - 1]);
}

std::vector<double> scaled_e(const AsymptoticsReport& r) {
    std::vector<double> out;
    for (const auto& row : r.rows) out.push_back(row.scaled_e);
    return out;
}

// 1
Outcome constants() {
    const double k_c = second_order_K(kLog4);
    const double e = std::exp(kLog4);
    const double c4 = (e + 2.0) * (e + 2.0) * (4.0 - e) / 192.0;
    const double k1 = second_order_K_deriv(1.0, 1);
    const bool ok = std::fabs(k_c - 3.0 / (2.0 * kLog4)) < 1e-12 && std::fabs(c4) < 1e-12
                    && std::fabs(k1 + 0.5) < 1e-12;
    Detail d;
    d << "K(log 4)=" << fmt("%.15g", k_c) << " c4(beta_c)=" << fmt("%.3g", c4) << " K'(1)=" << fmt("%.15g", k1);
    return {ok, d.str()};
}

// 2
Outcome bifurcation() {
    bool ok = true;
    Detail d;
    for (double beta : {0.8, 1.0, 1.2}) {
        std::vector<double> ms;
        for (double eps : {1e-2, 1e-3, 1e-4}) ms.push_back(thermo_magnetization(ModelParams(beta, second_order_K(beta) + eps)));
        ok = ok && ms[1] > 0.0 && strictly_decreasing(ms) && ms[2] < 0.05;
        d << "beta=" << beta << " m:";
        for (double m : ms) d << ' ' << fmt("%.4g", m);
        d << "; ";
    }
    for (double beta : {1.5, 2.0}) {
        const double k1 = first_order_K(beta);
        const double on = thermo_magnetization(ModelParams(beta, k1));
        const double below = thermo_magnetization(ModelParams(beta, k1 - 1e-3));
        ok = ok && on > 0.05 && below == 0.0;
        d << "beta=" << beta << " m(K1)=" << fmt("%.4g", on) << " m(K1-1e-3)=" << below << "; ";
    }
    return {ok, d.str()};
}

// 3
Outcome first_order_curve() {
    bool ok = true;
    const double bc = kLog4;
    double worst = -1e300;
    for (int i = 1; i <= 50; ++i) {
        const double beta = bc + (3.0 - bc) * i / 50.0;
        const double gap = first_order_K(beta) - second_order_K(beta);
        worst = std::max(worst, gap);
        ok = ok && gap < 0.0;
    }
    std::vector<double> gaps;
    for (int j = 1; j <= 6; ++j) gaps.push_back(std::fabs(first_order_K(bc + std::pow(10.0, -j)) - second_order_K(bc)));
    ok = ok && strictly_decreasing(gaps) && gaps.back() < 1e-3;
    Detail d;
    d << "max(K1-K) over 50 betas=" << fmt("%.3g", worst) << " gap at 1e-6=" << fmt("%.3g", gaps.back());
    return {ok, d.str()};
}

// 4
Outcome conjectures() {
    const ConjectureEstimates est = verify_tricritical_conjectures({1e-2, 1e-3});
    const double e0 = std::fabs(est.K1_prime_est[0] - est.K_prime_ref);
    const double e1 = std::fabs(est.K1_prime_est[1] - est.K_prime_ref);
    const double rel = std::fabs(est.K1_second_est[1] / est.ell_c_ref - 1.0);
    Detail d;
    d << "|K1'-K'|: " << fmt("%.3g", e0) << " -> " << fmt("%.3g", e1) << "; K1'' est=" << fmt("%.5g", est.K1_second_est[1])
      << " vs ell_c=" << fmt("%.5g", est.ell_c_ref) << " (" << fmt("%.2f", 100.0 * rel) << "%)";
    return {e1 < e0 && rel < 0.10, d.str()};
}

// 5
Outcome brute_force() {
    std::mt19937_64 rng(20240501);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const double beta = u(rng), kappa = u(rng);
        for (int n = 1; n <= 8; ++n) {
            const SpinLawExact law = finite_size_law(n, ModelParams(beta, kappa));
            const auto ref = oracle::brute_force_law(n, beta, kappa);
            for (int s = -n; s <= n; ++s) worst = std::max(worst, std::fabs(law.probability(s) - ref[s + n]));
        }
    }
    return {worst <= 1e-12, "max |p - p_enum| = " + fmt("%.3g", worst)};
}

// 6
Outcome hubbard_stratonovich() {
    const ModelParams p(1.0, 1.5);
    const std::vector<TestFunction> fs{TestFunction::clipped_abs(1.0), TestFunction::gaussian_bump(0.5, 0.7)};
    double worst = 0.0;
    int cases = 0;
    for (int n : {10, 50, 200}) {
        for (double g : {0.0, 0.2, 0.4}) {
            for (const auto& f : fs) {
                const double lhs = hs_lhs(n, p, g, f), rhs = hs_rhs(n, p, g, f);
                worst = std::max(worst, std::fabs(lhs - rhs) / std::fabs(rhs));
                ++cases;
            }
        }
    }
    return {worst <= 1e-8, std::to_string(cases) + " cases, max relative error " + fmt("%.3g", worst)};
}

// 7
Outcome thermo_asymptotics() {
    const std::vector<std::int64_t> decades{1000, 10000, 100000, 1000000, 10000000, 100000000, 1000000000};
    const std::vector<std::pair<std::string, SequenceSpec>> specs{
        {"seq1", seq1(0.3)},
        {"seq3", SequenceSpec(Seq3Params{0, 1.0}, 0.5)},
        {"seq5", SequenceSpec(Seq5Params{second_order_K_deriv(kLog4, 2) + 1.0}, 0.2)},
    };
    bool ok = true;
    Detail d;
    for (const auto& [name, spec] : specs) {
        const auto report = run_thermo_asymptotics(spec, decades);
        const double xb = report.constants.x_bar;
        std::vector<double> errs;
        for (const auto& r : report.rows) errs.push_back(std::fabs(r.scaled_m / xb - 1.0));
        ok = ok && strictly_decreasing(errs) && errs.back() < 0.01;
        d << name << ": x_bar=" << fmt("%.6g", xb) << " err(1e9)=" << fmt("%.3g", errs.back())
          << (strictly_decreasing(errs) ? "" : " (not monotone)") << "; ";
    }
    return {ok, d.str()};
}

const std::vector<std::int64_t> kDesk{250, 500, 1000, 2000, 4000};

// 8
Outcome regime_below() {
    const auto report = run_finite_size_asymptotics(seq1(0.3), kDesk);
    const double xb = report.constants.x_bar;
    const auto se = scaled_e(report);
    const double lim = last_three_aitken(se);
    const auto& last = report.rows.back();
    const double ratio = last.e_finite / last.m_thermo;
    bool trend = true;
    for (std::size_t i = 1; i < se.size(); ++i) trend = trend && std::fabs(se[i] - xb) < std::fabs(se[i - 1] - xb);
    Detail d;
    d << "extrapolated " << fmt("%.6g", lim) << " vs x_bar " << fmt("%.6g", xb) << " ("
      << fmt("%.2f", 100.0 * std::fabs(lim / xb - 1.0)) << "%), E/m(4000)=" << fmt("%.4f", ratio);
    return {trend && std::fabs(lim / xb - 1.0) < 0.05 && ratio >= 0.8 && ratio <= 1.25, d.str()};
}

// 9
Outcome regime_above() {
    const std::vector<std::int64_t> ns{16, 32, 64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384};
    const auto report = run_finite_size_asymptotics(seq1(0.8), ns);
    const double yb = *report.constants.y_bar;
    const auto se = scaled_e(report);
    const double lim = last_three_aitken(se);
    bool increasing = true;
    std::vector<double> ratios;
    for (const auto& r : report.rows) ratios.push_back(r.e_finite / r.m_thermo);
    for (std::size_t i = 1; i < ratios.size(); ++i) increasing = increasing && ratios[i] > ratios[i - 1];
    const double growth = ratios.back() / ratios.front();
    Detail d;
    d << "extrapolated " << fmt("%.6g", lim) << " vs y_bar " << fmt("%.6g", yb) << " ("
      << fmt("%.2f", 100.0 * std::fabs(lim / yb - 1.0)) << "%), E/m " << fmt("%.4g", ratios.front()) << " -> "
      << fmt("%.4g", ratios.back());
    return {std::fabs(lim / yb - 1.0) < 0.05 && increasing && growth > 2.0, d.str()};
}

// 10
Outcome regime_at() {
    const auto report = run_finite_size_asymptotics(seq1(0.5).with_alpha(Rational{1, 2}), kDesk);
    const double zb = *report.constants.z_bar;
    const double lim = last_three_aitken(scaled_e(report));
    Detail d;
    d << "extrapolated " << fmt("%.6g", lim) << " vs z_bar " << fmt("%.6g", zb) << " ("
      << fmt("%.2f", 100.0 * std::fabs(lim / zb - 1.0)) << "%)";
    return {std::fabs(lim / zb - 1.0) < 0.05, d.str()};
}

// 11
Outcome mdp() {
    const double xb = xbar(gl_polynomial(seq1(0.25)).g).value;
    const MdpReport rep = mdp_rate_estimate(seq1(0.25), 0.25, xb + 0.5, {500, 1000, 2000, 4000});
    std::vector<double> dist;
    Detail d;
    d << "target " << fmt("%.5g", rep.target) << ", rate_est:";
    for (const auto& r : rep.rows) {
        dist.push_back(std::fabs(r.rate_est - rep.target));
        d << ' ' << fmt("%.4g", r.rate_est);
    }
    const double rel = dist.back() / rep.target;
    d << " (" << fmt("%.1f", 100.0 * rel) << "% at n=4000)";
    return {strictly_decreasing(dist) && rel < 0.15, d.str()};
}

// 12
Outcome weak_limit() {
    std::vector<double> dist;
    Detail d;
    d << "Kolmogorov distance:";
    for (int n : {250, 1000, 4000}) {
        dist.push_back(weak_limit_distance(seq1(0.8), 0.8, n));
        d << ' ' << fmt("%.4g", dist.back());
    }
    return {strictly_decreasing(dist) && dist.back() < 0.05, d.str()};
}

// 13
Outcome seq6_guardrails() {
    const int p = 3;
    const double k3 = second_order_K_deriv(kLog4, p);
    Detail d;
    bool ok = true;

    const SequenceSpec above(Seq6Params{p, k3 - 1.0}, 0.5);
    bool tilde_rejected = false, harness_rejected = false;
    try {
        g_tilde(above);
    } catch (const UnsupportedError&) {
        tilde_rejected = true;
    }
    try {
        run_finite_size_asymptotics(above, {50, 100});
    } catch (const UnsupportedError&) {
        harness_rejected = true;
    }
    ok = ok && tilde_rejected && harness_rejected;
    d << "above rejected: " << (tilde_rejected && harness_rejected ? "yes" : "no") << "; ";

    const ScalingExponents exps = scaling_exponents(above);
    ok = ok && exps.alpha0.num == 1 && exps.alpha0.den == 2 * p - 1 && exps.theta == (p - 1) / 2.0;

    const auto below = run_finite_size_asymptotics(SequenceSpec(Seq6Params{p, k3 - 24.0}, 0.15), kDesk);
    const double xb = below.constants.x_bar;
    const double lim_b = last_three_aitken(scaled_e(below));
    const double ratio = below.rows.back().e_finite / below.rows.back().m_thermo;
    ok = ok && std::fabs(lim_b / xb - 1.0) < 0.05 && ratio >= 0.8 && ratio <= 1.25;
    d << "below: " << fmt("%.5g", lim_b) << " vs " << fmt("%.5g", xb) << ", E/m=" << fmt("%.4f", ratio) << "; ";

    const auto at = run_finite_size_asymptotics(SequenceSpec(Seq6Params{p, k3 - 1.0}, Rational{1, 2 * p - 1}), kDesk);
    const double zb = *at.constants.z_bar;
    const double lim_a = last_three_aitken(scaled_e(at));
    ok = ok && at.constants.regime == Regime::At && std::fabs(lim_a / zb - 1.0) < 0.05;
    d << "at: " << fmt("%.5g", lim_a) << " vs " << fmt("%.5g", zb);
    return {ok, d.str()};
}

// 14
Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("bclab_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string cfg = (dir / "run.json").string();
    std::ofstream(cfg) << R"({"command":"sequence-run","spec":{"kind":"seq1","alpha":0.3,"beta":1.0,"b":0,"k":1.0},)"
                       << R"("n_list":[100,200,400,800]})";
    std::vector<std::string> outputs;
    for (int i = 0; i < 2; ++i) {
        const std::string out = (dir / ("out" + std::to_string(i) + ".csv")).string();
        const char* argv[] = {"bclab", "--config", cfg.c_str(), "sequence-run", "-o", out.c_str()};
        std::ostringstream so, se;
        if (run_cli(6, argv, so, se) != 0) {
            fs::remove_all(dir);
            return {false, "sequence-run failed: " + se.str()};
        }
        std::ifstream in(out, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        outputs.push_back(ss.str());
    }
    fs::remove_all(dir);
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
    return {same, same ? std::to_string(outputs[0].size()) + " bytes identical" : "outputs differ"};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {"constants", constants},
        {"bifurcation structure", bifurcation},
        {"first-order curve", first_order_curve},
        {"tricritical conjectures", conjectures},
        {"brute-force equivalence", brute_force},
        {"Hubbard-Stratonovich identity", hubbard_stratonovich},
        {"thermodynamic asymptotics", thermo_asymptotics},
        {"finite-size regime below", regime_below},
        {"finite-size regime above", regime_above},
        {"finite-size regime at", regime_at},
        {"moderate deviations", mdp},
        {"weak limit", weak_limit},
        {"sequence 6 guardrails", seq6_guardrails},
        {"determinism", determinism},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int k = std::atoi(argv[i]);
        if (k < 1 || k > static_cast<int>(all.size())) {
            std::fprintf(stderr, "unknown criterion %s\n", argv[i]);
            return 2;
        }
        selected.push_back(k);
    }
    if (selected.empty())
        for (int k = 1; k <= static_cast<int>(all.size()); ++k) selected.push_back(k);

    int failures = 0;
    for (int k : selected) {
        Outcome o;
        try {
            o = all[k - 1].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("%s C%02d %s: %s\n", o.pass ? "PASS" : "FAIL", k, all[k - 1].name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
