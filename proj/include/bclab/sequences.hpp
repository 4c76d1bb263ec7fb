#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "bclab/model.hpp"
#include "bclab/quadrature.hpp"

namespace bclab {

// g(x) = c2 x^2 + c4 x^4 + c6 x^6.
class EvenPolynomial {
public:
    // Ginzburg-Landau form: degree 4 or 6 with positive leading coefficient.
    static EvenPolynomial make(double c2, double c4, double c6 = 0.0);
    // Any finite coefficients; used for sanity checks with non-GL polynomials.
    static EvenPolynomial unchecked(double c2, double c4 = 0.0, double c6 = 0.0);

    double c2() const { return c2_; }
    double c4() const { return c4_; }
    double c6() const { return c6_; }
    int degree() const;
    double leading() const;
    double operator()(double x) const;
    double deriv(double x) const;

private:
    EvenPolynomial(double c2, double c4, double c6) : c2_(c2), c4_(c4), c6_(c6) {}
    double c2_, c4_, c6_;
};

struct Rational {
    std::int64_t num;
    std::int64_t den; // > 0

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    static Rational parse(const std::string& text); // "p/q" or an integer
    std::string str() const;
};

enum class SequenceKind { Seq1 = 1, Seq2, Seq3, Seq4, Seq5, Seq6 };
enum class Seq4Case { A, B, C, D };

struct Seq1Params { double beta; int b; double k; };
struct Seq2Params { double beta0; int b; int p; double ell; };
struct Seq3Params { int b; double k; };
struct Seq4Params { double ell; double ell_tilde; Seq4Case which; };
struct Seq5Params { double ell; };
struct Seq6Params { int p; double ell; };

using SequenceParams = std::variant<Seq1Params, Seq2Params, Seq3Params, Seq4Params, Seq5Params, Seq6Params>;

// One of the six sequences (beta_n, K_n). Construction checks the parameter
// domains (b in its set, p range, beta < beta_c, alpha > 0); the validity
// inequalities are reported by validate().
class SequenceSpec {
public:
    SequenceSpec(SequenceParams params, double alpha);
    SequenceSpec(SequenceParams params, Rational alpha);

    SequenceKind kind() const { return static_cast<SequenceKind>(params_.index() + 1); }
    const SequenceParams& params() const { return params_; }
    double alpha() const { return alpha_; }
    const std::optional<Rational>& alpha_rational() const { return alpha_rational_; }
    SequenceSpec with_alpha(double alpha) const;
    SequenceSpec with_alpha(Rational alpha) const;

private:
    SequenceParams params_;
    double alpha_;
    std::optional<Rational> alpha_rational_;
};

std::string to_string(SequenceKind kind);
std::string to_string(Seq4Case c);

SequenceSpec spec_from_json(const nlohmann::json& doc);
nlohmann::json spec_to_json(const SequenceSpec& spec);

struct ScalingExponents {
    Rational alpha0;
    double theta;

    double alpha0_value() const { return alpha0.value(); }
    double kappa(double alpha) const { return 0.5 * (1.0 - alpha / alpha0_value()) + theta * alpha; }
};

ScalingExponents scaling_exponents(const SequenceSpec& spec);

enum class Regime { Below, At, Above };
std::string to_string(Regime r);
// alpha vs alpha0: exact when alpha was given as a rational, else within 1e-12.
Regime regime_of(const SequenceSpec& spec);

struct CheckResult {
    std::string name;
    bool passed;
    double margin; // positive when the condition holds with room to spare
    std::string note;
};

std::vector<CheckResult> validate(const SequenceSpec& spec);
// Throws ValidationError naming every violated condition.
void require_valid(const SequenceSpec& spec);

ModelParams params_at(const SequenceSpec& spec, double n);

// Smallest probe n0 in {1, 2, 4, ..., <= n_probe_max} such that every probe
// n >= n0 lies in the coexistence region or on the first-order curve.
std::optional<double> coexistence_onset(const SequenceSpec& spec, double n_probe_max = 1e9);

struct GinzburgLandau {
    EvenPolynomial g;
    ScalingExponents exps;
};

GinzburgLandau gl_polynomial(const SequenceSpec& spec);
EvenPolynomial g_tilde(const SequenceSpec& spec);

enum class MinimumSet { Origin, PlusMinus, ThreePoint };
std::string to_string(MinimumSet m);

struct XBar {
    double value;
    MinimumSet minimum_set;
};
XBar xbar(const EvenPolynomial& g);

// E|X| for the density proportional to exp(-poly).
double limit_constant(const EvenPolynomial& poly, const QuadratureConfig& quad = {});

// sup over a 2001-point grid on [-R, R] of |n^{alpha/alpha0} G(x/n^{theta alpha}) - g(x)|, per n.
std::vector<double> check_hypothesis_iiia(const SequenceSpec& spec, double alpha, double radius,
                                          const std::vector<double>& n_list);

// |n G(x/n^{theta alpha0}) - g_tilde(x)| per (n, x); rows follow n_list.
std::vector<std::vector<double>> check_hypothesis_v(const SequenceSpec& spec, double alpha,
                                                    const std::vector<double>& x_grid,
                                                    const std::vector<double>& n_list);

// Sequence 6 above threshold: |n G(x/n^{theta alpha0})| per (n, x), which tends to 0.
std::vector<std::vector<double>> seq6_degenerate_limit(const SequenceSpec& spec, double alpha,
                                                       const std::vector<double>& x_grid,
                                                       const std::vector<double>& n_list);

} // namespace bclab
