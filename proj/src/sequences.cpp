#include "bclab/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "bclab/errors.hpp"
#include "bclab/phase_diagram.hpp"

namespace bclab {

namespace {

constexpr double kEqualityTol = 1e-10;
constexpr double kThreePointTol = 1e-12;
constexpr double kRegimeTol = 1e-12;
constexpr int kMaxP = 12;

double factorial(int p) {
    double f = 1.0;
    for (int i = 2; i <= p; ++i) f *= i;
    return f;
}

double ipow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

// K^{(j)} for j >= 0 (j = 0 is K itself).
double K_deriv(double beta, int j) { return j == 0 ? second_order_K(beta) : second_order_K_deriv(beta, j); }

double c4_of(double beta) {
    const double e = std::exp(beta);
    return (e + 2.0) * (e + 2.0) * (4.0 - e) / 192.0;
}

constexpr double kTricriticalC4 = 3.0 / 16.0;
constexpr double kTricriticalC6 = 9.0 / 40.0;

void check_b(int b, bool allow_zero, const char* who) {
    if (!(b == 1 || b == -1 || (allow_zero && b == 0)))
        throw ValidationError(std::string(who) + ": b must be in " + (allow_zero ? "{1,0,-1}" : "{1,-1}")
                              + ", got " + std::to_string(b));
}

void check_finite(double v, const char* who, const char* field) {
    if (!std::isfinite(v)) throw ValidationError(std::string(who) + ": " + field + " must be finite");
}

void check_params(const SequenceParams& params) {
    const double bc = beta_critical();
    std::visit(
        [bc](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Seq1Params>) {
                if (!(p.beta > 0.0 && p.beta < bc))
                    throw ValidationError("seq1: beta must lie in (0, log 4), got " + std::to_string(p.beta));
                check_b(p.b, true, "seq1");
                check_finite(p.k, "seq1", "k");
            } else if constexpr (std::is_same_v<T, Seq2Params>) {
                if (!(p.beta0 > 0.0 && p.beta0 < bc))
                    throw ValidationError("seq2: beta0 must lie in (0, log 4), got " + std::to_string(p.beta0));
                check_b(p.b, false, "seq2");
                if (p.p < 2 || p.p > kMaxP)
                    throw ValidationError("seq2: p must be an integer in [2, 12], got " + std::to_string(p.p));
                check_finite(p.ell, "seq2", "ell");
            } else if constexpr (std::is_same_v<T, Seq3Params>) {
                check_b(p.b, true, "seq3");
                check_finite(p.k, "seq3", "k");
            } else if constexpr (std::is_same_v<T, Seq4Params>) {
                check_finite(p.ell, "seq4", "ell");
                check_finite(p.ell_tilde, "seq4", "ell_tilde");
            } else if constexpr (std::is_same_v<T, Seq5Params>) {
                check_finite(p.ell, "seq5", "ell");
            } else {
                if (p.p < 3 || p.p > kMaxP)
                    throw ValidationError("seq6: p must be an integer in [3, 12], got " + std::to_string(p.p));
                check_finite(p.ell, "seq6", "ell");
            }
        },
        params);
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ValidationError("alpha must be a finite real > 0, got " + std::to_string(alpha));
}

CheckResult strict_positive(std::string name, double margin, std::string note = {}) {
    return {std::move(name), margin > 0.0, margin, std::move(note)};
}

CheckResult nonzero(std::string name, double value) {
    return {std::move(name), value != 0.0, std::fabs(value), {}};
}

CheckResult equal(std::string name, double value, double target, std::string note = {}) {
    const double gap = std::fabs(value - target);
    return {std::move(name), gap <= kEqualityTol, kEqualityTol - gap, std::move(note)};
}

const char* kConjectureNote =
    "coexistence membership assumes K1'(beta_c) = K'(beta_c) and K1''(beta_c) = ell_c";

// Largest positive critical point of an even polynomial, or 0.
double largest_critical_point(const EvenPolynomial& g) {
    // g'(x) = 2x (c2 + 2 c4 y + 3 c6 y^2), y = x^2
    const double A = 3.0 * g.c6(), B = 2.0 * g.c4(), C = g.c2();
    std::vector<double> ys;
    if (A == 0.0) {
        if (B != 0.0) ys.push_back(-C / B);
    } else {
        const double disc = B * B - 4.0 * A * C;
        if (disc >= 0.0) {
            const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
            if (q != 0.0) {
                ys.push_back(q / A);
                ys.push_back(C / q);
            } else {
                ys.push_back(0.0);
            }
        }
    }
    double best = 0.0;
    for (double y : ys)
        if (y > 0.0) best = std::max(best, std::sqrt(y));
    return best;
}

std::vector<double> geometric_probes(double n_max) {
    std::vector<double> out;
    for (double n = 1.0; n <= n_max; n *= 2.0) out.push_back(n);
    return out;
}

} // namespace

// ---- EvenPolynomial ----

EvenPolynomial EvenPolynomial::unchecked(double c2, double c4, double c6) {
    if (!std::isfinite(c2) || !std::isfinite(c4) || !std::isfinite(c6))
        throw DomainError("EvenPolynomial: coefficients must be finite");
    return EvenPolynomial(c2, c4, c6);
}

EvenPolynomial EvenPolynomial::make(double c2, double c4, double c6) {
    EvenPolynomial g = unchecked(c2, c4, c6);
    if (g.degree() != 4 && g.degree() != 6)
        throw DomainError("EvenPolynomial: degree must be 4 or 6, got " + std::to_string(g.degree()));
    if (!(g.leading() > 0.0)) throw DomainError("EvenPolynomial: leading coefficient must be > 0");
    return g;
}

int EvenPolynomial::degree() const {
    if (c6_ != 0.0) return 6;
    if (c4_ != 0.0) return 4;
    if (c2_ != 0.0) return 2;
    return 0;
}

double EvenPolynomial::leading() const {
    switch (degree()) {
    case 6: return c6_;
    case 4: return c4_;
    case 2: return c2_;
    default: return 0.0;
    }
}

double EvenPolynomial::operator()(double x) const {
    const double y = x * x;
    return y * (c2_ + y * (c4_ + y * c6_));
}

double EvenPolynomial::deriv(double x) const {
    const double y = x * x;
    return 2.0 * x * (c2_ + y * (2.0 * c4_ + 3.0 * y * c6_));
}

// ---- Rational ----

Rational Rational::parse(const std::string& text) {
    auto parse_int = [&text](const std::string& part) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(part, &used);
        } catch (const std::exception&) {
            throw ValidationError("alpha: cannot parse rational \"" + text + "\"");
        }
        if (used != part.size()) throw ValidationError("alpha: cannot parse rational \"" + text + "\"");
        return static_cast<std::int64_t>(v);
    };
    const auto slash = text.find('/');
    std::int64_t num = 0, den = 1;
    if (slash == std::string::npos) {
        num = parse_int(text);
    } else {
        num = parse_int(text.substr(0, slash));
        den = parse_int(text.substr(slash + 1));
    }
    if (den == 0) throw ValidationError("alpha: zero denominator in \"" + text + "\"");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

std::string Rational::str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

// ---- SequenceSpec ----

SequenceSpec::SequenceSpec(SequenceParams params, double alpha) : params_(std::move(params)), alpha_(alpha) {
    check_alpha(alpha);
    check_params(params_);
}

SequenceSpec::SequenceSpec(SequenceParams params, Rational alpha)
    : params_(std::move(params)), alpha_(alpha.value()), alpha_rational_(alpha) {
    check_alpha(alpha_);
    check_params(params_);
}

SequenceSpec SequenceSpec::with_alpha(double alpha) const { return SequenceSpec(params_, alpha); }
SequenceSpec SequenceSpec::with_alpha(Rational alpha) const { return SequenceSpec(params_, alpha); }

std::string to_string(SequenceKind kind) { return "seq" + std::to_string(static_cast<int>(kind)); }

std::string to_string(Seq4Case c) {
    switch (c) {
    case Seq4Case::A: return "a";
    case Seq4Case::B: return "b";
    case Seq4Case::C: return "c";
    case Seq4Case::D: return "d";
    }
    return "?";
}

std::string to_string(Regime r) {
    switch (r) {
    case Regime::Below: return "Below";
    case Regime::At: return "At";
    case Regime::Above: return "Above";
    }
    return "?";
}

std::string to_string(MinimumSet m) {
    switch (m) {
    case MinimumSet::Origin: return "Origin";
    case MinimumSet::PlusMinus: return "PlusMinus";
    case MinimumSet::ThreePoint: return "ThreePoint";
    }
    return "?";
}

// ---- JSON ----

namespace {

using nlohmann::json;

double get_real(const json& doc, const char* key) {
    if (!doc.contains(key)) throw ValidationError(std::string("spec: missing field \"") + key + "\"");
    const json& v = doc.at(key);
    if (!v.is_number()) throw ValidationError(std::string("spec: field \"") + key + "\" must be a number");
    return v.get<double>();
}

int get_int(const json& doc, const char* key) {
    if (!doc.contains(key)) throw ValidationError(std::string("spec: missing field \"") + key + "\"");
    const json& v = doc.at(key);
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d == std::floor(d) && std::fabs(d) < 1e9) return static_cast<int>(d);
    }
    throw ValidationError(std::string("spec: field \"") + key + "\" must be an integer");
}

} // namespace

SequenceSpec spec_from_json(const json& doc) {
    if (!doc.is_object()) throw ValidationError("spec: expected a JSON object");
    if (!doc.contains("kind") || !doc.at("kind").is_string())
        throw ValidationError("spec: missing string field \"kind\"");
    const std::string kind = doc.at("kind").get<std::string>();

    static const std::map<std::string, std::set<std::string>> allowed = {
        {"seq1", {"beta", "b", "k"}},         {"seq2", {"beta0", "b", "p", "ell"}},
        {"seq3", {"b", "k"}},                 {"seq4", {"ell", "ell_tilde", "case"}},
        {"seq5", {"ell"}},                    {"seq6", {"p", "ell"}},
    };
    auto it = allowed.find(kind);
    if (it == allowed.end()) throw ValidationError("spec: unknown kind \"" + kind + "\" (expected seq1..seq6)");
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (key != "kind" && key != "alpha" && !it->second.count(key))
            throw ValidationError("spec: unknown field \"" + key + "\" for kind " + kind);
    }

    SequenceParams params;
    if (kind == "seq1") {
        params = Seq1Params{get_real(doc, "beta"), get_int(doc, "b"), get_real(doc, "k")};
    } else if (kind == "seq2") {
        params = Seq2Params{get_real(doc, "beta0"), get_int(doc, "b"), get_int(doc, "p"), get_real(doc, "ell")};
    } else if (kind == "seq3") {
        params = Seq3Params{get_int(doc, "b"), get_real(doc, "k")};
    } else if (kind == "seq4") {
        if (!doc.contains("case") || !doc.at("case").is_string())
            throw ValidationError("spec: missing string field \"case\"");
        const std::string c = doc.at("case").get<std::string>();
        Seq4Case which;
        if (c == "a") which = Seq4Case::A;
        else if (c == "b") which = Seq4Case::B;
        else if (c == "c") which = Seq4Case::C;
        else if (c == "d") which = Seq4Case::D;
        else throw ValidationError("spec: field \"case\" must be one of a, b, c, d");
        params = Seq4Params{get_real(doc, "ell"), get_real(doc, "ell_tilde"), which};
    } else if (kind == "seq5") {
        params = Seq5Params{get_real(doc, "ell")};
    } else {
        params = Seq6Params{get_int(doc, "p"), get_real(doc, "ell")};
    }

    if (!doc.contains("alpha")) throw ValidationError("spec: missing field \"alpha\"");
    const json& a = doc.at("alpha");
    if (a.is_string()) return SequenceSpec(params, Rational::parse(a.get<std::string>()));
    if (a.is_number()) return SequenceSpec(params, a.get<double>());
    throw ValidationError("spec: field \"alpha\" must be a number or a \"p/q\" string");
}

json spec_to_json(const SequenceSpec& spec) {
    json doc;
    doc["kind"] = to_string(spec.kind());
    if (spec.alpha_rational())
        doc["alpha"] = spec.alpha_rational()->str();
    else
        doc["alpha"] = spec.alpha();
    std::visit(
        [&doc](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Seq1Params>) {
                doc["beta"] = p.beta;
                doc["b"] = p.b;
                doc["k"] = p.k;
            } else if constexpr (std::is_same_v<T, Seq2Params>) {
                doc["beta0"] = p.beta0;
                doc["b"] = p.b;
                doc["p"] = p.p;
                doc["ell"] = p.ell;
            } else if constexpr (std::is_same_v<T, Seq3Params>) {
                doc["b"] = p.b;
                doc["k"] = p.k;
            } else if constexpr (std::is_same_v<T, Seq4Params>) {
                doc["ell"] = p.ell;
                doc["ell_tilde"] = p.ell_tilde;
                doc["case"] = to_string(p.which);
            } else if constexpr (std::is_same_v<T, Seq5Params>) {
                doc["ell"] = p.ell;
            } else {
                doc["p"] = p.p;
                doc["ell"] = p.ell;
            }
        },
        spec.params());
    return doc;
}

// ---- exponents and regime ----

ScalingExponents scaling_exponents(const SequenceSpec& spec) {
    switch (spec.kind()) {
    case SequenceKind::Seq1: return {{1, 2}, 0.5};
    case SequenceKind::Seq2: {
        const int p = std::get<Seq2Params>(spec.params()).p;
        return {{1, 2 * p}, 0.5 * p};
    }
    case SequenceKind::Seq3: return {{2, 3}, 0.25};
    case SequenceKind::Seq4: return {{1, 3}, 0.5};
    case SequenceKind::Seq5: return {{1, 3}, 0.5};
    case SequenceKind::Seq6: {
        const int p = std::get<Seq6Params>(spec.params()).p;
        return {{1, 2 * p - 1}, 0.5 * (p - 1)};
    }
    }
    throw UsageError("scaling_exponents: unknown sequence kind");
}

Regime regime_of(const SequenceSpec& spec) {
    const Rational a0 = scaling_exponents(spec).alpha0;
    if (const auto& ar = spec.alpha_rational()) {
        const __int128 lhs = static_cast<__int128>(ar->num) * a0.den;
        const __int128 rhs = static_cast<__int128>(a0.num) * ar->den;
        if (lhs < rhs) return Regime::Below;
        if (lhs > rhs) return Regime::Above;
        return Regime::At;
    }
    const double diff = spec.alpha() - a0.value();
    if (std::fabs(diff) <= kRegimeTol) return Regime::At;
    return diff < 0.0 ? Regime::Below : Regime::Above;
}

// ---- validity ----

std::vector<CheckResult> validate(const SequenceSpec& spec) {
    const auto& cc = critical_constants();
    const double bc = cc.beta_c;
    std::vector<CheckResult> out;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Seq1Params>) {
                out.push_back(nonzero("k != 0", p.k));
                out.push_back(strict_positive("K'(beta) b - k < 0", -(K_deriv(p.beta, 1) * p.b - p.k)));
            } else if constexpr (std::is_same_v<T, Seq2Params>) {
                const double kp = K_deriv(p.beta0, p.p);
                out.push_back(nonzero("ell != K^(p)(beta0)", p.ell - kp));
                out.push_back(strict_positive("(K^(p)(beta0) - ell) b^p < 0", -(kp - p.ell) * ipow(p.b, p.p)));
            } else if constexpr (std::is_same_v<T, Seq3Params>) {
                out.push_back(nonzero("k != 0", p.k));
                out.push_back(strict_positive("K'(beta_c) b - k < 0", -(K_deriv(bc, 1) * p.b - p.k)));
            } else if constexpr (std::is_same_v<T, Seq4Params>) {
                const double k2 = K_deriv(bc, 2);
                switch (p.which) {
                case Seq4Case::A:
                    out.push_back(strict_positive("case a: ell > K''(beta_c)", p.ell - k2));
                    break;
                case Seq4Case::B:
                    out.push_back(equal("case b: ell = K''(beta_c)", p.ell, k2));
                    out.push_back(strict_positive("case b: ell_tilde > K'''(beta_c)", p.ell_tilde - K_deriv(bc, 3)));
                    break;
                case Seq4Case::C:
                    out.push_back(strict_positive("case c: K''(beta_c) > ell > ell_c",
                                                  std::min(k2 - p.ell, p.ell - cc.ell_c), kConjectureNote));
                    break;
                case Seq4Case::D: {
                    out.push_back(equal("case d: ell = ell_c", p.ell, cc.ell_c, kConjectureNote));
                    const double k1_third = first_order_K_third_deriv_estimate();
                    out.push_back(strict_positive("case d: ell_tilde > K1'''(beta_c)", p.ell_tilde - k1_third,
                                                  "conjecture-dependent; K1'''(beta_c) is a finite-difference estimate ("
                                                      + std::to_string(k1_third) + ")"));
                    break;
                }
                }
            } else if constexpr (std::is_same_v<T, Seq5Params>) {
                out.push_back(strict_positive("ell > K''(beta_c)", p.ell - K_deriv(bc, 2)));
            } else {
                const double kp = K_deriv(bc, p.p);
                out.push_back(nonzero("ell != K^(p)(beta_c)", p.ell - kp));
                out.push_back(strict_positive("(K^(p)(beta_c) - ell) (-1)^p < 0", -(kp - p.ell) * ipow(-1.0, p.p)));
            }
        },
        spec.params());
    return out;
}

void require_valid(const SequenceSpec& spec) {
    std::string failed;
    for (const auto& c : validate(spec)) {
        if (!c.passed) failed += (failed.empty() ? "" : "; ") + c.name;
    }
    if (!failed.empty()) throw ValidationError(to_string(spec.kind()) + ": violated condition(s): " + failed);
}

// ---- the sequences ----

ModelParams params_at(const SequenceSpec& spec, double n) {
    if (!(n >= 1.0)) throw DomainError("params_at: n must be >= 1");
    require_valid(spec);
    const double bc = beta_critical();
    const double h = std::pow(n, -spec.alpha()); // 1/n^alpha
    return std::visit(
        [&](const auto& p) -> ModelParams {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Seq1Params>) {
                return ModelParams(p.beta + p.b * h, second_order_K(p.beta) + p.k * h);
            } else if constexpr (std::is_same_v<T, Seq2Params>) {
                double K = 0.0;
                for (int j = 0; j < p.p; ++j) K += K_deriv(p.beta0, j) * ipow(p.b * h, j) / factorial(j);
                K += p.ell * ipow(p.b * h, p.p) / factorial(p.p);
                return ModelParams(p.beta0 + p.b * h, K);
            } else if constexpr (std::is_same_v<T, Seq3Params>) {
                return ModelParams(bc + p.b * h, second_order_K(bc) + p.k * h);
            } else if constexpr (std::is_same_v<T, Seq4Params>) {
                const double K = second_order_K(bc) + K_deriv(bc, 1) * h + p.ell * h * h / 2.0
                                 + p.ell_tilde * h * h * h / 6.0;
                return ModelParams(bc + h, K);
            } else if constexpr (std::is_same_v<T, Seq5Params>) {
                return ModelParams(bc - h, second_order_K(bc) - K_deriv(bc, 1) * h + p.ell * h * h / 2.0);
            } else {
                double K = 0.0;
                for (int j = 0; j < p.p; ++j) K += K_deriv(bc, j) * ipow(-h, j) / factorial(j);
                K += p.ell * ipow(-h, p.p) / factorial(p.p);
                return ModelParams(bc - h, K);
            }
        },
        spec.params());
}

std::optional<double> coexistence_onset(const SequenceSpec& spec, double n_probe_max) {
    require_valid(spec);
    const auto probes = geometric_probes(n_probe_max);
    std::optional<double> onset;
    for (auto it = probes.rbegin(); it != probes.rend(); ++it) {
        bool inside = false;
        try {
            const PhaseRegion r = classify(params_at(spec, *it));
            inside = r == PhaseRegion::Coexistence || r == PhaseRegion::FirstOrderCurve;
        } catch (const DomainError&) {
            inside = false;
        }
        if (!inside) break;
        onset = *it;
    }
    return onset;
}

GinzburgLandau gl_polynomial(const SequenceSpec& spec) {
    require_valid(spec);
    const double bc = beta_critical();
    const ScalingExponents exps = scaling_exponents(spec);
    const EvenPolynomial g = std::visit(
        [&](const auto& p) -> EvenPolynomial {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Seq1Params>) {
                return EvenPolynomial::make(p.beta * (K_deriv(p.beta, 1) * p.b - p.k), c4_of(p.beta));
            } else if constexpr (std::is_same_v<T, Seq2Params>) {
                return EvenPolynomial::make(
                    p.beta0 * (K_deriv(p.beta0, p.p) - p.ell) * ipow(p.b, p.p) / factorial(p.p), c4_of(p.beta0));
            } else if constexpr (std::is_same_v<T, Seq3Params>) {
                return EvenPolynomial::make(bc * (K_deriv(bc, 1) * p.b - p.k), 0.0, kTricriticalC6);
            } else if constexpr (std::is_same_v<T, Seq4Params>) {
                return EvenPolynomial::make(0.5 * bc * (K_deriv(bc, 2) - p.ell), -4.0 * kTricriticalC4,
                                            kTricriticalC6);
            } else if constexpr (std::is_same_v<T, Seq5Params>) {
                return EvenPolynomial::make(0.5 * bc * (K_deriv(bc, 2) - p.ell), 4.0 * kTricriticalC4,
                                            kTricriticalC6);
            } else {
                return EvenPolynomial::make(bc * (K_deriv(bc, p.p) - p.ell) * ipow(-1.0, p.p) / factorial(p.p),
                                            4.0 * kTricriticalC4);
            }
        },
        spec.params());
    return {g, exps};
}

EvenPolynomial g_tilde(const SequenceSpec& spec) {
    if (spec.kind() == SequenceKind::Seq6)
        throw UnsupportedError("g_tilde: sequence 6 has no coercive top-order limit; n G(x/n^{theta alpha0}) -> 0 "
                               "for every x, so the above-threshold limit theorem does not apply");
    const EvenPolynomial g = gl_polynomial(spec).g;
    if (g.degree() == 4) return EvenPolynomial::make(0.0, g.c4());
    return EvenPolynomial::make(0.0, 0.0, g.c6());
}

XBar xbar(const EvenPolynomial& g) {
    if (!(g.leading() > 0.0)) throw DomainError("xbar: polynomial must have a positive leading coefficient");
    const double x = largest_critical_point(g);
    if (x == 0.0) return {0.0, MinimumSet::Origin};
    if (g.degree() <= 4) return {x, MinimumSet::PlusMinus};
    const double value = g(x);
    if (std::fabs(value) <= kThreePointTol) return {x, MinimumSet::ThreePoint};
    if (value < 0.0) return {x, MinimumSet::PlusMinus};
    return {0.0, MinimumSet::Origin};
}

double limit_constant(const EvenPolynomial& poly, const QuadratureConfig& quad) {
    quad.validate();
    if (!(poly.leading() > 0.0))
        throw DomainError("limit_constant: polynomial must have a positive leading coefficient");
    const double xc = largest_critical_point(poly);
    const double p_min = std::min(0.0, poly(xc));
    const double X = tail_bound([&poly](double x) { return poly(x); }, p_min, quad.tail_cut, std::max(xc, 1e-3));
    auto weight = [&](double x) { return std::exp(-(poly(x) - p_min)); };
    const std::vector<double> breaks{xc};
    const double denom = integrate(weight, 0.0, X, breaks, quad.rel_tol, 0.0, "limit_constant: normalization");
    const double numer = integrate([&](double x) { return x * weight(x); }, 0.0, X, breaks, quad.rel_tol, 0.0,
                                   "limit_constant: first moment");
    return numer / denom;
}

std::vector<double> check_hypothesis_iiia(const SequenceSpec& base, double alpha, double radius,
                                          const std::vector<double>& n_list) {
    if (!(radius > 0.0)) throw DomainError("check_hypothesis_iiia: radius must be > 0");
    const SequenceSpec spec = base.with_alpha(alpha);
    const auto gl = gl_polynomial(spec);
    const double a0 = gl.exps.alpha0_value();
    std::vector<double> out;
    for (double n : n_list) {
        const ModelParams mp = params_at(spec, n);
        const double amp = std::pow(n, alpha / a0);
        const double shrink = std::pow(n, gl.exps.theta * alpha);
        double worst = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double x = -radius + 2.0 * radius * i / 2000.0;
            worst = std::max(worst, std::fabs(amp * free_energy(mp, x / shrink) - gl.g(x)));
        }
        out.push_back(worst);
    }
    return out;
}

namespace {

std::vector<std::vector<double>> above_threshold_table(const SequenceSpec& spec, const EvenPolynomial* target,
                                                       const std::vector<double>& x_grid,
                                                       const std::vector<double>& n_list) {
    const ScalingExponents exps = scaling_exponents(spec);
    std::vector<std::vector<double>> out;
    for (double n : n_list) {
        const ModelParams mp = params_at(spec, n);
        const double shrink = std::pow(n, exps.theta * exps.alpha0_value());
        std::vector<double> row;
        for (double x : x_grid) {
            const double lhs = n * free_energy(mp, x / shrink);
            row.push_back(std::fabs(lhs - (target ? (*target)(x) : 0.0)));
        }
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace

std::vector<std::vector<double>> check_hypothesis_v(const SequenceSpec& base, double alpha,
                                                    const std::vector<double>& x_grid,
                                                    const std::vector<double>& n_list) {
    const SequenceSpec spec = base.with_alpha(alpha);
    if (regime_of(spec) != Regime::Above)
        throw UsageError("check_hypothesis_v: alpha must exceed alpha0 = " + scaling_exponents(spec).alpha0.str());
    const EvenPolynomial gt = g_tilde(spec);
    return above_threshold_table(spec, &gt, x_grid, n_list);
}

std::vector<std::vector<double>> seq6_degenerate_limit(const SequenceSpec& base, double alpha,
                                                       const std::vector<double>& x_grid,
                                                       const std::vector<double>& n_list) {
    if (base.kind() != SequenceKind::Seq6) throw UsageError("seq6_degenerate_limit: requires a seq6 spec");
    const SequenceSpec spec = base.with_alpha(alpha);
    if (regime_of(spec) != Regime::Above)
        throw UsageError("seq6_degenerate_limit: alpha must exceed alpha0 = " + scaling_exponents(spec).alpha0.str());
    require_valid(spec);
    return above_threshold_table(spec, nullptr, x_grid, n_list);
}

} // namespace bclab
