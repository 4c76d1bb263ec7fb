#include "bclab/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "bclab/errors.hpp"
#include "bclab/finite_size.hpp"
#include "bclab/harness.hpp"
#include "bclab/minima.hpp"
#include "bclab/phase_diagram.hpp"
#include "bclab/sequences.hpp"

namespace bclab {

namespace {

using nlohmann::json;

const std::vector<std::string> kCommands = {"phase-diagram", "magnetize", "finite-size", "mc",
                                            "sequence-run",  "mdp-check", "weak-limit",  "conjectures"};

struct Inputs {
    std::optional<std::string> command;
    std::optional<json> spec;
    std::optional<double> beta, kappa, beta_min, beta_max, a;
    std::optional<int> points, n_max, threads;
    std::optional<long> sweeps, burn_in;
    std::optional<std::vector<std::int64_t>> n_list;
    std::optional<std::vector<double>> h_grid;
    std::optional<std::string> alpha, output_path, estimator;
    std::optional<std::uint64_t> seed;

    std::set<std::string> present() const {
        std::set<std::string> s;
        if (spec) s.insert("spec");
        if (beta) s.insert("beta");
        if (kappa) s.insert("kappa");
        if (beta_min) s.insert("beta_min");
        if (beta_max) s.insert("beta_max");
        if (a) s.insert("a");
        if (points) s.insert("points");
        if (n_max) s.insert("n_max");
        if (sweeps) s.insert("sweeps");
        if (burn_in) s.insert("burn_in");
        if (n_list) s.insert("n_list");
        if (h_grid) s.insert("h_grid");
        if (alpha) s.insert("alpha");
        if (estimator) s.insert("estimator");
        if (seed) s.insert("seed");
        return s;
    }
};

struct CommandShape {
    std::set<std::string> required;
    std::set<std::string> optional;
};

const std::map<std::string, CommandShape>& shapes() {
    static const std::map<std::string, CommandShape> table = {
        {"phase-diagram", {{"beta_min", "beta_max", "points"}, {}}},
        {"magnetize", {{"beta", "kappa"}, {}}},
        {"finite-size", {{"beta", "kappa", "n_list"}, {"n_max"}}},
        {"mc", {{"beta", "kappa", "n_list", "sweeps"}, {"burn_in", "seed"}}},
        {"sequence-run", {{"spec", "n_list"}, {"alpha", "estimator", "seed", "sweeps", "n_max"}}},
        {"mdp-check", {{"spec", "n_list", "a"}, {"alpha", "n_max"}}},
        {"weak-limit", {{"spec", "n_list"}, {"alpha", "n_max"}}},
        {"conjectures", {{"h_grid"}, {}}},
    };
    return table;
}

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(std::string(what) + ": cannot open \"" + path + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json_file(const std::string& path, const char* what) {
    try {
        return json::parse(read_file(path, what));
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string(what) + ": invalid JSON in \"" + path + "\": " + e.what());
    }
}

template <class T>
T json_as(const json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ValidationError("config: field \"" + key + "\" has the wrong type");
    }
}

void apply_config(Inputs& in, const json& cfg) {
    if (!cfg.is_object()) throw ValidationError("config: expected a JSON object");
    for (const auto& [key, v] : cfg.items()) {
        if (key == "command") in.command = json_as<std::string>(v, key);
        else if (key == "spec") {
            if (v.is_string()) in.spec = parse_json_file(v.get<std::string>(), "spec");
            else if (v.is_object()) in.spec = v;
            else throw ValidationError("config: field \"spec\" must be an object or a file path");
        } else if (key == "params") {
            if (!v.is_object() || !v.contains("beta") || !v.contains("kappa") || v.size() != 2)
                throw ValidationError("config: field \"params\" must be {\"beta\": ..., \"kappa\": ...}");
            in.beta = json_as<double>(v.at("beta"), "params.beta");
            in.kappa = json_as<double>(v.at("kappa"), "params.kappa");
        } else if (key == "beta") in.beta = json_as<double>(v, key);
        else if (key == "kappa") in.kappa = json_as<double>(v, key);
        else if (key == "beta_min") in.beta_min = json_as<double>(v, key);
        else if (key == "beta_max") in.beta_max = json_as<double>(v, key);
        else if (key == "a") in.a = json_as<double>(v, key);
        else if (key == "points") in.points = json_as<int>(v, key);
        else if (key == "n_max") in.n_max = json_as<int>(v, key);
        else if (key == "threads") in.threads = json_as<int>(v, key);
        else if (key == "sweeps") in.sweeps = json_as<long>(v, key);
        else if (key == "burn_in") in.burn_in = json_as<long>(v, key);
        else if (key == "n_list" || key == "n") {
            if (v.is_array()) in.n_list = json_as<std::vector<std::int64_t>>(v, key);
            else in.n_list = std::vector<std::int64_t>{json_as<std::int64_t>(v, key)};
        } else if (key == "h_grid") in.h_grid = json_as<std::vector<double>>(v, key);
        else if (key == "alpha") {
            if (v.is_string()) in.alpha = v.get<std::string>();
            else in.alpha = format_double(json_as<double>(v, key));
        } else if (key == "output_path" || key == "output") in.output_path = json_as<std::string>(v, key);
        else if (key == "estimator") in.estimator = json_as<std::string>(v, key);
        else if (key == "seed") in.seed = json_as<std::uint64_t>(v, key);
        else throw ValidationError("config: unknown field \"" + key + "\"");
    }
}

void check_shape(const std::string& command, const Inputs& in) {
    const auto& shape = shapes().at(command);
    for (const auto& field : in.present()) {
        if (!shape.required.count(field) && !shape.optional.count(field))
            throw ValidationError(command + ": field \"" + field + "\" is not used by this command");
    }
    for (const auto& field : shape.required) {
        if (!in.present().count(field)) throw ValidationError(command + ": missing required field \"" + field + "\"");
    }
    if (in.n_list) {
        const auto& v = *in.n_list;
        if (v.empty()) throw ValidationError(command + ": n_list is empty");
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] < 1) throw ValidationError(command + ": n_list entries must be >= 1");
            if (i > 0 && v[i] <= v[i - 1]) throw ValidationError(command + ": n_list must be strictly increasing");
        }
        if ((command == "finite-size" || command == "mc") && v.size() != 1)
            throw ValidationError(command + ": n takes a single value");
    }
}

SequenceSpec resolve_spec(const Inputs& in) {
    SequenceSpec spec = spec_from_json(*in.spec);
    if (in.alpha) {
        if (in.alpha->find('/') != std::string::npos) return spec.with_alpha(Rational::parse(*in.alpha));
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(*in.alpha, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != in.alpha->size()) throw ValidationError("alpha: cannot parse \"" + *in.alpha + "\"");
        return spec.with_alpha(value);
    }
    return spec;
}

class Sink {
public:
    Sink(const std::optional<std::string>& path, std::ostream& fallback) : fallback_(fallback) {
        if (path) {
            file_.open(*path, std::ios::binary | std::ios::trunc);
            if (!file_) throw ValidationError("output_path: cannot write \"" + *path + "\"");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_; }

private:
    std::ofstream file_;
    std::ostream& fallback_;
};

void write_json_file(const std::string& path, const json& doc) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("output_path: cannot write \"" + path + "\"");
    f << doc.dump(2) << '\n';
}

void configure_threads(const Inputs& in) {
    std::optional<int> threads = in.threads;
    if (!threads) {
        if (const char* env = std::getenv("BCLAB_THREADS")) {
            try {
                threads = std::stoi(env);
            } catch (const std::exception&) {
                throw ValidationError("BCLAB_THREADS: not an integer");
            }
        }
    }
    if (threads) {
        if (*threads < 1) throw ValidationError("threads: must be >= 1");
#ifdef _OPENMP
        omp_set_num_threads(*threads);
#endif
    }
}

int cmd_phase_diagram(const Inputs& in, std::ostream& out) {
    if (!(*in.beta_min > 0.0) || !(*in.beta_max > *in.beta_min))
        throw ValidationError("phase-diagram: need 0 < beta_min < beta_max");
    if (*in.points < 2) throw ValidationError("phase-diagram: points must be >= 2");
    const double bc = beta_critical();
    std::ostringstream body;
    body << "beta,K_second_order,K_first_order\n";
    for (int i = 0; i < *in.points; ++i) {
        const double beta = *in.beta_min + (*in.beta_max - *in.beta_min) * i / (*in.points - 1);
        body << format_double(beta) << ',' << format_double(second_order_K(beta)) << ','
             << (beta > bc ? format_double(first_order_K(beta)) : "") << '\n';
    }
    Sink sink(in.output_path, out);
    sink.stream() << body.str();
    return 0;
}

int cmd_magnetize(const Inputs& in, std::ostream& out) {
    const ModelParams mp(*in.beta, *in.kappa);
    const double m = thermo_magnetization(mp);
    json doc;
    doc["beta"] = mp.beta();
    doc["kappa"] = mp.kappa();
    doc["m"] = m;
    doc["G_m"] = free_energy(mp, m);
    doc["region"] = std::string(to_string(classify(mp)));
    Sink sink(in.output_path, out);
    sink.stream() << doc.dump(2) << '\n';
    return 0;
}

int cmd_finite_size(const Inputs& in, std::ostream& out) {
    const ModelParams mp(*in.beta, *in.kappa);
    const int n = static_cast<int>(in.n_list->front());
    const SpinLawExact law = finite_size_law(n, mp, in.n_max.value_or(kDefaultNMax));
    Sink sink(in.output_path, out);
    auto& os = sink.stream();
    os << "s,probability\n";
    for (int s = -n; s <= n; ++s) os << s << ',' << format_double(law.probability(s)) << '\n';
    return 0;
}

int cmd_mc(const Inputs& in, std::ostream& out) {
    const ModelParams mp(*in.beta, *in.kappa);
    const int n = static_cast<int>(in.n_list->front());
    const std::uint64_t seed = in.seed.value_or(0);
    const McEstimate est = mc_estimate(n, mp, *in.sweeps, in.burn_in, seed);
    json doc;
    doc["n"] = n;
    doc["beta"] = mp.beta();
    doc["kappa"] = mp.kappa();
    doc["mean"] = est.mean;
    doc["stderr"] = est.std_error;
    doc["sweeps"] = est.sweeps;
    doc["burn_in"] = in.burn_in.value_or(*in.sweeps / 10);
    doc["seed"] = est.seed;
    Sink sink(in.output_path, out);
    sink.stream() << doc.dump(2) << '\n';
    return 0;
}

int cmd_sequence_run(const Inputs& in, std::ostream& out) {
    const SequenceSpec spec = resolve_spec(in);
    const std::string estimator = in.estimator.value_or("exact");
    AsymptoticsReport report;
    if (estimator == "thermo") {
        report = run_thermo_asymptotics(spec, *in.n_list);
    } else if (estimator == "exact" || estimator == "mc") {
        FiniteSizeOptions opts;
        opts.n_max = in.n_max.value_or(kDefaultNMax);
        opts.seed = in.seed.value_or(0);
        if (in.sweeps) opts.mc_sweeps = *in.sweeps;
        report = run_finite_size_asymptotics(spec, *in.n_list, estimator == "mc" ? Estimator::MonteCarlo
                                                                                 : Estimator::Exact, opts);
    } else {
        throw ValidationError("estimator: expected one of thermo, exact, mc; got \"" + estimator + "\"");
    }
    Sink sink(in.output_path, out);
    write_report_csv(report, sink.stream());
    if (in.output_path) write_json_file(sidecar_path(*in.output_path), report_constants_json(report, spec));
    return 0;
}

int cmd_mdp_check(const Inputs& in, std::ostream& out) {
    const SequenceSpec spec = resolve_spec(in);
    const MdpReport rep = mdp_rate_estimate(spec, spec.alpha(), *in.a, *in.n_list, in.n_max.value_or(kDefaultNMax));
    Sink sink(in.output_path, out);
    auto& os = sink.stream();
    os << "n,log_tail,rate_est,saturated\n";
    for (const auto& r : rep.rows)
        os << r.n << ',' << format_double(r.log_tail) << ',' << format_double(r.rate_est) << ','
           << (r.saturated ? "true" : "false") << '\n';
    if (in.output_path) {
        json doc;
        doc["spec"] = spec_to_json(spec);
        doc["a"] = rep.a;
        doc["speed_exponent"] = rep.speed_exponent;
        doc["target"] = rep.target;
        write_json_file(sidecar_path(*in.output_path), doc);
    }
    return 0;
}

int cmd_weak_limit(const Inputs& in, std::ostream& out) {
    const SequenceSpec spec = resolve_spec(in);
    std::ostringstream body;
    body << "n,kolmogorov_distance\n";
    for (std::int64_t n : *in.n_list) {
        if (n > std::numeric_limits<int>::max()) throw ValidationError("weak-limit: n too large");
        const double d =
            weak_limit_distance(spec, spec.alpha(), static_cast<int>(n), in.n_max.value_or(kDefaultNMax));
        body << n << ',' << format_double(d) << '\n';
    }
    Sink sink(in.output_path, out);
    sink.stream() << body.str();
    return 0;
}

int cmd_conjectures(const Inputs& in, std::ostream& out) {
    const ConjectureEstimates est = verify_tricritical_conjectures(*in.h_grid);
    Sink sink(in.output_path, out);
    auto& os = sink.stream();
    os << "h,K1_prime_est,K1_second_est,K_prime_ref,ell_c_ref\n";
    for (std::size_t i = 0; i < est.h.size(); ++i)
        os << format_double(est.h[i]) << ',' << format_double(est.K1_prime_est[i]) << ','
           << format_double(est.K1_second_est[i]) << ',' << format_double(est.K_prime_ref) << ','
           << format_double(est.ell_c_ref) << '\n';
    return 0;
}

int dispatch(const std::string& command, const Inputs& in, std::ostream& out) {
    if (command == "phase-diagram") return cmd_phase_diagram(in, out);
    if (command == "magnetize") return cmd_magnetize(in, out);
    if (command == "finite-size") return cmd_finite_size(in, out);
    if (command == "mc") return cmd_mc(in, out);
    if (command == "sequence-run") return cmd_sequence_run(in, out);
    if (command == "mdp-check") return cmd_mdp_check(in, out);
    if (command == "weak-limit") return cmd_weak_limit(in, out);
    return cmd_conjectures(in, out);
}

// Raw flag values; an option contributes only when it was given on the command line.
struct Flags {
    std::string config, spec_path, alpha, output, estimator;
    double beta = 0, kappa = 0, beta_min = 0, beta_max = 0, a = 0;
    int points = 0, n_max = 0, threads = 0;
    long sweeps = 0, burn_in = 0;
    std::uint64_t seed = 0;
    std::vector<std::int64_t> n_list;
    std::vector<double> h_grid;
    std::map<std::string, CLI::Option*> opts;

    void add(CLI::App& app) {
        opts["config"] = app.add_option("--config", config, "JSON config; flags take precedence");
        opts["threads"] = app.add_option("--threads", threads, "Worker threads (fallback: BCLAB_THREADS)");
        opts["output"] = app.add_option("-o,--output", output, "Output file (default: stdout)");
        opts["beta"] = app.add_option("--beta", beta, "Inverse temperature");
        opts["kappa"] = app.add_option("--kappa", kappa, "Interaction strength K");
        opts["beta_min"] = app.add_option("--beta-min", beta_min);
        opts["beta_max"] = app.add_option("--beta-max", beta_max);
        opts["points"] = app.add_option("--points", points);
        opts["n"] = app.add_option("--n", n_list, "System size(s), comma separated")->delimiter(',');
        opts["n_max"] = app.add_option("--n-max", n_max, "Cap for exact enumeration");
        opts["sweeps"] = app.add_option("--sweeps", sweeps);
        opts["burn_in"] = app.add_option("--burn-in", burn_in);
        opts["seed"] = app.add_option("--seed", seed);
        opts["spec"] = app.add_option("--spec", spec_path, "Sequence spec JSON file");
        opts["alpha"] = app.add_option("--alpha", alpha, "Overrides the spec alpha; accepts p/q");
        opts["a"] = app.add_option("--a", a, "MDP threshold");
        opts["estimator"] = app.add_option("--estimator", estimator, "thermo, exact or mc");
        opts["h"] = app.add_option("--h-grid", h_grid, "Step sizes, comma separated")->delimiter(',');
    }

    bool given(const char* key) const { return opts.at(key)->count() > 0; }

    void apply(Inputs& in) const {
        if (given("threads")) in.threads = threads;
        if (given("output")) in.output_path = output;
        if (given("beta")) in.beta = beta;
        if (given("kappa")) in.kappa = kappa;
        if (given("beta_min")) in.beta_min = beta_min;
        if (given("beta_max")) in.beta_max = beta_max;
        if (given("points")) in.points = points;
        if (given("n")) in.n_list = n_list;
        if (given("n_max")) in.n_max = n_max;
        if (given("sweeps")) in.sweeps = sweeps;
        if (given("burn_in")) in.burn_in = burn_in;
        if (given("seed")) in.seed = seed;
        if (given("spec")) in.spec = parse_json_file(spec_path, "spec");
        if (given("alpha")) in.alpha = alpha;
        if (given("a")) in.a = a;
        if (given("estimator")) in.estimator = estimator;
        if (given("h")) in.h_grid = h_grid;
    }
};

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mean-field Blume-Capel laboratory"};
    app.require_subcommand(0, 1);
    Flags top;
    top.opts["config"] = app.add_option("--config", top.config, "JSON config naming its command");
    std::map<std::string, Flags> flags;
    std::map<std::string, CLI::App*> subs;
    for (const auto& name : kCommands) {
        subs[name] = app.add_subcommand(name);
        flags[name].add(*subs[name]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        std::string command;
        Inputs in;
        const Flags* chosen = nullptr;
        for (const auto& name : kCommands) {
            if (subs[name]->parsed()) {
                command = name;
                chosen = &flags[name];
            }
        }
        const std::string config_path = chosen && chosen->given("config") ? chosen->config
                                        : top.opts["config"]->count()    ? top.config
                                                                         : std::string();
        if (!config_path.empty()) apply_config(in, parse_json_file(config_path, "config"));
        if (command.empty()) {
            if (!in.command) {
                err << app.help();
                return 1;
            }
            command = *in.command;
            if (!shapes().count(command)) throw ValidationError("config: unknown command \"" + command + "\"");
        } else if (in.command && *in.command != command) {
            throw ValidationError("config: command \"" + *in.command + "\" does not match subcommand \"" + command
                                  + "\"");
        }
        if (chosen) chosen->apply(in);
        check_shape(command, in);
        configure_threads(in);
        return dispatch(command, in, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        err << "error: numeric failure in " << e.operation() << " (achieved tolerance "
            << format_double(e.achieved_tolerance()) << ")\n";
        return 3;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
        return 4;
    } catch (const UnsupportedError& e) {
        err << "error: " << e.what() << '\n';
        return 5;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace bclab
