#include <cmath>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "bclab/cli.hpp"
#include "bclab/harness.hpp"
#include "bclab/phase_diagram.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "bclab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = bclab::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("bclab_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
    const fs::path p = scratch_dir() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSeq1 = R"({"kind":"seq1","alpha":0.3,"beta":1.0,"b":0,"k":1.0})";

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) lines.push_back(line);
    return lines;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("magnetize prints a JSON record") {
    Run r = run({"magnetize", "--beta", "1.0", "--kappa", "1.0"});
    REQUIRE(r.code == 0);
    json doc = json::parse(r.out);
    CHECK(doc.at("m").get<double>() == 0.0);
    CHECK(doc.at("region").get<std::string>() == "SinglePhase");
    r = run({"magnetize", "--beta", "1.0", "--kappa", "1.5"});
    REQUIRE(r.code == 0);
    doc = json::parse(r.out);
    CHECK(doc.at("m").get<double>() == bclab::thermo_magnetization(bclab::ModelParams(1.0, 1.5)));
    CHECK(doc.at("region").get<std::string>() == "Coexistence");
    CHECK(doc.contains("G_m"));
    CHECK(run({"magnetize", "--beta", "-1", "--kappa", "1.5"}).code == 2);
}

TEST_CASE("phase diagram columns") {
    const Run r = run({"phase-diagram", "--beta-min", "0.5", "--beta-max", "3.0", "--points", "11"});
    REQUIRE(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 12);
    CHECK(lines[0] == "beta,K_second_order,K_first_order");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const double beta = std::stod(lines[i].substr(0, lines[i].find(',')));
        const bool empty_last = lines[i].back() == ',';
        CHECK(empty_last == (beta <= bclab::beta_critical()));
    }
    CHECK(run({"phase-diagram", "--beta-min", "2", "--beta-max", "1", "--points", "5"}).code == 2);
}

TEST_CASE("sequence-run is deterministic and thread-count independent") {
    const std::string spec = write_file("seq1.json", kSeq1);
    const std::vector<std::string> base{"sequence-run", "--spec", spec, "--n", "50,100,200"};
    const Run a = run(base);
    REQUIRE(a.code == 0);
    auto one = base;
    one.insert(one.end(), {"--threads", "1"});
    const Run b = run(one);
    REQUIRE(b.code == 0);
    CHECK(a.out == b.out);
    CHECK(run(base).out == a.out);
    CHECK(split_lines(a.out).size() == 4);
}

TEST_CASE("sequence-run writes a sidecar") {
    const std::string spec = write_file("seq1b.json", kSeq1);
    const std::string out = (scratch_dir() / "report.csv").string();
    const Run r = run({"sequence-run", "--spec", spec, "--n", "100,1000", "--estimator", "thermo", "-o", out});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(split_lines(slurp(out)).size() == 3);
    const json side = json::parse(slurp((scratch_dir() / "report.json").string()));
    CHECK(side.at("regime").get<std::string>() == "Below");
    CHECK(side.at("alpha0").get<std::string>() == "1/2");
}

TEST_CASE("config files and flag precedence") {
    const std::string cfg = write_file("cfg.json", R"({"command":"magnetize","params":{"beta":1.0,"kappa":1.5}})");
    const Run from_cfg = run({"--config", cfg});
    REQUIRE(from_cfg.code == 0);
    CHECK(json::parse(from_cfg.out).at("kappa").get<double>() == 1.5);
    const Run override = run({"magnetize", "--config", cfg, "--kappa", "2.0"});
    REQUIRE(override.code == 0);
    CHECK(json::parse(override.out).at("kappa").get<double>() == 2.0);
    const std::string inline_spec =
        write_file("cfg2.json", std::string(R"({"command":"sequence-run","estimator":"thermo","n_list":[10,100],"spec":)")
                                    + kSeq1 + "}");
    const Run seq = run({"--config", inline_spec});
    CHECK(seq.code == 0);
    CHECK(split_lines(seq.out).size() == 3);
}

TEST_CASE("errors name the offending field") {
    const std::string unknown = write_file("bad1.json", R"({"command":"magnetize","beta":1,"kappa":1,"colour":2})");
    Run r = run({"--config", unknown});
    CHECK(r.code == 2);
    CHECK(r.err.find("colour") != std::string::npos);

    r = run({"magnetize", "--beta", "1.0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("kappa") != std::string::npos);

    const std::string spec = write_file("seq1c.json", kSeq1);
    r = run({"sequence-run", "--spec", spec, "--n", "100,50"});
    CHECK(r.code == 2);
    CHECK(r.err.find("n_list") != std::string::npos);

    r = run({"magnetize", "--beta", "1.0", "--kappa", "1.0", "--sweeps", "10"});
    CHECK(r.code == 2);
    CHECK(r.err.find("sweeps") != std::string::npos);

    r = run({"sequence-run", "--spec", spec, "--n", "10", "--estimator", "guess"});
    CHECK(r.code == 2);
    CHECK(r.err.find("estimator") != std::string::npos);

    const std::string bad_spec = write_file("bad_spec.json", R"({"kind":"seq1","alpha":0.3,"beta":1.0,"b":1,"k":0})");
    r = run({"sequence-run", "--spec", bad_spec, "--n", "10"});
    CHECK(r.code == 2);
    CHECK(r.err.find("k != 0") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"finite-size", "--beta", "1", "--kappa", "1", "--n", "30000"}).code == 4);
    const double ell = bclab::second_order_K_deriv(bclab::beta_critical(), 3) - 5.0;
    const std::string s6 = write_file("s6.json", R"({"kind":"seq6","alpha":0.5,"p":3,"ell":)" + bclab::format_double(ell) + "}");
    const Run r = run({"sequence-run", "--spec", s6, "--n", "10,20"});
    CHECK(r.code == 5);
    CHECK_FALSE(r.err.empty());
    CHECK(run({"conjectures", "--h-grid", "0.1,0.2"}).code == 2);
    CHECK(run({"mc", "--beta", "1", "--kappa", "1.5", "--n", "20", "--sweeps", "200", "--seed", "3"}).code == 0);
}

TEST_CASE("rational alpha on the command line") {
    const std::string spec = write_file("seq1d.json", kSeq1);
    const std::string out = (scratch_dir() / "at.csv").string();
    const Run r = run({"sequence-run", "--spec", spec, "--alpha", "1/2", "--n", "20,40", "-o", out});
    REQUIRE(r.code == 0);
    const json side = json::parse(slurp((scratch_dir() / "at.json").string()));
    CHECK(side.at("regime").get<std::string>() == "At");
    CHECK(side.at("z_bar").is_number());
    CHECK(side.at("spec").at("alpha").get<std::string>() == "1/2");
}

}
