#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "uag/uag.hpp"

#ifndef UAGCLI_PATH
#error "UAGCLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(UAGCLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> csv_rows(const std::string& text) {
    std::vector<std::string> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) rows.push_back(line);
    return rows;
}

std::vector<std::string> fields(const std::string& row) {
    std::vector<std::string> out;
    std::istringstream is(row);
    std::string f;
    while (std::getline(is, f, ',')) out.push_back(f);
    return out;
}

}  // namespace

TEST_CASE("simulate emits a deterministic summary row", "[cli]") {
    const std::string args = "simulate --pattern cycle:2 --n 1000 --m 2 --R 1000 --seed 7";
    const auto first = run_cli(args);
    REQUIRE(first.exit_code == 0);
    const auto second = run_cli(args);
    CHECK(first.out == second.out);  // byte-identical reruns

    const auto rows = csv_rows(first.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "n,m,pattern,R,seed,mean,var,d_tv,d_k,d_w,fitted_p");
    const auto f = fields(rows[1]);
    REQUIRE(f.size() >= 10);
    CHECK(f[0] == "1000");
    CHECK(f[2] == "cycle:2");

    const double mean = std::strtod(f[5].c_str(), nullptr);
    const double var = std::strtod(f[6].c_str(), nullptr);
    const double se = std::sqrt(var / 1000.0);
    const double closed = uag::closed_form_cycle_mean(2, 1000, 2);
    CHECK(std::fabs(mean - closed) < 4.0 * se);
}

TEST_CASE("configuration errors exit with 2", "[cli]") {
    CHECK(run_cli("simulate --n 100").exit_code == 2);          // no pattern
    CHECK(run_cli("frobnicate").exit_code == 2);                // no such command
    CHECK(run_cli("simulate --pattern nope --n 10").exit_code == 2);
    CHECK(run_cli("exact --pattern cycle:2 --n 10,20 --m 2").exit_code == 2);
    CHECK(run_cli("rates --pattern cycle:2 --n 10,20 --m 2").exit_code == 2);
    CHECK(run_cli("tail --pattern triangle --attach 1 --n 50 --m 2 --R 2").exit_code == 2);
}

TEST_CASE("budget overruns exit with 3", "[cli]") {
    CHECK(run_cli("exact --pattern cycle:2 --n 40 --m 2").exit_code == 3);
    CHECK(run_cli("coupling-check --pattern cycle:2 --n 40 --m 2").exit_code == 3);
}

TEST_CASE("exact reports the enumerated law", "[cli]") {
    const auto r = run_cli("exact --pattern cycle:2 --n 3 --m 2");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["law"]["1"].get<double>() == 0.5);
    CHECK(j["law"]["2"].get<double>() == 0.5);
    CHECK(j["mean"].get<double>() == 1.5);
    CHECK(j["law_mean"].get<double>() == 1.5);
    CHECK(j["variance"].get<double>() == 0.25);

    const auto edge = run_cli("exact --pattern edge --n 4 --m 2");
    REQUIRE(edge.exit_code == 0);
    const auto je = nlohmann::json::parse(edge.out);
    CHECK(std::fabs(je["law"]["6"].get<double>() - 1.0) < 1e-12);
    CHECK(je["law"].size() == 1);
}

TEST_CASE("stein report dominates the exact distance", "[cli]") {
    const auto r = run_cli("stein --pattern cycle:2 --n 6 --m 2");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    for (const char* key :
         {"lambda", "term_sq", "term_plus", "term_minus", "bound", "n", "m", "pattern"})
        REQUIRE(j.contains(key));

    const auto law = uag::exact_law(uag::pattern_cycle(2), 6, 2);
    const double tv = uag::tv_to_poisson(law, j["lambda"].get<double>());
    CHECK(tv <= j["bound"].get<double>() + 1e-12);

    const auto joint = run_cli("stein --cycles 2,3 --n 6 --m 2");
    REQUIRE(joint.exit_code == 0);
    const auto jj = nlohmann::json::parse(joint.out);
    CHECK(jj["class_lambdas"].size() == 2);
    CHECK(jj["pattern"] == "cycles:2,3");
}

TEST_CASE("coupling check passes at enumerable sizes", "[cli]") {
    const auto r = run_cli("coupling-check --pattern triangle --n 4 --m 2");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["pass"].get<bool>());
    CHECK(j["max_deviation"].get<double>() < 1e-10);
}

TEST_CASE("rates fits the parallel-pair growth", "[cli]") {
    // mean two-cycle count grows like log n: the log-model exponent is near 1
    const auto r = run_cli(
        "rates --pattern cycle:2 --stat mean --model log "
        "--n 64,256,1024,4096 --m 2 --R 800 --seed 21");
    REQUIRE(r.exit_code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 5);
    const auto f = fields(rows[4]);
    const double p = std::strtod(f[10].c_str(), nullptr);
    CHECK(p > 0.5);
    CHECK(p < 1.5);
    // the fitted exponent is repeated on every data row
    CHECK(fields(rows[1])[10] == f[10]);
}

TEST_CASE("config file values yield to flags", "[cli]") {
    const char* path = "cli_test_config.toml";
    {
        std::ofstream f(path);
        f << "[simulate]\npattern=\"cycle:2\"\nn=\"50\"\nm=2\nR=200\nseed=5\n";
    }
    const auto from_file = run_cli(std::string("--config ") + path + " simulate");
    REQUIRE(from_file.exit_code == 0);
    const auto base = fields(csv_rows(from_file.out)[1]);
    CHECK(base[0] == "50");
    CHECK(base[4] == "5");

    const auto with_flag =
        run_cli(std::string("--config ") + path + " simulate --seed 9");
    const auto over = fields(csv_rows(with_flag.out)[1]);
    CHECK(over[4] == "9");
    std::remove(path);
}

TEST_CASE("manifests embed a config hash", "[cli]") {
    const char* path = "cli_test_manifest.json";
    const auto r = run_cli(std::string("simulate --pattern cycle:2 --n 40 --m 2 --R 50 "
                                       "--seed 3 --manifest ") + path);
    REQUIRE(r.exit_code == 0);
    std::ifstream f(path);
    REQUIRE(f.good());
    nlohmann::json manifest;
    f >> manifest;
    CHECK(manifest["version"] == uag::kVersion);
    CHECK(manifest["command"] == "simulate");
    CHECK(manifest["config"]["pattern"] == "cycle:2");
    CHECK(manifest["config_hash"].get<std::string>().size() == 16);
    std::remove(path);
}

TEST_CASE("dumped graphs replay to the same count", "[cli]") {
    const char* path = "cli_test_graph.bin";
    const auto dumped = run_cli(std::string("simulate --pattern triangle --n 60 --m 2 "
                                            "--R 4 --seed 11 --dump ") + path);
    REQUIRE(dumped.exit_code == 0);

    const auto replayed =
        run_cli(std::string("simulate --pattern triangle --replay ") + path);
    REQUIRE(replayed.exit_code == 0);
    const auto f = fields(csv_rows(replayed.out)[1]);
    CHECK(f[0] == "60");
    CHECK(f[3] == "1");  // replay is a single deterministic observation

    // replica 0 of the dumped run used seed derive_seed(11, 0)
    const auto g = uag::generate(60, 2, uag::derive_seed(11, 0));
    uag::CopyCounter counter(uag::pattern_cycle(3));
    CHECK(std::strtod(f[5].c_str(), nullptr) == static_cast<double>(counter.count(g)));
    std::remove(path);
}

TEST_CASE("potential-copy table export", "[cli]") {
    const char* path = "cli_test_gamma.csv";
    const auto r = run_cli(std::string("exact --pattern triangle --n 3 --m 2 --gamma ") + path);
    REQUIRE(r.exit_code == 0);
    std::ifstream f(path);
    REQUIRE(f.good());
    std::string line;
    std::getline(f, line);
    CHECK(line == "vertices,labels,marks,probability");
    std::size_t rows = 0;
    while (std::getline(f, line)) rows += !line.empty();
    CHECK(rows == 4);
    std::remove(path);
}

TEST_CASE("constant-probability ratios are exactly one", "[cli]") {
    const auto r = run_cli("lln --p one --n 10,50 --R 5 --seed 2");
    REQUIRE(r.exit_code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 11);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(fields(rows[i])[3] == "1");
}

TEST_CASE("tail trajectories carry the attachment multiplicity", "[cli]") {
    const auto r = run_cli(
        "tail --pattern double-2-cycle --attach 2 --n 40,80 --m 2 --R 3 --seed 13");
    REQUIRE(r.exit_code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 7);  // header + 3 replicas x 2 checkpoints
    CHECK(rows[0] == "replica,n,r,w_over_log_n,core_count,d");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(fields(rows[i])[2] == "1");
}

TEST_CASE("version flag", "[cli]") {
    const auto r = run_cli("--version");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find(uag::kVersion) != std::string::npos);
}
