// uagcli: experiments on uniform attachment graphs.
//
// Subcommands: simulate | exact | stein | rates | tail | coupling-check | lln.
// Exit codes: 0 success, 1 checked property violated (coupling-check only),
// 2 configuration error, 3 enumeration budget exceeded.
//
// CSV schemas are documented in the README; every floating-point field is
// printed with %.17g so repeated runs are byte-identical.

#include "uag/uag.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Grid entries accept scientific notation ("1e4") but must be integral.
std::vector<std::uint64_t> parse_grid(const std::vector<std::string>& raw) {
    std::vector<std::uint64_t> grid;
    for (const auto& s : raw) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0' || !(v >= 1) || v > 4e9 ||
            v != std::floor(v))
            throw std::invalid_argument("bad grid entry: " + s);
        grid.push_back(static_cast<std::uint64_t>(v));
    }
    if (grid.empty()) throw std::invalid_argument("empty n grid");
    return grid;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

unsigned default_threads() {
    if (const char* env = std::getenv("UAG_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 4096) return static_cast<unsigned>(v);
    }
    return 1;
}

struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit Output(const std::string& path) {
        if (path.empty()) return;
        file.open(path, std::ios::binary);  // binary: no CRLF translation
        if (!file) throw std::invalid_argument("cannot open output: " + path);
        os = &file;
    }
    std::ostream& stream() { return *os; }
};

void write_manifest(const std::string& path, const std::string& command,
                    const json& config) {
    if (path.empty()) return;
    json manifest;
    manifest["version"] = uag::kVersion;
    manifest["command"] = command;
    manifest["config"] = config;
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a(command + config.dump())));
    manifest["config_hash"] = hash;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open manifest: " + path);
    f << manifest.dump(2) << '\n';
}

constexpr const char* kCsvHeader = "n,m,pattern,R,seed,mean,var,d_tv,d_k,d_w,fitted_p";

struct SummaryRow {
    std::uint64_t n = 0;
    std::uint32_t m = 0;
    std::string pattern;
    std::uint64_t R = 0;
    std::uint64_t seed = 0;
    std::string mean, var, d_tv, d_k, d_w, fitted_p;  // empty = not applicable

    void write(std::ostream& os) const {
        os << n << ',' << m << ',' << csv_field(pattern) << ',' << R << ','
           << seed << ',' << mean << ',' << var << ',' << d_tv << ',' << d_k
           << ',' << d_w << ',' << fitted_p << '\n';
    }
};

// Summary statistics shared by simulate and rates: moments plus distances to
// the Poisson law with the exact mean and to the normal fitted by sample
// moments.  Degenerate samples leave the normal distances empty.
SummaryRow summarize(const uag::PatternGraph& hg, const std::string& spec,
                     const uag::SampleSet& s) {
    SummaryRow row;
    row.n = s.n;
    row.m = s.m;
    row.pattern = spec;
    row.R = s.R();
    row.seed = s.seed;
    const double mean = uag::sample_mean(s);
    const double var = uag::sample_variance(s);
    row.mean = fmt17(mean);
    row.var = fmt17(var);
    row.d_tv = fmt17(uag::tv_to_poisson(s, uag::exact_mean(hg, s.n, s.m)));
    if (var > 0) {
        const double sd = std::sqrt(var);
        row.d_k = fmt17(uag::kolmogorov_to_normal(s, mean, sd));
        row.d_w = fmt17(uag::wasserstein_to_normal(s, mean, sd));
    }
    return row;
}

struct CommonOpts {
    std::string pattern;
    std::vector<std::string> n_raw;
    std::uint32_t m = 2;
    std::uint64_t R = 1000;
    std::uint64_t seed = 1;
    unsigned threads = default_threads();
    double graph_budget = 1e8;
    double copy_budget = 1e6;
    std::string out;
    std::string manifest;
};

enum class PatternUse { required, optional, none };

void add_common(CLI::App* cmd, CommonOpts& o, PatternUse pu = PatternUse::required) {
    if (pu != PatternUse::none) {
        auto* p = cmd->add_option("--pattern", o.pattern,
                                  "pattern spec (edge, cycle:L, path:L, star:L, triangle, "
                                  "k4, k4-minus-edge, double-2-cycle, theta, @file; "
                                  "optional +pendant@V suffixes)");
        if (pu == PatternUse::required) p->required();
    }
    cmd->add_option("--m", o.m, "slots per vertex")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out", o.out, "output file (default stdout)");
    cmd->add_option("--manifest", o.manifest, "write a JSON run manifest here");
}

json base_config(const CommonOpts& o) {
    json c;
    if (!o.pattern.empty()) c["pattern"] = o.pattern;
    c["n"] = o.n_raw;
    c["m"] = o.m;
    c["seed"] = o.seed;
    return c;
}

// ---- simulate ----------------------------------------------------------

int cmd_simulate(const CommonOpts& o, const std::string& dump,
                 const std::string& replay) {
    const auto hg = uag::parse_pattern(o.pattern);
    Output out(o.out);

    json config = base_config(o);
    config["R"] = o.R;
    config["threads"] = o.threads;
    if (!dump.empty()) config["dump"] = dump;
    if (!replay.empty()) config["replay"] = replay;
    write_manifest(o.manifest, "simulate", config);

    out.stream() << kCsvHeader << '\n';

    if (!replay.empty()) {
        std::ifstream f(replay, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open dump: " + replay);
        const auto g = uag::read_graph(f);
        uag::CopyCounter counter(hg);
        std::optional<uag::NeighborIndex> ix;
        if (counter.wants_index()) ix = uag::build_neighbor_index(g);
        SummaryRow row;
        row.n = g.n;
        row.m = g.m;
        row.pattern = o.pattern;
        row.R = 1;
        row.seed = g.seed;
        row.mean = fmt17(counter.count(g, ix ? &*ix : nullptr));
        row.var = fmt17(0.0);
        row.write(out.stream());
        return 0;
    }

    const auto grid = parse_grid(o.n_raw);
    if (!dump.empty() && grid.size() != 1)
        throw std::invalid_argument("--dump requires a single n");

    for (const std::uint64_t n : grid) {
        const auto s = uag::run_mc(hg, static_cast<std::uint32_t>(n), o.m,
                                   static_cast<std::uint32_t>(o.R), o.seed,
                                   o.threads);
        summarize(hg, o.pattern, s).write(out.stream());
        if (!dump.empty()) {
            // replica 0's graph, so a replay reproduces the first sample
            const auto g = uag::generate(static_cast<std::uint32_t>(n), o.m,
                                         uag::derive_seed(o.seed, 0));
            std::ofstream f(dump, std::ios::binary);
            if (!f) throw std::invalid_argument("cannot open dump: " + dump);
            uag::write_graph(f, g);
        }
    }
    return 0;
}

// ---- exact -------------------------------------------------------------

int cmd_exact(const CommonOpts& o, const std::string& gamma_csv) {
    const auto hg = uag::parse_pattern(o.pattern);
    const auto grid = parse_grid(o.n_raw);
    if (grid.size() != 1) throw std::invalid_argument("exact takes a single n");
    const auto n = static_cast<std::uint32_t>(grid[0]);

    json config = base_config(o);
    config["graph_budget"] = o.graph_budget;
    config["copy_budget"] = o.copy_budget;
    if (!gamma_csv.empty()) config["gamma_csv"] = gamma_csv;
    write_manifest(o.manifest, "exact", config);

    if (!gamma_csv.empty()) {
        std::ofstream f(gamma_csv, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open gamma csv: " + gamma_csv);
        uag::write_copies_csv(f, hg, n, o.m, o.copy_budget);
    }

    const auto law = uag::exact_law(hg, n, o.m, o.graph_budget, o.copy_budget);
    json report;
    report["version"] = uag::kVersion;
    report["pattern"] = o.pattern;
    report["n"] = n;
    report["m"] = o.m;
    json pmf = json::object();
    for (std::size_t k = 0; k < law.pmf.size(); ++k)
        if (law.pmf[k] > 0) pmf[std::to_string(k)] = law.pmf[k];
    report["law"] = pmf;
    report["law_mean"] = law.mean;
    report["law_variance"] = law.variance;
    report["mean"] = uag::exact_mean(hg, n, o.m);
    report["variance"] = uag::exact_variance(hg, n, o.m, o.copy_budget);

    Output out(o.out);
    out.stream() << report.dump(2) << '\n';
    return 0;
}

// ---- stein -------------------------------------------------------------

int cmd_stein(const CommonOpts& o, const std::vector<std::uint32_t>& cycles,
              bool tight) {
    const auto grid = parse_grid(o.n_raw);
    if (grid.size() != 1) throw std::invalid_argument("stein takes a single n");
    const auto n = static_cast<std::uint32_t>(grid[0]);

    std::string spec = o.pattern;
    uag::SteinBoundReport rep;
    if (!cycles.empty()) {
        if (!o.pattern.empty())
            throw std::invalid_argument("--pattern and --cycles are exclusive");
        spec = "cycles:";
        for (std::size_t i = 0; i < cycles.size(); ++i)
            spec += (i ? "," : "") + std::to_string(cycles[i]);
        rep = uag::multivariate_bound(cycles, n, o.m, tight, o.copy_budget);
    } else if (!o.pattern.empty()) {
        rep = uag::poisson_bound(uag::parse_pattern(o.pattern), n, o.m, tight,
                                 o.copy_budget);
    } else {
        throw std::invalid_argument("stein needs --pattern or --cycles");
    }

    json config = base_config(o);
    config["pattern"] = spec;
    config["tight"] = tight;
    config["copy_budget"] = o.copy_budget;
    write_manifest(o.manifest, "stein", config);

    json report;
    report["version"] = uag::kVersion;
    report["pattern"] = spec;
    report["n"] = n;
    report["m"] = o.m;
    report["lambda"] = rep.lambda;
    report["term_sq"] = rep.term_sq;
    report["term_plus"] = rep.term_plus;
    report["term_minus"] = rep.term_minus;
    report["prefactor"] = rep.prefactor;
    report["bound"] = rep.bound;
    report["gamma_size"] = rep.gamma_size;
    report["tight"] = rep.tight;
    if (!rep.class_lambdas.empty()) report["class_lambdas"] = rep.class_lambdas;

    Output out(o.out);
    out.stream() << report.dump(2) << '\n';
    return 0;
}

// ---- rates -------------------------------------------------------------

int cmd_rates(const CommonOpts& o, const std::string& stat,
              const std::string& model) {
    const auto hg = uag::parse_pattern(o.pattern);
    const auto grid = parse_grid(o.n_raw);
    if (grid.size() < 4)
        throw std::invalid_argument("rates needs at least 4 grid points");

    json config = base_config(o);
    config["R"] = o.R;
    config["threads"] = o.threads;
    config["stat"] = stat;
    config["model"] = model;
    write_manifest(o.manifest, "rates", config);

    const auto rate_model = model == "log" ? uag::RateModel::log_power
                                           : uag::RateModel::power;

    std::vector<SummaryRow> rows;
    std::vector<double> ns, stats;
    for (const std::uint64_t n : grid) {
        const auto s = uag::run_mc(hg, static_cast<std::uint32_t>(n), o.m,
                                   static_cast<std::uint32_t>(o.R), o.seed,
                                   o.threads);
        auto row = summarize(hg, o.pattern, s);
        double value = 0;
        if (stat == "mean") value = uag::sample_mean(s);
        else if (stat == "var") value = uag::sample_variance(s);
        else if (stat == "tv") value = std::strtod(row.d_tv.c_str(), nullptr);
        else if (stat == "dk") value = std::strtod(row.d_k.c_str(), nullptr);
        else throw std::invalid_argument("unknown stat: " + stat);
        ns.push_back(static_cast<double>(n));
        stats.push_back(value);
        rows.push_back(std::move(row));
    }

    const auto fit = uag::fit_log_power(ns, stats, rate_model);
    Output out(o.out);
    out.stream() << kCsvHeader << '\n';
    for (auto& row : rows) {
        row.fitted_p = fmt17(fit.p);  // whole-grid fit, repeated per row
        row.write(out.stream());
    }
    return 0;
}

// ---- tail --------------------------------------------------------------

int cmd_tail(const CommonOpts& o, std::uint32_t attach) {
    const auto core = uag::parse_pattern(o.pattern);
    const auto grid = parse_grid(o.n_raw);
    std::vector<std::uint32_t> checkpoints(grid.begin(), grid.end());

    const auto res = uag::tail_experiment(core, attach, checkpoints, o.m,
                                          static_cast<std::uint32_t>(o.R),
                                          o.seed, o.threads);

    json config = base_config(o);
    config["R"] = o.R;
    config["threads"] = o.threads;
    config["attach"] = attach;
    config["r"] = res.r;
    write_manifest(o.manifest, "tail", config);

    Output out(o.out);
    out.stream() << "replica,n,r,w_over_log_n,core_count,d\n";
    for (std::size_t rep = 0; rep < res.scaled_w.size(); ++rep)
        for (std::size_t c = 0; c < checkpoints.size(); ++c)
            out.stream() << rep << ',' << checkpoints[c] << ',' << res.r << ','
                         << fmt17(res.scaled_w[rep][c]) << ','
                         << res.core_w[rep][c] << ',' << fmt17(res.d[rep][c])
                         << '\n';
    return 0;
}

// ---- coupling-check ----------------------------------------------------

int cmd_coupling_check(const CommonOpts& o) {
    const auto hg = uag::parse_pattern(o.pattern);
    const auto grid = parse_grid(o.n_raw);
    if (grid.size() != 1)
        throw std::invalid_argument("coupling-check takes a single n");
    const auto n = static_cast<std::uint32_t>(grid[0]);

    json config = base_config(o);
    config["graph_budget"] = o.graph_budget;
    write_manifest(o.manifest, "coupling-check", config);

    const auto rep = uag::coupling_check(hg, n, o.m, o.graph_budget);
    const double tol = 1e-10;
    const bool pass = rep.max_deviation < tol;

    json report;
    report["version"] = uag::kVersion;
    report["pattern"] = o.pattern;
    report["n"] = n;
    report["m"] = o.m;
    report["gamma_size"] = rep.gamma_size;
    report["graphs"] = rep.graphs;
    report["max_deviation"] = rep.max_deviation;
    report["tolerance"] = tol;
    report["pass"] = pass;

    Output out(o.out);
    out.stream() << report.dump(2) << '\n';
    return pass ? 0 : 1;
}

// ---- lln ---------------------------------------------------------------

int cmd_lln(const CommonOpts& o, const std::string& pseq) {
    const auto grid = parse_grid(o.n_raw);
    std::vector<std::uint64_t> checkpoints(grid.begin(), grid.end());

    std::function<double(std::uint64_t)> p;
    if (pseq == "one") {
        p = [](std::uint64_t) { return 1.0; };
    } else if (pseq == "harmonic") {
        p = [](std::uint64_t i) { return 1.0 / static_cast<double>(i); };
    } else if (pseq.rfind("const:", 0) == 0) {
        const double c = std::strtod(pseq.c_str() + 6, nullptr);
        if (!(c > 0) || c > 1)
            throw std::invalid_argument("const probability must be in (0,1]");
        p = [c](std::uint64_t) { return c; };
    } else {
        throw std::invalid_argument("unknown p sequence: " + pseq);
    }

    json config = base_config(o);
    config["R"] = o.R;
    config["p_seq"] = pseq;
    write_manifest(o.manifest, "lln", config);

    const auto res = uag::lln_check(p, checkpoints,
                                    static_cast<std::uint32_t>(o.R), o.seed);

    Output out(o.out);
    out.stream() << "replica,checkpoint,sum_p,ratio\n";
    for (std::size_t rep = 0; rep < res.ratios.size(); ++rep)
        for (std::size_t c = 0; c < checkpoints.size(); ++c)
            out.stream() << rep << ',' << checkpoints[c] << ','
                         << fmt17(res.sum_p[c]) << ','
                         << fmt17(res.ratios[rep][c]) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uniform attachment graph experiments"};
    app.set_version_flag("--version", uag::kVersion);
    app.set_config("--config", "", "TOML config file (flags take precedence)");
    app.require_subcommand(1);

    CommonOpts o;

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo count summaries");
    add_common(simulate, o);
    simulate->add_option("--n", o.n_raw, "vertex count grid (comma separated)")
        ->delimiter(',');
    simulate->add_option("--R", o.R, "replicas")->check(CLI::PositiveNumber);
    simulate->add_option("--threads", o.threads, "worker threads (default $UAG_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    std::string dump, replay;
    simulate->add_option("--dump", dump, "write replica 0's graph to this file");
    simulate->add_option("--replay", replay, "count on a dumped graph instead of sampling");

    auto* exact = app.add_subcommand("exact", "exact law and moments by enumeration");
    add_common(exact, o);
    exact->add_option("--n", o.n_raw, "vertex count")->required()->delimiter(',');
    exact->add_option("--graph-budget", o.graph_budget, "max sample-space size");
    exact->add_option("--copy-budget", o.copy_budget, "max potential copies");
    std::string gamma_csv;
    exact->add_option("--gamma", gamma_csv, "also write the potential-copy table (CSV)");

    auto* stein = app.add_subcommand("stein", "Poisson-approximation bound report");
    add_common(stein, o, PatternUse::optional);
    stein->add_option("--n", o.n_raw, "vertex count")->required()->delimiter(',');
    std::vector<std::uint32_t> cycles;
    stein->add_option("--cycles", cycles, "joint bound for these cycle lengths")
        ->delimiter(',');
    bool tight = false;
    stein->add_flag("--tight", tight, "use exact pair expectations in the bound");
    stein->add_option("--copy-budget", o.copy_budget, "max potential copies");

    auto* rates = app.add_subcommand("rates", "fit a growth exponent over an n grid");
    add_common(rates, o);
    rates->add_option("--n", o.n_raw, "vertex count grid (>= 4 points)")
        ->required()
        ->delimiter(',');
    rates->add_option("--R", o.R, "replicas per grid point")->check(CLI::PositiveNumber);
    rates->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    std::string stat = "mean", model = "power";
    rates->add_option("--stat", stat, "statistic to fit: mean|var|tv|dk")
        ->check(CLI::IsMember({"mean", "var", "tv", "dk"}));
    rates->add_option("--model", model, "n^p (power) or (log n)^p (log)")
        ->check(CLI::IsMember({"power", "log"}));

    auto* tail = app.add_subcommand("tail",
                                    "pendant-count trajectories against the core count");
    add_common(tail, o);
    tail->add_option("--n", o.n_raw, "checkpoint grid")->required()->delimiter(',');
    tail->add_option("--R", o.R, "trajectories")->check(CLI::PositiveNumber);
    tail->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    std::uint32_t attach = 1;
    tail->add_option("--attach", attach, "core vertex receiving the pendant edge")
        ->required();

    auto* coupling = app.add_subcommand("coupling-check",
                                        "verify the size-bias coupling by enumeration");
    add_common(coupling, o);
    coupling->add_option("--n", o.n_raw, "vertex count")->required()->delimiter(',');
    coupling->add_option("--graph-budget", o.graph_budget, "max sample-space size");

    auto* lln = app.add_subcommand("lln", "Bernoulli-sum ratio trajectories");
    add_common(lln, o, PatternUse::none);
    lln->add_option("--n", o.n_raw, "checkpoint grid")->required()->delimiter(',');
    lln->add_option("--R", o.R, "replicas")->check(CLI::PositiveNumber);
    std::string pseq = "harmonic";
    lln->add_option("--p", pseq, "success probabilities: one|harmonic|const:C");

    // simulate accepts --n via flag or config; mark required manually so the
    // error message matches the other subcommands.
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) {
            if (o.n_raw.empty() && replay.empty())
                throw std::invalid_argument("simulate needs --n (or --replay)");
            return cmd_simulate(o, dump, replay);
        }
        if (exact->parsed()) return cmd_exact(o, gamma_csv);
        if (stein->parsed()) return cmd_stein(o, cycles, tight);
        if (rates->parsed()) return cmd_rates(o, stat, model);
        if (tail->parsed()) return cmd_tail(o, attach);
        if (coupling->parsed()) return cmd_coupling_check(o);
        if (lln->parsed()) return cmd_lln(o, pseq);
    } catch (const uag::BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << " (" << fmt17(e.count())
                  << " states)\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;  // unreachable: require_subcommand(1)
}
