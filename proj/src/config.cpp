#include "wzns/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "wzns/checks.hpp"
#include "wzns/error.hpp"

namespace wzns {

using json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* what)
{
    throw Error(ErrorCode::configuration, "key '" + key + "': cannot parse '" + value + "' as " + what);
}

double to_double(const std::string& key, const std::string& v)
{
    const std::string t = trim(v);
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0' || errno == ERANGE) bad_value(key, v, "a number");
    return x;
}

long long to_int(const std::string& key, const std::string& v)
{
    const std::string t = trim(v);
    char* end = nullptr;
    errno = 0;
    const long long x = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || *end != '\0' || errno == ERANGE) bad_value(key, v, "an integer");
    return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v)
{
    const std::string t = trim(v);
    char* end = nullptr;
    errno = 0;
    if (t.empty() || t[0] == '-') bad_value(key, v, "an unsigned 64-bit integer");
    const unsigned long long x = std::strtoull(t.c_str(), &end, 10);
    if (*end != '\0' || errno == ERANGE) bad_value(key, v, "an unsigned 64-bit integer");
    return x;
}

std::size_t to_count(const std::string& key, const std::string& v)
{
    const long long x = to_int(key, v);
    if (x < 0) bad_value(key, v, "a non-negative integer");
    return std::size_t(x);
}

bool to_bool(const std::string& key, const std::string& v)
{
    const std::string t = trim(v);
    if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
    if (t == "0" || t == "false" || t == "no" || t == "off") return false;
    bad_value(key, v, "a boolean");
}

std::vector<int> to_list(const std::string& key, const std::string& v)
{
    std::vector<int> out;
    std::stringstream ss(v);
    for (std::string item; std::getline(ss, item, ',');) {
        const long long x = to_int(key, item);
        if (x < -(1LL << 30) || x > (1LL << 30)) bad_value(key, v, "a list of integers");
        out.push_back(int(x));
    }
    if (out.empty()) bad_value(key, v, "a non-empty comma-separated list");
    return out;
}

int to_small(const std::string& key, const std::string& v)
{
    const long long x = to_int(key, v);
    if (x < -(1LL << 30) || x > (1LL << 30)) bad_value(key, v, "an integer");
    return int(x);
}

struct KeySpec {
    const char* section;
    const char* name;
    std::function<void(RunConfig&, const std::string&)> set;
};

const std::vector<KeySpec>& key_table()
{
    static const std::vector<KeySpec> table = {
        {"solver", "M", [](RunConfig& c, const std::string& v) { c.experiment.solver.M = to_small("M", v); }},
        {"solver", "dt", [](RunConfig& c, const std::string& v) { c.experiment.solver.dt = to_double("dt", v); }},
        {"solver", "T", [](RunConfig& c, const std::string& v) { c.experiment.solver.T = to_double("T", v); }},
        {"solver", "nu", [](RunConfig& c, const std::string& v) { c.experiment.solver.nu = to_double("nu", v); }},
        {"solver", "N", [](RunConfig& c, const std::string& v) { c.experiment.solver.N = to_small("N", v); }},
        {"solver", "n", [](RunConfig& c, const std::string& v) { c.experiment.solver.n = to_small("n", v); }},
        {"solver", "R", [](RunConfig& c, const std::string& v) { c.experiment.solver.R = to_double("R", v); }},
        {"solver", "K", [](RunConfig& c, const std::string& v) { c.experiment.solver.K = to_double("K", v); }},
        {"solver", "gamma", [](RunConfig& c, const std::string& v) { c.experiment.solver.gamma = to_double("gamma", v); }},
        {"solver", "delta", [](RunConfig& c, const std::string& v) { c.experiment.solver.delta = to_double("delta", v); }},
        {"solver", "alpha", [](RunConfig& c, const std::string& v) { c.experiment.solver.alpha = to_double("alpha", v); }},
        {"solver", "seed", [](RunConfig& c, const std::string& v) { c.experiment.solver.seed = to_u64("seed", v); }},
        {"solver", "viscosity",
         [](RunConfig& c, const std::string& v) { c.experiment.solver.viscosity = to_double("viscosity", v); }},
        {"solver", "nonlinear",
         [](RunConfig& c, const std::string& v) { c.experiment.solver.nonlinear = to_bool("nonlinear", v); }},
        {"solver", "noise", [](RunConfig& c, const std::string& v) { c.experiment.solver.noise = to_bool("noise", v); }},
        {"solver", "cfl", [](RunConfig& c, const std::string& v) { c.experiment.solver.cfl = to_double("cfl", v); }},
        {"experiment", "samples",
         [](RunConfig& c, const std::string& v) { c.experiment.samples = to_count("samples", v); }},
        {"experiment", "n_list", [](RunConfig& c, const std::string& v) { c.experiment.n_list = to_list("n_list", v); }},
        {"experiment", "n_ref", [](RunConfig& c, const std::string& v) { c.experiment.n_ref = to_small("n_ref", v); }},
        {"experiment", "N_list", [](RunConfig& c, const std::string& v) { c.experiment.N_list = to_list("N_list", v); }},
        {"experiment", "stratonovich_check",
         [](RunConfig& c, const std::string& v) {
             c.experiment.stratonovich_check = to_bool("stratonovich_check", v);
         }},
        {"experiment", "extra_levels",
         [](RunConfig& c, const std::string& v) { c.experiment.extra_levels = to_small("extra_levels", v); }},
        {"experiment", "data_samples",
         [](RunConfig& c, const std::string& v) { c.experiment.data_samples = to_count("data_samples", v); }},
        {"experiment", "threshold",
         [](RunConfig& c, const std::string& v) { c.experiment.threshold = to_double("threshold", v); }},
        {"experiment", "initial", [](RunConfig& c, const std::string& v) { c.experiment.initial = trim(v); }},
        {"experiment", "initial_path", [](RunConfig& c, const std::string& v) { c.experiment.initial_path = trim(v); }},
        {"experiment", "initial_slope",
         [](RunConfig& c, const std::string& v) { c.experiment.initial_slope = to_double("initial_slope", v); }},
        {"experiment", "save_points",
         [](RunConfig& c, const std::string& v) { c.experiment.save_points = to_count("save_points", v); }},
        {"experiment", "mode", [](RunConfig& c, const std::string& v) { c.experiment.mode = trim(v); }},
        {"output", "out", [](RunConfig& c, const std::string& v) { c.out_dir = trim(v); }},
    };
    return table;
}

std::string key_list()
{
    std::string s;
    for (const auto& k : valid_keys()) s += (s.empty() ? "" : ", ") + k;
    return s;
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(int n)
{
    int l = 0;
    while ((1 << l) < n) ++l;
    return l;
}

[[noreturn]] void violated(const std::string& message) { throw Error(ErrorCode::constraint, message); }

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    os << text;
    if (!os) throw Error(ErrorCode::io, "cannot write " + path.string());
}

StepMode parse_mode(const std::string& mode)
{
    if (mode == "wong_zakai") return StepMode::wong_zakai;
    if (mode == "stratonovich") return StepMode::stratonovich;
    if (mode == "deterministic") return StepMode::deterministic;
    violated("mode must be one of wong_zakai, stratonovich, deterministic");
}

struct SimulateResult {
    ExperimentReport report;
    Trajectory trajectory;
};

SimulateResult run_simulate(const ExperimentConfig& e)
{
    SolverConfig s = e.solver;
    s.save_points = e.save_points;
    const StepMode mode = parse_mode(e.mode);
    const SpectralField xi0 = make_initial_field(e, derive_seed(s.seed, 1, 0));
    std::optional<BrownianEnsemble> ens;
    if (mode != StepMode::deterministic) {
        const Lattice lattice(s.M);
        const NoiseModel noise(s, lattice);
        const int level = log2_exact(s.n) + (mode == StepMode::stratonovich ? e.extra_levels : 0);
        ens = sample_ensemble(noise.modes(), s.T, level, derive_seed(s.seed, 2, 0));
    }
    SimulateResult out;
    out.trajectory = simulate(s, xi0, mode, ens ? &*ens : nullptr);
    const Trajectory& tr = out.trajectory;

    ExperimentReport& r = out.report;
    r.experiment = "simulate";
    r.version = version_string();
    r.config_hash = config_hash(e);
    r.seed = s.seed;
    r.config_text = canonical_config(e);
    r.columns = {"t", "enstrophy", "dissipation", "negative_norm", "cutoff", "noise_budget", "nonlinear_production"};
    for (std::size_t i = 0; i < tr.diagnostics.size(); ++i) {
        const auto& d = tr.diagnostics[i];
        SampleRecord rec;
        rec.index = i;
        rec.seed = s.seed;
        rec.values = {d.t, d.enstrophy, d.dissipation, d.negative_norm, d.cutoff, d.noise_budget, d.nonlinear_production};
        r.records.push_back(std::move(rec));
    }
    json sum;
    sum["steps"] = tr.diagnostics.empty() ? 0 : tr.diagnostics.size() - 1;
    sum["saved_states"] = tr.states.size();
    if (tr.blowup_time) {
        sum["blowup_time"] = *tr.blowup_time;
        if (!r.records.empty()) r.records.back().status = "blowup";
    } else {
        sum["blowup_time"] = nullptr;
        sum["energy_functional"] = tr.energy_functional();
        sum["sup_negative_norm"] = tr.sup_negative_norm();
        sum["final_enstrophy"] = tr.diagnostics.back().enstrophy;
    }
    r.summary = sum;
    return out;
}

ExperimentReport run_validate(const ExperimentConfig& e, bool& failed)
{
    ExperimentReport r;
    r.experiment = "validate";
    r.version = version_string();
    r.config_hash = config_hash(e);
    r.seed = e.solver.seed;
    r.config_text = canonical_config(e);
    r.columns = {"passed", "value", "tolerance", "seconds"};
    json checks = json::array();
    failed = false;
    std::size_t i = 0;
    for (const CheckResult& c : invariant_suite()) {
        SampleRecord rec;
        rec.index = i++;
        rec.status = c.passed ? "pass" : "fail";
        rec.values = {c.passed ? 1.0 : 0.0, c.value, c.tolerance, c.seconds};
        r.records.push_back(std::move(rec));
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        failed = failed || !c.passed;
    }
    r.summary["checks"] = checks;
    r.summary["all_passed"] = !failed;
    return r;
}

}  // namespace

const std::vector<std::string>& subcommands()
{
    static const std::vector<std::string> s = {"simulate",  "wz-convergence",    "scaling-limit",
                                               "lifespan",  "rough-diagnostics", "validate"};
    return s;
}

std::vector<std::string> valid_keys()
{
    std::vector<std::string> out;
    for (const auto& k : key_table()) out.push_back(std::string(k.section) + "." + k.name);
    return out;
}

void set_key(RunConfig& config, const std::string& section, const std::string& key, const std::string& value)
{
    for (const auto& k : key_table()) {
        if (key != k.name) continue;
        if (!section.empty() && section != k.section) break;
        k.set(config, value);
        return;
    }
    const std::string shown = section.empty() ? key : section + "." + key;
    throw Error(ErrorCode::unknown_key, "unknown key '" + shown + "'; valid keys: " + key_list());
}

void apply_config_text(RunConfig& config, std::istream& is)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error(ErrorCode::configuration, std::string("config parse error: ") + e.what());
    }
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            set_key(config, "", name, node.data());
            continue;
        }
        if (name != "solver" && name != "experiment" && name != "output") {
            throw Error(ErrorCode::unknown_key,
                        "unknown section '" + name + "' (valid: solver, experiment, output); valid keys: " + key_list());
        }
        for (const auto& [key, leaf] : node) set_key(config, name, key, leaf.data());
    }
}

void apply_config_file(RunConfig& config, const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::io, "cannot open config file " + path);
    apply_config_text(config, is);
}

void validate(const RunConfig& config, const std::string& command)
{
    if (std::find(subcommands().begin(), subcommands().end(), command) == subcommands().end()) {
        std::string list;
        for (const auto& s : subcommands()) list += (list.empty() ? "" : ", ") + s;
        throw Error(ErrorCode::configuration, "unknown subcommand '" + command + "' (valid: " + list + ")");
    }
    const ExperimentConfig& e = config.experiment;
    const SolverConfig& s = e.solver;
    if (s.M < 1) violated("M must be >= 1");
    if (s.N < 1) violated("N must be >= 1");
    if (s.M < 2 * s.N) violated("M must be ≥ 2N (M=" + std::to_string(s.M) + ", N=" + std::to_string(s.N) + ")");
    if (!(s.T > 0.0)) violated("T must be > 0");
    if (!(s.dt > 0.0)) violated("dt must be > 0");
    if (!(s.alpha > 1.0 / 3.0 && s.alpha <= 0.5)) violated("alpha must lie in (1/3, 1/2]");
    if (!(s.gamma > 0.0)) violated("gamma must be > 0");
    if (!(s.delta > 0.0)) violated("delta must be > 0");
    if (!(s.nu >= 0.0)) violated("nu must be >= 0");
    if (!(s.K >= 0.0)) violated("K must be >= 0");
    if (!(s.viscosity > 0.0)) violated("viscosity must be > 0");
    if (!(s.cfl > 0.0)) violated("cfl must be > 0");
    if (!std::isfinite(s.R)) violated("R must be finite (R <= 0 disables the cut-off)");
    if (e.samples < 1) violated("samples must be >= 1");
    if (e.extra_levels < 0 || e.extra_levels > 8) violated("extra_levels must lie in [0, 8]");
    if (e.initial == "file" && e.initial_path.empty()) violated("initial = file needs initial_path");
    if (e.mode != "wong_zakai" && e.mode != "stratonovich" && e.mode != "deterministic") {
        violated("mode must be one of wong_zakai, stratonovich, deterministic");
    }
    if (config.out_dir.empty()) violated("out must not be empty");

    // every partition size the command will use
    std::vector<int> ns;
    if (command == "wz-convergence") {
        ns = e.n_list;
        ns.push_back(e.n_ref);
    } else if (command == "rough-diagnostics") {
        ns = e.n_list;
    } else if (command != "validate") {
        ns = {s.n};
    }
    for (int n : ns) {
        if (!power_of_two(n)) violated("n must be a power of two (got " + std::to_string(n) + ")");
        if (n > (1 << 20)) violated("n must be <= 2^20");
        const double h = s.T / double(n);
        if (s.dt > h / 4.0 * (1.0 + 1e-12)) {
            violated("dt must be ≤ h/4 = T/(4n) (dt=" + fmt(s.dt) + ", n=" + std::to_string(n) + ")");
        }
    }
    if (command == "wz-convergence") {
        for (int n : e.n_list) {
            if (n > e.n_ref) violated("every n in n_list must be <= n_ref");
        }
    }
    if (command == "scaling-limit") {
        for (int N : e.N_list) {
            if (N < 1) violated("N_list entries must be >= 1");
            if (s.M < 2 * N) violated("M must be ≥ 2N for every N in N_list (M=" + std::to_string(s.M) + ", N=" + std::to_string(N) + ")");
        }
    }
    if (command == "lifespan" && e.data_samples < 1) violated("data_samples must be >= 1");
}

RunOutcome run(const RunConfig& config, const std::string& command, bool write_files)
{
    validate(config, command);
    const ExperimentConfig& e = config.experiment;
    RunOutcome out;
    std::optional<Trajectory> trajectory;
    if (command == "simulate") {
        auto sim = run_simulate(e);
        out.report = std::move(sim.report);
        trajectory = std::move(sim.trajectory);
    } else if (command == "wz-convergence") {
        out.report = wong_zakai_convergence(e);
    } else if (command == "scaling-limit") {
        out.report = scaling_limit(e);
    } else if (command == "lifespan") {
        out.report = lifespan_measure(e);
    } else if (command == "rough-diagnostics") {
        out.report = rough_diagnostics(e);
    } else {
        out.report = run_validate(e, out.failed_checks);
    }
    if (!write_files) return out;

    namespace fs = std::filesystem;
    const fs::path root(config.out_dir);
    std::error_code ec;
    fs::create_directories(root / "samples", ec);
    if (ec) throw Error(ErrorCode::io, "cannot create " + (root / "samples").string() + ": " + ec.message());
    json j = out.report.to_json();
    j["command"] = command;
    write_text(root / "report.json", j.dump(1) + "\n");
    write_text(root / "samples" / (command == "simulate" ? "trajectory.csv" : "records.csv"), out.report.records_csv());
    if (trajectory) {
        fs::create_directories(root / "states", ec);
        if (ec) throw Error(ErrorCode::io, "cannot create " + (root / "states").string() + ": " + ec.message());
        char head[96];
        std::snprintf(head, sizeof head, "# config_hash=%016" PRIx64 " seed=%" PRIu64 "\nindex,t\n", out.report.config_hash,
                      out.report.seed);
        std::string index = head;
        for (std::size_t i = 0; i < trajectory->states.size(); ++i) {
            index += std::to_string(i) + "," + fmt(trajectory->times[i]) + "\n";
            char name[32];
            std::snprintf(name, sizeof name, "state_%05zu.bin", i);
            save_field((root / "states" / name).string(), trajectory->states[i], out.report.config_hash, out.report.seed);
        }
        write_text(root / "states" / "index.csv", index);
    }
    return out;
}

std::string error_record(int status, const std::string& code_name, const std::string& message)
{
    json j;
    j["error"] = {{"code", code_name}, {"status", status}, {"message", message}};
    return j.dump();
}

}  // namespace wzns
