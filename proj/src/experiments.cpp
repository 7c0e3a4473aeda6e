#include "wzns/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "wzns/error.hpp"
#include "wzns/rough.hpp"

#ifndef WZNS_VERSION
#define WZNS_VERSION "0.0.0"
#endif

namespace wzns {

using json = nlohmann::ordered_json;

const char* version_string() { return "wzns " WZNS_VERSION; }

namespace {

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <class T>
std::string join(const std::vector<T>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        if constexpr (std::is_floating_point_v<T>) {
            s += fmt(v[i]);
        } else {
            s += std::to_string(v[i]);
        }
    }
    return s;
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(int n)
{
    int l = 0;
    while ((1 << l) < n) ++l;
    return l;
}

json number(double x)
{
    if (std::isfinite(x)) return x;
    return nullptr;
}

json stats(const std::vector<double>& v)
{
    json j;
    double mean = 0.0;
    std::size_t finite = 0;
    for (double x : v) {
        if (std::isfinite(x)) {
            mean += x;
            ++finite;
        }
    }
    j["count"] = v.size();
    j["finite"] = finite;
    j["mean"] = finite ? number(mean / double(finite)) : json(nullptr);
    j["q10"] = number(quantile(v, 0.1));
    j["median"] = number(quantile(v, 0.5));
    j["q90"] = number(quantile(v, 0.9));
    j["max"] = v.empty() ? json(nullptr) : number(*std::max_element(v.begin(), v.end()));
    return j;
}

json probability(std::size_t k, std::size_t n)
{
    json j;
    const auto [lo, hi] = wilson_interval(k, n);
    j["count"] = k;
    j["samples"] = n;
    j["p"] = n ? double(k) / double(n) : 0.0;
    j["wilson_low"] = lo;
    j["wilson_high"] = hi;
    return j;
}

ExperimentReport new_report(const char* name, const ExperimentConfig& config)
{
    ExperimentReport r;
    r.experiment = name;
    r.version = version_string();
    r.config_hash = config_hash(config);
    r.seed = config.solver.seed;
    r.config_text = canonical_config(config);
    return r;
}

double max_h_norm(const Trajectory& tr)
{
    double m = 0.0;
    for (const auto& d : tr.diagnostics) m = std::max(m, std::sqrt(d.enstrophy));
    return m;
}

// Least-squares slope of log y against log x over finite positive points.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0.0) || !std::isfinite(y[i])) continue;
        const double a = std::log(x[i]), b = std::log(y[i]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
        ++k;
    }
    if (k < 2) return std::numeric_limits<double>::quiet_NaN();
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

void check_common(const ExperimentConfig& config)
{
    if (config.samples < 1) throw Error(ErrorCode::configuration, "samples must be >= 1");
}

}  // namespace

std::string canonical_config(const ExperimentConfig& c)
{
    const SolverConfig& s = c.solver;
    std::ostringstream os;
    os << "M=" << s.M << '\n'
       << "dt=" << fmt(s.dt) << '\n'
       << "T=" << fmt(s.T) << '\n'
       << "nu=" << fmt(s.nu) << '\n'
       << "N=" << s.N << '\n'
       << "n=" << s.n << '\n'
       << "R=" << fmt(s.R) << '\n'
       << "K=" << fmt(s.K) << '\n'
       << "gamma=" << fmt(s.gamma) << '\n'
       << "delta=" << fmt(s.delta) << '\n'
       << "alpha=" << fmt(s.alpha) << '\n'
       << "seed=" << s.seed << '\n'
       << "viscosity=" << fmt(s.viscosity) << '\n'
       << "nonlinear=" << (s.nonlinear ? 1 : 0) << '\n'
       << "noise=" << (s.noise ? 1 : 0) << '\n'
       << "cfl=" << fmt(s.cfl) << '\n'
       << "samples=" << c.samples << '\n'
       << "n_list=" << join(c.n_list) << '\n'
       << "n_ref=" << c.n_ref << '\n'
       << "N_list=" << join(c.N_list) << '\n'
       << "stratonovich_check=" << (c.stratonovich_check ? 1 : 0) << '\n'
       << "extra_levels=" << c.extra_levels << '\n'
       << "data_samples=" << c.data_samples << '\n'
       << "threshold=" << fmt(c.threshold) << '\n'
       << "initial=" << c.initial << '\n'
       << "initial_path=" << c.initial_path << '\n'
       << "initial_slope=" << fmt(c.initial_slope) << '\n'
       << "save_points=" << c.save_points << '\n'
       << "mode=" << c.mode << '\n';
    return os.str();
}

std::uint64_t fnv1a64(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t config_hash(const ExperimentConfig& config) { return fnv1a64(canonical_config(config)); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
{
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(seed) ^ stream) ^ index);
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z)
{
    if (n == 0) return {0.0, 1.0};
    const double p = double(k) / double(n);
    const double nn = double(n);
    const double denom = 1.0 + z * z / nn;
    const double centre = (p + z * z / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double quantile(std::vector<double> values, double p)
{
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const double pos = p * double(values.size() - 1);
    const auto lo = std::size_t(std::floor(pos));
    const auto hi = std::min(values.size() - 1, lo + 1);
    const double f = pos - double(lo);
    if (f == 0.0 || values[lo] == values[hi]) return values[lo];
    return values[lo] + f * (values[hi] - values[lo]);
}

std::size_t worker_count()
{
    const char* env = std::getenv("WZNS_WORKERS");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw Error(ErrorCode::configuration, "WZNS_WORKERS must be a positive integer");
    return std::size_t(v);
}

void run_jobs(std::size_t count, const std::function<void(std::size_t)>& job)
{
    const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::vector<double> ExperimentReport::column(const std::string& name) const
{
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw Error(ErrorCode::invalid_argument, "no column " + name);
    const auto c = std::size_t(it - columns.begin());
    std::vector<double> out;
    for (const auto& r : records) out.push_back(r.values[c]);
    return out;
}

json ExperimentReport::to_json() const
{
    json j;
    j["experiment"] = experiment;
    j["version"] = version;
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016" PRIx64, config_hash);
    j["config_hash"] = hash;
    j["seed"] = seed;
    json cfg;
    std::istringstream is(config_text);
    for (std::string line; std::getline(is, line);) {
        const auto eq = line.find('=');
        cfg[line.substr(0, eq)] = line.substr(eq + 1);
    }
    j["config"] = cfg;
    j["columns"] = columns;
    json recs = json::array();
    for (const auto& r : records) {
        json row;
        row["index"] = r.index;
        row["seed"] = r.seed;
        row["status"] = r.status;
        json vals = json::array();
        for (double v : r.values) vals.push_back(number(v));
        row["values"] = vals;
        recs.push_back(row);
    }
    j["records"] = recs;
    j["summary"] = summary;
    return j;
}

std::string ExperimentReport::records_csv() const
{
    std::ostringstream os;
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016" PRIx64, config_hash);
    os << "# experiment=" << experiment << " version=" << version << " config_hash=" << hash << " seed=" << seed << '\n';
    os << "index,seed,status";
    for (const auto& c : columns) os << ',' << c;
    os << '\n';
    for (const auto& r : records) {
        os << r.index << ',' << r.seed << ',' << r.status;
        for (double v : r.values) os << ',' << fmt(v);
        os << '\n';
    }
    return os.str();
}

SpectralField make_initial_field(const ExperimentConfig& config, std::uint64_t seed)
{
    const SolverConfig& s = config.solver;
    if (config.initial == "random") return random_initial_field(s.M, s.K, seed, config.initial_slope);
    if (config.initial == "taylor_green") return taylor_green_field(s.M, s.K);
    if (config.initial == "two_mode") {
        SpectralField f = two_mode_field(s.M, 1.0);
        rescale_to(f, s.K);
        return f;
    }
    if (config.initial == "zero") return SpectralField(s.M);
    if (config.initial == "file") {
        LoadedField f = load_field(config.initial_path);
        if (f.field.M() != s.M) throw Error(ErrorCode::configuration, "initial field file has a different truncation M");
        return std::move(f.field);
    }
    throw Error(ErrorCode::configuration, "unknown initial condition '" + config.initial +
                                              "' (valid: random, taylor_green, two_mode, zero, file)");
}

double sup_negative_distance(const Trajectory& a, const Trajectory& b, double delta)
{
    if (a.blowup_time || b.blowup_time || a.states.size() != b.states.size()) {
        return std::numeric_limits<double>::infinity();
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        if (std::abs(a.times[i] - b.times[i]) > 1e-12) return std::numeric_limits<double>::infinity();
        m = std::max(m, sobolev_norm(a.states[i] - b.states[i], -delta));
    }
    return m;
}

ExperimentReport wong_zakai_convergence(const ExperimentConfig& config)
{
    check_common(config);
    const SolverConfig& s = config.solver;
    if (config.n_list.empty()) throw Error(ErrorCode::configuration, "n_list must not be empty");
    if (!power_of_two(config.n_ref)) throw Error(ErrorCode::configuration, "n_ref must be a power of two");
    for (int n : config.n_list) {
        if (!power_of_two(n) || n > config.n_ref) {
            throw Error(ErrorCode::configuration, "every n must be a power of two not above n_ref");
        }
    }
    const Lattice lattice(s.M);
    const NoiseModel noise(s, lattice);
    const auto modes = noise.modes();
    const int level = log2_exact(config.n_ref) + (config.stratonovich_check ? config.extra_levels : 0);
    const SpectralField xi0 = make_initial_field(config, derive_seed(s.seed, 1, 0));
    const double s0 = sobolev_norm(xi0, -s.delta);
    SolverConfig run = s;
    run.save_points = config.save_points;

    ExperimentReport report = new_report("wz-convergence", config);
    for (int n : config.n_list) report.columns.push_back("dist_n" + std::to_string(n));
    if (config.stratonovich_check) report.columns.push_back("dist_stratonovich");
    report.columns.push_back("energy_ref");
    report.columns.push_back("sup_negative_ref");
    report.records.resize(config.samples);

    run_jobs(config.samples, [&](std::size_t i) {
        SampleRecord rec;
        rec.index = i;
        rec.seed = derive_seed(s.seed, 2, i);
        const BrownianEnsemble ens = sample_ensemble(modes, s.T, level, rec.seed);
        SolverConfig r = run;
        r.n = config.n_ref;
        const Trajectory ref = simulate(r, xi0, StepMode::wong_zakai, &ens);
        bool blow = ref.blowup_time.has_value();
        for (int n : config.n_list) {
            r.n = n;
            const Trajectory tr = simulate(r, xi0, StepMode::wong_zakai, &ens);
            blow = blow || tr.blowup_time.has_value();
            rec.values.push_back(sup_negative_distance(tr, ref, s.delta));
        }
        if (config.stratonovich_check) {
            const Trajectory st = simulate(run, xi0, StepMode::stratonovich, &ens);
            blow = blow || st.blowup_time.has_value();
            rec.values.push_back(sup_negative_distance(st, ref, s.delta));
        }
        rec.values.push_back(ref.blowup_time ? std::numeric_limits<double>::infinity() : ref.energy_functional());
        rec.values.push_back(ref.sup_negative_norm());
        if (blow) rec.status = "blowup";
        report.records[i] = std::move(rec);
    });

    json sum;
    sum["initial_negative_norm"] = s0;
    sum["ensemble_level"] = level;
    json per_n = json::object();
    std::vector<double> ns, medians;
    for (int n : config.n_list) {
        const auto col = report.column("dist_n" + std::to_string(n));
        per_n[std::to_string(n)] = stats(col);
        ns.push_back(n);
        medians.push_back(quantile(col, 0.5));
    }
    sum["distance"] = per_n;
    if (config.stratonovich_check) sum["stratonovich_distance"] = stats(report.column("dist_stratonovich"));
    bool nonincreasing = true;
    for (std::size_t i = 1; i < medians.size(); ++i) nonincreasing = nonincreasing && medians[i] <= medians[i - 1];
    sum["median_nonincreasing"] = nonincreasing;
    sum["median_ratio_last_first"] = number(medians.back() / medians.front());
    sum["empirical_rate"] = number(-loglog_slope(ns, medians));
    json eps = json::array();
    for (double f : {0.5, 0.2, 0.1, 0.05}) {
        json e;
        e["factor"] = f;
        e["epsilon"] = f * s0;
        json pn = json::object();
        for (int n : config.n_list) {
            const auto col = report.column("dist_n" + std::to_string(n));
            std::size_t k = 0;
            for (double d : col) k += (!(d <= f * s0)) ? 1 : 0;
            pn[std::to_string(n)] = probability(k, col.size());
        }
        e["exceedance"] = pn;
        eps.push_back(e);
    }
    sum["exceedance"] = eps;
    std::size_t blow = 0;
    for (const auto& r : report.records) blow += r.status != "ok";
    sum["blowups"] = blow;
    report.summary = sum;
    return report;
}

ExperimentReport scaling_limit(const ExperimentConfig& config)
{
    check_common(config);
    const SolverConfig& s = config.solver;
    if (config.N_list.empty()) throw Error(ErrorCode::configuration, "N_list must not be empty");
    const int maxN = *std::max_element(config.N_list.begin(), config.N_list.end());
    if (s.M < 2 * maxN) throw Error(ErrorCode::shell_truncated, "M must be ≥ 2N for every N in N_list");
    if (!power_of_two(s.n)) throw Error(ErrorCode::configuration, "n must be a power of two");

    const Lattice lattice(s.M);
    std::vector<Vec3i> modes;
    for (int N : config.N_list) {
        SolverConfig sn = s;
        sn.N = N;
        const auto m = NoiseModel(sn, lattice).modes();
        modes.insert(modes.end(), m.begin(), m.end());
    }
    const int level = log2_exact(s.n);
    const SpectralField xi0 = make_initial_field(config, derive_seed(s.seed, 1, 0));

    SolverConfig lim = s;
    lim.viscosity = s.viscosity * (1.0 + 0.6 * s.nu);
    lim.noise = false;
    lim.R = 0.0;
    lim.save_points = config.save_points;
    const Trajectory limit = simulate(lim, xi0, StepMode::deterministic);
    const double CK = max_h_norm(limit);
    const double RK = CK + 2.0;
    const double R = s.R > 0.0 ? s.R : RK;

    SolverConfig plain = lim;
    plain.viscosity = s.viscosity;
    const double control = sup_negative_distance(simulate(plain, xi0, StepMode::deterministic), limit, s.delta);

    ExperimentReport report = new_report("scaling-limit", config);
    for (int N : config.N_list) {
        report.columns.push_back("dist_N" + std::to_string(N));
        report.columns.push_back("sup_negative_N" + std::to_string(N));
        report.columns.push_back("bounded_N" + std::to_string(N));
    }
    report.records.resize(config.samples);
    run_jobs(config.samples, [&](std::size_t i) {
        SampleRecord rec;
        rec.index = i;
        rec.seed = derive_seed(s.seed, 2, i);
        const BrownianEnsemble ens = sample_ensemble(modes, s.T, level, rec.seed);
        for (int N : config.N_list) {
            SolverConfig sn = s;
            sn.N = N;
            sn.R = R;
            sn.save_points = config.save_points;
            const Trajectory tr = simulate(sn, xi0, StepMode::wong_zakai, &ens);
            if (tr.blowup_time) rec.status = "blowup";
            const double sup = tr.blowup_time ? std::numeric_limits<double>::infinity() : tr.sup_negative_norm();
            rec.values.push_back(sup_negative_distance(tr, limit, s.delta));
            rec.values.push_back(sup);
            rec.values.push_back(sup <= RK - 1.0 ? 1.0 : 0.0);
        }
        report.records[i] = std::move(rec);
    });

    json sum;
    sum["limit_viscosity"] = lim.viscosity;
    sum["C_K"] = CK;
    sum["R_K"] = RK;
    sum["cutoff_R"] = R;
    sum["control_distance"] = number(control);
    json perN = json::object();
    std::vector<double> medians;
    for (int N : config.N_list) {
        const std::string key = std::to_string(N);
        json e;
        e["distance"] = stats(report.column("dist_N" + key));
        std::size_t k = 0;
        for (double b : report.column("bounded_N" + key)) k += b > 0.5 ? 1 : 0;
        e["bounded"] = probability(k, config.samples);
        perN[key] = e;
        medians.push_back(quantile(report.column("dist_N" + key), 0.5));
    }
    sum["per_N"] = perN;
    sum["median_decreases_first_to_last"] = medians.back() < medians.front();
    report.summary = sum;
    return report;
}

ExperimentReport lifespan_measure(const ExperimentConfig& config)
{
    check_common(config);
    if (config.data_samples < 1) throw Error(ErrorCode::configuration, "data_samples must be >= 1");
    const SolverConfig& s = config.solver;
    if (!power_of_two(s.n)) throw Error(ErrorCode::configuration, "n must be a power of two");
    const Lattice lattice(s.M);
    const NoiseModel noise(s, lattice);
    const auto modes = noise.modes();
    const int level = log2_exact(s.n);

    // mu: random fields with ||xi0||_H uniform on (0, K], or a fixed field
    std::vector<SpectralField> data;
    for (std::size_t j = 0; j < config.data_samples; ++j) {
        const std::uint64_t seed = derive_seed(s.seed, 3, j);
        SpectralField f = make_initial_field(config, seed);
        if (config.initial == "random") {
            const double u = double((derive_seed(seed, 4, 0) >> 11) + 1) * 0x1.0p-53;
            rescale_to(f, s.K * u);
        }
        data.push_back(std::move(f));
    }
    SolverConfig lim = s;
    lim.viscosity = s.viscosity * (1.0 + 0.6 * s.nu);
    lim.noise = false;
    lim.R = 0.0;
    double CK = 0.0;
    for (const auto& f : data) CK = std::max(CK, max_h_norm(simulate(lim, f, StepMode::deterministic)));
    const double threshold = config.threshold > 0.0 ? config.threshold : CK + 2.0;

    ExperimentReport report = new_report("lifespan", config);
    report.columns.push_back("mu_hat");
    for (std::size_t j = 0; j < data.size(); ++j) report.columns.push_back("exit_" + std::to_string(j));
    report.records.resize(config.samples);
    run_jobs(config.samples, [&](std::size_t i) {
        SampleRecord rec;
        rec.index = i;
        rec.seed = derive_seed(s.seed, 2, i);
        const BrownianEnsemble ens = sample_ensemble(modes, s.T, level, rec.seed);
        std::vector<double> exits;
        std::size_t survived = 0;
        for (const auto& f : data) {
            const Trajectory tr = simulate(s, f, StepMode::wong_zakai, &ens);
            const auto tau = lifespan(tr, threshold);
            if (!tau) ++survived;
            exits.push_back(tau ? *tau : std::numeric_limits<double>::infinity());
        }
        rec.values.push_back(double(survived) / double(data.size()));
        rec.values.insert(rec.values.end(), exits.begin(), exits.end());
        report.records[i] = std::move(rec);
    });

    json sum;
    sum["C_K"] = CK;
    sum["threshold"] = threshold;
    const auto mu = report.column("mu_hat");
    sum["mu_hat"] = stats(mu);
    const auto best = std::size_t(std::max_element(mu.begin(), mu.end()) - mu.begin());
    sum["best_omega"] = {{"index", best}, {"seed", report.records[best].seed}, {"mu_hat", mu[best]}};
    double mean_mu = 0.0;
    for (double m : mu) mean_mu += m / double(mu.size());
    json per_data = json::array();
    double mean_data = 0.0;
    std::size_t pooled = 0;
    for (std::size_t j = 0; j < data.size(); ++j) {
        std::size_t k = 0;
        for (double e : report.column("exit_" + std::to_string(j))) k += std::isinf(e) ? 1 : 0;
        pooled += k;
        per_data.push_back(probability(k, config.samples));
        mean_data += double(k) / double(config.samples) / double(data.size());
    }
    sum["survival_per_initial"] = per_data;
    sum["mean_over_omega"] = mean_mu;
    sum["mean_over_initial"] = mean_data;
    sum["pooled_survival"] = probability(pooled, config.samples * data.size());
    sum["max_dominates_mean"] = mu[best] >= mean_mu;
    report.summary = sum;
    return report;
}

RoughSample rough_sample(const SolverConfig& solver, const SpectralField& xi0, const BrownianEnsemble& ensemble, int n)
{
    if (!power_of_two(n)) throw Error(ErrorCode::configuration, "n must be a power of two");
    const Lattice lattice(solver.M);
    const NoiseCoefficients theta = theta_coefficients(solver.N, solver.gamma, lattice.modes());
    const PiecewiseLinearFamily pl = piecewise_linear(ensemble, n);
    const TransportNoise noise(lattice, theta, solver.C_nu(), pl.labels());

    SolverConfig r = solver;
    r.n = n;
    r.save_points = std::size_t(n);
    r.record_drift = true;
    const Trajectory tr = simulate(r, xi0, StepMode::wong_zakai, &ensemble);
    RoughSample out;
    if (tr.blowup_time) {
        out.blowup = true;
        return out;
    }
    const RoughPathLift lift = canonical_lift(pl, pl.partition(), solver.alpha);
    const auto proxy = driver_norm_proxy(lift, theta, solver.C_nu());
    out.level1 = proxy.first;
    out.level2 = proxy.second;

    const auto pairs = dyadic_pairs(log2_exact(n));
    for (const auto& p : pairs) {
        const double h = tr.times[p.t] - tr.times[p.s];
        const SpectralField d = tr.drift_integral[p.t] - tr.drift_integral[p.s];
        out.drift_h2 = std::max(out.drift_h2, sobolev_norm(d, -2.0) / h);
        out.drift_h1 = std::max(out.drift_h1, sobolev_norm(d, -1.0) / std::sqrt(h));
    }
    const auto rem = remainder_map(tr.states, lift, tr.drift_integral, noise, pairs);
    out.remainder = holder_seminorm(rem, 3.0 * solver.alpha);
    out.scales = scale_ratios(rem, 3.0 * solver.alpha);
    return out;
}

ExperimentReport rough_diagnostics(const ExperimentConfig& config)
{
    check_common(config);
    const SolverConfig& s = config.solver;
    if (config.n_list.empty()) throw Error(ErrorCode::configuration, "n_list must not be empty");
    int maxn = 1;
    for (int n : config.n_list) {
        if (!power_of_two(n)) throw Error(ErrorCode::configuration, "every n must be a power of two");
        maxn = std::max(maxn, n);
    }
    const Lattice lattice(s.M);
    const NoiseModel noise(s, lattice);
    const auto modes = noise.modes();
    const SpectralField xi0 = make_initial_field(config, derive_seed(s.seed, 1, 0));

    ExperimentReport report = new_report("rough-diagnostics", config);
    for (int n : config.n_list) {
        const std::string k = "_n" + std::to_string(n);
        for (const char* c : {"level1", "level2", "drift_h2", "drift_h1", "remainder", "scale_spread", "coarse_fine"}) {
            report.columns.push_back(c + k);
        }
        for (int j = 0; j <= log2_exact(n); ++j) report.columns.push_back("scale" + std::to_string(j) + k);
    }
    report.records.resize(config.samples);
    run_jobs(config.samples, [&](std::size_t i) {
        SampleRecord rec;
        rec.index = i;
        rec.seed = derive_seed(s.seed, 2, i);
        const BrownianEnsemble ens = sample_ensemble(modes, s.T, log2_exact(maxn), rec.seed);
        for (int n : config.n_list) {
            const RoughSample rs = rough_sample(s, xi0, ens, n);
            const double inf = std::numeric_limits<double>::infinity();
            if (rs.blowup) {
                rec.status = "blowup";
                rec.values.insert(rec.values.end(), std::size_t(7 + log2_exact(n) + 1), inf);
                continue;
            }
            double lo = inf, hi = 0.0;
            for (const auto& sc : rs.scales) {
                lo = std::min(lo, sc.second);
                hi = std::max(hi, sc.second);
            }
            const double c = rs.scales.front().second, f = rs.scales.back().second;
            rec.values.insert(rec.values.end(), {rs.level1, rs.level2, rs.drift_h2, rs.drift_h1, rs.remainder,
                                                 lo > 0.0 ? hi / lo : inf, std::max(c / f, f / c)});
            for (const auto& sc : rs.scales) rec.values.push_back(sc.second);
        }
        report.records[i] = std::move(rec);
    });

    json sum;
    json perN = json::object();
    double prev_q90 = 0.0;
    bool stable = true;
    for (int n : config.n_list) {
        const std::string k = "_n" + std::to_string(n);
        json e;
        e["level1"] = stats(report.column("level1" + k));
        e["level2"] = stats(report.column("level2" + k));
        e["drift_h2"] = stats(report.column("drift_h2" + k));
        e["drift_h1"] = stats(report.column("drift_h1" + k));
        e["remainder"] = stats(report.column("remainder" + k));
        e["coarse_fine"] = stats(report.column("coarse_fine" + k));
        const double q90 = quantile(report.column("level1" + k), 0.9);
        if (prev_q90 > 0.0) stable = stable && q90 <= 2.0 * prev_q90 && prev_q90 <= 2.0 * q90;
        prev_q90 = q90;
        perN[std::to_string(n)] = e;
    }
    sum["per_n"] = perN;
    sum["level1_q90_stable"] = stable;
    report.summary = sum;
    return report;
}

}  // namespace wzns
