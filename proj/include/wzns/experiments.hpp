#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wzns/dynamics.hpp"

namespace wzns {

const char* version_string();

struct ExperimentConfig {
    SolverConfig solver;
    std::size_t samples = 32;
    std::vector<int> n_list{8, 16, 32, 64};
    int n_ref = 256;
    std::vector<int> N_list{2, 3, 4};
    bool stratonovich_check = true;
    int extra_levels = 2;          // ensemble depth beyond log2(n_ref) for the Stratonovich run
    std::size_t data_samples = 8;  // initial conditions per omega (lifespan)
    double threshold = 0.0;        // lifespan exit level; <= 0 selects C(K) + 2
    std::string initial = "random";  // random | taylor_green | two_mode | zero | file
    std::string initial_path;
    double initial_slope = 2.0;
    std::size_t save_points = 64;
    std::string mode = "wong_zakai";  // simulate: wong_zakai | stratonovich | deterministic
};

// key = value lines for every resolved parameter, in a fixed order.
std::string canonical_config(const ExperimentConfig& config);
std::uint64_t fnv1a64(const std::string& text);
std::uint64_t config_hash(const ExperimentConfig& config);

// Independent 64-bit seed per (stream, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// Wilson score interval for k successes out of n at ~95%.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);
// Linear-interpolation quantile of unsorted data; NaN for empty input.
double quantile(std::vector<double> values, double p);

// Runs job(i) for i < count on WZNS_WORKERS threads (default 1). Results
// are stored by index, so the output does not depend on the worker count.
void run_jobs(std::size_t count, const std::function<void(std::size_t)>& job);
std::size_t worker_count();

struct SampleRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::string status = "ok";
    std::vector<double> values;
};

struct ExperimentReport {
    std::string experiment;
    std::string version;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::string config_text;
    std::vector<std::string> columns;
    std::vector<SampleRecord> records;
    nlohmann::ordered_json summary;

    std::vector<double> column(const std::string& name) const;
    nlohmann::ordered_json to_json() const;
    // Header comment lines carry the hash and seed; values use %.17g.
    std::string records_csv() const;
};

SpectralField make_initial_field(const ExperimentConfig& config, std::uint64_t seed);

// Sup over saved times of ||a - b||_{-delta}; infinity when either run
// stopped early or the save grids differ.
double sup_negative_distance(const Trajectory& a, const Trajectory& b, double delta);

ExperimentReport wong_zakai_convergence(const ExperimentConfig& config);
ExperimentReport scaling_limit(const ExperimentConfig& config);
ExperimentReport lifespan_measure(const ExperimentConfig& config);
ExperimentReport rough_diagnostics(const ExperimentConfig& config);

// Shared pieces of rough_diagnostics, per trajectory.
struct RoughSample {
    double level1 = 0.0;            // driver proxy, first level
    double level2 = 0.0;            // driver proxy, second level
    double drift_h2 = 0.0;          // max ||delta mu||_{-2} / (t - s)
    double drift_h1 = 0.0;          // max ||delta mu||_{-1} / (t - s)^{1/2}
    double remainder = 0.0;         // max ||xi^nat||_{-3} / (t - s)^{3 alpha}
    std::vector<std::pair<double, double>> scales;  // per dyadic scale, coarsest first
    bool blowup = false;
};
RoughSample rough_sample(const SolverConfig& solver, const SpectralField& xi0, const BrownianEnsemble& ensemble, int n);

}  // namespace wzns
