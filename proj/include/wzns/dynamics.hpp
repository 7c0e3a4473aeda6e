#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wzns/lattice.hpp"
#include "wzns/noise.hpp"
#include "wzns/spectral.hpp"
#include "wzns/transport_noise.hpp"

namespace wzns {

enum class StepMode { deterministic, wong_zakai, stratonovich };

const char* step_mode_name(StepMode mode);

struct SolverConfig {
    int M = 8;
    double dt = 1.0 / 8192.0;
    double T = 0.25;
    double nu = 10.0;
    int N = 2;
    int n = 32;
    double R = 0.0;          // cut-off level; <= 0 disables the cut-off (f_R = 1)
    double K = 1.0;
    double gamma = 1.0;
    double delta = 0.5;
    double alpha = 0.4;
    std::uint64_t seed = 1;

    double viscosity = 1.0;  // factor on the Laplacian
    bool nonlinear = true;   // include the Lie-derivative term
    bool noise = true;       // include the transport perturbation
    std::size_t save_points = 0;  // states saved at T j / save_points (0: initial and final only)
    double cfl = 3.0;             // bound on 2 pi |k|max sup|v| dt per step for the transport term
    bool record_drift = false;    // running integral of the drift at saved times

    double C_nu() const;
};

// Smooth non-increasing switch: 1 on [0,R], (1 + cos(pi (x - R)))/2 on
// (R, R+1), 0 on [R+1, inf). Throws invalid_argument for R <= 0.
double cutoff_factor(double value, double R);

struct StepDiagnostics {
    double t = 0.0;
    double enstrophy = 0.0;        // ||xi||_H^2
    double dissipation = 0.0;      // ||grad xi||_H^2
    double negative_norm = 0.0;    // ||xi||_{-delta}
    double cutoff = 1.0;           // f_R(||xi||_{-delta})
    double noise_budget = 0.0;     // <Pi(v.grad xi), xi> as a rate
    double nonlinear_production = 0.0;  // <-f_R L_u xi, xi>
};

struct Trajectory {
    StepMode mode = StepMode::deterministic;
    std::vector<double> times;                 // saved times
    std::vector<SpectralField> states;         // at saved times
    std::vector<SpectralField> drift_integral; // at saved times, when recorded
    std::vector<StepDiagnostics> diagnostics;  // every step, including t = 0
    std::optional<double> blowup_time;

    // sup_t ||xi||_H^2 + int_0^T ||grad xi||_H^2 dt (trapezoid over steps)
    double energy_functional() const;
    double sup_negative_norm() const;
};

// Transport field for the noise on one step: scale * sum_j theta_j w_j G_j.
class NoiseModel {
public:
    NoiseModel(const SolverConfig& config, const Lattice& lattice);

    const NoiseCoefficients& theta() const { return theta_; }
    const TransportNoise& transport() const { return transport_; }
    std::vector<Vec3i> modes() const { return shell_modes(theta_); }

private:
    NoiseCoefficients theta_;
    TransportNoise transport_;
};

// Integrating-factor Heun stepper: the Laplacian is integrated exactly,
// the Lie derivative and the transport term by the two-stage Heun rule.
class Stepper {
public:
    explicit Stepper(const SolverConfig& config);

    struct StageInfo {
        double cutoff = 1.0;
        double noise_budget = 0.0;
        double nonlinear_production = 0.0;
        SpectralField nonlinear;  // -f_R L_u xi at the step start
        explicit StageInfo(int M) : nonlinear(M) {}
    };

    // increment: transport field integrated over the step (slope * dt for
    // Wong-Zakai, Brownian increments for Stratonovich), or nullptr.
    SpectralField step(const SpectralField& xi, double dt, const SpectralField* increment, StageInfo* info = nullptr);

    // -f_R L_u xi and optionally Pi(v.grad xi) at one state.
    double nonlinear_term(const SpectralField& xi, SpectralField& out, const SpectralField* v, SpectralField* noise_out);

    const SolverConfig& config() const { return config_; }

private:
    const std::vector<double>& decay(double dt);
    void bind_transport(const SpectralField& v);

    SolverConfig config_;
    PseudoSpectral& engine_;
    std::vector<double> decay_;
    double decay_dt_ = -1.0;
    std::optional<SpectralField> bound_;
    std::uint64_t token_ = 0;
};

// Delta xi - f_R L_u xi + scale sum theta_k Pi(sigma.grad xi) dW^n/dt at time t.
SpectralField rhs_wong_zakai(const SpectralField& xi, double t, const SolverConfig& config,
                             const PiecewiseLinearFamily& slopes, const NoiseModel& noise);

// One step of the chosen mode. Wong-Zakai uses the slope segment containing
// t; Stratonovich uses ensemble increments over [t, t+dt] (t, dt on the
// ensemble grid).
SpectralField step(const SpectralField& state, double t, double dt, const SolverConfig& config, StepMode mode,
                   const NoiseModel* noise = nullptr, const PiecewiseLinearFamily* slopes = nullptr,
                   const BrownianEnsemble* ensemble = nullptr);

// Full run. ensemble is required for the Wong-Zakai and Stratonovich modes.
// Non-finite states stop the run and set blowup_time.
Trajectory simulate(const SolverConfig& config, const SpectralField& xi0, StepMode mode,
                    const BrownianEnsemble* ensemble = nullptr);

// First step time with ||xi||_H > threshold or the blow-up time; nullopt
// stands for "no exit before T".
std::optional<double> lifespan(const Trajectory& trajectory, double threshold);

// Initial conditions.
SpectralField random_initial_field(int M, double K, std::uint64_t seed, double slope = 2.0, int max_mode = 0);
SpectralField taylor_green_field(int M, double K);
SpectralField two_mode_field(int M, double amplitude);
// Rescales to ||xi||_H = K (zero fields stay zero).
void rescale_to(SpectralField& xi, double K);

}  // namespace wzns
