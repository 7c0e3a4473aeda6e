#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace wzns {

// One property check: value is the measured quantity, tolerance the bound
// it is compared against (value <= tolerance unless noted in detail).
struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::string detail;
    double seconds = 0.0;
};

CheckResult check_enstrophy_neutrality(std::size_t fields = 100);
CheckResult check_basis();
CheckResult check_covariation(std::size_t samples = 10000);
CheckResult check_rough_algebra();
CheckResult check_spectral_oracles();
CheckResult check_integrator();

// Monte Carlo checks; sample counts and truncations are arguments so the
// validate subcommand can run them small.
CheckResult check_energy_bound(int M, std::size_t samples);
CheckResult check_wong_zakai_trend(int M, std::size_t samples);
CheckResult check_remainder_scaling(int M, std::size_t samples);
CheckResult check_determinism(int M, std::size_t samples);

// Fast invariant suite (property checks plus a small replay check).
std::vector<CheckResult> invariant_suite();

}  // namespace wzns
