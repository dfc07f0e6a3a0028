#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fxmjd/esscher.hpp"
#include "fxmjd/jump_spec.hpp"
#include "fxmjd/regime.hpp"

namespace fxmjd {

// One JSON document drives a full reproducible run. Units: rates and drifts
// per year, maturities in years, dt in years.
struct RunConfig {
    RegimeSet regimes;
    std::string jump_kind = "exponential";  // "exponential" | "point_mass"
    double jump_theta = 5.0;                // rate (exponential) or value (point mass)
    double k0 = 0.0;
    RateMatrix rate;

    double s0 = 1.0;
    std::vector<double> strikes;
    std::vector<double> maturities;
    int initial_state = 0;

    std::vector<double> curve_s_over_k;
    std::vector<double> curve_thetas;
    std::vector<double> curve_maturities;

    long n_paths = 100000;
    std::uint64_t seed = 42;

    // Optional raw transform parameters (e.g. a deliberately uncalibrated
    // theta_c for negative-control checks). Replaces solve_esscher output.
    std::optional<EsscherParams> esscher_override;

    JumpSpec jump_spec() const;
    JumpSpec jump_spec_with(double theta) const;
    void validate() const;
};

RunConfig load_config(const std::string& path);

}  // namespace fxmjd
