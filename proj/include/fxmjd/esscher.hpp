#pragma once

#include <string>
#include <vector>

#include "fxmjd/jump_spec.hpp"
#include "fxmjd/regime.hpp"

namespace fxmjd {

// Regime-switching Esscher transform parameters. theta_c acts on the
// diffusion part, theta_j tilts the jump law; k0 is the free constant
// shared across states.
struct EsscherParams {
    std::vector<double> theta_c;
    std::vector<double> theta_j;
    double k0 = 0.0;
};

// Per-state quantities under the risk-neutral measure.
struct RiskNeutralState {
    double lambda_star;  // tilted jump intensity
    double k_star;       // mean percentage jump size
    JumpSpec tilted;     // jump law under the new measure
};

struct RiskNeutralRegimeSet {
    std::vector<RiskNeutralState> states;

    int size() const { return static_cast<int>(states.size()); }

    // Variance of the jump factor under the tilted law, averaged across
    // states with lambda_star weights (plain mean if no state jumps).
    // Feeds the series pricer's per-jump variance term.
    double series_jump_variance() const;
};

// lambda * M(theta_j): the tilted Poisson intensity.
double risk_neutral_intensity(double lambda, double theta_j, const JumpSpec& spec);

// M(theta_j + 1)/M(theta_j) - 1: mean percentage jump under the tilt.
double mean_jump_size(double theta_j, const JumpSpec& spec);

// rf - rd + mu + theta_c*sigma^2 + lambda*(M(theta_j+1) - M(theta_j));
// zero iff the discounted spot is a martingale in the given state.
double martingale_residual(const RegimeSet& regimes, const EsscherParams& params,
                           const JumpSpec& spec, int state);

// Calibrates (theta_c, theta_j) per state for the given k0:
//   theta_c_i = (rd_i - rf_i - mu_i - k0) / sigma_i^2
//   theta_j_i solves M(t+1) - M(t) = k0 / lambda_i  (bracketed bisection)
// States with lambda_i = 0 require k0 = 0 and get theta_j_i = 0.
EsscherParams solve_esscher(const RegimeSet& regimes, const JumpSpec& spec, double k0);

// Derives the risk-neutral per-state quantities; rejects parameters whose
// martingale residual exceeds 1e-8 in any state.
RiskNeutralRegimeSet to_risk_neutral(const RegimeSet& regimes,
                                     const EsscherParams& params,
                                     const JumpSpec& spec);

// Key-value text report: per state theta_c, theta_j, lambda*, k*, tilted
// rate (if exponential) and the martingale residual.
std::string calibration_report(const RegimeSet& regimes, const EsscherParams& params,
                               const JumpSpec& spec, const RiskNeutralRegimeSet& rn);

}  // namespace fxmjd
