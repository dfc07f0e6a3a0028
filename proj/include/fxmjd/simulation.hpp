#pragma once

#include <cstdint>
#include <vector>

#include "fxmjd/esscher.hpp"
#include "fxmjd/pricing.hpp"
#include "fxmjd/regime.hpp"

namespace fxmjd {

enum class MeasureTag { physical, risk_neutral };

// One simulated spot trajectory, recorded at regime-switch boundaries.
// The log-scheme is exact within each sojourn, so there is no
// discretization bias: disagreements with the series pricer implicate the
// series, not the simulator.
struct SpotPath {
    std::vector<double> times;      // 0 = t_0 < ... < horizon
    std::vector<double> log_spot;   // log S at each grid time
    long jump_count;
    ChainPath chain;
};

struct Estimate {
    double mean;
    double std_error;
    long n;
};

// Simulates the spot SDE conditional on a fresh chain path. Under the
// physical measure jumps follow `spec` with per-state intensity lambda_i and
// drift mu_i; under the risk-neutral measure `rn` supplies per-state tilted
// jump laws, intensities lambda*_i and drift rd_i - rf_i - lambda*_i k*_i.
SpotPath simulate_spot_path(const RegimeSet& regimes, const RateMatrix& rate,
                            const JumpSpec& spec, double s0, double horizon,
                            MeasureTag measure, const RiskNeutralRegimeSet* rn,
                            int initial_state, std::uint64_t seed);

// Raw payoff-averaging oracle: discounts each path by the realized
// occupation-weighted rate differential. Plain MC, no variance reduction.
PriceResult mc_price_call(double s0, double k, double t, const RegimeSet& regimes,
                          const RateMatrix& rate, const RiskNeutralRegimeSet& rn,
                          int initial_state, long n_paths, std::uint64_t seed);

// MC mean of the Esscher density L_T along physical paths; must be 1.
Estimate check_esscher_density(const RegimeSet& regimes, const RateMatrix& rate,
                               const JumpSpec& spec, const EsscherParams& params,
                               double horizon, long n_paths, std::uint64_t seed);

// MC mean of the discounted spot S_T^d under the risk-neutral measure;
// must equal s0.
Estimate mc_discounted_spot(const RegimeSet& regimes, const RateMatrix& rate,
                            const RiskNeutralRegimeSet& rn, double s0,
                            double horizon, int initial_state, long n_paths,
                            std::uint64_t seed);

// E_P[L_T * S_T^d]: the Bayes form of E_Q[S_T^d]. Unlike the direct
// risk-neutral simulation this detects miscalibrated transform parameters,
// since the drift is not imposed per state.
Estimate mc_reweighted_spot(const RegimeSet& regimes, const RateMatrix& rate,
                            const JumpSpec& spec, const EsscherParams& params,
                            double s0, double horizon, int initial_state,
                            long n_paths, std::uint64_t seed);

// Physical-measure paths reweighted by L_T: the Bayes form of the call
// price under the exact tilted measure. Matches mc_price_call when the jump
// law is closed under the power tilt (point mass, or lambda = 0); for
// exponential jumps the model's risk-neutral law keeps only the tilted
// mean, so the two prices agree at the spot level but not payoff by payoff.
Estimate mc_reweighted_price(const RegimeSet& regimes, const RateMatrix& rate,
                             const JumpSpec& spec, const EsscherParams& params,
                             double s0, double k, double t, int initial_state,
                             long n_paths, std::uint64_t seed);

}  // namespace fxmjd
