#pragma once

#include <cstdint>
#include <vector>

#include "fxmjd/esscher.hpp"
#include "fxmjd/regime.hpp"

namespace fxmjd {

// Standard normal CDF via erfc; absolute error well under 1e-12.
double norm_cdf(double x);

// Classical call formula with squared volatility `var` per year. var = 0
// degenerates to the discounted intrinsic value max(s - k*exp(-r*t), 0).
double black_scholes_call(double s, double k, double t, double var, double r);

// Occupation-weighted averages conditioning the price on the chain path.
struct RegimeQuantities {
    double r_bar;            // average rate differential
    double u_bar;            // average squared volatility
    double lambda_bar_j;     // averaged tilted intensity
    double lambda_bar_star;  // jump-compensated intensity (1+k*)lambda*
    double drift_comp;       // sum lambda*_i k*_i J_i / (T-t)
    double log_gain;         // sum log(1+k*_i) J_i / (T-t)
};

RegimeQuantities regime_quantities(const OccupationTimes& occ,
                                   const RegimeSet& regimes,
                                   const RiskNeutralRegimeSet& rn);

// Series cap leaving Poisson tail mass below 1e-12.
int series_cap(double lambda_t);

// Poisson-weighted Black-Scholes series conditional on the occupation times:
//   sum_m e^{-t*L}(t*L)^m/m! * BS(s, k, t, u_bar + m*sjv/t,
//                                 r_bar - drift_comp + m*log_gain/t)
// with the compensated intensity L = lambda_bar_star in both weight factors.
double merton_conditional_price(double s, double k, double t,
                                const RegimeQuantities& q, double sigma_j_sq,
                                int m_max);

struct PriceResult {
    double price;
    double std_error;  // 0 for deterministic sub-results
    long n_paths;
    int series_truncation;
};

// Outer occupation-time expectation by Monte Carlo over chain paths
// (per-path seed = seed + path index). Single-state or frozen chains bypass
// the MC and return the deterministic conditional price.
PriceResult price_call(double s, double k, double t, const RegimeSet& regimes,
                       const RateMatrix& rate, const RiskNeutralRegimeSet& rn,
                       double sigma_j_sq, int initial_state, long n_paths,
                       std::uint64_t seed);

struct CurveRow {
    double s_over_k;
    double price_jump;
    double stderr_jump;
    double price_nojump;
    double stderr_nojump;
};

// Prices each strike with the calibrated jump model and with a jump-free
// counterpart sharing the same occupation-time draws, so both curves see
// identical regime randomness.
std::vector<CurveRow> price_curve(double s, const std::vector<double>& strikes,
                                  double t, const RegimeSet& regimes,
                                  const RateMatrix& rate,
                                  const RiskNeutralRegimeSet& rn,
                                  double sigma_j_sq, int initial_state,
                                  long n_paths, std::uint64_t seed);

std::string curve_csv(const std::vector<CurveRow>& rows);

}  // namespace fxmjd
