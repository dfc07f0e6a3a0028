#pragma once

#include <string>
#include <vector>

#include "fxmjd/regime.hpp"

namespace fxmjd {

// Window lengths in bars and thresholds in pips for the three-state
// (up, down, sideway) open-price classifier. Only delta_up and delta_down
// enter the comparisons (divided by 10^4); the back-thresholds are accepted
// for interface fidelity with the original eight-parameter call.
struct EstimatorParams {
    int candles_back_up = 30;
    int candles_back_down = 30;
    double delta_back_up = 10.0;
    double delta_back_down = 10.0;
    int candles_up = 30;
    int candles_down = 30;
    double delta_up = 10.0;
    double delta_down = 10.0;
};

struct EstimationResult {
    TransitionMatrix matrix;  // rows/cols ordered (up, down, sideway)
    Eigen::Matrix3d counts;
};

// Classifies each bar's prior and future trend from open prices and
// accumulates a 3x3 transition count matrix, then row-normalizes.
// A regime that never occurs as a prior state is an error.
EstimationResult estimate_transition_matrix(const std::vector<double>& opens,
                                            const EstimatorParams& params,
                                            double dt);

// One price per line; a leading non-numeric header line is skipped.
std::vector<double> read_price_file(const std::string& path);

std::string transition_matrix_csv(const TransitionMatrix& m);
std::string counts_csv(const Eigen::Matrix3d& counts, const EstimatorParams& params);

}  // namespace fxmjd
