#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "fxmjd/errors.hpp"

namespace fxmjd {

// Per-state market parameters of the modulating chain.
struct RegimeParams {
    double mu;      // drift, 1/year
    double sigma;   // volatility, 1/sqrt(year)
    double lambda;  // jump intensity, jumps/year
    double rd;      // domestic rate, 1/year
    double rf;      // foreign rate, 1/year
};

struct RegimeSet {
    std::vector<RegimeParams> states;

    int size() const { return static_cast<int>(states.size()); }
    void validate() const;
};

// CTMC generator: off-diagonals >= 0, rows sum to zero.
struct RateMatrix {
    Eigen::MatrixXd pi;

    int size() const { return static_cast<int>(pi.rows()); }
    void validate() const;
    bool is_zero() const { return pi.cwiseAbs().maxCoeff() == 0.0; }
};

// Discrete-step transition probabilities over a step of dt years.
struct TransitionMatrix {
    Eigen::MatrixXd p;
    double dt;

    int size() const { return static_cast<int>(p.rows()); }
    void validate() const;
};

// Time spent in each state over a window of the given length.
struct OccupationTimes {
    Eigen::VectorXd j;  // years per state
    double horizon;     // T - t, years

    void validate() const;
};

// One realization of the chain: ordered sojourns covering [0, horizon].
struct ChainPath {
    int n_states;
    int initial_state;
    double horizon;
    struct Segment {
        int state;
        double duration;
    };
    std::vector<Segment> segments;
};

// Standard CTMC simulation: exponential sojourn with rate -pi[i][i], then a
// jump to j != i with probability pi[i][j] / (-pi[i][i]). A zero row is an
// absorbing state. Deterministic given the seed.
ChainPath simulate_chain_path(const RateMatrix& rate, int initial_state,
                              double horizon, std::uint64_t seed);

OccupationTimes occupation_times(const ChainPath& path);

// E[exp<u, J(0,horizon)>] = p0^T * exp((Pi + diag(u)) * horizon) * 1,
// evaluated through the matrix exponential.
double occupation_mgf(const RateMatrix& rate, const Eigen::VectorXd& u,
                      double horizon, const Eigen::VectorXd& initial_dist);

// Generator recovery Pi = (P - I)/dt.
RateMatrix transition_to_rate(const TransitionMatrix& p);

}  // namespace fxmjd
