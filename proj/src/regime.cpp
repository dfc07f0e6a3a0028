#include "fxmjd/regime.hpp"

#include <cmath>
#include <random>
#include <string>

#include "fxmjd/matrix_exp.hpp"

namespace fxmjd {

namespace {
constexpr double kRowSumTol = 1e-12;
}

void RegimeSet::validate() const {
    if (states.empty()) throw ValidationError("RegimeSet: need at least one state");
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& s = states[i];
        if (!(s.sigma > 0.0))
            throw ValidationError("RegimeSet: sigma must be > 0 in state " + std::to_string(i));
        if (s.lambda < 0.0)
            throw ValidationError("RegimeSet: lambda must be >= 0 in state " + std::to_string(i));
        if (s.rd < 0.0 || s.rf < 0.0)
            throw ValidationError("RegimeSet: rates must be >= 0 in state " + std::to_string(i));
    }
}

void RateMatrix::validate() const {
    if (pi.rows() != pi.cols() || pi.rows() < 1)
        throw ValidationError("RateMatrix: must be square and non-empty");
    for (Eigen::Index i = 0; i < pi.rows(); ++i) {
        double row_sum = 0.0;
        for (Eigen::Index j = 0; j < pi.cols(); ++j) {
            if (i != j && pi(i, j) < 0.0)
                throw ValidationError("RateMatrix: negative off-diagonal at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
            row_sum += pi(i, j);
        }
        if (std::abs(row_sum) > kRowSumTol)
            throw ValidationError("RateMatrix: row " + std::to_string(i) +
                                  " does not sum to 0");
    }
}

void TransitionMatrix::validate() const {
    if (p.rows() != p.cols() || p.rows() < 1)
        throw ValidationError("TransitionMatrix: must be square and non-empty");
    if (!(dt > 0.0)) throw ValidationError("TransitionMatrix: dt must be > 0");
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        double row_sum = 0.0;
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            if (p(i, j) < 0.0 || p(i, j) > 1.0)
                throw ValidationError("TransitionMatrix: entry out of [0,1] at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
            row_sum += p(i, j);
        }
        if (std::abs(row_sum - 1.0) > kRowSumTol)
            throw ValidationError("TransitionMatrix: row " + std::to_string(i) +
                                  " does not sum to 1");
    }
}

void OccupationTimes::validate() const {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < j.size(); ++i) {
        if (j(i) < 0.0) throw ValidationError("OccupationTimes: negative entry");
        sum += j(i);
    }
    if (std::abs(sum - horizon) > kRowSumTol * std::max(1.0, horizon))
        throw ValidationError("OccupationTimes: entries do not sum to the horizon");
}

ChainPath simulate_chain_path(const RateMatrix& rate, int initial_state,
                              double horizon, std::uint64_t seed) {
    rate.validate();
    const int n = rate.size();
    if (initial_state < 0 || initial_state >= n)
        throw ValidationError("simulate_chain_path: initial state out of range");
    if (!(horizon > 0.0)) throw ValidationError("simulate_chain_path: horizon must be > 0");

    std::mt19937_64 rng(seed);
    ChainPath path{n, initial_state, horizon, {}};

    double t = 0.0;
    int state = initial_state;
    while (t < horizon) {
        const double exit_rate = -rate.pi(state, state);
        if (exit_rate <= 0.0) {  // absorbing
            path.segments.push_back({state, horizon - t});
            break;
        }
        double sojourn = std::exponential_distribution<double>(exit_rate)(rng);
        if (t + sojourn >= horizon) {
            path.segments.push_back({state, horizon - t});
            break;
        }
        path.segments.push_back({state, sojourn});
        t += sojourn;

        // Next state: j != state with probability pi[state][j]/exit_rate.
        double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng) * exit_rate;
        int next = -1;
        for (int j = 0; j < n; ++j) {
            if (j == state) continue;
            u -= rate.pi(state, j);
            if (u <= 0.0) {
                next = j;
                break;
            }
        }
        if (next < 0) {  // rounding fell off the end
            for (int j = n - 1; j >= 0; --j) {
                if (j != state && rate.pi(state, j) > 0.0) {
                    next = j;
                    break;
                }
            }
        }
        state = next;
    }
    return path;
}

OccupationTimes occupation_times(const ChainPath& path) {
    OccupationTimes occ{Eigen::VectorXd::Zero(path.n_states), path.horizon};
    for (const auto& seg : path.segments) {
        if (seg.state < 0 || seg.state >= path.n_states)
            throw ValidationError("occupation_times: segment state out of range");
        if (!(seg.duration > 0.0))
            throw ValidationError("occupation_times: non-positive sojourn");
        occ.j(seg.state) += seg.duration;
    }
    return occ;
}

double occupation_mgf(const RateMatrix& rate, const Eigen::VectorXd& u,
                      double horizon, const Eigen::VectorXd& initial_dist) {
    rate.validate();
    const int n = rate.size();
    if (u.size() != n || initial_dist.size() != n)
        throw ValidationError("occupation_mgf: dimension mismatch");
    if (horizon < 0.0) throw ValidationError("occupation_mgf: horizon must be >= 0");
    if (std::abs(initial_dist.sum() - 1.0) > 1e-10 || initial_dist.minCoeff() < 0.0)
        throw ValidationError("occupation_mgf: initial_dist must be a probability vector");

    Eigen::MatrixXd m = rate.pi;
    m.diagonal() += u;
    const Eigen::MatrixXd e = matrix_exp(m * horizon);
    return initial_dist.dot(e * Eigen::VectorXd::Ones(n));
}

RateMatrix transition_to_rate(const TransitionMatrix& p) {
    p.validate();
    RateMatrix rate{(p.p - Eigen::MatrixXd::Identity(p.size(), p.size())) / p.dt};
    rate.validate();
    return rate;
}

}  // namespace fxmjd
