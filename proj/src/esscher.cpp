#include "fxmjd/esscher.hpp"

#include <cmath>
#include <sstream>

namespace fxmjd {

namespace {

// g(t) = M(t+1) - M(t); the per-unit-intensity jump compensator.
double jump_gap(const JumpSpec& spec, double t) {
    return spec.moment(t + 1.0) - spec.moment(t);
}

double solve_theta_j(const JumpSpec& spec, double target, int state) {
    constexpr double kEps = 1e-8;
    double lo = -1.0 + kEps;
    double hi = 8.0;

    double glo = jump_gap(spec, lo);
    double ghi = jump_gap(spec, hi);
    while ((glo - target) * (ghi - target) > 0.0 && hi < 64.0) {
        hi *= 2.0;
        ghi = jump_gap(spec, hi);
    }
    if ((glo - target) * (ghi - target) > 0.0) {
        std::ostringstream msg;
        msg << "esscher calibration infeasible in state " << state
            << ": K0/lambda = " << target << " outside attainable range ["
            << std::min(glo, ghi) << ", " << std::max(glo, ghi) << "]";
        throw CalibrationError(msg.str());
    }

    double flo = glo - target;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fm = jump_gap(spec, mid) - target;
        if (std::abs(fm) <= 1e-13 || mid == lo || mid == hi) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double RiskNeutralRegimeSet::series_jump_variance() const {
    double wsum = 0.0, vsum = 0.0;
    for (const auto& s : states) {
        wsum += s.lambda_star;
        vsum += s.lambda_star * s.tilted.variance();
    }
    if (wsum > 0.0) return vsum / wsum;
    double mean = 0.0;
    for (const auto& s : states) mean += s.tilted.variance();
    return states.empty() ? 0.0 : mean / static_cast<double>(states.size());
}

double risk_neutral_intensity(double lambda, double theta_j, const JumpSpec& spec) {
    return lambda * spec.moment(theta_j);
}

double mean_jump_size(double theta_j, const JumpSpec& spec) {
    if (spec.kind() == JumpSpec::Kind::Exponential) {
        // M(t+1)/M(t) collapses to (t+1)/theta; avoids lgamma cancellation.
        return (theta_j + 1.0) / spec.rate() - 1.0;
    }
    return spec.moment(theta_j + 1.0) / spec.moment(theta_j) - 1.0;
}

double martingale_residual(const RegimeSet& regimes, const EsscherParams& params,
                           const JumpSpec& spec, int state) {
    if (state < 0 || state >= regimes.size())
        throw ValidationError("martingale_residual: state out of range");
    const auto& s = regimes.states[state];
    const double tc = params.theta_c[state];
    const double tj = params.theta_j[state];
    double jump_term = 0.0;
    if (s.lambda > 0.0) jump_term = s.lambda * jump_gap(spec, tj);
    return s.rf - s.rd + s.mu + tc * s.sigma * s.sigma + jump_term;
}

EsscherParams solve_esscher(const RegimeSet& regimes, const JumpSpec& spec, double k0) {
    regimes.validate();
    const int n = regimes.size();
    EsscherParams params;
    params.k0 = k0;
    params.theta_c.resize(n);
    params.theta_j.resize(n);

    for (int i = 0; i < n; ++i) {
        const auto& s = regimes.states[i];
        params.theta_c[i] = (s.rd - s.rf - s.mu - k0) / (s.sigma * s.sigma);
        if (s.lambda == 0.0) {
            if (k0 != 0.0)
                throw CalibrationError("esscher calibration infeasible in state " +
                                       std::to_string(i) +
                                       ": lambda = 0 requires K0 = 0");
            params.theta_j[i] = 0.0;
        } else if (spec.kind() == JumpSpec::Kind::PointMass && spec.value() == 1.0) {
            // Degenerate jump: g(t) == 0 for all t.
            if (k0 != 0.0)
                throw CalibrationError("esscher calibration infeasible in state " +
                                       std::to_string(i) +
                                       ": point mass at 1 requires K0 = 0");
            params.theta_j[i] = 0.0;
        } else {
            params.theta_j[i] = solve_theta_j(spec, k0 / s.lambda, i);
        }
    }
    return params;
}

RiskNeutralRegimeSet to_risk_neutral(const RegimeSet& regimes,
                                     const EsscherParams& params,
                                     const JumpSpec& spec) {
    const int n = regimes.size();
    if (static_cast<int>(params.theta_c.size()) != n ||
        static_cast<int>(params.theta_j.size()) != n)
        throw ValidationError("to_risk_neutral: parameter dimension mismatch");

    RiskNeutralRegimeSet rn;
    rn.states.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double res = martingale_residual(regimes, params, spec, i);
        if (std::abs(res) > 1e-8)
            throw ValidationError("to_risk_neutral: martingale residual " +
                                  std::to_string(res) + " in state " +
                                  std::to_string(i));
        const double tj = params.theta_j[i];
        rn.states.push_back({risk_neutral_intensity(regimes.states[i].lambda, tj, spec),
                             mean_jump_size(tj, spec), spec.tilted(tj)});
    }
    return rn;
}

std::string calibration_report(const RegimeSet& regimes, const EsscherParams& params,
                               const JumpSpec& spec, const RiskNeutralRegimeSet& rn) {
    std::ostringstream out;
    out.precision(12);
    out << "k0 " << params.k0 << '\n';
    for (int i = 0; i < regimes.size(); ++i) {
        out << "state " << i << '\n';
        out << "  theta_c " << params.theta_c[i] << '\n';
        out << "  theta_j " << params.theta_j[i] << '\n';
        out << "  lambda_star " << rn.states[i].lambda_star << '\n';
        out << "  k_star " << rn.states[i].k_star << '\n';
        if (rn.states[i].tilted.kind() == JumpSpec::Kind::Exponential)
            out << "  tilted_rate " << rn.states[i].tilted.rate() << '\n';
        out << "  residual " << martingale_residual(regimes, params, spec, i) << '\n';
    }
    return out.str();
}

}  // namespace fxmjd
