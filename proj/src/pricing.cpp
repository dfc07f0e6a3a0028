#include "fxmjd/pricing.hpp"

#include <cmath>
#include <sstream>

#include "fxmjd/parallel.hpp"

namespace fxmjd {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double black_scholes_call(double s, double k, double t, double var, double r) {
    if (!(s > 0.0) || !(k > 0.0) || !(t > 0.0))
        throw ValidationError("black_scholes_call: s, k, t must be > 0");
    if (var < 0.0) throw ValidationError("black_scholes_call: var must be >= 0");

    const double w = var * t;  // total variance
    const double disc_k = k * std::exp(-r * t);
    if (w == 0.0) return std::max(s - disc_k, 0.0);

    const double sw = std::sqrt(w);
    const double d1 = (std::log(s / k) + (r + 0.5 * var) * t) / sw;
    const double d2 = d1 - sw;
    return s * norm_cdf(d1) - disc_k * norm_cdf(d2);
}

RegimeQuantities regime_quantities(const OccupationTimes& occ,
                                   const RegimeSet& regimes,
                                   const RiskNeutralRegimeSet& rn) {
    const int n = regimes.size();
    if (occ.j.size() != n || rn.size() != n)
        throw ValidationError("regime_quantities: dimension mismatch");
    if (!(occ.horizon > 0.0))
        throw ValidationError("regime_quantities: horizon must be > 0");

    RegimeQuantities q{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        const double w = occ.j(i) / occ.horizon;
        const auto& s = regimes.states[i];
        const auto& r = rn.states[i];
        q.r_bar += (s.rd - s.rf) * w;
        q.u_bar += s.sigma * s.sigma * w;
        q.lambda_bar_j += r.lambda_star * w;
        q.lambda_bar_star += (1.0 + r.k_star) * r.lambda_star * w;
        q.drift_comp += r.lambda_star * r.k_star * w;
        q.log_gain += std::log1p(r.k_star) * w;
    }
    return q;
}

int series_cap(double lambda_t) {
    if (lambda_t <= 0.0) return 20;
    return static_cast<int>(std::ceil(lambda_t + 12.0 * std::sqrt(lambda_t))) + 20;
}

double merton_conditional_price(double s, double k, double t,
                                const RegimeQuantities& q, double sigma_j_sq,
                                int m_max) {
    if (m_max < 0) throw ValidationError("merton_conditional_price: m_max must be >= 0");
    const double lt = q.lambda_bar_star * t;

    const double log_lt = lt > 0.0 ? std::log(lt) : 0.0;
    double total = 0.0;
    for (int m = 0; m <= m_max; ++m) {
        // Poisson weight in log space so large lt cannot underflow the
        // recurrence before the mass near m = lt is reached.
        double weight;
        if (lt == 0.0) {
            if (m > 0) break;
            weight = 1.0;
        } else {
            weight = std::exp(m * log_lt - lt - std::lgamma(m + 1.0));
        }
        if (weight == 0.0 && m > lt) break;
        const double var_m = q.u_bar + m * sigma_j_sq / t;
        const double r_m = q.r_bar - q.drift_comp + m * q.log_gain / t;
        total += weight * black_scholes_call(s, k, t, var_m, r_m);
    }
    return total;
}

namespace {

RiskNeutralRegimeSet no_jump_counterpart(int n) {
    RiskNeutralRegimeSet rn;
    rn.states.reserve(n);
    for (int i = 0; i < n; ++i) rn.states.push_back({0.0, 0.0, JumpSpec::point_mass(1.0)});
    return rn;
}

OccupationTimes frozen_occupation(int n, int state, double horizon) {
    OccupationTimes occ{Eigen::VectorXd::Zero(n), horizon};
    occ.j(state) = horizon;
    return occ;
}

struct MeanStdErr {
    double mean;
    double std_error;
};

MeanStdErr reduce(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace

PriceResult price_call(double s, double k, double t, const RegimeSet& regimes,
                       const RateMatrix& rate, const RiskNeutralRegimeSet& rn,
                       double sigma_j_sq, int initial_state, long n_paths,
                       std::uint64_t seed) {
    if (n_paths < 1) throw ValidationError("price_call: n_paths must be >= 1");
    regimes.validate();
    const int n = regimes.size();
    if (initial_state < 0 || initial_state >= n)
        throw ValidationError("price_call: initial state out of range");

    if (n == 1 || rate.is_zero()) {
        const auto occ = frozen_occupation(n, initial_state, t);
        const auto q = regime_quantities(occ, regimes, rn);
        const int cap = series_cap(q.lambda_bar_star * t);
        return {merton_conditional_price(s, k, t, q, sigma_j_sq, cap), 0.0, 1, cap};
    }

    double max_lambda_t = 0.0;
    for (const auto& st : rn.states)
        max_lambda_t = std::max(max_lambda_t, (1.0 + st.k_star) * st.lambda_star * t);
    const int cap = series_cap(max_lambda_t);

    std::vector<double> prices(static_cast<std::size_t>(n_paths));
    parallel_for(prices.size(), [&](std::size_t i) {
        const auto path = simulate_chain_path(rate, initial_state, t,
                                              seed + static_cast<std::uint64_t>(i));
        const auto q = regime_quantities(occupation_times(path), regimes, rn);
        prices[i] = merton_conditional_price(s, k, t, q, sigma_j_sq, cap);
    });

    const auto [mean, se] = reduce(prices);
    return {mean, se, n_paths, cap};
}

std::vector<CurveRow> price_curve(double s, const std::vector<double>& strikes,
                                  double t, const RegimeSet& regimes,
                                  const RateMatrix& rate,
                                  const RiskNeutralRegimeSet& rn,
                                  double sigma_j_sq, int initial_state,
                                  long n_paths, std::uint64_t seed) {
    if (strikes.empty()) throw ValidationError("price_curve: empty strike grid");
    for (double k : strikes)
        if (!(k > 0.0)) throw ValidationError("price_curve: strikes must be > 0");
    regimes.validate();
    const int n = regimes.size();
    const auto rn0 = no_jump_counterpart(n);

    // One shared set of occupation draws for every strike and both variants.
    std::vector<OccupationTimes> occs;
    const bool frozen = (n == 1 || rate.is_zero());
    if (frozen) {
        occs.push_back(frozen_occupation(n, initial_state, t));
    } else {
        occs.reserve(static_cast<std::size_t>(n_paths));
        for (long i = 0; i < n_paths; ++i)
            occs.push_back(occupation_times(simulate_chain_path(
                rate, initial_state, t, seed + static_cast<std::uint64_t>(i))));
    }

    double max_lambda_t = 0.0;
    for (const auto& st : rn.states)
        max_lambda_t = std::max(max_lambda_t, (1.0 + st.k_star) * st.lambda_star * t);
    const int cap = series_cap(max_lambda_t);

    std::vector<CurveRow> rows(strikes.size());
    for (std::size_t ki = 0; ki < strikes.size(); ++ki) {
        const double k = strikes[ki];
        std::vector<double> with_jumps(occs.size()), without(occs.size());
        parallel_for(occs.size(), [&](std::size_t i) {
            const auto qj = regime_quantities(occs[i], regimes, rn);
            const auto q0 = regime_quantities(occs[i], regimes, rn0);
            with_jumps[i] = merton_conditional_price(s, k, t, qj, sigma_j_sq, cap);
            without[i] = merton_conditional_price(s, k, t, q0, 0.0, 0);
        });
        const auto a = reduce(with_jumps);
        const auto b = reduce(without);
        rows[ki] = {s / k, a.mean, frozen ? 0.0 : a.std_error, b.mean,
                    frozen ? 0.0 : b.std_error};
    }
    return rows;
}

std::string curve_csv(const std::vector<CurveRow>& rows) {
    std::ostringstream out;
    out.precision(12);
    out << "s_over_k,price_jump,stderr_jump,price_nojump,stderr_nojump\n";
    for (const auto& r : rows)
        out << r.s_over_k << ',' << r.price_jump << ',' << r.stderr_jump << ','
            << r.price_nojump << ',' << r.stderr_nojump << '\n';
    return out.str();
}

}  // namespace fxmjd
