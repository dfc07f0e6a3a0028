#include "fxmjd/simulation.hpp"

#include <cmath>
#include <random>

#include "fxmjd/parallel.hpp"

namespace fxmjd {

namespace {

double draw_log_jump(const JumpSpec& spec, std::mt19937_64& rng) {
    if (spec.kind() == JumpSpec::Kind::Exponential)
        return std::log(std::exponential_distribution<double>(spec.rate())(rng));
    return std::log(spec.value());
}

struct PathSample {
    double log_return;   // log(S_T / s0)
    double discount_log; // integral of (rd - rf) over the path
    double log_density;  // log L_T (0 unless density tracking requested)
    long jumps;
};

// Walks a realized chain path, drawing one Brownian increment and a Poisson
// jump batch per sojourn. Draw order per segment is fixed (normal, count,
// jump amplitudes) so results are a pure function of the seed.
template <typename SegmentHook>
PathSample run_spot_path(const RegimeSet& regimes, const ChainPath& chain,
                         MeasureTag measure, const JumpSpec& spec,
                         const RiskNeutralRegimeSet* rn,
                         const EsscherParams* density_params,
                         std::mt19937_64& rng, SegmentHook&& hook) {
    PathSample out{0.0, 0.0, 0.0, 0};
    std::normal_distribution<double> normal(0.0, 1.0);

    for (const auto& seg : chain.segments) {
        const auto& st = regimes.states[seg.state];
        const double tau = seg.duration;

        double drift, intensity;
        const JumpSpec* law;
        if (measure == MeasureTag::physical) {
            drift = st.mu;
            intensity = st.lambda;
            law = &spec;
        } else {
            const auto& r = rn->states[seg.state];
            drift = st.rd - st.rf - r.lambda_star * r.k_star;
            intensity = r.lambda_star;
            law = &r.tilted;
        }

        const double z = normal(rng);
        const double diffusion = st.sigma * std::sqrt(tau) * z;
        double d_log = (drift - 0.5 * st.sigma * st.sigma) * tau + diffusion;

        long m = 0;
        double jump_log_sum = 0.0;
        if (intensity > 0.0) {
            m = std::poisson_distribution<long>(intensity * tau)(rng);
            for (long j = 0; j < m; ++j) jump_log_sum += draw_log_jump(*law, rng);
        }
        d_log += jump_log_sum;

        out.log_return += d_log;
        out.discount_log += (st.rd - st.rf) * tau;
        out.jumps += m;

        if (density_params) {
            const double tc = density_params->theta_c[seg.state];
            const double tj = density_params->theta_j[seg.state];
            out.log_density += tc * diffusion - 0.5 * tc * tc * st.sigma * st.sigma * tau;
            out.log_density += tj * jump_log_sum;
            if (st.lambda > 0.0)
                out.log_density -= st.lambda * (spec.moment(tj) - 1.0) * tau;
        }
        hook(seg, d_log);
    }
    return out;
}

void no_hook(const ChainPath::Segment&, double) {}

struct Reduced {
    double mean;
    double std_error;
};

Reduced reduce(const std::vector<double>& v) {
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

SpotPath simulate_spot_path(const RegimeSet& regimes, const RateMatrix& rate,
                            const JumpSpec& spec, double s0, double horizon,
                            MeasureTag measure, const RiskNeutralRegimeSet* rn,
                            int initial_state, std::uint64_t seed) {
    regimes.validate();
    if (!(s0 > 0.0)) throw ValidationError("simulate_spot_path: s0 must be > 0");
    if (!(horizon > 0.0)) throw ValidationError("simulate_spot_path: horizon must be > 0");
    if (measure == MeasureTag::risk_neutral && rn == nullptr)
        throw ValidationError("simulate_spot_path: risk-neutral measure needs a RiskNeutralRegimeSet");

    std::mt19937_64 rng(seed);
    SpotPath path;
    path.chain = simulate_chain_path(rate, initial_state, horizon, seed ^ 0x9e3779b97f4a7c15ULL);
    path.times.push_back(0.0);
    path.log_spot.push_back(std::log(s0));

    double t = 0.0;
    double ls = std::log(s0);
    const auto sample = run_spot_path(regimes, path.chain, measure, spec, rn, nullptr,
                                      rng, [&](const ChainPath::Segment& seg, double d_log) {
                                          t += seg.duration;
                                          ls += d_log;
                                          path.times.push_back(t);
                                          path.log_spot.push_back(ls);
                                      });
    path.jump_count = sample.jumps;
    return path;
}

PriceResult mc_price_call(double s0, double k, double t, const RegimeSet& regimes,
                          const RateMatrix& rate, const RiskNeutralRegimeSet& rn,
                          int initial_state, long n_paths, std::uint64_t seed) {
    regimes.validate();
    if (n_paths < 100) throw ValidationError("mc_price_call: n_paths must be >= 100");
    if (!(s0 > 0.0) || !(k > 0.0) || !(t > 0.0))
        throw ValidationError("mc_price_call: s0, k, t must be > 0");

    const JumpSpec dummy = JumpSpec::point_mass(1.0);  // physical spec unused under Q
    std::vector<double> payoffs(static_cast<std::size_t>(n_paths));
    parallel_for(payoffs.size(), [&](std::size_t i) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
        const auto chain =
            simulate_chain_path(rate, initial_state, t, (seed + i) ^ 0x9e3779b97f4a7c15ULL);
        const auto s = run_spot_path(regimes, chain, MeasureTag::risk_neutral, dummy,
                                     &rn, nullptr, rng, no_hook);
        const double st = s0 * std::exp(s.log_return);
        payoffs[i] = std::exp(-s.discount_log) * std::max(st - k, 0.0);
    });
    const auto [mean, se] = reduce(payoffs);
    return {mean, se, n_paths, 0};
}

Estimate check_esscher_density(const RegimeSet& regimes, const RateMatrix& rate,
                               const JumpSpec& spec, const EsscherParams& params,
                               double horizon, long n_paths, std::uint64_t seed) {
    regimes.validate();
    if (n_paths < 2) throw ValidationError("check_esscher_density: n_paths must be >= 2");
    std::vector<double> densities(static_cast<std::size_t>(n_paths));
    parallel_for(densities.size(), [&](std::size_t i) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
        const auto chain =
            simulate_chain_path(rate, 0, horizon, (seed + i) ^ 0x9e3779b97f4a7c15ULL);
        const auto s = run_spot_path(regimes, chain, MeasureTag::physical, spec,
                                     nullptr, &params, rng, no_hook);
        densities[i] = std::exp(s.log_density);
    });
    const auto [mean, se] = reduce(densities);
    return {mean, se, n_paths};
}

Estimate mc_discounted_spot(const RegimeSet& regimes, const RateMatrix& rate,
                            const RiskNeutralRegimeSet& rn, double s0,
                            double horizon, int initial_state, long n_paths,
                            std::uint64_t seed) {
    regimes.validate();
    if (n_paths < 2) throw ValidationError("mc_discounted_spot: n_paths must be >= 2");
    const JumpSpec dummy = JumpSpec::point_mass(1.0);
    std::vector<double> values(static_cast<std::size_t>(n_paths));
    parallel_for(values.size(), [&](std::size_t i) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
        const auto chain = simulate_chain_path(rate, initial_state, horizon,
                                               (seed + i) ^ 0x9e3779b97f4a7c15ULL);
        const auto s = run_spot_path(regimes, chain, MeasureTag::risk_neutral, dummy,
                                     &rn, nullptr, rng, no_hook);
        values[i] = std::exp(-s.discount_log) * s0 * std::exp(s.log_return);
    });
    const auto [mean, se] = reduce(values);
    return {mean, se, n_paths};
}

Estimate mc_reweighted_spot(const RegimeSet& regimes, const RateMatrix& rate,
                            const JumpSpec& spec, const EsscherParams& params,
                            double s0, double horizon, int initial_state,
                            long n_paths, std::uint64_t seed) {
    regimes.validate();
    if (n_paths < 2) throw ValidationError("mc_reweighted_spot: n_paths must be >= 2");
    std::vector<double> values(static_cast<std::size_t>(n_paths));
    parallel_for(values.size(), [&](std::size_t i) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
        const auto chain = simulate_chain_path(rate, initial_state, horizon,
                                               (seed + i) ^ 0x9e3779b97f4a7c15ULL);
        const auto s = run_spot_path(regimes, chain, MeasureTag::physical, spec,
                                     nullptr, &params, rng, no_hook);
        values[i] = std::exp(s.log_density) * std::exp(-s.discount_log) * s0 *
                    std::exp(s.log_return);
    });
    const auto [mean, se] = reduce(values);
    return {mean, se, n_paths};
}

Estimate mc_reweighted_price(const RegimeSet& regimes, const RateMatrix& rate,
                             const JumpSpec& spec, const EsscherParams& params,
                             double s0, double k, double t, int initial_state,
                             long n_paths, std::uint64_t seed) {
    regimes.validate();
    if (n_paths < 2) throw ValidationError("mc_reweighted_price: n_paths must be >= 2");
    std::vector<double> values(static_cast<std::size_t>(n_paths));
    parallel_for(values.size(), [&](std::size_t i) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
        const auto chain = simulate_chain_path(rate, initial_state, t,
                                               (seed + i) ^ 0x9e3779b97f4a7c15ULL);
        const auto s = run_spot_path(regimes, chain, MeasureTag::physical, spec,
                                     nullptr, &params, rng, no_hook);
        const double st = s0 * std::exp(s.log_return);
        values[i] = std::exp(s.log_density) * std::exp(-s.discount_log) *
                    std::max(st - k, 0.0);
    });
    const auto [mean, se] = reduce(values);
    return {mean, se, n_paths};
}

}  // namespace fxmjd
