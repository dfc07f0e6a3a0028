#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fxmjd/config.hpp"
#include "fxmjd/esscher.hpp"
#include "fxmjd/estimator.hpp"
#include "fxmjd/pricing.hpp"
#include "fxmjd/simulation.hpp"

namespace fs = std::filesystem;
using namespace fxmjd;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitCalibration = 3;
constexpr int kExitVerification = 4;

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << content;
}

std::string trim_num(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    long paths = 0;
    bool seed_set = false;
    bool paths_set = false;

    RunConfig load() const {
        RunConfig cfg = load_config(config_path);
        if (seed_set) cfg.seed = seed;
        if (paths_set) cfg.n_paths = paths;
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON run configuration")->required();
    cmd->add_option("--seed", opts.seed, "override mc.seed")
        ->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--paths", opts.paths, "override mc.paths")
        ->each([&](const std::string&) { opts.paths_set = true; });
    cmd->add_option("--out", opts.out_dir, "output directory");
}

int cmd_estimate(const std::string& input, const EstimatorParams& params,
                 double dt, const std::string& out_dir) {
    const auto opens = read_price_file(input);
    const auto result = estimate_transition_matrix(opens, params, dt);
    write_file(fs::path(out_dir) / "transition_matrix.csv",
               transition_matrix_csv(result.matrix));
    write_file(fs::path(out_dir) / "transition_counts.csv",
               counts_csv(result.counts, params));
    std::cout << transition_matrix_csv(result.matrix);
    return 0;
}

int cmd_calibrate(const CommonOpts& opts) {
    const RunConfig cfg = opts.load();
    const JumpSpec spec = cfg.jump_spec();
    const EsscherParams params = solve_esscher(cfg.regimes, spec, cfg.k0);
    const auto rn = to_risk_neutral(cfg.regimes, params, spec);
    const std::string report = calibration_report(cfg.regimes, params, spec, rn);
    std::cout << report;
    write_file(fs::path(opts.out_dir) / "calibration.txt", report);
    return 0;
}

int cmd_price(const CommonOpts& opts) {
    const RunConfig cfg = opts.load();
    if (cfg.strikes.empty() || cfg.maturities.empty())
        throw ValidationError("price: config needs pricing.strikes and pricing.maturities");
    const JumpSpec spec = cfg.jump_spec();
    const EsscherParams params = solve_esscher(cfg.regimes, spec, cfg.k0);
    const auto rn = to_risk_neutral(cfg.regimes, params, spec);
    const double sjv = rn.series_jump_variance();

    std::ostringstream out;
    out.precision(12);
    out << "maturity,strike,s_over_k,price,std_error,n_paths\n";
    for (double t : cfg.maturities) {
        for (double k : cfg.strikes) {
            const auto r = price_call(cfg.s0, k, t, cfg.regimes, cfg.rate, rn, sjv,
                                      cfg.initial_state, cfg.n_paths, cfg.seed);
            out << t << ',' << k << ',' << cfg.s0 / k << ',' << r.price << ','
                << r.std_error << ',' << r.n_paths << '\n';
        }
    }
    std::cout << out.str();
    write_file(fs::path(opts.out_dir) / "prices.csv", out.str());
    return 0;
}

int cmd_curve(const CommonOpts& opts) {
    const RunConfig cfg = opts.load();
    const auto grid = cfg.curve_s_over_k;
    if (grid.empty()) throw ValidationError("curve: config needs curve.s_over_k");
    auto thetas = cfg.curve_thetas;
    if (thetas.empty()) thetas = {cfg.jump_theta};
    auto maturities = cfg.curve_maturities;
    if (maturities.empty()) maturities = cfg.maturities;
    if (maturities.empty()) throw ValidationError("curve: no maturities configured");

    std::vector<double> strikes;
    strikes.reserve(grid.size());
    for (double m : grid) {
        if (!(m > 0.0)) throw ValidationError("curve: s_over_k values must be > 0");
        strikes.push_back(cfg.s0 / m);
    }

    for (double theta : thetas) {
        const JumpSpec spec = cfg.jump_spec_with(theta);
        const EsscherParams params = solve_esscher(cfg.regimes, spec, cfg.k0);
        const auto rn = to_risk_neutral(cfg.regimes, params, spec);
        const double sjv = rn.series_jump_variance();
        for (double t : maturities) {
            const auto rows = price_curve(cfg.s0, strikes, t, cfg.regimes, cfg.rate,
                                          rn, sjv, cfg.initial_state, cfg.n_paths,
                                          cfg.seed);
            const std::string name =
                "curve_T" + trim_num(t) + "_theta" + trim_num(theta) + ".csv";
            write_file(fs::path(opts.out_dir) / name, curve_csv(rows));
            std::cout << "wrote " << (fs::path(opts.out_dir) / name).string() << '\n';
        }
    }
    return 0;
}

int cmd_simulate(const CommonOpts& opts, const std::string& measure_name) {
    const RunConfig cfg = opts.load();
    const double t = cfg.maturities.empty() ? 1.0 : cfg.maturities.front();
    const JumpSpec spec = cfg.jump_spec();
    const MeasureTag measure = measure_name == "physical" ? MeasureTag::physical
                                                          : MeasureTag::risk_neutral;

    RiskNeutralRegimeSet rn;
    if (measure == MeasureTag::risk_neutral) {
        const EsscherParams params = cfg.esscher_override
                                         ? *cfg.esscher_override
                                         : solve_esscher(cfg.regimes, spec, cfg.k0);
        rn = to_risk_neutral(cfg.regimes, params, spec);
    }

    double sum_lr = 0.0, sum_lr2 = 0.0, sum_jumps = 0.0, sum_sd = 0.0;
    for (long i = 0; i < cfg.n_paths; ++i) {
        const auto p = simulate_spot_path(cfg.regimes, cfg.rate, spec, cfg.s0, t,
                                          measure, measure == MeasureTag::risk_neutral
                                                       ? &rn
                                                       : nullptr,
                                          cfg.initial_state,
                                          cfg.seed + static_cast<std::uint64_t>(i));
        const double lr = p.log_spot.back() - p.log_spot.front();
        sum_lr += lr;
        sum_lr2 += lr * lr;
        sum_jumps += static_cast<double>(p.jump_count);
        double disc = 0.0;
        for (const auto& seg : p.chain.segments)
            disc += (cfg.regimes.states[seg.state].rd -
                     cfg.regimes.states[seg.state].rf) *
                    seg.duration;
        sum_sd += std::exp(-disc) * cfg.s0 * std::exp(lr);
    }
    const double n = static_cast<double>(cfg.n_paths);
    std::cout.precision(10);
    std::cout << "measure " << measure_name << "\nhorizon " << t << "\npaths "
              << cfg.n_paths << '\n';
    std::cout << "mean_log_return " << sum_lr / n << '\n';
    std::cout << "var_log_return " << (sum_lr2 - sum_lr * sum_lr / n) / (n - 1.0)
              << '\n';
    std::cout << "mean_jump_count " << sum_jumps / n << '\n';
    std::cout << "mean_discounted_spot_over_s0 " << sum_sd / n / cfg.s0 << '\n';
    return 0;
}

struct CheckLine {
    std::string name;
    double estimate;
    double std_error;
    double z;
    bool pass;
};

void print_check(const CheckLine& c) {
    std::cout.precision(10);
    std::cout << c.name << ".estimate " << c.estimate << '\n'
              << c.name << ".std_error " << c.std_error << '\n'
              << c.name << ".z " << c.z << '\n'
              << c.name << ".result " << (c.pass ? "pass" : "FAIL") << '\n';
}

int cmd_check(const CommonOpts& opts) {
    const RunConfig cfg = opts.load();
    const double t = cfg.maturities.empty() ? 1.0 : cfg.maturities.front();
    const double k = cfg.strikes.empty() ? cfg.s0 : cfg.strikes.front();
    const JumpSpec spec = cfg.jump_spec();
    const EsscherParams params = cfg.esscher_override
                                     ? *cfg.esscher_override
                                     : solve_esscher(cfg.regimes, spec, cfg.k0);
    bool all_pass = true;
    auto run = [&](CheckLine c) {
        print_check(c);
        all_pass = all_pass && c.pass;
    };

    {  // E[L_T] = 1 along physical paths
        const auto e = check_esscher_density(cfg.regimes, cfg.rate, spec, params, t,
                                             cfg.n_paths, cfg.seed);
        const double z = std::abs(e.mean - 1.0) / std::max(e.std_error, 1e-300);
        run({"density_martingale", e.mean, e.std_error, z, z <= 3.0});
    }
    {  // E_P[L_T S_T^d] = s0 (Bayes form of the Q-martingale property)
        const auto e = mc_reweighted_spot(cfg.regimes, cfg.rate, spec, params, cfg.s0,
                                          t, cfg.initial_state, cfg.n_paths,
                                          cfg.seed + 1);
        const double z = std::abs(e.mean - cfg.s0) / std::max(e.std_error, 1e-300);
        run({"discounted_spot_martingale", e.mean / cfg.s0, e.std_error / cfg.s0, z,
             z <= 3.0});
    }
    {  // occupation-time MGF vs matrix exponential
        const int n = cfg.regimes.size();
        Eigen::VectorXd u(n);
        for (int i = 0; i < n; ++i)
            u(i) = (i % 2 == 0 ? 0.3 : -0.2) / static_cast<double>(i + 1);
        Eigen::VectorXd p0 = Eigen::VectorXd::Zero(n);
        p0(cfg.initial_state) = 1.0;
        const double analytic = occupation_mgf(cfg.rate, u, t, p0);
        double sum = 0.0, sum2 = 0.0;
        for (long i = 0; i < cfg.n_paths; ++i) {
            const auto occ = occupation_times(simulate_chain_path(
                cfg.rate, cfg.initial_state, t, cfg.seed + 2 + static_cast<std::uint64_t>(i)));
            const double v = std::exp(u.dot(occ.j));
            sum += v;
            sum2 += v * v;
        }
        const double nn = static_cast<double>(cfg.n_paths);
        const double mean = sum / nn;
        const double se = std::sqrt((sum2 - sum * sum / nn) / (nn - 1.0) / nn);
        const double z = std::abs(mean - analytic) / std::max(se, 1e-300);
        run({"occupation_mgf", mean, se, z, z <= 3.0});
    }
    {  // series pricer vs raw payoff MC
        CheckLine c{"dual_pricer", 0.0, 0.0, 0.0, false};
        try {
            const auto rn = to_risk_neutral(cfg.regimes, params, spec);
            const double sjv = rn.series_jump_variance();
            const auto series = price_call(cfg.s0, k, t, cfg.regimes, cfg.rate, rn,
                                           sjv, cfg.initial_state, cfg.n_paths,
                                           cfg.seed + 3);
            const auto mc = mc_price_call(cfg.s0, k, t, cfg.regimes, cfg.rate, rn,
                                          cfg.initial_state,
                                          std::max<long>(100, cfg.n_paths),
                                          cfg.seed + 4);
            const double comb = std::sqrt(series.std_error * series.std_error +
                                          mc.std_error * mc.std_error);
            c.estimate = series.price - mc.price;
            c.std_error = comb;
            c.z = std::abs(series.price - mc.price) / std::max(comb, 1e-300);
            c.pass = c.z <= 3.0;
        } catch (const std::exception& e) {
            std::cout << "dual_pricer.error " << e.what() << '\n';
        }
        run(c);
    }

    std::cout << "verification " << (all_pass ? "pass" : "FAIL") << '\n';
    return all_pass ? 0 : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regime-switching Merton jump-diffusion FX option pricer"};
    app.require_subcommand(1);

    // estimate
    auto* est = app.add_subcommand("estimate",
                                   "estimate a 3-state transition matrix from open prices");
    std::string est_input, est_out = ".";
    EstimatorParams est_params;
    double est_dt = 1.0 / 252.0;
    est->add_option("--input", est_input, "single-column open price file")->required();
    est->add_option("--out", est_out, "output directory");
    est->add_option("--candles-back-up", est_params.candles_back_up);
    est->add_option("--candles-back-down", est_params.candles_back_down);
    est->add_option("--delta-back-up", est_params.delta_back_up);
    est->add_option("--delta-back-down", est_params.delta_back_down);
    est->add_option("--candles-up", est_params.candles_up);
    est->add_option("--candles-down", est_params.candles_down);
    est->add_option("--delta-up", est_params.delta_up);
    est->add_option("--delta-down", est_params.delta_down);
    est->add_option("--dt", est_dt, "bar step in years for generator recovery");

    CommonOpts cal_opts, price_opts, curve_opts, sim_opts, check_opts;
    auto* cal = app.add_subcommand("calibrate", "solve the Esscher transform parameters");
    add_common(cal, cal_opts);
    auto* price = app.add_subcommand("price", "price calls on the configured grid");
    add_common(price, price_opts);
    auto* curve = app.add_subcommand("curve", "price vs S/K curves, with and without jumps");
    add_common(curve, curve_opts);
    auto* sim = app.add_subcommand("simulate", "simulate spot paths and report moments");
    std::string sim_measure = "risk_neutral";
    add_common(sim, sim_opts);
    sim->add_option("--measure", sim_measure)
        ->check(CLI::IsMember({"physical", "risk_neutral"}));
    auto* check = app.add_subcommand("check", "run the martingale/MGF/dual-pricer checks");
    add_common(check, check_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (est->parsed()) return cmd_estimate(est_input, est_params, est_dt, est_out);
        if (cal->parsed()) return cmd_calibrate(cal_opts);
        if (price->parsed()) return cmd_price(price_opts);
        if (curve->parsed()) return cmd_curve(curve_opts);
        if (sim->parsed()) return cmd_simulate(sim_opts, sim_measure);
        if (check->parsed()) return cmd_check(check_opts);
    } catch (const CalibrationError& e) {
        std::cerr << "calibration error: " << e.what() << '\n';
        return kExitCalibration;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
