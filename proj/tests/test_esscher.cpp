#include <doctest.h>

#include <cmath>
#include <random>

#include "fxmjd/esscher.hpp"
#include "oracles.hpp"

using namespace fxmjd;

namespace {

RegimeSet one_state(double mu, double sigma, double lambda, double rd, double rf) {
    return {{{mu, sigma, lambda, rd, rf}}};
}

}  // namespace

TEST_CASE("risk_neutral_intensity against quadrature") {
    // lambda * E[Z^theta_j] for Z ~ Exp(2.5), theta_j = 0.5:
    // Gamma(1.5)/2.5^0.5 = 0.56049912...
    const auto spec = JumpSpec::exponential(2.5);
    CHECK(risk_neutral_intensity(1.0, 0.5, spec) ==
          doctest::Approx(0.5604991216397929).epsilon(1e-12));
    const double ref = oracles::exp_moment_quadrature(2.5, 0.5);
    CHECK(risk_neutral_intensity(3.0, 0.5, spec) ==
          doctest::Approx(3.0 * ref).epsilon(1e-8));
}

TEST_CASE("mean_jump_size closed cases") {
    // theta_j = 0 leaves the law untilted: k* = E[Z] - 1 = 1/theta - 1.
    CHECK(mean_jump_size(0.0, JumpSpec::exponential(1.0)) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK(mean_jump_size(0.0, JumpSpec::exponential(2.0)) ==
          doctest::Approx(-0.5).epsilon(1e-14));
    // (theta_j+1)/theta - 1 = 1.75/3.5 - 1 = -0.5
    CHECK(mean_jump_size(0.75, JumpSpec::exponential(3.5)) ==
          doctest::Approx(-0.5).epsilon(1e-14));
    // matches the moment-ratio definition computed via quadrature
    const double num = oracles::exp_moment_quadrature(3.5, 1.75);
    const double den = oracles::exp_moment_quadrature(3.5, 0.75);
    CHECK(mean_jump_size(0.75, JumpSpec::exponential(3.5)) ==
          doctest::Approx(num / den - 1.0).epsilon(1e-8));
    // point mass at z: k* = z - 1 regardless of the tilt
    CHECK(mean_jump_size(2.0, JumpSpec::point_mass(1.3)) ==
          doctest::Approx(0.3).epsilon(1e-13));
}

TEST_CASE("martingale_residual trivial cases") {
    const auto spec = JumpSpec::exponential(1.0);
    // no jumps, theta_c = 0: residual = rf - rd + mu
    const auto r = one_state(0.07, 0.2, 0.0, 0.03, 0.01);
    EsscherParams p{{0.0}, {0.0}, 0.0};
    CHECK(martingale_residual(r, p, spec, 0) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK_THROWS_AS(martingale_residual(r, p, spec, 1), ValidationError);

    // theta = 1, theta_j = 0: M(1)-M(0) = 0, so jumps add nothing
    const auto rj = one_state(0.07, 0.2, 2.0, 0.03, 0.01);
    CHECK(martingale_residual(rj, p, spec, 0) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("solve_esscher: K0 = 0 with theta = 1 gives theta_j near 0") {
    const auto spec = JumpSpec::exponential(1.0);
    const auto r = one_state(0.05, 0.2, 1.0, 0.03, 0.01);
    const auto p = solve_esscher(r, spec, 0.0);
    // g(t) = M(t+1) - M(t) = M(t)((t+1)/1 - 1) = t*M(t); root at t = 0
    CHECK(std::abs(p.theta_j[0]) < 1e-9);
    CHECK(p.theta_c[0] == doctest::Approx((0.03 - 0.01 - 0.05) / 0.04).epsilon(1e-14));
}

TEST_CASE("solve_esscher re-substitution: residual vanishes, k*lambda* = K0") {
    const auto spec = JumpSpec::exponential(2.5);
    const auto r = one_state(-0.02, 0.15, 4.0, 0.03, 0.01);
    const double k0 = 0.2;
    const auto p = solve_esscher(r, spec, k0);
    CHECK(std::abs(martingale_residual(r, p, spec, 0)) <= 1e-12);

    const auto rn = to_risk_neutral(r, p, spec);
    CHECK(rn.states[0].k_star * rn.states[0].lambda_star ==
          doctest::Approx(k0).epsilon(1e-11));
}

TEST_CASE("solve_esscher on random feasible regime sets") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> mu_u(-0.1, 0.1);
    std::uniform_real_distribution<double> sig_u(0.05, 0.5);
    std::uniform_real_distribution<double> lam_u(0.1, 5.0);
    std::uniform_real_distribution<double> th_u(0.5, 8.0);
    std::uniform_real_distribution<double> k0_u(-0.3, 0.3);
    std::uniform_int_distribution<int> n_u(1, 4);
    for (int trial = 0; trial < 60; ++trial) {
        RegimeSet r;
        const int n = n_u(rng);
        for (int i = 0; i < n; ++i)
            r.states.push_back({mu_u(rng), sig_u(rng), lam_u(rng), 0.03, 0.01});
        const auto spec = JumpSpec::exponential(th_u(rng));
        const double k0 = k0_u(rng);

        EsscherParams p;
        try {
            p = solve_esscher(r, spec, k0);
        } catch (const CalibrationError&) {
            continue;  // genuinely unattainable K0/lambda for this draw
        }
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(martingale_residual(r, p, spec, i)) <= 1e-10);
        const auto rn = to_risk_neutral(r, p, spec);
        for (int i = 0; i < n; ++i)
            CHECK(rn.states[i].k_star * rn.states[i].lambda_star ==
                  doctest::Approx(k0).epsilon(1e-9));
    }
}

TEST_CASE("infeasible calibrations raise CalibrationError") {
    // lambda = 0 cannot support a nonzero jump compensator
    CHECK_THROWS_AS(solve_esscher(one_state(0.0, 0.2, 0.0, 0.03, 0.01),
                                  JumpSpec::exponential(1.0), 0.1),
                    CalibrationError);
    // point mass at 1: g(t) == 0 for every tilt
    CHECK_THROWS_AS(solve_esscher(one_state(0.0, 0.2, 1.0, 0.03, 0.01),
                                  JumpSpec::point_mass(1.0), 0.05),
                    CalibrationError);
    // point mass at 2: g(t) = 2^t > 0, so a negative target is unreachable
    CHECK_THROWS_AS(solve_esscher(one_state(0.0, 0.2, 1.0, 0.03, 0.01),
                                  JumpSpec::point_mass(2.0), -1.0),
                    CalibrationError);
    // lambda = 0 with K0 = 0 is fine and pins theta_j = 0
    const auto p = solve_esscher(one_state(0.0, 0.2, 0.0, 0.03, 0.01),
                                 JumpSpec::exponential(1.0), 0.0);
    CHECK(p.theta_j[0] == 0.0);
}

TEST_CASE("to_risk_neutral: tilt bookkeeping and residual guard") {
    const auto spec = JumpSpec::exponential(5.0);
    const auto r = one_state(0.05, 0.2, 1.0, 0.03, 0.01);
    const auto p = solve_esscher(r, spec, 0.0);
    const auto rn = to_risk_neutral(r, p, spec);

    // K0 = 0 with Exp(theta): theta_j = theta - 1, tilted rate theta/(theta_j+1) = 1
    CHECK(p.theta_j[0] == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(rn.states[0].tilted.rate() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rn.states[0].k_star == doctest::Approx(0.0).epsilon(1e-9));
    // lambda* = lambda * Gamma(theta)/theta^(theta-1) = 24/625 for theta = 5
    CHECK(rn.states[0].lambda_star == doctest::Approx(24.0 / 625.0).epsilon(1e-9));

    EsscherParams bad = p;
    bad.theta_c[0] += 1.0;  // breaks the martingale condition
    CHECK_THROWS_AS(to_risk_neutral(r, bad, spec), ValidationError);

    EsscherParams short_params{{0.0}, {}, 0.0};
    CHECK_THROWS_AS(to_risk_neutral(r, short_params, spec), ValidationError);
}

TEST_CASE("series_jump_variance weighting") {
    RiskNeutralRegimeSet rn;
    rn.states.push_back({2.0, 0.0, JumpSpec::exponential(1.0)});   // var 1
    rn.states.push_back({1.0, 0.0, JumpSpec::exponential(2.0)});   // var 0.25
    CHECK(rn.series_jump_variance() ==
          doctest::Approx((2.0 * 1.0 + 1.0 * 0.25) / 3.0).epsilon(1e-14));

    RiskNeutralRegimeSet quiet;
    quiet.states.push_back({0.0, 0.0, JumpSpec::exponential(1.0)});
    quiet.states.push_back({0.0, 0.0, JumpSpec::exponential(2.0)});
    CHECK(quiet.series_jump_variance() == doctest::Approx(0.625).epsilon(1e-14));
}

TEST_CASE("calibration_report carries the calibrated numbers") {
    const auto spec = JumpSpec::exponential(5.0);
    const auto r = one_state(0.05, 0.2, 1.0, 0.03, 0.01);
    const auto p = solve_esscher(r, spec, 0.0);
    const auto rn = to_risk_neutral(r, p, spec);
    const auto report = calibration_report(r, p, spec, rn);
    CHECK(report.find("k0 0") != std::string::npos);
    CHECK(report.find("theta_c") != std::string::npos);
    CHECK(report.find("lambda_star") != std::string::npos);
    CHECK(report.find("tilted_rate") != std::string::npos);
    CHECK(report.find("residual") != std::string::npos);
}
