#include <doctest.h>

#include <cmath>
#include <random>

#include "fxmjd/matrix_exp.hpp"

using fxmjd::matrix_exp;

namespace {

// Plain Taylor series with enough terms; valid oracle for modest norms.
Eigen::MatrixXd taylor_exp(const Eigen::MatrixXd& a, int terms = 60) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    Eigen::MatrixXd term = sum;
    for (int k = 1; k <= terms; ++k) {
        term = term * a / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

}  // namespace

TEST_CASE("exp of zero matrix is identity") {
    const Eigen::MatrixXd z = Eigen::MatrixXd::Zero(4, 4);
    CHECK((matrix_exp(z) - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-14);
}

TEST_CASE("diagonal matrix exponentiates elementwise") {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
    d.diagonal() << 1.0, -2.5, 0.3;
    const auto e = matrix_exp(d);
    for (int i = 0; i < 3; ++i)
        CHECK(e(i, i) == doctest::Approx(std::exp(d(i, i))).epsilon(1e-14));
}

TEST_CASE("2x2 generator closed form") {
    const double a = 1.7, b = 0.4, t = 0.9;
    Eigen::MatrixXd q(2, 2);
    q << -a, a, b, -b;
    const auto e = matrix_exp(q * t);
    const double s = a + b;
    const double decay = std::exp(-s * t);
    CHECK(e(0, 0) == doctest::Approx((b + a * decay) / s).epsilon(1e-13));
    CHECK(e(0, 1) == doctest::Approx(a * (1.0 - decay) / s).epsilon(1e-13));
    CHECK(e(1, 0) == doctest::Approx(b * (1.0 - decay) / s).epsilon(1e-13));
    CHECK(e(1, 1) == doctest::Approx((a + b * decay) / s).epsilon(1e-13));
}

TEST_CASE("random small matrices match Taylor series") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(trial % 4);
        Eigen::MatrixXd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = u(rng);
        const auto e = matrix_exp(a);
        const auto ref = taylor_exp(a);
        CHECK((e - ref).norm() / ref.norm() < 1e-12);
    }
}

TEST_CASE("scaling path: large-norm generator satisfies semigroup identity") {
    Eigen::MatrixXd q(3, 3);
    q << -140.0, 100.0, 40.0, 90.0, -130.0, 40.0, 50.0, 60.0, -110.0;
    const auto whole = matrix_exp(q * 0.5);
    const auto half = matrix_exp(q * 0.25);
    CHECK((whole - half * half).norm() / whole.norm() < 1e-11);
    // rows of exp(Q t) are probabilities
    for (int i = 0; i < 3; ++i)
        CHECK(whole.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
}
