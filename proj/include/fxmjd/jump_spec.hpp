#pragma once

#include <cmath>

#include "fxmjd/errors.hpp"

namespace fxmjd {

// Distribution of the multiplicative jump factor Z > 0.
//
// Supported kinds: exponential with rate theta (density theta*exp(-theta*x)
// on x >= 0) and a point mass at a fixed z > 0. The power-moment functional
// M(a) = E[Z^a] is the quantity everything downstream consumes.
class JumpSpec {
public:
    enum class Kind { Exponential, PointMass };

    static JumpSpec exponential(double rate) {
        if (!(rate > 0.0)) throw ValidationError("exponential jump rate must be > 0");
        return JumpSpec(Kind::Exponential, rate);
    }

    static JumpSpec point_mass(double z) {
        if (!(z > 0.0)) throw ValidationError("point-mass jump value must be > 0");
        return JumpSpec(Kind::PointMass, z);
    }

    Kind kind() const { return kind_; }

    double rate() const { return param_; }   // exponential kind
    double value() const { return param_; }  // point-mass kind

    // M(a) = E[Z^a]. Exponential: Gamma(a+1)/theta^a, defined for a > -1,
    // evaluated through lgamma so large a does not overflow.
    double moment(double a) const {
        if (kind_ == Kind::Exponential) {
            if (a <= -1.0)
                throw ValidationError("moment diverges: exponential M(a) needs a > -1");
            return std::exp(std::lgamma(a + 1.0) - a * std::log(param_));
        }
        return std::pow(param_, a);
    }

    double mean() const {
        return kind_ == Kind::Exponential ? 1.0 / param_ : param_;
    }

    // Var[Z]: 1/theta^2 for exponential, 0 for a point mass.
    double variance() const {
        return kind_ == Kind::Exponential ? 1.0 / (param_ * param_) : 0.0;
    }

    // Var[log Z]: pi^2/6 for exponential (rate-invariant), 0 for a point mass.
    double log_jump_variance() const {
        constexpr double pi_sq_over_6 = 1.6449340668482264;
        return kind_ == Kind::Exponential ? pi_sq_over_6 : 0.0;
    }

    // Esscher tilt x^t * nu(x) / M(t): exponential rate theta -> theta/(t+1)
    // (needs t > -1); a point mass is invariant under tilting.
    JumpSpec tilted(double t) const {
        if (kind_ == Kind::Exponential) {
            if (t <= -1.0) throw ValidationError("tilt parameter must be > -1");
            return exponential(param_ / (t + 1.0));
        }
        return *this;
    }

private:
    JumpSpec(Kind kind, double param) : kind_(kind), param_(param) {}

    Kind kind_;
    double param_;
};

}  // namespace fxmjd
