#pragma once

#include <cmath>

namespace agc {

/// First-order lag 1/(T s + 1) discretized by exact zero-order hold.
/// A time constant <= 0 makes the block a pass-through.
class FirstOrderLag {
public:
    FirstOrderLag() = default;
    FirstOrderLag(double tau_s, double dt_s)
        : alpha_(tau_s > 0.0 ? std::exp(-dt_s / tau_s) : 0.0) {}

    double step(double state, double input) const { return alpha_ * state + (1.0 - alpha_) * input; }
    double alpha() const { return alpha_; }

private:
    double alpha_ = 0.0;
};

inline double clamp_abs(double x, double limit) {
    return x > limit ? limit : (x < -limit ? -limit : x);
}

}  // namespace agc
