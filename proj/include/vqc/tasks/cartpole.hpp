// Copyright 2026 The vqc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>

#include "../error.hpp"

namespace vqc::tasks {

/// (position m, velocity m/s, pole angle rad, angular velocity rad/s)
using CartPoleState = std::array<double, 4>;

struct StepResult {
    CartPoleState state;
    double reward = 0.0;
    bool terminated = false;
};

/// Cart-pole balancing with explicit Euler integration.
class CartPoleEnv {
  public:
    static constexpr double kGravity = 9.8;
    static constexpr double kCartMass = 1.0;
    static constexpr double kPoleMass = 0.1;
    static constexpr double kHalfLength = 0.5;
    static constexpr double kForce = 10.0;
    static constexpr double kTau = 0.02;
    static constexpr double kAngleLimit = 12.0 * 2.0 * std::numbers::pi / 360.0;
    static constexpr double kPositionLimit = 2.4;
    static constexpr std::size_t kStepLimit = 500;

    /// Random start with every component uniform in [-0.05, 0.05].
    template <class Rng> CartPoleState reset(Rng &rng) {
        std::uniform_real_distribution<double> u(-0.05, 0.05);
        CartPoleState s{};
        for (auto &v : s) {
            v = u(rng);
        }
        set_state(s);
        return state_;
    }

    /// Places the system in `s` and re-evaluates termination.
    void set_state(const CartPoleState &s) {
        state_ = s;
        steps_ = 0;
        terminated_ = out_of_bounds();
    }

    [[nodiscard]] const CartPoleState &state() const noexcept { return state_; }
    [[nodiscard]] bool terminated() const noexcept { return terminated_; }
    [[nodiscard]] std::size_t steps() const noexcept { return steps_; }

    /// Action 1 pushes right, 0 pushes left.
    StepResult step(int action) {
        if (terminated_) {
            throw StateError("step called on a terminated episode");
        }
        if (action != 0 && action != 1) {
            detail::raise<ArgumentError>("cart-pole action ", action,
                                         " not in {0, 1}");
        }
        constexpr double total_mass = kCartMass + kPoleMass;
        constexpr double pole_mass_length = kPoleMass * kHalfLength;
        auto &[x, x_dot, theta, theta_dot] = state_;
        const double force = action == 1 ? kForce : -kForce;
        const double cos_t = std::cos(theta);
        const double sin_t = std::sin(theta);
        const double temp =
            (force + pole_mass_length * theta_dot * theta_dot * sin_t) /
            total_mass;
        const double theta_acc =
            (kGravity * sin_t - cos_t * temp) /
            (kHalfLength *
             (4.0 / 3.0 - kPoleMass * cos_t * cos_t / total_mass));
        const double x_acc =
            temp - pole_mass_length * theta_acc * cos_t / total_mass;

        x += kTau * x_dot;
        x_dot += kTau * x_acc;
        theta += kTau * theta_dot;
        theta_dot += kTau * theta_acc;

        ++steps_;
        terminated_ = out_of_bounds() || steps_ >= kStepLimit;
        return {state_, 1.0, terminated_};
    }

  private:
    [[nodiscard]] bool out_of_bounds() const noexcept {
        return std::abs(state_[0]) > kPositionLimit ||
               std::abs(state_[2]) > kAngleLimit;
    }

    CartPoleState state_{};
    std::size_t steps_ = 0;
    bool terminated_ = false;
};

} // namespace vqc::tasks
