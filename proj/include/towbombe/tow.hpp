#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "towbombe/rng.hpp"

namespace towbombe {

enum class Machine { A = 0, B = 1 };

inline Machine other(Machine k) { return k == Machine::A ? Machine::B : Machine::A; }

// Single-user two-machine tug-of-war state. The learning estimate of
// machine k is Q_k = plays_k - (1 + omega) * failures_k; a play adds +1
// to Q_k when rewarded and -omega when not.
struct TowState {
    std::array<std::int64_t, 2> plays{0, 0};
    std::array<std::int64_t, 2> failures{0, 0};
    double omega = 0.0;
};

// Additive fluctuation applied to the displacement before its sign is read.
struct Fluctuation {
    enum class Kind { None, Gaussian, Alternating };
    Kind kind = Kind::None;
    double param = 0.0;  // sigma for Gaussian, amplitude for Alternating

    static Fluctuation none() { return {}; }
    static Fluctuation gaussian(double sigma);
    static Fluctuation alternating(double amplitude);

    double sample(RandomStream& rng, std::int64_t t) const;
};

double q_estimate(const TowState& state, Machine k);

// Plays machine k once; the failure counter moves only on a miss.
TowState update(TowState state, Machine k, bool rewarded);

// Displacement of terminal A: Q_A - Q_B + delta (terminal B is its negation
// when delta is 0).
double displacement(const TowState& state, double delta);

// Machine whose terminal is high: A when the displacement is positive,
// B when negative, a fair coin at exactly zero.
Machine select(const TowState& state, const Fluctuation& fluct, RandomStream& rng, std::int64_t t);

// Nearly optimal weighting for a known probability sum gamma = P_A + P_B:
// omega0 = gamma / (2 - gamma). Requires gamma in [0, 2).
double omega0(double gamma);

// Multi-user variant: gamma' is the sum of the top M-th and (M+1)-th
// reward probabilities. Needs at least users+1 channels.
double omega0_multi(const std::vector<double>& probs, int users);

// Expected-reward estimate when gamma is known and both machines are
// scored on every play: plays_k - failures_k + (gamma-1)*plays_j + failures_j.
double q_prime(const TowState& state, double gamma, Machine k);

// q_prime rescaled by 1/(2 - gamma); its A-B difference matches the
// tug-of-war difference Q_A - Q_B exactly when omega = omega0(gamma).
double q_double_prime(const TowState& state, double gamma, Machine k);

}  // namespace towbombe
