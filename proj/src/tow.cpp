#include "towbombe/tow.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace towbombe {

Fluctuation Fluctuation::gaussian(double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("Fluctuation: sigma must be >= 0");
    return {Kind::Gaussian, sigma};
}

Fluctuation Fluctuation::alternating(double amplitude) {
    if (amplitude < 0.0) throw std::invalid_argument("Fluctuation: amplitude must be >= 0");
    return {Kind::Alternating, amplitude};
}

double Fluctuation::sample(RandomStream& rng, std::int64_t t) const {
    switch (kind) {
        case Kind::None:
            return 0.0;
        case Kind::Gaussian:
            if (param <= 0.0) return 0.0;
            return std::normal_distribution<double>(0.0, param)(rng);
        case Kind::Alternating:
            return (t % 2 == 0) ? param : -param;
    }
    return 0.0;
}

double q_estimate(const TowState& state, Machine k) {
    const auto i = static_cast<std::size_t>(k);
    return static_cast<double>(state.plays[i]) - (1.0 + state.omega) * static_cast<double>(state.failures[i]);
}

TowState update(TowState state, Machine k, bool rewarded) {
    const auto i = static_cast<std::size_t>(k);
    ++state.plays[i];
    if (!rewarded) ++state.failures[i];
    return state;
}

double displacement(const TowState& state, double delta) {
    return q_estimate(state, Machine::A) - q_estimate(state, Machine::B) + delta;
}

Machine select(const TowState& state, const Fluctuation& fluct, RandomStream& rng, std::int64_t t) {
    const double x = displacement(state, fluct.sample(rng, t));
    if (x > 0.0) return Machine::A;
    if (x < 0.0) return Machine::B;
    return std::bernoulli_distribution(0.5)(rng) ? Machine::A : Machine::B;
}

double omega0(double gamma) {
    if (!(gamma >= 0.0 && gamma < 2.0)) {
        throw std::domain_error("omega0: gamma must lie in [0, 2)");
    }
    return gamma / (2.0 - gamma);
}

double omega0_multi(const std::vector<double>& probs, int users) {
    if (users < 1) throw std::domain_error("omega0_multi: users must be >= 1");
    if (static_cast<int>(probs.size()) < users + 1) {
        throw std::domain_error("omega0_multi: needs at least users+1 channels");
    }
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::domain_error("omega0_multi: probability outside [0,1]");
        }
    }
    std::vector<double> sorted(probs);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const double gamma = sorted[users - 1] + sorted[users];
    return omega0(gamma);
}

double q_prime(const TowState& state, double gamma, Machine k) {
    const auto i = static_cast<std::size_t>(k);
    const auto j = static_cast<std::size_t>(other(k));
    return static_cast<double>(state.plays[i] - state.failures[i]) +
           (gamma - 1.0) * static_cast<double>(state.plays[j]) +
           static_cast<double>(state.failures[j]);
}

double q_double_prime(const TowState& state, double gamma, Machine k) {
    if (!(gamma < 2.0)) throw std::domain_error("q_double_prime: gamma must be < 2");
    return q_prime(state, gamma, k) / (2.0 - gamma);
}

}  // namespace towbombe
