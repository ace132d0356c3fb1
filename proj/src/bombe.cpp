#include "towbombe/bombe.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace towbombe {

void BombeConfig::validate() const {
    if (users < 2) throw std::invalid_argument("BombeConfig: users must be >= 2");
    if (channels < 2) throw std::invalid_argument("BombeConfig: channels must be >= 2");
    if (omega < 0.0) throw std::invalid_argument("BombeConfig: omega must be >= 0");
    if (amplitude < 0.0) throw std::invalid_argument("BombeConfig: amplitude must be >= 0");
    if (period < 0 || period == 1) throw std::invalid_argument("BombeConfig: period must be 0 or >= 2");
}

BombeState init(const BombeConfig& config) {
    config.validate();
    BombeState state;
    state.q.assign(config.users, std::vector<double>(config.channels, 0.0));
    state.t = 0;
    return state;
}

double osc_value(double amplitude, int period, std::int64_t t, int channel) {
    if (amplitude == 0.0) return 0.0;
    const double phase = 2.0 * std::numbers::pi * (static_cast<double>(t % period) + channel) /
                         static_cast<double>(period);
    return amplitude * std::sin(phase);
}

double osc(const BombeConfig& config, std::int64_t t, int channel) {
    if (channel < 0 || channel >= config.channels) {
        throw std::out_of_range("osc: channel index out of range");
    }
    return osc_value(config.amplitude, config.effective_period(), t, channel);
}

std::vector<double> height_row(const std::vector<double>& q_row) {
    const int n = static_cast<int>(q_row.size());
    double sum = 0.0;
    for (double q : q_row) sum += q;
    std::vector<double> x(n);
    for (int k = 0; k < n; ++k) {
        x[k] = q_row[k] - (sum - q_row[k]) / static_cast<double>(n - 1);
    }
    return x;
}

std::vector<std::vector<double>> heights(const BombeConfig& config, const BombeState& state) {
    if (static_cast<int>(state.q.size()) != config.users) {
        throw std::invalid_argument("heights: state does not match config");
    }
    std::vector<std::vector<double>> x(config.users);
    for (int i = 0; i < config.users; ++i) {
        if (static_cast<int>(state.q[i].size()) != config.channels) {
            throw std::invalid_argument("heights: state does not match config");
        }
        x[i] = height_row(state.q[i]);
    }
    return x;
}

JointAction select_all(const BombeConfig& config, const BombeState& state, RandomStream& rng) {
    const int period = config.effective_period();
    JointAction action(config.users);
    std::vector<double> level(config.channels);
    for (int i = 0; i < config.users; ++i) {
        level = height_row(state.q[i]);
        for (int k = 0; k < config.channels; ++k) {
            level[k] += osc_value(config.amplitude, period, state.t, k);
        }
        action[i] = argmax_tiebreak(level, rng);
    }
    return action;
}

void apply_results(const BombeConfig& config, BombeState& state, const JointAction& action,
                   const std::vector<bool>& rewarded) {
    if (static_cast<int>(action.size()) != config.users ||
        static_cast<int>(rewarded.size()) != config.users) {
        throw std::invalid_argument("apply_results: action/rewarded must have one entry per user");
    }
    for (int c : action) {
        if (c < 0 || c >= config.channels) {
            throw std::out_of_range("apply_results: channel index out of range");
        }
    }

    // dq[i] lands on action[i] only; column sums of dq drive the reaction.
    std::vector<double> dq(config.users);
    std::vector<double> col_sum(config.channels, 0.0);
    for (int i = 0; i < config.users; ++i) {
        dq[i] = rewarded[i] ? 1.0 : -config.omega;
        col_sum[action[i]] += dq[i];
    }
    const double scale = 1.0 / static_cast<double>(config.users - 1);
    for (int i = 0; i < config.users; ++i) {
        for (int k = 0; k < config.channels; ++k) {
            const double own = (action[i] == k) ? dq[i] : 0.0;
            const double others = col_sum[k] - own;
            if (own != 0.0 || others != 0.0) {
                state.q[i][k] += own - scale * others;
            }
        }
    }
    ++state.t;
}

SlotResult run_slot(const BombeConfig& config, BombeState& state, const ChannelModel& model,
                    RandomStream& rng) {
    if (model.channels() != config.channels) {
        throw std::invalid_argument("run_slot: model channel count does not match config");
    }
    SlotResult result;
    result.action = select_all(config, state, rng);
    result.outcome = step(model, result.action, rng);
    apply_results(config, state, result.action, result.outcome.rewarded);
    return result;
}

}  // namespace towbombe
