#include "towbombe/channel.hpp"

#include <stdexcept>
#include <string>

namespace towbombe {

void ChannelModel::validate() const {
    if (probs.empty()) {
        throw std::invalid_argument("ChannelModel: needs at least one channel");
    }
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("ChannelModel: probability outside [0,1]");
        }
    }
}

namespace {

void check_action(const ChannelModel& model, const JointAction& action) {
    if (action.empty()) {
        throw std::invalid_argument("joint action: needs at least one user");
    }
    for (int c : action) {
        if (c < 0 || c >= model.channels()) {
            throw std::out_of_range("joint action: channel index " + std::to_string(c) +
                                        " outside [0," + std::to_string(model.channels()) + ")");
        }
    }
}

std::vector<int> occupancy(const ChannelModel& model, const JointAction& action) {
    std::vector<int> count(model.probs.size(), 0);
    for (int c : action) ++count[c];
    return count;
}

}  // namespace

SlotOutcome step(const ChannelModel& model, const JointAction& action, RandomStream& rng) {
    model.validate();
    check_action(model, action);

    const int n = model.channels();
    const int m = static_cast<int>(action.size());
    SlotOutcome out;
    out.free.resize(n);
    out.rewards.assign(m, 0.0);
    out.rewarded.assign(m, false);

    for (int k = 0; k < n; ++k) {
        out.free[k] = std::bernoulli_distribution(model.probs[k])(rng);
    }

    const std::vector<int> occ = occupancy(model, action);
    for (int k = 0; k < n; ++k) {
        if (occ[k] == 0 || !out.free[k]) continue;
        if (model.collision == CollisionMode::CoinLottery) {
            // one coin per free occupied channel, to a uniform collider
            std::uniform_int_distribution<int> lot(0, occ[k] - 1);
            int winner = lot(rng);
            for (int i = 0, seen = 0; i < m; ++i) {
                if (action[i] == k && seen++ == winner) {
                    out.rewards[i] = 1.0;
                    break;
                }
            }
        } else {
            for (int i = 0; i < m; ++i) {
                if (action[i] == k) out.rewards[i] = 1.0 / occ[k];
            }
        }
    }
    for (int i = 0; i < m; ++i) out.rewarded[i] = out.rewards[i] > 0.0;
    return out;
}

std::vector<double> expected_payoff(const ChannelModel& model, const JointAction& action) {
    model.validate();
    check_action(model, action);

    const std::vector<int> occ = occupancy(model, action);
    std::vector<double> payoff(action.size());
    for (std::size_t i = 0; i < action.size(); ++i) {
        payoff[i] = model.probs[action[i]] / occ[action[i]];
    }
    return payoff;
}

}  // namespace towbombe
