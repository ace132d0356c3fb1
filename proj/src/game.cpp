#include "towbombe/game.hpp"

#include <stdexcept>
#include <string>

namespace towbombe {

PayoffTensor::PayoffTensor(ChannelModel model, int users, std::int64_t max_actions)
    : model_(std::move(model)), users_(users) {
    model_.validate();
    if (users_ < 1) throw std::invalid_argument("PayoffTensor: users must be >= 1");
    if (max_actions < 1) throw std::invalid_argument("PayoffTensor: max_actions must be >= 1");

    const auto n = static_cast<std::int64_t>(model_.channels());
    actions_ = 1;
    for (int i = 0; i < users_; ++i) {
        if (actions_ > max_actions / n) {
            throw std::length_error("PayoffTensor: " + std::to_string(n) + "^" +
                                    std::to_string(users_) + " joint actions exceed the cap of " +
                                    std::to_string(max_actions));
        }
        actions_ *= n;
    }

    payoffs_.resize(static_cast<std::size_t>(actions_ * users_));
    JointAction action(users_, 0);
    for (std::int64_t r = 0; r < actions_; ++r) {
        const std::vector<double> p = expected_payoff(model_, action);
        for (int i = 0; i < users_; ++i) payoffs_[r * users_ + i] = p[i];
        // odometer increment, least significant digit last
        for (int i = users_ - 1; i >= 0; --i) {
            if (++action[i] < model_.channels()) break;
            action[i] = 0;
        }
    }
}

std::int64_t PayoffTensor::rank(const JointAction& action) const {
    if (static_cast<int>(action.size()) != users_) {
        throw std::invalid_argument("PayoffTensor: action has wrong user count");
    }
    std::int64_t r = 0;
    for (int c : action) {
        if (c < 0 || c >= model_.channels()) {
            throw std::out_of_range("PayoffTensor: channel index out of range");
        }
        r = r * model_.channels() + c;
    }
    return r;
}

JointAction PayoffTensor::unrank(std::int64_t rank) const {
    if (rank < 0 || rank >= actions_) throw std::out_of_range("PayoffTensor: rank out of range");
    JointAction action(users_);
    for (int i = users_ - 1; i >= 0; --i) {
        action[i] = static_cast<int>(rank % model_.channels());
        rank /= model_.channels();
    }
    return action;
}

std::vector<double> PayoffTensor::payoff(const JointAction& action) const {
    const std::int64_t r = rank(action);
    return {payoffs_.begin() + r * users_, payoffs_.begin() + (r + 1) * users_};
}

double PayoffTensor::total(std::int64_t r) const {
    const JointAction action = unrank(r);
    std::vector<bool> occupied(model_.channels(), false);
    for (int c : action) occupied[c] = true;
    double sum = 0.0;
    for (int k = 0; k < model_.channels(); ++k) {
        if (occupied[k]) sum += model_.probs[k];
    }
    return sum;
}

PayoffTensor build_tensor(const ChannelModel& model, int users, std::int64_t max_actions) {
    return PayoffTensor(model, users, max_actions);
}

std::pair<std::vector<JointAction>, double> social_maxima(const PayoffTensor& tensor) {
    std::vector<JointAction> best;
    double best_total = -1.0;
    for (std::int64_t r = 0; r < tensor.num_actions(); ++r) {
        const double total = tensor.total(r);
        if (total > best_total) {
            best_total = total;
            best.clear();
        }
        if (total == best_total) best.push_back(tensor.unrank(r));
    }
    return {std::move(best), best_total};
}

std::vector<JointAction> nash_equilibria(const PayoffTensor& tensor) {
    const int users = tensor.users();
    const int channels = tensor.channels();

    // stride of user i's digit in the rank
    std::vector<std::int64_t> stride(users, 1);
    for (int i = users - 2; i >= 0; --i) stride[i] = stride[i + 1] * channels;

    std::vector<JointAction> equilibria;
    for (std::int64_t r = 0; r < tensor.num_actions(); ++r) {
        const JointAction action = tensor.unrank(r);
        bool stable = true;
        for (int i = 0; i < users && stable; ++i) {
            const double own = tensor.payoff(r, i);
            for (int alt = 0; alt < channels; ++alt) {
                if (alt == action[i]) continue;
                const std::int64_t dev = r + (alt - action[i]) * stride[i];
                if (tensor.payoff(dev, i) > own) {  // strict improvement breaks it
                    stable = false;
                    break;
                }
            }
        }
        if (stable) equilibria.push_back(action);
    }
    return equilibria;
}

GameSolution solve(const ChannelModel& model, int users, std::int64_t max_actions) {
    const PayoffTensor tensor = build_tensor(model, users, max_actions);
    GameSolution solution;
    auto [sm, value] = social_maxima(tensor);
    solution.social_maxima = std::move(sm);
    solution.sm_value = value;
    solution.nash_equilibria = nash_equilibria(tensor);
    return solution;
}

}  // namespace towbombe
