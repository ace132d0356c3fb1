#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "towbombe/channel.hpp"

namespace towbombe {

// Dense expected-payoff tensor over all channels^users joint actions.
// Joint actions are ranked with user 0 as the most significant digit, so
// ascending rank enumerates them in lexicographic order.
class PayoffTensor {
public:
    static constexpr std::int64_t kDefaultMaxActions = 4'000'000;

    PayoffTensor(ChannelModel model, int users, std::int64_t max_actions = kDefaultMaxActions);

    int users() const { return users_; }
    int channels() const { return model_.channels(); }
    std::int64_t num_actions() const { return actions_; }
    const ChannelModel& model() const { return model_; }

    std::int64_t rank(const JointAction& action) const;
    JointAction unrank(std::int64_t rank) const;

    double payoff(std::int64_t rank, int user) const { return payoffs_[rank * users_ + user]; }
    std::vector<double> payoff(const JointAction& action) const;

    // Total expected payoff, summed per distinct occupied channel in
    // ascending channel order so permutations of one occupancy pattern
    // give bit-identical totals.
    double total(std::int64_t rank) const;
    double total(const JointAction& action) const { return total(rank(action)); }

private:
    ChannelModel model_;
    int users_;
    std::int64_t actions_;
    std::vector<double> payoffs_;  // actions x users
};

PayoffTensor build_tensor(const ChannelModel& model, int users,
                          std::int64_t max_actions = PayoffTensor::kDefaultMaxActions);

// All joint actions attaining the maximum total expected payoff, and that
// maximum.
std::pair<std::vector<JointAction>, double> social_maxima(const PayoffTensor& tensor);

// All pure-strategy equilibria by exhaustive best-response check: an
// action survives unless some user gains strictly by a unilateral switch.
std::vector<JointAction> nash_equilibria(const PayoffTensor& tensor);

struct GameSolution {
    std::vector<JointAction> social_maxima;
    double sm_value = 0.0;
    std::vector<JointAction> nash_equilibria;
};

GameSolution solve(const ChannelModel& model, int users,
                   std::int64_t max_actions = PayoffTensor::kDefaultMaxActions);

}  // namespace towbombe
