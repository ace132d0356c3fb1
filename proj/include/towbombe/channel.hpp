#pragma once

#include <vector>

#include "towbombe/rng.hpp"

namespace towbombe {

// How the coin on a free channel is shared when several users collide.
// CoinLottery hands the whole coin to one uniformly random collider, so
// every user sees a binary outcome. FractionalSplit pays each of the m
// colliders 1/m. Expected per-user reward is P_k/m either way.
enum class CollisionMode { CoinLottery, FractionalSplit };

// One channel choice per user.
using JointAction = std::vector<int>;

// Time-slotted primary-user occupancy: channel k is free in a slot with
// probability probs[k], independently across channels and slots.
struct ChannelModel {
    std::vector<double> probs;
    CollisionMode collision = CollisionMode::CoinLottery;

    int channels() const { return static_cast<int>(probs.size()); }
    void validate() const;
};

// Resolution of a single slot as observed by the users.
struct SlotOutcome {
    std::vector<bool> free;       // availability draw, one per channel
    std::vector<double> rewards;  // reward amount, one per user
    std::vector<bool> rewarded;   // binary success signal, rewards[i] > 0
};

// Plays one slot. Availability is drawn once per channel (ascending k),
// then each occupied free channel pays out per the collision mode; lottery
// draws also happen in ascending channel order, so a given stream state
// fully determines the outcome.
SlotOutcome step(const ChannelModel& model, const JointAction& action, RandomStream& rng);

// Deterministic expected per-user reward of a joint action: P_k/m for a
// user sharing channel k with m-1 others.
std::vector<double> expected_payoff(const ChannelModel& model, const JointAction& action);

}  // namespace towbombe
