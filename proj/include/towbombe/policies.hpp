#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "towbombe/channel.hpp"
#include "towbombe/rng.hpp"

namespace towbombe {

// Per-arm pull counts and reward moments shared by the bandit baselines.
struct BanditStats {
    std::vector<std::int64_t> pulls;
    std::vector<double> reward_sum;
    std::vector<double> reward_sq_sum;

    explicit BanditStats(int arms);
    int arms() const { return static_cast<int>(pulls.size()); }
    std::int64_t total_pulls() const;
    void record(int arm, double reward);
    double mean(int arm) const;  // 0 while unpulled
};

// Standard epsilon-greedy: explore uniformly with probability epsilon,
// otherwise play the empirical-mean argmax (uniform tie-break).
struct EpsilonGreedy {
    BanditStats stats;
    double epsilon = 0.1;

    EpsilonGreedy(int arms, double epsilon);
    int select(RandomStream& rng);
    void update(int arm, double reward) { stats.record(arm, reward); }
};

// Standard Boltzmann selection: arm k with probability exp(mean_k/tau)
// normalized. tau must be positive.
struct SoftmaxPolicy {
    BanditStats stats;
    double tau = 0.1;

    SoftmaxPolicy(int arms, double tau);
    std::vector<double> probabilities() const;
    int select(RandomStream& rng);
    void update(int arm, double reward) { stats.record(arm, reward); }
};

// UCB1-tuned: forced round-robin until every arm has one pull, then
// argmax of mean_k + sqrt((ln t / n_k) * min(1/4, V_k)) where V_k is the
// empirical variance plus its sqrt(2 ln t / n_k) confidence term.
struct Ucb1Tuned {
    BanditStats stats;

    explicit Ucb1Tuned(int arms);
    double variance_bound(int arm) const;
    double index(int arm) const;
    int select(RandomStream& rng);
    void update(int arm, double reward) { stats.record(arm, reward); }
};

// Uncoupled per-user tug-of-war over N channels: the same estimates,
// heights and synchronized scan as the coupled device, minus the reaction
// term. Users running this independently have nothing steering them apart.
struct IndependentTow {
    std::vector<std::int64_t> plays;
    std::vector<std::int64_t> failures;
    double omega = 0.0;
    double amplitude = 0.0;
    int period = 0;  // 0 means = arms
    std::int64_t t = 0;

    IndependentTow(int arms, double omega, double amplitude, int period = 0);
    int arms() const { return static_cast<int>(plays.size()); }
    std::vector<double> q_row() const;
    int select(RandomStream& rng);
    void update(int arm, bool rewarded);  // advances t
};

using AnyPolicy = std::variant<EpsilonGreedy, SoftmaxPolicy, Ucb1Tuned, IndependentTow>;

// A group of independent selfish users: one policy and one random stream
// per member, no shared state. Member order never matters.
struct Team {
    std::vector<AnyPolicy> members;
    std::vector<RandomStream> streams;
};

struct TeamSlotResult {
    JointAction action;
    SlotOutcome outcome;
};

// Each member selects from its own state and stream; the channel model
// resolves collisions; each member sees only its own (arm, reward).
TeamSlotResult team_slot(Team& team, const ChannelModel& model, RandomStream& env_rng);

}  // namespace towbombe
