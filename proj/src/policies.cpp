#include "towbombe/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "towbombe/bombe.hpp"

namespace towbombe {

BanditStats::BanditStats(int arms) {
    if (arms < 1) throw std::invalid_argument("BanditStats: needs at least one arm");
    pulls.assign(arms, 0);
    reward_sum.assign(arms, 0.0);
    reward_sq_sum.assign(arms, 0.0);
}

std::int64_t BanditStats::total_pulls() const {
    std::int64_t total = 0;
    for (auto n : pulls) total += n;
    return total;
}

void BanditStats::record(int arm, double reward) {
    if (arm < 0 || arm >= arms()) throw std::out_of_range("BanditStats: arm out of range");
    ++pulls[arm];
    reward_sum[arm] += reward;
    reward_sq_sum[arm] += reward * reward;
}

double BanditStats::mean(int arm) const {
    if (arm < 0 || arm >= arms()) throw std::out_of_range("BanditStats: arm out of range");
    if (pulls[arm] == 0) return 0.0;
    return reward_sum[arm] / static_cast<double>(pulls[arm]);
}

EpsilonGreedy::EpsilonGreedy(int arms, double eps) : stats(arms), epsilon(eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("EpsilonGreedy: epsilon outside [0,1]");
}

int EpsilonGreedy::select(RandomStream& rng) {
    if (epsilon > 0.0 && std::bernoulli_distribution(epsilon)(rng)) {
        return std::uniform_int_distribution<int>(0, stats.arms() - 1)(rng);
    }
    std::vector<double> means(stats.arms());
    for (int k = 0; k < stats.arms(); ++k) means[k] = stats.mean(k);
    return argmax_tiebreak(means, rng);
}

SoftmaxPolicy::SoftmaxPolicy(int arms, double t) : stats(arms), tau(t) {
    if (!(t > 0.0)) throw std::invalid_argument("SoftmaxPolicy: tau must be > 0");
}

std::vector<double> SoftmaxPolicy::probabilities() const {
    std::vector<double> p(stats.arms());
    double max_score = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < stats.arms(); ++k) {
        p[k] = stats.mean(k) / tau;
        max_score = std::max(max_score, p[k]);
    }
    double norm = 0.0;
    for (double& v : p) {
        v = std::exp(v - max_score);
        norm += v;
    }
    for (double& v : p) v /= norm;
    return p;
}

int SoftmaxPolicy::select(RandomStream& rng) {
    const std::vector<double> p = probabilities();
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (int k = 0; k < static_cast<int>(p.size()); ++k) {
        u -= p[k];
        if (u < 0.0) return k;
    }
    return static_cast<int>(p.size()) - 1;
}

Ucb1Tuned::Ucb1Tuned(int arms) : stats(arms) {}

double Ucb1Tuned::variance_bound(int arm) const {
    const auto n = static_cast<double>(stats.pulls[arm]);
    const double mean = stats.mean(arm);
    const double var = stats.reward_sq_sum[arm] / n - mean * mean;
    const double t = static_cast<double>(stats.total_pulls());
    return var + std::sqrt(2.0 * std::log(t) / n);
}

double Ucb1Tuned::index(int arm) const {
    if (stats.pulls[arm] == 0) throw std::logic_error("Ucb1Tuned: index of an unpulled arm");
    const auto n = static_cast<double>(stats.pulls[arm]);
    const double t = static_cast<double>(stats.total_pulls());
    return stats.mean(arm) + std::sqrt(std::log(t) / n * std::min(0.25, variance_bound(arm)));
}

int Ucb1Tuned::select(RandomStream& rng) {
    for (int k = 0; k < stats.arms(); ++k) {
        if (stats.pulls[k] == 0) return k;  // round-robin initialization
    }
    std::vector<double> idx(stats.arms());
    for (int k = 0; k < stats.arms(); ++k) idx[k] = index(k);
    return argmax_tiebreak(idx, rng);
}

IndependentTow::IndependentTow(int arms, double w, double amp, int per)
    : plays(arms, 0), failures(arms, 0), omega(w), amplitude(amp), period(per) {
    if (arms < 2) throw std::invalid_argument("IndependentTow: needs at least two arms");
    if (w < 0.0) throw std::invalid_argument("IndependentTow: omega must be >= 0");
}

std::vector<double> IndependentTow::q_row() const {
    std::vector<double> q(plays.size());
    for (std::size_t k = 0; k < plays.size(); ++k) {
        q[k] = static_cast<double>(plays[k]) - (1.0 + omega) * static_cast<double>(failures[k]);
    }
    return q;
}

int IndependentTow::select(RandomStream& rng) {
    std::vector<double> level = height_row(q_row());
    const int per = period > 0 ? period : arms();
    for (int k = 0; k < arms(); ++k) {
        level[k] += osc_value(amplitude, per, t, k);
    }
    return argmax_tiebreak(level, rng);
}

void IndependentTow::update(int arm, bool rewarded) {
    if (arm < 0 || arm >= arms()) throw std::out_of_range("IndependentTow: arm out of range");
    ++plays[arm];
    if (!rewarded) ++failures[arm];
    ++t;
}

TeamSlotResult team_slot(Team& team, const ChannelModel& model, RandomStream& env_rng) {
    if (team.members.empty() || team.members.size() != team.streams.size()) {
        throw std::invalid_argument("team_slot: members and streams must pair up");
    }
    TeamSlotResult result;
    result.action.resize(team.members.size());
    for (std::size_t i = 0; i < team.members.size(); ++i) {
        result.action[i] = std::visit([&](auto& policy) { return policy.select(team.streams[i]); },
                                      team.members[i]);
    }
    result.outcome = step(model, result.action, env_rng);
    for (std::size_t i = 0; i < team.members.size(); ++i) {
        const int arm = result.action[i];
        std::visit(
            [&](auto& policy) {
                using P = std::decay_t<decltype(policy)>;
                if constexpr (std::is_same_v<P, IndependentTow>) {
                    policy.update(arm, result.outcome.rewarded[i]);
                } else {
                    policy.update(arm, result.outcome.rewards[i]);
                }
            },
            team.members[i]);
    }
    return result;
}

}  // namespace towbombe
