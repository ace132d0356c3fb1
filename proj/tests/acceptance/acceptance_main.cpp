// Release gate: nine checks against the reference five-channel,
// three-user configuration. Prints one PASS/FAIL line per check and
// exits nonzero if any fail. All tolerances are pinned here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "towbombe/bombe.hpp"
#include "towbombe/experiment.hpp"
#include "towbombe/game.hpp"
#include "towbombe/tow.hpp"

using namespace towbombe;

namespace {

const std::vector<double> kRefProbs{0.03, 0.05, 0.1, 0.2, 0.9};

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) { return format_g6(v); }

ExperimentConfig reference_config() {
    ExperimentConfig cfg;
    cfg.probs = kRefProbs;
    cfg.users = 3;
    cfg.policy = PolicyKind::Bombe;
    cfg.omega = 0.08;
    cfg.amplitude = kDefaultAmplitude;
    cfg.horizon = 1000;
    cfg.samples = 1000;
    cfg.seed = 1;
    return cfg;
}

struct ReferenceRun {
    ExperimentConfig cfg = reference_config();
    std::vector<ScoreRecord> records;
    RunSummary summary;
};

const ReferenceRun& reference_run() {
    static const ReferenceRun run = [] {
        ReferenceRun r;
        r.records = run_experiment(r.cfg);
        r.summary = summarize(r.records, r.cfg);
        return r;
    }();
    return run;
}

double team_mean_total(PolicyKind kind) {
    ExperimentConfig cfg = reference_config();
    cfg.policy = kind;
    return summarize(run_experiment(cfg)).mean_total;
}

// ---- 1: exact payoff tables, social maxima, equilibria, under a second ----

struct TableEntry {
    JointAction action;
    std::vector<double> payoff;
};

const std::vector<TableEntry> kReferenceTable{
    {{2, 2, 2}, {1.0 / 30, 1.0 / 30, 1.0 / 30}}, {{2, 3, 2}, {0.05, 0.2, 0.05}},
    {{2, 4, 2}, {0.05, 0.9, 0.05}},              {{3, 2, 2}, {0.2, 0.05, 0.05}},
    {{3, 3, 2}, {0.1, 0.1, 0.1}},                {{3, 4, 2}, {0.2, 0.9, 0.1}},
    {{4, 2, 2}, {0.9, 0.05, 0.05}},              {{4, 3, 2}, {0.9, 0.2, 0.1}},
    {{4, 4, 2}, {0.45, 0.45, 0.1}},              {{2, 2, 3}, {0.05, 0.05, 0.2}},
    {{2, 3, 3}, {0.1, 0.1, 0.1}},                {{2, 4, 3}, {0.1, 0.9, 0.2}},
    {{3, 2, 3}, {0.1, 0.1, 0.1}},                {{3, 3, 3}, {2.0 / 30, 2.0 / 30, 2.0 / 30}},
    {{3, 4, 3}, {0.1, 0.9, 0.1}},                {{4, 2, 3}, {0.9, 0.1, 0.2}},
    {{4, 3, 3}, {0.9, 0.1, 0.1}},                {{4, 4, 3}, {0.45, 0.45, 0.2}},
    {{2, 2, 4}, {0.05, 0.05, 0.9}},              {{2, 3, 4}, {0.1, 0.2, 0.9}},
    {{2, 4, 4}, {0.1, 0.45, 0.45}},              {{3, 2, 4}, {0.2, 0.1, 0.9}},
    {{3, 3, 4}, {0.1, 0.1, 0.9}},                {{3, 4, 4}, {0.2, 0.45, 0.45}},
    {{4, 2, 4}, {0.45, 0.1, 0.45}},              {{4, 3, 4}, {0.45, 0.2, 0.45}},
    {{4, 4, 4}, {0.3, 0.3, 0.3}},
};

Outcome check_oracle_tables() {
    const auto start = std::chrono::steady_clock::now();
    const ChannelModel model{kRefProbs, CollisionMode::CoinLottery};
    const PayoffTensor tensor(model, 3);
    auto [maxima, value] = social_maxima(tensor);
    const std::vector<JointAction> equilibria = nash_equilibria(tensor);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    for (const TableEntry& entry : kReferenceTable) {
        const std::vector<double> got = tensor.payoff(entry.action);
        for (int u = 0; u < 3; ++u) {
            if (std::abs(got[u] - entry.payoff[u]) > 1e-12) {
                return {false, "table entry off by more than 1e-12 at " +
                                   action_label(entry.action, 5)};
            }
        }
    }
    if (std::abs(value - 1.2) > 1e-12) return {false, "best total " + fmt(value) + " != 1.2"};
    std::vector<JointAction> sorted_maxima = maxima;
    std::sort(sorted_maxima.begin(), sorted_maxima.end());
    const std::vector<JointAction> expected{{2, 3, 4}, {2, 4, 3}, {3, 2, 4},
                                            {3, 4, 2}, {4, 2, 3}, {4, 3, 2}};
    if (sorted_maxima != expected) {
        return {false, "social maxima are not the 6 permutations of C,D,E"};
    }
    bool ne_ok = false;
    for (const JointAction& action : equilibria) {
        if (action == JointAction{4, 4, 4}) {
            ne_ok = true;
            for (double v : tensor.payoff(action)) {
                if (std::abs(v - 0.3) > 1e-12) ne_ok = false;
            }
        }
    }
    if (!ne_ok) return {false, "equilibrium E,E,E with payoffs 0.3 missing"};
    if (elapsed >= 1.0) return {false, "oracle took " + fmt(elapsed) + " s (limit 1 s)"};
    return {true, "27 entries exact, 6 maxima at 1.2, equilibrium E,E,E, " +
                      fmt(elapsed * 1000) + " ms"};
}

// ---- 2: mean total score of the coupled run ----

Outcome check_mean_total() {
    const double mean_total = reference_run().summary.mean_total;
    const bool pass = std::abs(mean_total - 1200.0) <= 60.0;
    return {pass, "mean_total=" + fmt(mean_total) + " target 1200 +- 60"};
}

// ---- 3: cluster coverage and equilibrium avoidance ----

Outcome check_clusters() {
    const RunSummary& summary = reference_run().summary;
    std::int64_t sm_total = 0;
    for (std::int64_t c : summary.sm_counts) sm_total += c;
    const double n = static_cast<double>(summary.samples);
    const double sm_fraction = sm_total / n;
    const double ne_fraction = summary.ne_count / n;
    const bool pass = sm_fraction >= 0.90 && ne_fraction < 0.01;
    return {pass, "sm_fraction=" + fmt(sm_fraction) + " (need >= 0.9), ne_fraction=" +
                      fmt(ne_fraction) + " (need < 0.01), radius 150"};
}

// ---- 4: fairness of the per-user means ----

Outcome check_fairness() {
    const RunSummary& summary = reference_run().summary;
    bool pass = true;
    std::string detail = "per-user means";
    for (double mean : summary.mean_per_user) {
        pass = pass && mean >= 360.0 && mean <= 440.0;
        detail += " " + fmt(mean);
    }
    return {pass, detail + " (need each in [360, 440])"};
}

// ---- 5: uncoupled teams stay at or below the equilibrium range ----

Outcome check_uncoupled_teams() {
    const double bombe = reference_run().summary.mean_total;
    const double ucb1t = team_mean_total(PolicyKind::IndependentUcb1Tuned);
    const double tow = team_mean_total(PolicyKind::IndependentTow);
    const bool pass = ucb1t <= 1000.0 && tow <= 1000.0 && ucb1t < bombe && tow < bombe;
    return {pass, "ucb1t=" + fmt(ucb1t) + " tow=" + fmt(tow) + " coupled=" + fmt(bombe) +
                      " (need both <= 1000 and below coupled)"};
}

// ---- 6: weighting identity between the two estimate forms ----

Outcome check_omega_identity() {
    std::mt19937_64 meta(424242);
    std::uniform_int_distribution<std::int64_t> plays_dist(0, 100000);
    std::uniform_real_distribution<double> gamma_dist(0.0, 1.9);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        TowState s;
        s.plays = {plays_dist(meta), plays_dist(meta)};
        s.failures = {std::uniform_int_distribution<std::int64_t>(0, s.plays[0])(meta),
                      std::uniform_int_distribution<std::int64_t>(0, s.plays[1])(meta)};
        const double gamma = gamma_dist(meta);
        s.omega = omega0(gamma);
        const double lhs = q_estimate(s, Machine::A) - q_estimate(s, Machine::B);
        const double rhs =
            q_double_prime(s, gamma, Machine::A) - q_double_prime(s, gamma, Machine::B);
        const double rel =
            std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
        worst = std::max(worst, rel);
    }
    const double w_multi = omega0_multi(kRefProbs, 3);
    const bool multi_ok = std::abs(w_multi - 0.15 / 1.85) < 1e-15;
    const bool pass = worst < 1e-9 && multi_ok;
    return {pass, "worst relative gap " + fmt(worst) + " over 10^4 draws (need < 1e-9), " +
                      "omega0_multi=" + fmt(w_multi) + " (0.0811 expected)"};
}

// ---- 7: conservation of the coupled estimates ----

Outcome check_conservation() {
    std::mt19937_64 meta(777);
    std::uniform_real_distribution<double> prob_dist(0.05, 0.95);
    double worst_column = 0.0;
    double worst_row = 0.0;
    for (int users = 2; users <= 4; ++users) {
        for (int channels = 2; channels <= 6; ++channels) {
            const BombeConfig config{users, channels, 0.08, 1.5, 0};
            std::vector<double> probs(channels);
            for (double& p : probs) p = prob_dist(meta);
            const ChannelModel model{probs, CollisionMode::CoinLottery};
            BombeState state = init(config);
            RandomStream rng(meta());
            for (int t = 0; t < 10000; ++t) {
                run_slot(config, state, model, rng);
                if (t % 500 != 499) continue;
                for (int k = 0; k < channels; ++k) {
                    double column = 0.0;
                    for (int i = 0; i < users; ++i) column += state.q[i][k];
                    worst_column = std::max(worst_column, std::abs(column));
                }
                for (const auto& row : heights(config, state)) {
                    double sum = 0.0;
                    for (double v : row) sum += v;
                    worst_row = std::max(worst_row, std::abs(sum));
                }
            }
        }
    }
    const bool pass = worst_column < 1e-9 && worst_row < 1e-9;
    return {pass, "worst column drift " + fmt(worst_column) + ", worst height row sum " +
                      fmt(worst_row) + " over 10^4-step runs, M=2..4, N=2..6 (need < 1e-9)"};
}

// ---- 8: byte-identical outputs across reruns and thread counts ----

std::string scores_bytes(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
    const std::vector<ScoreRecord> records = run_experiment(cfg);
    emit_csv(records, summarize(records, cfg), cfg, dir.string());
    std::ifstream in(dir / "scores.csv", std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Outcome check_determinism() {
    ExperimentConfig cfg = reference_config();
    cfg.horizon = 200;
    cfg.samples = 50;
    cfg.seed = 77;
    const std::filesystem::path root =
        std::filesystem::temp_directory_path() / "towbombe_acceptance";
    std::filesystem::remove_all(root);
    const std::string first = scores_bytes(cfg, root / "a");
    const std::string second = scores_bytes(cfg, root / "b");
    cfg.threads = 4;
    const std::string threaded = scores_bytes(cfg, root / "c");
    std::filesystem::remove_all(root);
    if (first.empty()) return {false, "no bytes written"};
    if (first != second) return {false, "rerun bytes differ"};
    if (first != threaded) return {false, "parallel bytes differ from serial"};
    return {true, "rerun and 4-thread outputs byte-identical (" +
                      std::to_string(first.size()) + " bytes)"};
}

// ---- 9: the solver against a from-scratch enumeration ----

struct NaiveSolution {
    std::vector<JointAction> maxima;
    double value = 0.0;
    std::vector<JointAction> equilibria;
};

void for_each_action(int users, int channels, const std::function<void(const JointAction&)>& fn) {
    JointAction action(users, 0);
    while (true) {
        fn(action);
        int i = users - 1;
        while (i >= 0 && ++action[i] == channels) action[i--] = 0;
        if (i < 0) break;
    }
}

NaiveSolution enumerate_naive(const ChannelModel& model, int users) {
    const int channels = model.channels();
    NaiveSolution sol;
    sol.value = -1.0;
    for_each_action(users, channels, [&](const JointAction& action) {
        double total = 0.0;
        for (double v : expected_payoff(model, action)) total += v;
        if (total > sol.value + 1e-12) {
            sol.value = total;
            sol.maxima.assign(1, action);
        } else if (std::abs(total - sol.value) <= 1e-12) {
            sol.maxima.push_back(action);
        }
    });
    for_each_action(users, channels, [&](const JointAction& action) {
        const std::vector<double> payoff = expected_payoff(model, action);
        bool stable = true;
        for (int i = 0; i < users && stable; ++i) {
            JointAction deviated = action;
            for (int alt = 0; alt < channels && stable; ++alt) {
                if (alt == action[i]) continue;
                deviated[i] = alt;
                if (expected_payoff(model, deviated)[i] > payoff[i]) stable = false;
            }
            deviated[i] = action[i];
        }
        if (stable) sol.equilibria.push_back(action);
    });
    std::sort(sol.maxima.begin(), sol.maxima.end());
    std::sort(sol.equilibria.begin(), sol.equilibria.end());
    return sol;
}

Outcome check_cross_enumeration() {
    std::mt19937_64 meta(31337);
    std::uniform_real_distribution<double> prob_dist(0.0, 1.0);
    int instances = 0;
    for (int users = 1; users <= 3; ++users) {
        for (int channels = 2; channels <= 3; ++channels) {
            for (int trial = 0; trial < 8; ++trial) {
                std::vector<double> probs(channels);
                for (double& p : probs) p = prob_dist(meta);
                const ChannelModel model{probs, CollisionMode::CoinLottery};
                const GameSolution fast = solve(model, users);
                const NaiveSolution naive = enumerate_naive(model, users);

                std::vector<JointAction> fast_maxima = fast.social_maxima;
                std::sort(fast_maxima.begin(), fast_maxima.end());
                std::vector<JointAction> fast_ne = fast.nash_equilibria;
                std::sort(fast_ne.begin(), fast_ne.end());

                if (std::abs(fast.sm_value - naive.value) > 1e-12) {
                    return {false, "best totals disagree on a random instance"};
                }
                if (fast_maxima != naive.maxima) {
                    return {false, "social maxima sets disagree on a random instance"};
                }
                if (fast_ne != naive.equilibria) {
                    return {false, "equilibrium sets disagree on a random instance"};
                }
                ++instances;
            }
        }
    }
    return {true, std::to_string(instances) + " random instances (M<=3, N<=3) agree exactly"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oracle tables, maxima and equilibria", check_oracle_tables},
        {"coupled mean total score", check_mean_total},
        {"cluster coverage, equilibrium avoidance", check_clusters},
        {"fairness across users", check_fairness},
        {"uncoupled teams fall short", check_uncoupled_teams},
        {"estimate identity at the tuned weight", check_omega_identity},
        {"conservation of coupled estimates", check_conservation},
        {"byte-level determinism", check_determinism},
        {"solver versus naive enumeration", check_cross_enumeration},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        if (!outcome.pass) ++failures;
        std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": "
                  << criteria[i].first << " -- " << outcome.detail << "\n";
    }
    if (failures == 0) {
        std::cout << "all 9 criteria passed\n";
        return 0;
    }
    std::cout << failures << " of 9 criteria failed\n";
    return 1;
}
