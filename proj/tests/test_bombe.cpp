#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "towbombe/bombe.hpp"

using namespace towbombe;

namespace {

constexpr double kPi = 3.14159265358979323846;

double column_sum(const BombeState& state, int k) {
    double sum = 0.0;
    for (const auto& row : state.q) sum += row[k];
    return sum;
}

}  // namespace

TEST_SUITE("bombe") {

TEST_CASE("config rejects degenerate geometry") {
    BombeConfig{3, 5, 0.08, 1.0, 0}.validate();
    CHECK_THROWS_AS((BombeConfig{1, 5, 0.0, 0.0, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((BombeConfig{3, 1, 0.0, 0.0, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((BombeConfig{3, 5, -0.1, 0.0, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((BombeConfig{3, 5, 0.0, -1.0, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((BombeConfig{3, 5, 0.0, 0.0, 1}.validate()), std::invalid_argument);
    CHECK(BombeConfig{3, 5, 0.0, 0.0, 7}.effective_period() == 7);
    CHECK(BombeConfig{3, 5, 0.0, 0.0, 0}.effective_period() == 5);
}

TEST_CASE("initial state is all zeros") {
    const BombeConfig config{3, 5, 0.08, 0.0, 0};
    const BombeState state = init(config);
    CHECK(state.t == 0);
    REQUIRE(state.q.size() == 3);
    for (const auto& row : state.q) {
        REQUIRE(row.size() == 5);
        for (double v : row) CHECK(v == 0.0);
    }
    for (const auto& row : heights(config, state)) {
        for (double v : row) CHECK(v == 0.0);
    }
    for (int k = 0; k < 5; ++k) CHECK(column_sum(state, k) == 0.0);
}

TEST_CASE("oscillation matches the five-channel sinusoid") {
    CHECK(osc_value(1.0, 5, 0, 0) == 0.0);
    CHECK(osc_value(1.0, 5, 0, 1) == doctest::Approx(std::sin(2 * kPi / 5)).epsilon(1e-15));
    CHECK(osc_value(2.5, 5, 3, 4) ==
          doctest::Approx(2.5 * std::sin(2 * kPi * (3 + 4) / 5)).epsilon(1e-12));
    CHECK(osc_value(0.0, 5, 123, 2) == 0.0);
}

TEST_CASE("oscillation scans one channel per step") {
    for (int t = 0; t < 10; ++t) {
        for (int k = 0; k < 5; ++k) {
            CHECK(osc_value(1.3, 5, t + 1, k) ==
                  doctest::Approx(osc_value(1.3, 5, t, (k + 1) % 5)).epsilon(1e-12));
        }
    }
}

TEST_CASE("oscillation phases cancel over one full period") {
    for (int t = 0; t < 20; ++t) {
        double sum = 0.0;
        for (int k = 0; k < 5; ++k) sum += osc_value(2.0, 5, t, k);
        CHECK(sum == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("osc checks the channel index") {
    const BombeConfig config{2, 4, 0.0, 1.0, 0};
    CHECK(osc(config, 3, 1) == osc_value(1.0, 4, 3, 1));
    CHECK_THROWS_AS(osc(config, 0, 4), std::out_of_range);
    CHECK_THROWS_AS(osc(config, 0, -1), std::out_of_range);
}

TEST_CASE("height row subtracts the mean of the other channels") {
    const std::vector<double> x = height_row({1.0, 0.0, 0.0, 0.0, 0.0});
    REQUIRE(x.size() == 5);
    CHECK(x[0] == doctest::Approx(1.0));
    for (int k = 1; k < 5; ++k) CHECK(x[k] == doctest::Approx(-0.25));
}

TEST_CASE("height rows always sum to zero") {
    RandomStream rng(3);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> q(6);
        for (double& v : q) v = dist(rng);
        double sum = 0.0;
        for (double v : height_row(q)) sum += v;
        CHECK(std::abs(sum) < 1e-9);
    }
}

TEST_CASE("selection picks the dominant estimate") {
    const BombeConfig config{2, 5, 0.0, 0.0, 0};
    BombeState state = init(config);
    state.q[0] = {0.0, 0.0, 0.0, 0.0, 10.0};
    state.q[1] = {3.0, 0.0, 0.0, 0.0, 0.0};
    RandomStream rng(1);
    const JointAction action = select_all(config, state, rng);
    CHECK(action == JointAction{4, 0});
}

TEST_CASE("selection follows the scan peak on a flat state") {
    // at t = 0 the scan is highest on channel 1 (sin at 72 degrees)
    const BombeConfig config{3, 5, 0.0, 2.0, 0};
    BombeState state = init(config);
    RandomStream rng(1);
    CHECK(select_all(config, state, rng) == JointAction{1, 1, 1});
}

TEST_CASE("flat state with no scan ties uniformly") {
    const BombeConfig config{2, 4, 0.0, 0.0, 0};
    const BombeState state = init(config);
    RandomStream rng(9);
    std::vector<int> counts(4, 0);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) ++counts[select_all(config, state, rng)[0]];
    for (int k = 0; k < 4; ++k) {
        CHECK(counts[k] / static_cast<double>(draws) == doctest::Approx(0.25).epsilon(0.08));
    }
}

TEST_CASE("selection ignores a constant shift of one user's row") {
    const BombeConfig config{2, 5, 0.0, 1.5, 0};
    BombeState state = init(config);
    state.q[0] = {0.4, -1.0, 2.0, 0.1, -0.3};
    state.q[1] = {1.0, 2.0, -0.5, 0.0, 0.7};
    BombeState shifted = state;
    for (double& v : shifted.q[0]) v += 123.0;
    for (int t = 0; t < 10; ++t) {
        RandomStream a(50 + t);
        RandomStream b(50 + t);
        state.t = shifted.t = t;
        CHECK(select_all(config, state, a) == select_all(config, shifted, b));
    }
}

TEST_CASE("one slot of results moves chooser and reaction together") {
    const BombeConfig config{3, 5, 0.08, 0.0, 0};
    BombeState state = init(config);
    // users 0 and 1 rewarded on channels 0 and 1, user 2 fails on channel 2
    apply_results(config, state, {0, 1, 2}, {true, true, false});
    CHECK(state.t == 1);
    CHECK(state.q[0][0] == doctest::Approx(1.0));
    CHECK(state.q[1][0] == doctest::Approx(-0.5));
    CHECK(state.q[2][0] == doctest::Approx(-0.5));
    CHECK(state.q[0][1] == doctest::Approx(-0.5));
    CHECK(state.q[1][1] == doctest::Approx(1.0));
    CHECK(state.q[2][1] == doctest::Approx(-0.5));
    CHECK(state.q[0][2] == doctest::Approx(0.04));
    CHECK(state.q[1][2] == doctest::Approx(0.04));
    CHECK(state.q[2][2] == doctest::Approx(-0.08));
    for (int k = 0; k < 5; ++k) CHECK(std::abs(column_sum(state, k)) < 1e-12);
}

TEST_CASE("a failure pushes the idle user up by the same amount") {
    const BombeConfig config{2, 3, 0.08, 0.0, 0};
    BombeState state = init(config);
    apply_results(config, state, {0, 1}, {false, true});
    CHECK(state.q[0][0] == doctest::Approx(-0.08));
    CHECK(state.q[1][0] == doctest::Approx(0.08));
    CHECK(state.q[0][1] == doctest::Approx(-1.0));
    CHECK(state.q[1][1] == doctest::Approx(1.0));
}

TEST_CASE("results require matching dimensions") {
    const BombeConfig config{3, 5, 0.08, 0.0, 0};
    BombeState state = init(config);
    JointAction short_action{0, 1};
    std::vector<bool> rewarded{true, true, true};
    CHECK_THROWS_AS(apply_results(config, state, short_action, rewarded), std::invalid_argument);
    JointAction bad_channel{0, 1, 9};
    CHECK_THROWS_AS(apply_results(config, state, bad_channel, rewarded), std::out_of_range);
}

TEST_CASE("column sums stay put over long random runs") {
    const BombeConfig config{3, 5, 0.08, 1.7, 0};
    const ChannelModel model{{0.03, 0.05, 0.1, 0.2, 0.9}, CollisionMode::CoinLottery};
    BombeState state = init(config);
    RandomStream rng(314);
    for (int t = 0; t < 2000; ++t) run_slot(config, state, model, rng);
    CHECK(state.t == 2000);
    for (int k = 0; k < 5; ++k) CHECK(std::abs(column_sum(state, k)) < 1e-9);
    for (const auto& row : heights(config, state)) {
        double sum = 0.0;
        for (double v : row) sum += v;
        CHECK(std::abs(sum) < 1e-9);
    }
}

TEST_CASE("equal seeds give equal trajectories") {
    const BombeConfig config{3, 5, 0.08, 1.7, 0};
    const ChannelModel model{{0.03, 0.05, 0.1, 0.2, 0.9}, CollisionMode::CoinLottery};
    BombeState sa = init(config);
    BombeState sb = init(config);
    RandomStream ra(2718);
    RandomStream rb(2718);
    for (int t = 0; t < 300; ++t) {
        const SlotResult a = run_slot(config, sa, model, ra);
        const SlotResult b = run_slot(config, sb, model, rb);
        CHECK(a.action == b.action);
        CHECK(a.outcome.rewards == b.outcome.rewards);
    }
    CHECK(sa.q == sb.q);
}

TEST_CASE("per-slot reward never exceeds the free occupied channels") {
    const BombeConfig config{3, 5, 0.08, 1.7, 0};
    const ChannelModel model{{0.3, 0.4, 0.5, 0.6, 0.7}, CollisionMode::CoinLottery};
    BombeState state = init(config);
    RandomStream rng(9);
    for (int t = 0; t < 500; ++t) {
        const SlotResult slot = run_slot(config, state, model, rng);
        double total = 0.0;
        for (double r : slot.outcome.rewards) total += r;
        int free_occupied = 0;
        for (int k = 0; k < 5; ++k) {
            bool occupied = false;
            for (int value : slot.action) occupied = occupied || (value == k);
            if (occupied && slot.outcome.free[k]) ++free_occupied;
        }
        CHECK(total <= free_occupied + 1e-12);
    }
}

}  // TEST_SUITE
