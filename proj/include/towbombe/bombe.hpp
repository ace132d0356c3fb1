#pragma once

#include <cstdint>
#include <vector>

#include "towbombe/channel.hpp"
#include "towbombe/rng.hpp"

namespace towbombe {

// Geometry and parameters of the coupled multi-user device.
struct BombeConfig {
    int users = 2;           // M
    int channels = 2;        // N
    double omega = 0.0;      // failure weight
    double amplitude = 0.0;  // external oscillation amplitude
    int period = 0;          // oscillation period; 0 means = channels

    int effective_period() const { return period > 0 ? period : channels; }
    void validate() const;
};

// Per-user, per-channel estimates plus the step counter. Selection reads
// the counter before a slot; applying the slot's results advances it.
struct BombeState {
    std::vector<std::vector<double>> q;  // users x channels
    std::int64_t t = 0;
};

// Zeroed state; both conservation sums start (and stay) at zero.
BombeState init(const BombeConfig& config);

// The synchronized external scan added to every user's heights at
// selection time: amplitude * sin(2*pi*t/T + 2*pi*k/T). It is never folded
// into the stored estimates.
double osc_value(double amplitude, int period, std::int64_t t, int channel);
double osc(const BombeConfig& config, std::int64_t t, int channel);

// Interface heights of one user: each estimate less the mean of the
// others, X_k = q_k - (1/(N-1)) * sum_{l != k} q_l. Rows sum to zero.
std::vector<double> height_row(const std::vector<double>& q_row);
std::vector<std::vector<double>> heights(const BombeConfig& config, const BombeState& state);

// Every user picks its highest interface (heights plus oscillation);
// exact ties break uniformly at random.
JointAction select_all(const BombeConfig& config, const BombeState& state, RandomStream& rng);

// Applies one slot of results: the chooser's estimate moves by +1 or
// -omega, and every other user's estimate on that channel moves by the
// opposite amount scaled by 1/(M-1), so per-channel sums are conserved.
void apply_results(const BombeConfig& config, BombeState& state, const JointAction& action,
                   const std::vector<bool>& rewarded);

struct SlotResult {
    JointAction action;
    SlotOutcome outcome;
};

// One full slot: select, resolve against the channel model, apply.
SlotResult run_slot(const BombeConfig& config, BombeState& state, const ChannelModel& model,
                    RandomStream& rng);

}  // namespace towbombe
