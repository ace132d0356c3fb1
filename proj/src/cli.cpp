#include "towbombe/cli.hpp"

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "towbombe/experiment.hpp"
#include "towbombe/game.hpp"

namespace towbombe {
namespace {

// TOWBOMBE_VERBOSE: 0 silences the report on stdout, 1 (default) prints the
// run summary, 2 additionally echoes the effective configuration.
int verbosity() {
    const char* v = std::getenv("TOWBOMBE_VERBOSE");
    if (v == nullptr || *v == '\0') return 1;
    return std::atoi(v);
}

// One option block shared by simulate / baseline / sweep-omega. A config
// file (--config) supplies the base values; any flag given explicitly on
// the command line wins over the file.
struct ExperimentCli {
    ExperimentConfig values;
    std::string config_path;
    std::string policy_str;
    std::string collision_str = "lottery";
    PolicyKind default_policy = PolicyKind::Bombe;

    CLI::Option* probs = nullptr;
    CLI::Option* users = nullptr;
    CLI::Option* policy = nullptr;
    CLI::Option* collision = nullptr;
    CLI::Option* omega = nullptr;
    CLI::Option* amplitude = nullptr;
    CLI::Option* period = nullptr;
    CLI::Option* epsilon = nullptr;
    CLI::Option* tau = nullptr;
    CLI::Option* horizon = nullptr;
    CLI::Option* samples = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* log_ts = nullptr;
    CLI::Option* radius = nullptr;
    CLI::Option* threads = nullptr;
    CLI::Option* out = nullptr;
    CLI::Option* config = nullptr;

    void attach(CLI::App& cmd, bool with_policy) {
        policy_str = policy_name(default_policy);
        config = cmd.add_option("--config", config_path,
                                "key = value file with the base configuration; "
                                "flags given here override it");
        probs = cmd.add_option("--probs", values.probs, "reward probability per channel")
                    ->delimiter(',');
        users = cmd.add_option("--users", values.users, "team size")->capture_default_str();
        if (with_policy) {
            policy = cmd.add_option("--policy", policy_str, "bombe|tow|eg|softmax|ucb1t")
                         ->capture_default_str();
        }
        collision = cmd.add_option("--collision", collision_str, "lottery|split")
                        ->capture_default_str();
        omega = cmd.add_option("--omega", values.omega, "punishment weight")
                    ->capture_default_str();
        amplitude = cmd.add_option("--amplitude", values.amplitude, "oscillation amplitude")
                        ->capture_default_str();
        period = cmd.add_option("--period", values.period,
                                "oscillation period in slots (0: channel count)")
                     ->capture_default_str();
        epsilon = cmd.add_option("--epsilon", values.epsilon, "exploration rate (eg policy)")
                      ->capture_default_str();
        tau = cmd.add_option("--tau", values.tau, "temperature (softmax policy)")
                  ->capture_default_str();
        horizon = cmd.add_option("--horizon", values.horizon, "slots per sample")
                      ->capture_default_str();
        samples = cmd.add_option("--samples", values.samples, "independent runs")
                      ->capture_default_str();
        seed = cmd.add_option("--seed", values.seed, "master seed")->capture_default_str();
        log_ts = cmd.add_flag("--log-timeseries", values.log_timeseries,
                              "also write per-slot cumulative scores");
        radius = cmd.add_option("--radius", values.cluster_radius,
                                "L1 radius for outcome classification")
                     ->capture_default_str();
        threads = cmd.add_option("--threads", values.threads, "worker threads")
                      ->capture_default_str();
        out = cmd.add_option("--out", values.output_dir, "output directory")
                  ->capture_default_str();
    }

    ExperimentConfig effective() const {
        ExperimentConfig cfg;
        if (config->count() > 0) {
            cfg = load_config(config_path);
        } else {
            cfg.policy = default_policy;
        }
        if (probs->count() > 0) cfg.probs = values.probs;
        if (users->count() > 0) cfg.users = values.users;
        if (policy != nullptr && policy->count() > 0) cfg.policy = parse_policy(policy_str);
        if (collision->count() > 0) cfg.collision = parse_collision(collision_str);
        if (omega->count() > 0) cfg.omega = values.omega;
        if (amplitude->count() > 0) cfg.amplitude = values.amplitude;
        if (period->count() > 0) cfg.period = values.period;
        if (epsilon->count() > 0) cfg.epsilon = values.epsilon;
        if (tau->count() > 0) cfg.tau = values.tau;
        if (horizon->count() > 0) cfg.horizon = values.horizon;
        if (samples->count() > 0) cfg.samples = values.samples;
        if (seed->count() > 0) cfg.seed = values.seed;
        if (log_ts->count() > 0) cfg.log_timeseries = values.log_timeseries;
        if (radius->count() > 0) cfg.cluster_radius = values.cluster_radius;
        if (threads->count() > 0) cfg.threads = values.threads;
        if (out->count() > 0) cfg.output_dir = values.output_dir;
        if (cfg.probs.empty()) {
            throw std::runtime_error("no channels given; pass --probs or --config");
        }
        cfg.validate();
        return cfg;
    }
};

std::string join_g6(const std::vector<double>& values, const char* sep = ", ") {
    std::string text;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) text += sep;
        text += format_g6(values[i]);
    }
    return text;
}

void print_config(std::ostream& os, const ExperimentConfig& cfg) {
    os << "probs = " << join_g6(cfg.probs, ",") << "\n"
       << "users = " << cfg.users << "\n"
       << "policy = " << policy_name(cfg.policy) << "\n"
       << "collision = " << collision_name(cfg.collision) << "\n"
       << "omega = " << format_g6(cfg.omega) << "  amplitude = " << format_g6(cfg.amplitude)
       << "  period = " << cfg.period << "\n"
       << "horizon = " << cfg.horizon << "  samples = " << cfg.samples << "  seed = " << cfg.seed
       << "  threads = " << cfg.threads << "\n";
}

void print_summary(std::ostream& os, const ExperimentConfig& cfg, const RunSummary& summary) {
    os << "policy " << policy_name(cfg.policy) << ", " << cfg.users << " users on "
       << cfg.probs.size() << " channels, " << summary.samples << " samples of " << cfg.horizon
       << " slots\n";
    os << "mean per user: " << join_g6(summary.mean_per_user) << "\n";
    os << "mean total:    " << format_g6(summary.mean_total) << "\n";
    if (summary.classified) {
        const int channels = static_cast<int>(cfg.probs.size());
        os << "clusters:";
        for (std::size_t j = 0; j < summary.sm_actions.size(); ++j) {
            os << ' ' << action_label(summary.sm_actions[j], channels) << '='
               << summary.sm_counts[j];
        }
        os << " ne=" << summary.ne_count << " other=" << summary.unclassified_count << "\n";
    } else {
        os << "clusters: (action space too large to classify)\n";
    }
}

void report_outputs(std::ostream& os, const ExperimentConfig& cfg, bool timeseries) {
    os << "wrote " << cfg.output_dir << "/scores.csv";
    if (timeseries) os << ", " << cfg.output_dir << "/timeseries.csv";
    os << ", " << cfg.output_dir << "/summary.csv, " << cfg.output_dir << "/config.cfg\n";
}

int run_simulation(const ExperimentCli& options) {
    const ExperimentConfig cfg = options.effective();
    const int verbose = verbosity();
    if (verbose >= 2) print_config(std::cout, cfg);

    const std::vector<ScoreRecord> records = run_experiment(cfg);
    RunSummary summary;
    try {
        summary = summarize(records, cfg);
    } catch (const std::length_error&) {
        summary = summarize(records);
    }
    emit_csv(records, summary, cfg, cfg.output_dir);
    if (verbose >= 1) {
        print_summary(std::cout, cfg, summary);
        report_outputs(std::cout, cfg, cfg.log_timeseries);
    }
    return 0;
}

struct OmegaGrid {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;

    std::vector<double> points() const {
        std::vector<double> pts;
        for (double w = start; w <= stop + step * 1e-9; w += step) pts.push_back(w);
        return pts;
    }
};

OmegaGrid parse_grid(const std::string& text) {
    OmegaGrid grid;
    char c1 = 0;
    char c2 = 0;
    std::istringstream in(text);
    if (!(in >> grid.start >> c1 >> grid.stop >> c2 >> grid.step) || c1 != ':' || c2 != ':' ||
        !(in >> std::ws).eof()) {
        throw std::runtime_error("bad grid '" + text + "', expected start:stop:step");
    }
    if (grid.step <= 0.0 || grid.stop < grid.start) {
        throw std::runtime_error("bad grid '" + text + "': need step > 0 and stop >= start");
    }
    return grid;
}

int run_sweep(const ExperimentCli& options, const std::string& grid_text) {
    ExperimentConfig cfg = options.effective();
    const OmegaGrid grid = parse_grid(grid_text);
    const int verbose = verbosity();
    if (verbose >= 2) print_config(std::cout, cfg);

    // Anchors depend on the game, not on omega, so compute them once.
    bool classify = true;
    ScoreAnchors anchors;
    try {
        anchors = score_anchors(cfg);
    } catch (const std::length_error&) {
        classify = false;
    }

    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream out(std::filesystem::path(cfg.output_dir) / "sweep.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write to " + cfg.output_dir);
    out << "omega,mean_total";
    for (int i = 0; i < cfg.users; ++i) out << ",mean_user_" << i;
    if (classify) out << ",sm_fraction,ne_fraction,other_fraction";
    out << "\n";

    for (double omega : grid.points()) {
        cfg.omega = omega;
        const std::vector<ScoreRecord> records = run_experiment(cfg);
        const RunSummary means = summarize(records);
        out << format_g6(omega) << ',' << format_g6(means.mean_total);
        for (double m : means.mean_per_user) out << ',' << format_g6(m);
        std::string note;
        if (classify) {
            const Classification cls = classify_samples(records, anchors.sm_points,
                                                        anchors.ne_point, cfg.cluster_radius);
            const double n = static_cast<double>(records.size());
            const std::int64_t sm_total =
                std::accumulate(cls.sm_counts.begin(), cls.sm_counts.end(), std::int64_t{0});
            out << ',' << format_g6(sm_total / n) << ',' << format_g6(cls.ne_count / n) << ','
                << format_g6(cls.unclassified / n);
            note = "  sm_fraction=" + format_g6(sm_total / n);
        }
        out << "\n";
        if (verbose >= 1) {
            std::cout << "omega=" << format_g6(omega)
                      << "  mean_total=" << format_g6(means.mean_total) << note << "\n";
        }
    }
    save_config(cfg, (std::filesystem::path(cfg.output_dir) / "config.cfg").string());
    if (verbose >= 1) {
        std::cout << "wrote " << cfg.output_dir << "/sweep.csv, " << cfg.output_dir
                  << "/config.cfg\n";
    }
    return 0;
}

int run_oracle(const std::vector<double>& probs, int users, CollisionMode collision,
               std::int64_t max_actions, const std::string& csv_path) {
    ChannelModel model{probs, collision};
    const PayoffTensor tensor(model, users, max_actions);
    const int channels = tensor.channels();
    auto [maxima, value] = social_maxima(tensor);
    const std::vector<JointAction> equilibria = nash_equilibria(tensor);

    if (verbosity() >= 1) {
        std::cout << "channels: " << channels << "  users: " << users
                  << "  joint actions: " << tensor.num_actions() << "\n";
        std::cout << "social maximum value: " << format_g6(value) << "\n";
        std::cout << "social maxima (" << maxima.size() << "):\n";
        for (const JointAction& action : maxima) {
            std::cout << "  " << action_label(action, channels)
                      << "  payoffs: " << join_g6(tensor.payoff(action)) << "\n";
        }
        std::cout << "pure nash equilibria (" << equilibria.size() << "):\n";
        for (const JointAction& action : equilibria) {
            std::cout << "  " << action_label(action, channels)
                      << "  payoffs: " << join_g6(tensor.payoff(action)) << "\n";
        }
    }

    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + csv_path + " for writing");
        std::vector<char> is_sm(tensor.num_actions(), 0);
        std::vector<char> is_ne(tensor.num_actions(), 0);
        for (const JointAction& action : maxima) is_sm[tensor.rank(action)] = 1;
        for (const JointAction& action : equilibria) is_ne[tensor.rank(action)] = 1;
        for (int i = 0; i < users; ++i) out << "choice_" << i << ',';
        for (int i = 0; i < users; ++i) out << "payoff_" << i << ',';
        out << "total,is_sm,is_ne\n";
        for (std::int64_t r = 0; r < tensor.num_actions(); ++r) {
            const JointAction action = tensor.unrank(r);
            for (int i = 0; i < users; ++i) {
                if (channels <= 26) {
                    out << static_cast<char>('A' + action[i]);
                } else {
                    out << action[i];
                }
                out << ',';
            }
            for (int i = 0; i < users; ++i) out << format_g6(tensor.payoff(r, i)) << ',';
            out << format_g6(tensor.total(r)) << ',' << int(is_sm[r]) << ',' << int(is_ne[r])
                << "\n";
        }
        if (verbosity() >= 1) std::cout << "wrote " << csv_path << "\n";
    }
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"tug-of-war bandit team simulator"};
    app.require_subcommand(1);

    ExperimentCli sim_options;
    CLI::App* simulate = app.add_subcommand("simulate", "run sampled trajectories of one policy");
    sim_options.attach(*simulate, true);

    ExperimentCli base_options;
    base_options.default_policy = PolicyKind::IndependentUcb1Tuned;
    CLI::App* baseline =
        app.add_subcommand("baseline", "run an uncoupled reference policy (default ucb1t)");
    base_options.attach(*baseline, true);

    ExperimentCli sweep_options;
    std::string grid_text;
    CLI::App* sweep =
        app.add_subcommand("sweep-omega", "rerun the experiment over a grid of omega values");
    sweep_options.attach(*sweep, true);
    sweep->add_option("--grid", grid_text, "omega grid as start:stop:step")->required();

    std::vector<double> oracle_probs;
    int oracle_users = 3;
    std::string oracle_collision = "lottery";
    std::int64_t oracle_cap = PayoffTensor::kDefaultMaxActions;
    std::string oracle_csv;
    CLI::App* oracle =
        app.add_subcommand("oracle", "enumerate the expected-payoff game exactly");
    oracle->add_option("--probs", oracle_probs, "reward probability per channel")
        ->delimiter(',')
        ->required();
    oracle->add_option("--users", oracle_users, "team size")->capture_default_str();
    oracle->add_option("--collision", oracle_collision, "lottery|split")->capture_default_str();
    oracle->add_option("--max-actions", oracle_cap, "refuse larger joint-action spaces")
        ->capture_default_str();
    oracle->add_option("--csv", oracle_csv, "also dump the full payoff tensor to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (simulate->parsed()) return run_simulation(sim_options);
        if (baseline->parsed()) {
            if (base_options.effective().policy == PolicyKind::Bombe) {
                throw std::runtime_error("baseline runs an uncoupled policy; "
                                         "use the simulate subcommand for bombe");
            }
            return run_simulation(base_options);
        }
        if (sweep->parsed()) return run_sweep(sweep_options, grid_text);
        if (oracle->parsed()) {
            return run_oracle(oracle_probs, oracle_users, parse_collision(oracle_collision),
                              oracle_cap, oracle_csv);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace towbombe
