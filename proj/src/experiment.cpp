#include "towbombe/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "towbombe/bombe.hpp"
#include "towbombe/policies.hpp"

namespace towbombe {

std::string policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Bombe: return "bombe";
        case PolicyKind::IndependentTow: return "tow";
        case PolicyKind::IndependentEpsilonGreedy: return "eg";
        case PolicyKind::IndependentSoftmax: return "softmax";
        case PolicyKind::IndependentUcb1Tuned: return "ucb1t";
    }
    return "bombe";
}

PolicyKind parse_policy(const std::string& name) {
    if (name == "bombe") return PolicyKind::Bombe;
    if (name == "tow") return PolicyKind::IndependentTow;
    if (name == "eg") return PolicyKind::IndependentEpsilonGreedy;
    if (name == "softmax") return PolicyKind::IndependentSoftmax;
    if (name == "ucb1t") return PolicyKind::IndependentUcb1Tuned;
    throw std::invalid_argument("unknown policy '" + name +
                                "' (expected bombe|tow|eg|softmax|ucb1t)");
}

std::string collision_name(CollisionMode mode) {
    return mode == CollisionMode::CoinLottery ? "lottery" : "split";
}

CollisionMode parse_collision(const std::string& name) {
    if (name == "lottery") return CollisionMode::CoinLottery;
    if (name == "split") return CollisionMode::FractionalSplit;
    throw std::invalid_argument("unknown collision mode '" + name + "' (expected lottery|split)");
}

void ExperimentConfig::validate() const {
    ChannelModel{probs, collision}.validate();
    if (probs.size() < 2) throw std::invalid_argument("config: needs at least two channels");
    if (users < 1) throw std::invalid_argument("config: users must be >= 1");
    if (policy == PolicyKind::Bombe && users < 2) {
        throw std::invalid_argument("config: the coupled device needs at least two users");
    }
    if (omega < 0.0) throw std::invalid_argument("config: omega must be >= 0");
    if (amplitude < 0.0) throw std::invalid_argument("config: amplitude must be >= 0");
    if (period < 0 || period == 1) throw std::invalid_argument("config: period must be 0 or >= 2");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("config: epsilon outside [0,1]");
    if (!(tau > 0.0)) throw std::invalid_argument("config: tau must be > 0");
    if (horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");
    if (samples < 1) throw std::invalid_argument("config: samples must be >= 1");
    if (!(cluster_radius > 0.0)) throw std::invalid_argument("config: cluster_radius must be > 0");
    if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
}

namespace {

ChannelModel model_of(const ExperimentConfig& config) {
    return ChannelModel{config.probs, config.collision};
}

AnyPolicy make_member(const ExperimentConfig& config) {
    const int n = static_cast<int>(config.probs.size());
    switch (config.policy) {
        case PolicyKind::IndependentTow:
            return IndependentTow(n, config.omega, config.amplitude, config.period);
        case PolicyKind::IndependentEpsilonGreedy:
            return EpsilonGreedy(n, config.epsilon);
        case PolicyKind::IndependentSoftmax:
            return SoftmaxPolicy(n, config.tau);
        case PolicyKind::IndependentUcb1Tuned:
            return Ucb1Tuned(n);
        case PolicyKind::Bombe:
            break;
    }
    throw std::logic_error("make_member: not a team policy");
}

ScoreRecord run_sample(const ExperimentConfig& config, int sample_id) {
    const std::uint64_t sample_seed = derive_seed(config.seed, static_cast<std::uint64_t>(sample_id));
    RandomStream main_stream = derive_stream(sample_seed, 0);
    const ChannelModel model = model_of(config);

    ScoreRecord record;
    record.sample_id = sample_id;
    record.scores.assign(config.users, 0.0);
    if (config.log_timeseries) {
        record.cumulative.assign(config.users, std::vector<double>(config.horizon, 0.0));
    }

    auto account = [&](const SlotOutcome& outcome, int t) {
        for (int i = 0; i < config.users; ++i) {
            record.scores[i] += outcome.rewards[i];
            if (config.log_timeseries) record.cumulative[i][t] = record.scores[i];
        }
    };

    if (config.policy == PolicyKind::Bombe) {
        BombeConfig bombe{config.users, static_cast<int>(config.probs.size()), config.omega,
                          config.amplitude, config.period};
        BombeState state = init(bombe);
        for (int t = 0; t < config.horizon; ++t) {
            account(run_slot(bombe, state, model, main_stream).outcome, t);
        }
    } else {
        Team team;
        team.members.reserve(config.users);
        team.streams.reserve(config.users);
        for (int i = 0; i < config.users; ++i) {
            team.members.push_back(make_member(config));
            team.streams.push_back(derive_stream(sample_seed, 1 + static_cast<std::uint64_t>(i)));
        }
        for (int t = 0; t < config.horizon; ++t) {
            account(team_slot(team, model, main_stream).outcome, t);
        }
    }
    return record;
}

}  // namespace

std::vector<ScoreRecord> run_experiment(const ExperimentConfig& config) {
    config.validate();
    std::vector<ScoreRecord> records(config.samples);
    if (config.threads == 1) {
        for (int s = 0; s < config.samples; ++s) records[s] = run_sample(config, s);
        return records;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(config.threads, config.samples);
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int s = next.fetch_add(1); s < config.samples; s = next.fetch_add(1)) {
                records[s] = run_sample(config, s);
            }
        });
    }
    for (auto& worker : pool) worker.join();
    return records;
}

ScoreAnchors score_anchors(const ExperimentConfig& config) {
    config.validate();
    const PayoffTensor tensor = build_tensor(model_of(config), config.users);
    ScoreAnchors anchors;
    auto [sm, value] = social_maxima(tensor);
    (void)value;
    anchors.sm_actions = std::move(sm);
    for (const JointAction& action : anchors.sm_actions) {
        std::vector<double> point = tensor.payoff(action);
        for (double& v : point) v *= config.horizon;
        anchors.sm_points.push_back(std::move(point));
    }
    const std::vector<JointAction> equilibria = nash_equilibria(tensor);
    if (!equilibria.empty()) {
        // anchor on the highest-total equilibrium (first on ties)
        const JointAction* best = &equilibria.front();
        for (const JointAction& ne : equilibria) {
            if (tensor.total(ne) > tensor.total(*best)) best = &ne;
        }
        anchors.ne_point = tensor.payoff(*best);
        for (double& v : anchors.ne_point) v *= config.horizon;
    }
    return anchors;
}

namespace {

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
    return d;
}

}  // namespace

Classification classify_samples(const std::vector<ScoreRecord>& records,
                                const std::vector<std::vector<double>>& sm_points,
                                const std::vector<double>& ne_point, double radius) {
    if (sm_points.empty()) throw std::invalid_argument("classify_samples: no anchor points");
    if (!(radius > 0.0)) throw std::invalid_argument("classify_samples: radius must be > 0");

    Classification result;
    result.sm_counts.assign(sm_points.size(), 0);
    for (const ScoreRecord& record : records) {
        int best_sm = -1;
        double best_sm_dist = 0.0;
        for (std::size_t j = 0; j < sm_points.size(); ++j) {
            const double d = l1_distance(record.scores, sm_points[j]);
            if (best_sm < 0 || d < best_sm_dist) {
                best_sm = static_cast<int>(j);
                best_sm_dist = d;
            }
        }
        const double ne_dist =
            ne_point.empty() ? std::numeric_limits<double>::infinity()
                             : l1_distance(record.scores, ne_point);
        if (best_sm_dist <= radius && best_sm_dist <= ne_dist) {
            ++result.sm_counts[best_sm];
        } else if (ne_dist <= radius) {
            ++result.ne_count;
        } else {
            ++result.unclassified;
        }
    }
    return result;
}

RunSummary summarize(const std::vector<ScoreRecord>& records) {
    if (records.empty()) throw std::invalid_argument("summarize: no records");
    RunSummary summary;
    summary.samples = static_cast<std::int64_t>(records.size());
    summary.mean_per_user.assign(records.front().scores.size(), 0.0);
    for (const ScoreRecord& record : records) {
        for (std::size_t i = 0; i < record.scores.size(); ++i) {
            summary.mean_per_user[i] += record.scores[i];
        }
    }
    for (double& v : summary.mean_per_user) v /= static_cast<double>(records.size());
    summary.mean_total = 0.0;
    for (double v : summary.mean_per_user) summary.mean_total += v;
    return summary;
}

RunSummary summarize(const std::vector<ScoreRecord>& records, const ExperimentConfig& config) {
    RunSummary summary = summarize(records);
    const ScoreAnchors anchors = score_anchors(config);
    const Classification cls =
        classify_samples(records, anchors.sm_points, anchors.ne_point, config.cluster_radius);
    summary.classified = true;
    summary.sm_actions = anchors.sm_actions;
    summary.sm_counts = cls.sm_counts;
    summary.ne_count = cls.ne_count;
    summary.unclassified_count = cls.unclassified;
    return summary;
}

std::string format_g6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

std::string format_exact(double value) {
    char buf[64];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return buf;
}

std::string action_label(const JointAction& action, int channels) {
    std::string label;
    for (std::size_t i = 0; i < action.size(); ++i) {
        if (i > 0) label += '-';
        if (channels <= 26) {
            label += static_cast<char>('A' + action[i]);
        } else {
            label += std::to_string(action[i]);
        }
    }
    return label;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace

void emit_csv(const std::vector<ScoreRecord>& records, const RunSummary& summary,
              const ExperimentConfig& config, const std::string& output_dir) {
    const std::filesystem::path dir(output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

    {
        std::ofstream out = open_out(dir / "scores.csv");
        out << "sample_id";
        for (int i = 0; i < config.users; ++i) out << ",user_" << i;
        out << "\n";
        for (const ScoreRecord& record : records) {
            out << record.sample_id;
            for (double score : record.scores) out << ',' << format_g6(score);
            out << "\n";
        }
    }

    const bool have_timeseries =
        !records.empty() && !records.front().cumulative.empty();
    if (have_timeseries) {
        std::ofstream out = open_out(dir / "timeseries.csv");
        out << "t";
        for (int i = 0; i < config.users; ++i) out << ",mean_user_" << i;
        out << ",mean_total\n";
        const auto n = static_cast<double>(records.size());
        for (int t = 0; t < config.horizon; ++t) {
            out << (t + 1);
            double total = 0.0;
            for (int i = 0; i < config.users; ++i) {
                double sum = 0.0;
                for (const ScoreRecord& record : records) sum += record.cumulative[i][t];
                out << ',' << format_g6(sum / n);
                total += sum / n;
            }
            out << ',' << format_g6(total) << "\n";
        }
    }

    {
        std::ofstream out = open_out(dir / "summary.csv");
        out << "metric,value\n";
        out << "samples," << summary.samples << "\n";
        for (std::size_t i = 0; i < summary.mean_per_user.size(); ++i) {
            out << "mean_user_" << i << ',' << format_g6(summary.mean_per_user[i]) << "\n";
        }
        out << "mean_total," << format_g6(summary.mean_total) << "\n";
        if (summary.classified) {
            const int channels = static_cast<int>(config.probs.size());
            for (std::size_t j = 0; j < summary.sm_actions.size(); ++j) {
                out << "cluster_" << action_label(summary.sm_actions[j], channels) << ','
                    << summary.sm_counts[j] << "\n";
            }
            out << "ne_count," << summary.ne_count << "\n";
            out << "unclassified_count," << summary.unclassified_count << "\n";
        }
    }

    save_config(config, (dir / "config.cfg").string());
}

void save_config(const ExperimentConfig& config, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "# experiment configuration (key = value); reload with --config\n";
    out << "probs = ";
    for (std::size_t i = 0; i < config.probs.size(); ++i) {
        if (i > 0) out << ',';
        out << format_exact(config.probs[i]);
    }
    out << "\n";
    out << "users = " << config.users << "\n";
    out << "policy = " << policy_name(config.policy) << "\n";
    out << "collision = " << collision_name(config.collision) << "\n";
    out << "omega = " << format_exact(config.omega) << "\n";
    out << "amplitude = " << format_exact(config.amplitude) << "\n";
    out << "period = " << config.period << "\n";
    out << "epsilon = " << format_exact(config.epsilon) << "\n";
    out << "tau = " << format_exact(config.tau) << "\n";
    out << "horizon = " << config.horizon << "\n";
    out << "samples = " << config.samples << "\n";
    out << "seed = " << config.seed << "\n";
    out << "log_timeseries = " << (config.log_timeseries ? 1 : 0) << "\n";
    out << "cluster_radius = " << format_exact(config.cluster_radius) << "\n";
    out << "threads = " << config.threads << "\n";
    out << "output_dir = " << config.output_dir << "\n";
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_probs(const std::string& value) {
    std::vector<double> probs;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::size_t used = 0;
        probs.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument("bad probability '" + item + "'");
    }
    return probs;
}

bool parse_bool(const std::string& value) {
    if (value == "1" || value == "true") return true;
    if (value == "0" || value == "false") return false;
    throw std::invalid_argument("bad boolean '" + value + "'");
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "probs") config.probs = parse_probs(value);
            else if (key == "users") config.users = std::stoi(value);
            else if (key == "policy") config.policy = parse_policy(value);
            else if (key == "collision") config.collision = parse_collision(value);
            else if (key == "omega") config.omega = std::stod(value);
            else if (key == "amplitude") config.amplitude = std::stod(value);
            else if (key == "period") config.period = std::stoi(value);
            else if (key == "epsilon") config.epsilon = std::stod(value);
            else if (key == "tau") config.tau = std::stod(value);
            else if (key == "horizon") config.horizon = std::stoi(value);
            else if (key == "samples") config.samples = std::stoi(value);
            else if (key == "seed") config.seed = std::stoull(value);
            else if (key == "log_timeseries") config.log_timeseries = parse_bool(value);
            else if (key == "cluster_radius") config.cluster_radius = std::stod(value);
            else if (key == "threads") config.threads = std::stoi(value);
            else if (key == "output_dir") config.output_dir = value;
            else throw std::invalid_argument("unknown key '" + key + "'");
        } catch (const std::invalid_argument& err) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + err.what());
        }
    }
    return config;
}

}  // namespace towbombe
