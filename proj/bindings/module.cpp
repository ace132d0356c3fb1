#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "towbombe/bombe.hpp"
#include "towbombe/channel.hpp"
#include "towbombe/experiment.hpp"
#include "towbombe/game.hpp"
#include "towbombe/rng.hpp"
#include "towbombe/tow.hpp"

namespace py = pybind11;

using namespace towbombe;

PYBIND11_MODULE(_core, m) {
    m.doc() = "tug-of-war bandit teams: channel model, coupled device, game oracle";

    py::class_<RandomStream>(m, "Rng", "deterministic 64-bit generator stream")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("__call__", [](RandomStream& rng) { return rng(); });
    m.def("derive_seed", &towbombe::derive_seed, py::arg("master"), py::arg("index"));
    m.def("derive_stream", &towbombe::derive_stream, py::arg("master"), py::arg("index"));

    py::enum_<CollisionMode>(m, "CollisionMode")
        .value("CoinLottery", CollisionMode::CoinLottery)
        .value("FractionalSplit", CollisionMode::FractionalSplit);

    py::class_<ChannelModel>(m, "ChannelModel")
        .def(py::init([](std::vector<double> probs, CollisionMode collision) {
                 return ChannelModel{std::move(probs), collision};
             }),
             py::arg("probs"), py::arg("collision") = CollisionMode::CoinLottery)
        .def_readwrite("probs", &ChannelModel::probs)
        .def_readwrite("collision", &ChannelModel::collision)
        .def("channels", &ChannelModel::channels)
        .def("validate", &ChannelModel::validate);

    py::class_<SlotOutcome>(m, "SlotOutcome")
        .def_readonly("free", &SlotOutcome::free)
        .def_readonly("rewards", &SlotOutcome::rewards)
        .def_readonly("rewarded", &SlotOutcome::rewarded);

    m.def("step", &towbombe::step, py::arg("model"), py::arg("action"), py::arg("rng"));
    m.def("expected_payoff", &towbombe::expected_payoff, py::arg("model"), py::arg("action"));

    py::enum_<Machine>(m, "Machine").value("A", Machine::A).value("B", Machine::B);
    m.def("other", &towbombe::other);

    py::class_<TowState>(m, "TowState")
        .def(py::init<>())
        .def(py::init([](double omega) {
                 TowState s;
                 s.omega = omega;
                 return s;
             }),
             py::arg("omega"))
        .def_readwrite("plays", &TowState::plays)
        .def_readwrite("failures", &TowState::failures)
        .def_readwrite("omega", &TowState::omega);

    py::class_<Fluctuation> fluct(m, "Fluctuation");
    py::enum_<Fluctuation::Kind>(fluct, "Kind")
        .value("NoFluct", Fluctuation::Kind::None)
        .value("Gaussian", Fluctuation::Kind::Gaussian)
        .value("Alternating", Fluctuation::Kind::Alternating);
    fluct.def_static("none", &Fluctuation::none)
        .def_static("gaussian", &Fluctuation::gaussian, py::arg("sigma"))
        .def_static("alternating", &Fluctuation::alternating, py::arg("amplitude"))
        .def("sample", &Fluctuation::sample, py::arg("rng"), py::arg("t"));

    m.def("q_estimate", &towbombe::q_estimate, py::arg("state"), py::arg("machine"));
    m.def("tow_update", &towbombe::update, py::arg("state"), py::arg("machine"), py::arg("rewarded"));
    m.def("displacement", &towbombe::displacement, py::arg("state"), py::arg("delta"));
    m.def("tow_select", &towbombe::select, py::arg("state"), py::arg("fluctuation"), py::arg("rng"),
          py::arg("t"));
    m.def("omega0", &towbombe::omega0, py::arg("gamma"));
    m.def("omega0_multi", &towbombe::omega0_multi, py::arg("probs"), py::arg("users"));
    m.def("q_prime", &towbombe::q_prime, py::arg("state"), py::arg("gamma"), py::arg("machine"));
    m.def("q_double_prime", &towbombe::q_double_prime, py::arg("state"), py::arg("gamma"),
          py::arg("machine"));

    py::class_<BombeConfig>(m, "BombeConfig")
        .def(py::init([](int users, int channels, double omega, double amplitude, int period) {
                 return BombeConfig{users, channels, omega, amplitude, period};
             }),
             py::arg("users") = 2, py::arg("channels") = 2, py::arg("omega") = 0.0,
             py::arg("amplitude") = 0.0, py::arg("period") = 0)
        .def_readwrite("users", &BombeConfig::users)
        .def_readwrite("channels", &BombeConfig::channels)
        .def_readwrite("omega", &BombeConfig::omega)
        .def_readwrite("amplitude", &BombeConfig::amplitude)
        .def_readwrite("period", &BombeConfig::period)
        .def("effective_period", &BombeConfig::effective_period)
        .def("validate", &BombeConfig::validate);

    py::class_<BombeState>(m, "BombeState")
        .def(py::init<>())
        .def_readwrite("q", &BombeState::q)
        .def_readwrite("t", &BombeState::t);

    m.def("bombe_init", &towbombe::init, py::arg("config"));
    m.def("osc_value", &towbombe::osc_value, py::arg("amplitude"), py::arg("period"), py::arg("t"),
          py::arg("channel"));
    m.def("height_row", &towbombe::height_row, py::arg("q_row"));
    m.def("heights", &towbombe::heights, py::arg("config"), py::arg("state"));
    m.def("select_all", &towbombe::select_all, py::arg("config"), py::arg("state"), py::arg("rng"));
    m.def("apply_results", &towbombe::apply_results, py::arg("config"), py::arg("state"), py::arg("action"),
          py::arg("rewarded"));

    py::class_<SlotResult>(m, "SlotResult")
        .def_readonly("action", &SlotResult::action)
        .def_readonly("outcome", &SlotResult::outcome);
    m.def("run_slot", &towbombe::run_slot, py::arg("config"), py::arg("state"), py::arg("model"),
          py::arg("rng"));

    py::class_<PayoffTensor>(m, "PayoffTensor")
        .def(py::init<ChannelModel, int, std::int64_t>(), py::arg("model"), py::arg("users"),
             py::arg("max_actions") = PayoffTensor::kDefaultMaxActions)
        .def("users", &PayoffTensor::users)
        .def("channels", &PayoffTensor::channels)
        .def("num_actions", &PayoffTensor::num_actions)
        .def("rank", &PayoffTensor::rank, py::arg("action"))
        .def("unrank", &PayoffTensor::unrank, py::arg("rank"))
        .def("payoff", py::overload_cast<std::int64_t, int>(&PayoffTensor::payoff, py::const_),
             py::arg("rank"), py::arg("user"))
        .def("payoff", py::overload_cast<const JointAction&>(&PayoffTensor::payoff, py::const_),
             py::arg("action"))
        .def("total", py::overload_cast<std::int64_t>(&PayoffTensor::total, py::const_),
             py::arg("rank"))
        .def("total", py::overload_cast<const JointAction&>(&PayoffTensor::total, py::const_),
             py::arg("action"));

    m.def("social_maxima", &towbombe::social_maxima, py::arg("tensor"));
    m.def("nash_equilibria", &towbombe::nash_equilibria, py::arg("tensor"));

    py::class_<GameSolution>(m, "GameSolution")
        .def_readonly("social_maxima", &GameSolution::social_maxima)
        .def_readonly("sm_value", &GameSolution::sm_value)
        .def_readonly("nash_equilibria", &GameSolution::nash_equilibria);
    m.def("solve", &towbombe::solve, py::arg("model"), py::arg("users"),
          py::arg("max_actions") = PayoffTensor::kDefaultMaxActions);

    py::enum_<PolicyKind>(m, "PolicyKind")
        .value("Bombe", PolicyKind::Bombe)
        .value("IndependentTow", PolicyKind::IndependentTow)
        .value("IndependentEpsilonGreedy", PolicyKind::IndependentEpsilonGreedy)
        .value("IndependentSoftmax", PolicyKind::IndependentSoftmax)
        .value("IndependentUcb1Tuned", PolicyKind::IndependentUcb1Tuned);
    m.def("policy_name", &towbombe::policy_name);
    m.def("parse_policy", &towbombe::parse_policy);
    m.def("collision_name", &towbombe::collision_name);
    m.def("parse_collision", &towbombe::parse_collision);
    m.attr("DEFAULT_AMPLITUDE") = kDefaultAmplitude;

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("probs", &ExperimentConfig::probs)
        .def_readwrite("users", &ExperimentConfig::users)
        .def_readwrite("policy", &ExperimentConfig::policy)
        .def_readwrite("collision", &ExperimentConfig::collision)
        .def_readwrite("omega", &ExperimentConfig::omega)
        .def_readwrite("amplitude", &ExperimentConfig::amplitude)
        .def_readwrite("period", &ExperimentConfig::period)
        .def_readwrite("epsilon", &ExperimentConfig::epsilon)
        .def_readwrite("tau", &ExperimentConfig::tau)
        .def_readwrite("horizon", &ExperimentConfig::horizon)
        .def_readwrite("samples", &ExperimentConfig::samples)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("log_timeseries", &ExperimentConfig::log_timeseries)
        .def_readwrite("cluster_radius", &ExperimentConfig::cluster_radius)
        .def_readwrite("threads", &ExperimentConfig::threads)
        .def_readwrite("output_dir", &ExperimentConfig::output_dir)
        .def("validate", &ExperimentConfig::validate);

    py::class_<ScoreRecord>(m, "ScoreRecord")
        .def_readonly("sample_id", &ScoreRecord::sample_id)
        .def_readonly("scores", &ScoreRecord::scores)
        .def_readonly("cumulative", &ScoreRecord::cumulative);

    py::class_<ScoreAnchors>(m, "ScoreAnchors")
        .def_readonly("sm_actions", &ScoreAnchors::sm_actions)
        .def_readonly("sm_points", &ScoreAnchors::sm_points)
        .def_readonly("ne_point", &ScoreAnchors::ne_point);

    py::class_<Classification>(m, "Classification")
        .def_readonly("sm_counts", &Classification::sm_counts)
        .def_readonly("ne_count", &Classification::ne_count)
        .def_readonly("unclassified", &Classification::unclassified);

    py::class_<RunSummary>(m, "RunSummary")
        .def_readonly("samples", &RunSummary::samples)
        .def_readonly("mean_per_user", &RunSummary::mean_per_user)
        .def_readonly("mean_total", &RunSummary::mean_total)
        .def_readonly("classified", &RunSummary::classified)
        .def_readonly("sm_actions", &RunSummary::sm_actions)
        .def_readonly("sm_counts", &RunSummary::sm_counts)
        .def_readonly("ne_count", &RunSummary::ne_count)
        .def_readonly("unclassified_count", &RunSummary::unclassified_count);

    m.def("run_experiment", &towbombe::run_experiment, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("score_anchors", &towbombe::score_anchors, py::arg("config"));
    m.def("classify_samples", &towbombe::classify_samples, py::arg("records"), py::arg("sm_points"),
          py::arg("ne_point"), py::arg("radius"));
    m.def("summarize", py::overload_cast<const std::vector<ScoreRecord>&>(&summarize),
          py::arg("records"));
    m.def("summarize",
          py::overload_cast<const std::vector<ScoreRecord>&, const ExperimentConfig&>(&summarize),
          py::arg("records"), py::arg("config"));
    m.def("emit_csv", &towbombe::emit_csv, py::arg("records"), py::arg("summary"), py::arg("config"),
          py::arg("output_dir"));
    m.def("save_config", &towbombe::save_config, py::arg("config"), py::arg("path"));
    m.def("load_config", &towbombe::load_config, py::arg("path"));
    m.def("action_label", &towbombe::action_label, py::arg("action"), py::arg("channels"));
}
