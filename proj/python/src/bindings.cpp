#include <optional>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cqroute/commands.hpp"
#include "cqroute/errors.hpp"
#include "cqroute/figures.hpp"

namespace py = pybind11;
using namespace cqroute;

namespace {

ReportOptions report_options(std::size_t points, const Cscq& qubit, bool strict_phase) {
    ReportOptions options;
    options.points = points;
    options.qubit = qubit;
    options.phase = strict_phase ? PhaseConvention::Strict : PhaseConvention::Rotated;
    return options;
}

// Complex amplitudes u_x(t) of the evolved source, one row per time.
Eigen::MatrixXcd evolve_amplitudes(const NetworkConfig& config, const std::vector<double>& times, Mode source) {
    const Spectrum spectrum(build_coupling_matrix(config));
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(times.size()), spectrum.dim());
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(times[k] >= 0.0)) throw std::invalid_argument("times must be non-negative");
        out.row(static_cast<Eigen::Index>(k)) = spectrum.evolution_row(times[k], mode_ordinal(config, source));
    }
    return out;
}

TransferCoefficients coefficients(int n_receivers, const Eigen::VectorXcd& amplitudes) {
    if (amplitudes.size() != mode_count(n_receivers)) {
        throw std::invalid_argument("expected " + std::to_string(mode_count(n_receivers)) + " amplitudes");
    }
    return {0.0, n_receivers, amplitudes};
}

}  // namespace

PYBIND11_MODULE(_cqroute, m) {
    m.doc() = "Selective quantum state routing in cavity-QED star networks";
    m.attr("__version__") = "0.1.0";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
    py::register_exception<ParseError>(m, "ParseError", error.ptr());
    py::register_exception<DegenerateQubit>(m, "DegenerateQubit", error.ptr());
    py::register_exception<NoTransferPeak>(m, "NoTransferPeak", error.ptr());
    py::register_exception<DimensionGuard>(m, "DimensionGuard", error.ptr());
    py::register_exception<ExcessiveTruncation>(m, "ExcessiveTruncation", error.ptr());
    py::register_exception<EvolutionFailure>(m, "EvolutionFailure", error.ptr());
    py::register_exception<EigenFailure>(m, "EigenFailure", error.ptr());

    py::class_<TernarySet>(m, "TernarySet")
        .def(py::init([](double g, double delta) { return TernarySet{g, delta}; }), py::arg("g"), py::arg("delta"))
        .def_readwrite("g", &TernarySet::g)
        .def_readwrite("delta", &TernarySet::delta)
        .def("__eq__", [](const TernarySet& a, const TernarySet& b) { return a == b; })
        .def("__repr__", [](const TernarySet& s) {
            return "TernarySet(g=" + format_number(s.g) + ", delta=" + format_number(s.delta) + ")";
        });

    py::class_<NetworkConfig>(m, "NetworkConfig")
        .def(py::init([](std::vector<TernarySet> sets, std::optional<int> n_receivers, double hop, int active_sender,
                         double frame_offset) {
                 NetworkConfig c;
                 c.n_receivers = n_receivers ? *n_receivers : static_cast<int>(sets.size());
                 c.sets = std::move(sets);
                 c.hop = hop;
                 c.active_sender = active_sender;
                 c.frame_offset = frame_offset;
                 c.validate();
                 return c;
             }),
             py::arg("sets"), py::arg("n_receivers") = py::none(), py::arg("hop") = 1.0, py::arg("active_sender") = 1,
             py::arg("frame_offset") = 0.0)
        .def_readwrite("n_receivers", &NetworkConfig::n_receivers)
        .def_readwrite("hop", &NetworkConfig::hop)
        .def_readwrite("sets", &NetworkConfig::sets)
        .def_readwrite("active_sender", &NetworkConfig::active_sender)
        .def_readwrite("frame_offset", &NetworkConfig::frame_offset)
        .def("validate", &NetworkConfig::validate)
        .def("__eq__", [](const NetworkConfig& a, const NetworkConfig& b) { return a == b; });

    py::enum_<ModeKind>(m, "ModeKind")
        .value("SenderField", ModeKind::SenderField)
        .value("SenderExciton", ModeKind::SenderExciton)
        .value("ChannelField", ModeKind::ChannelField)
        .value("ChannelExciton", ModeKind::ChannelExciton)
        .value("ReceiverField", ModeKind::ReceiverField)
        .value("ReceiverExciton", ModeKind::ReceiverExciton);

    py::class_<Mode>(m, "Mode")
        .def_readonly("kind", &Mode::kind)
        .def_readonly("j", &Mode::j)
        .def_static("sender_field", &Mode::sender_field)
        .def_static("sender_exciton", &Mode::sender_exciton)
        .def_static("channel_field", &Mode::channel_field)
        .def_static("channel_exciton", &Mode::channel_exciton, py::arg("j"))
        .def_static("receiver_field", &Mode::receiver_field, py::arg("j"))
        .def_static("receiver_exciton", &Mode::receiver_exciton, py::arg("j"))
        .def("is_field", &Mode::is_field)
        .def("__eq__", [](const Mode& a, const Mode& b) { return a == b; })
        .def("__repr__", [](const Mode& mode) { return to_string(mode); });

    m.def("mode_count", &mode_count, py::arg("n_receivers"));
    m.def("mode_ordinal", py::overload_cast<int, Mode>(&mode_ordinal), py::arg("n_receivers"), py::arg("mode"));

    py::class_<Cscq>(m, "Cscq")
        .def(py::init([](complex mu, complex nu, complex alpha) { return Cscq{mu, nu, alpha}; }), py::arg("mu") = 1.0,
             py::arg("nu") = 1.0, py::arg("alpha") = 0.5)
        .def_readwrite("mu", &Cscq::mu)
        .def_readwrite("nu", &Cscq::nu)
        .def_readwrite("alpha", &Cscq::alpha)
        .def("normalization", [](const Cscq& q) { return normalization(q); });

    py::class_<TransferReport>(m, "TransferReport")
        .def_readonly("target", &TransferReport::target)
        .def_readonly("horizon", &TransferReport::horizon)
        .def_readonly("points", &TransferReport::points)
        .def_readonly("t_star", &TransferReport::t_star)
        .def_readonly("peak_population", &TransferReport::peak_population)
        .def_readonly("crosstalk", &TransferReport::crosstalk)
        .def_readonly("confinement_defect", &TransferReport::confinement_defect)
        .def_readonly("max_field_population", &TransferReport::max_field_population)
        .def_readonly("fidelity_at_t_star", &TransferReport::fidelity_at_t_star)
        .def_readonly("sets_distinct", &TransferReport::sets_distinct)
        .def_property_readonly("selective", &TransferReport::selective)
        .def("to_json", [](const TransferReport& r) { return report_to_json(r); });

    py::class_<OracleComparison>(m, "OracleComparison")
        .def_readonly("cutoff", &OracleComparison::cutoff)
        .def_readonly("dimension", &OracleComparison::dimension)
        .def_readonly("horizon", &OracleComparison::horizon)
        .def_readonly("t_star", &OracleComparison::t_star)
        .def_readonly("truncation_weight", &OracleComparison::truncation_weight)
        .def_readonly("single_excitation_deviation", &OracleComparison::single_excitation_deviation)
        .def_readonly("fidelity_deviation", &OracleComparison::fidelity_deviation)
        .def_readonly("mean_photon_deviation", &OracleComparison::mean_photon_deviation)
        .def_property_readonly("passed", &OracleComparison::passed);

    m.def("figure_ids", &figure_ids);
    m.def("figure_config", &figure_config, py::arg("figure"));
    m.def("standard_set", &standard_set, py::arg("k"));

    m.def("build_coupling_matrix", [](const NetworkConfig& c) { return build_coupling_matrix(c).entries(); },
          py::arg("config"));
    m.def("eigenvalues", [](const NetworkConfig& c) { return Spectrum(build_coupling_matrix(c)).eigenvalues(); },
          py::arg("config"));
    m.def("propagator",
          [](const NetworkConfig& c, double t) { return propagator(build_coupling_matrix(c), t).matrix; },
          py::arg("config"), py::arg("t"), "exp(-iMt) as a complex matrix");
    m.def("evolve", &evolve_amplitudes, py::arg("config"), py::arg("times"),
          py::arg("source") = Mode::sender_exciton(), "Amplitudes u_x(t), one row per time",
          py::call_guard<py::gil_scoped_release>());

    m.def(
        "transfer_fidelity",
        [](int n, const Eigen::VectorXcd& amplitudes, const Cscq& q, Mode target, bool strict_phase) {
            return transfer_fidelity(coefficients(n, amplitudes), q, target,
                                     strict_phase ? PhaseConvention::Strict : PhaseConvention::Rotated);
        },
        py::arg("n_receivers"), py::arg("amplitudes"), py::arg("qubit"), py::arg("target"),
        py::arg("strict_phase") = false);
    m.def(
        "mean_photon_number",
        [](int n, const Eigen::VectorXcd& amplitudes, const Cscq& q) {
            return mean_photon_number(coefficients(n, amplitudes), q);
        },
        py::arg("n_receivers"), py::arg("amplitudes"), py::arg("qubit"));

    m.def("default_horizon", &default_horizon, py::arg("config"));
    m.def(
        "selectivity_report",
        [](const NetworkConfig& c, std::optional<double> horizon, std::size_t points, const Cscq& qubit,
           bool strict_phase) {
            return selectivity_report(c, horizon ? *horizon : default_horizon(c),
                                      report_options(points, qubit, strict_phase));
        },
        py::arg("config"), py::arg("horizon") = py::none(), py::arg("points") = kDefaultGridPoints,
        py::arg("qubit") = Cscq{1.0, 1.0, 0.5}, py::arg("strict_phase") = false,
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "sweep",
        [](const NetworkConfig& c, const std::vector<std::string>& axes, std::size_t points, unsigned threads) {
            std::vector<SweepAxis> parsed;
            for (const auto& a : axes) parsed.push_back(parse_axis(a));
            SweepOptions options;
            options.report.points = points;
            options.threads = threads;
            py::list cells;
            const SweepGrid grid = [&] {
                py::gil_scoped_release release;
                return sweep(c, parsed, options);
            }();
            for (const auto& cell : grid.cells) {
                py::dict d;
                d["coordinates"] = cell.coordinates;
                d["report"] = cell.report ? py::cast(*cell.report) : py::none();
                d["error"] = cell.error;
                cells.append(d);
            }
            return cells;
        },
        py::arg("config"), py::arg("axes"), py::arg("points") = kDefaultGridPoints, py::arg("threads") = 0,
        "axes are 'name:min:max:count' strings with name g, delta or horizon");

    m.def(
        "compare_with_oracle",
        [](const NetworkConfig& c, int cutoff, const Cscq& qubit, std::optional<double> horizon,
           std::size_t dimension_limit) {
            return compare_with_oracle(RunConfig{c, qubit}, cutoff, horizon ? *horizon : default_horizon(c), 50, 20,
                                       PhaseConvention::Rotated, dimension_limit);
        },
        py::arg("config"), py::arg("cutoff"), py::arg("qubit") = Cscq{1.0, 1.0, 0.5},
        py::arg("horizon") = py::none(), py::arg("dimension_limit") = kDefaultDimensionLimit,
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "parse_config",
        [](const std::string& text) {
            const RunConfig c = parse_config(text);
            return py::make_tuple(c.network, c.qubit);
        },
        py::arg("text"), "Returns (NetworkConfig, Cscq)");
    m.def(
        "emit_config", [](const NetworkConfig& c, const Cscq& q) { return emit_config(RunConfig{c, q}); },
        py::arg("config"), py::arg("qubit") = Cscq{1.0, 1.0, 0.5});
}
