#include "cqroute/commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cqroute/errors.hpp"
#include "cqroute/figures.hpp"

namespace cqroute {

namespace {

class Sink {
public:
    Sink(const std::filesystem::path& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw Error("cannot open output file " + path.string());
            stream_ = &file_;
        }
    }

    std::ostream& stream() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

// Built-in scenario with the default qubit.
RunConfig figure_run_config(int figure) {
    RunConfig config;
    config.network = figure_config(figure);
    return config;
}

RunConfig resolve_config(const RunSpec& spec) {
    if (!spec.config_path.empty()) return load_config(spec.config_path);
    if (spec.figure) return figure_run_config(*spec.figure);
    throw std::invalid_argument(spec.command + " needs --config or --fig");
}

PhaseConvention phase_of(const RunSpec& spec) {
    return spec.strict_phase ? PhaseConvention::Strict : PhaseConvention::Rotated;
}

ReportOptions report_options(const RunSpec& spec, const RunConfig& config) {
    ReportOptions options;
    options.points = spec.points;
    options.qubit = config.qubit;
    options.phase = phase_of(spec);
    return options;
}

// Writes the series, then analyzes it; NoTransferPeak escapes after the data is out.
TransferReport run_series(const RunSpec& spec, const RunConfig& config, std::ostream& out,
                          const std::string& note) {
    if (spec.points < 2) throw std::invalid_argument("--points must be at least 2");
    const double horizon = spec.horizon ? *spec.horizon : default_horizon(config.network);
    const Spectrum spectrum(build_coupling_matrix(config.network));
    const std::vector<double> grid = uniform_grid(horizon, spec.points);
    const TimeSeries series = evolve_series(spectrum, grid, Mode::sender_exciton());

    {
        Sink sink(spec.out, out);
        write_series(sink.stream(), series, config.qubit,
                     OutputMeta{config_hash_hex(config), horizon, spec.points, note}, spec.format);
    }
    return analyze_series(config.network, spectrum, series, report_options(spec, config));
}

void log_summary(std::ostream& log, const TransferReport& report) {
    log << "receiver " << report.target << ": t* = " << format_number(report.t_star)
        << ", peak = " << format_number(report.peak_population)
        << ", crosstalk = " << format_number(report.crosstalk)
        << (report.selective() ? " (selective)" : " (NOT selective)") << "\n";
}

}  // namespace

SweepAxis parse_axis(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 4) throw ConfigError("sweep axis '" + text + "' is not name:min:max:count");
    try {
        SweepAxis axis{parse_sweep_param(parts[0]), std::stod(parts[1]), std::stod(parts[2]),
                       std::stoi(parts[3])};
        if (axis.count < 1) throw ConfigError("sweep axis count must be >= 1");
        return axis;
    } catch (const std::logic_error&) {
        throw ConfigError("sweep axis '" + text + "' has a malformed number");
    }
}

OracleComparison compare_with_oracle(const RunConfig& config, int cutoff, double horizon,
                                     std::size_t single_samples, std::size_t coherent_samples,
                                     PhaseConvention phase, std::size_t dimension_limit,
                                     double truncation_limit) {
    const NetworkConfig& net = config.network;
    const Spectrum spectrum(build_coupling_matrix(net));
    const FockHamiltonian hamiltonian = build_fock_hamiltonian(net, cutoff, dimension_limit);
    const FockSpace& space = hamiltonian.space;
    FockEvolver evolver(hamiltonian);

    OracleComparison result;
    result.cutoff = cutoff;
    result.dimension = space.dim();
    result.horizon = horizon;

    const Mode source = Mode::sender_exciton();
    const Mode target = Mode::receiver_exciton(net.active_sender);
    const FockState single = single_excitation_state(space, source);
    const auto target_index = static_cast<Eigen::Index>(space.stride(mode_ordinal(net, target)));

    for (std::size_t k = 0; k < single_samples; ++k) {
        const double t = single_samples > 1 ? horizon * static_cast<double>(k) / (single_samples - 1) : horizon;
        result.single_times.push_back(t);
        const Eigen::VectorXd oracle = mode_occupations(evolver.evolve(single, t), space);
        const TransferCoefficients row = transfer_row(spectrum, t, source);
        for (Eigen::Index x = 0; x < oracle.size(); ++x) {
            result.single_excitation_deviation =
                std::max(result.single_excitation_deviation, std::abs(oracle(x) - std::norm(row.amplitudes(x))));
        }
    }

    if (config.qubit.alpha == complex{} || coherent_samples == 0) return result;
    result.coherent_checked = true;

    ReportOptions options;
    options.qubit = config.qubit;
    options.phase = phase;
    try {
        result.t_star = selectivity_report(net, horizon, options).t_star;
    } catch (const NoTransferPeak&) {
        result.t_star = horizon;
    }
    for (std::size_t k = 0; k + 1 < coherent_samples; ++k) {
        result.coherent_times.push_back(horizon * static_cast<double>(k) / std::max<std::size_t>(1, coherent_samples - 1));
    }
    result.coherent_times.push_back(result.t_star);

    const FockState initial = prepare_cscq_state(config.qubit, space, source, truncation_limit);
    result.truncation_weight = initial.truncation_weight;
    for (double t : result.coherent_times) {
        const FockState psi = evolver.evolve(initial, t);
        const TransferCoefficients row = transfer_row(spectrum, t, source);
        double target_phase = 0.0;
        if (phase == PhaseConvention::Rotated) {
            target_phase = std::arg(evolver.evolve(single, t).amplitudes(target_index));
        }
        const double oracle_fidelity = state_fidelity(psi, config.qubit, space, target, target_phase);
        const double closed_fidelity = transfer_fidelity(row, config.qubit, target, phase);
        result.fidelity_deviation =
            std::max(result.fidelity_deviation, std::abs(oracle_fidelity - closed_fidelity));
        result.mean_photon_deviation =
            std::max(result.mean_photon_deviation,
                     std::abs(mean_photons(psi, space) - mean_photon_number(row, config.qubit)));
    }
    return result;
}

std::string oracle_to_json(const OracleComparison& c) {
    nlohmann::ordered_json j;
    j["cutoff"] = c.cutoff;
    j["dimension"] = c.dimension;
    j["horizon"] = std::stod(format_number(c.horizon));
    j["t_star"] = std::stod(format_number(c.t_star));
    j["truncation_weight"] = std::stod(format_number(c.truncation_weight));
    j["single_excitation"] = {{"samples", c.single_times.size()},
                              {"max_deviation", std::stod(format_number(c.single_excitation_deviation))},
                              {"tolerance", kOracleSingleExcitationTolerance}};
    if (c.coherent_checked) {
        j["fidelity"] = {{"samples", c.coherent_times.size()},
                         {"max_deviation", std::stod(format_number(c.fidelity_deviation))},
                         {"tolerance", kOracleFidelityTolerance}};
        j["mean_photons"] = {{"samples", c.coherent_times.size()},
                             {"max_deviation", std::stod(format_number(c.mean_photon_deviation))},
                             {"tolerance", kOracleMeanPhotonTolerance}};
    }
    j["passed"] = c.passed();
    return j.dump(2);
}

ExitCode run_simulate(const RunSpec& spec, std::ostream& out, std::ostream& log) {
    if (spec.config_path.empty()) throw std::invalid_argument("simulate needs --config");
    const RunConfig config = load_config(spec.config_path);
    const TransferReport report = run_series(spec, config, out, "");
    log_summary(log, report);
    if (spec.report_path) {
        std::ofstream(*spec.report_path) << report_to_json(report) << "\n";
    }
    return ExitCode::Ok;
}

ExitCode run_reproduce_fig(const RunSpec& spec, std::ostream& out, std::ostream& log) {
    if (!spec.figure) throw std::invalid_argument("reproduce-fig needs --fig");
    const RunConfig config = figure_run_config(*spec.figure);
    const TransferReport report =
        run_series(spec, config, out, "figure " + std::to_string(*spec.figure));
    const std::string json = report_to_json(report) + "\n";
    if (spec.report_path) {
        std::ofstream(*spec.report_path) << json;
    } else if (!spec.out.empty()) {
        out << json;
    } else {
        log << json;
    }
    log_summary(log, report);
    return ExitCode::Ok;
}

ExitCode run_sweep(const RunSpec& spec, std::ostream& out, std::ostream& log) {
    const RunConfig config = resolve_config(spec);
    if (spec.axes.empty()) throw std::invalid_argument("sweep needs at least one --axis");
    std::vector<SweepAxis> axes;
    for (const auto& text : spec.axes) axes.push_back(parse_axis(text));

    SweepOptions options;
    options.report = report_options(spec, config);
    options.threads = spec.threads;
    const SweepGrid grid = sweep(config.network, axes, options);

    std::size_t failed = 0;
    for (const auto& cell : grid.cells) failed += cell.report ? 0 : 1;
    Sink sink(spec.out, out);
    write_sweep(sink.stream(), grid,
                OutputMeta{config_hash_hex(config), spec.horizon.value_or(0.0), spec.points,
                           "horizon 0 means the per-cell default horizon"},
                spec.format);
    log << grid.cells.size() << " cells, " << failed << " without a transfer report\n";
    return ExitCode::Ok;
}

ExitCode run_oracle_check(const RunSpec& spec, std::ostream& out, std::ostream& log) {
    const RunConfig config = resolve_config(spec);
    const int cutoff = spec.cutoff ? *spec.cutoff : select_cutoff(config.qubit.alpha, spec.truncation_limit);
    const double horizon = spec.horizon ? *spec.horizon : default_horizon(config.network);
    const OracleComparison comparison =
        compare_with_oracle(config, cutoff, horizon, 50, 20, phase_of(spec), spec.dimension_limit,
                            spec.truncation_limit);
    {
        Sink sink(spec.out, out);
        sink.stream() << oracle_to_json(comparison) << "\n";
    }
    log << "oracle check " << (comparison.passed() ? "passed" : "FAILED") << "\n";
    return comparison.passed() ? ExitCode::Ok : ExitCode::OracleMismatch;
}

ExitCode run_command(const RunSpec& spec, std::ostream& out, std::ostream& log) {
    try {
        if (spec.command == "simulate") return run_simulate(spec, out, log);
        if (spec.command == "reproduce-fig") return run_reproduce_fig(spec, out, log);
        if (spec.command == "sweep") return run_sweep(spec, out, log);
        if (spec.command == "oracle-check") return run_oracle_check(spec, out, log);
        log << "error: unknown command '" << spec.command << "'\n";
        return ExitCode::Usage;
    } catch (const ParseError& e) {
        log << "parse error: " << e.what() << "\n";
        return ExitCode::ParseError;
    } catch (const NoTransferPeak& e) {
        log << "no transfer peak: " << e.what() << "\n";
        return ExitCode::NoTransferPeak;
    } catch (const DimensionGuard& e) {
        log << "dimension guard: " << e.what() << "\n";
        return ExitCode::DimensionGuard;
    } catch (const ExcessiveTruncation& e) {
        log << "excessive truncation: " << e.what() << "\n";
        return ExitCode::ExcessiveTruncation;
    } catch (const ConfigError& e) {
        log << "usage error: " << e.what() << "\n";
        return ExitCode::Usage;
    } catch (const std::invalid_argument& e) {
        log << "usage error: " << e.what() << "\n";
        return ExitCode::Usage;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return ExitCode::Failure;
    }
}

}  // namespace cqroute
