#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cqroute/config_io.hpp"
#include "cqroute/fock_oracle.hpp"

namespace cqroute {

enum class ExitCode : int {
    Ok = 0,
    Failure = 1,
    Usage = 2,
    ParseError = 3,
    NoTransferPeak = 4,
    DimensionGuard = 5,
    ExcessiveTruncation = 6,
    OracleMismatch = 7,
};

struct RunSpec {
    std::string command;  ///< simulate | reproduce-fig | sweep | oracle-check
    std::filesystem::path config_path;
    std::optional<int> figure;
    std::optional<double> horizon;
    std::size_t points = kDefaultGridPoints;
    std::optional<int> cutoff;
    std::filesystem::path out;  ///< empty: data goes to the output stream
    std::optional<std::filesystem::path> report_path;
    OutputFormat format = OutputFormat::Csv;
    bool strict_phase = false;
    std::vector<std::string> axes;  ///< "name:min:max:count"
    unsigned threads = 0;
    std::size_t dimension_limit = kDefaultDimensionLimit;
    double truncation_limit = kDefaultTruncationLimit;
};

/// Tolerances applied by oracle-check.
inline constexpr double kOracleSingleExcitationTolerance = 1e-8;
inline constexpr double kOracleFidelityTolerance = 1e-4;
inline constexpr double kOracleMeanPhotonTolerance = 1e-3;

struct OracleComparison {
    int cutoff = 0;
    std::size_t dimension = 0;
    double horizon = 0.0;
    double t_star = 0.0;
    double truncation_weight = 0.0;
    std::vector<double> single_times;
    std::vector<double> coherent_times;
    double single_excitation_deviation = 0.0;
    double fidelity_deviation = 0.0;
    double mean_photon_deviation = 0.0;
    bool coherent_checked = false;

    bool passed() const {
        return single_excitation_deviation <= kOracleSingleExcitationTolerance &&
               (!coherent_checked || (fidelity_deviation <= kOracleFidelityTolerance &&
                                      mean_photon_deviation <= kOracleMeanPhotonTolerance));
    }
};

/// Compares mode-space results with the truncated Fock-space simulation.
/// Single-excitation populations at `single_samples` uniform times; coherent
/// qubit fidelity and mean photon number at `coherent_samples` times, the
/// last of which is t_star.
OracleComparison compare_with_oracle(const RunConfig& config, int cutoff, double horizon,
                                     std::size_t single_samples = 50, std::size_t coherent_samples = 20,
                                     PhaseConvention phase = PhaseConvention::Rotated,
                                     std::size_t dimension_limit = kDefaultDimensionLimit,
                                     double truncation_limit = kDefaultTruncationLimit);

std::string oracle_to_json(const OracleComparison& comparison);

ExitCode run_simulate(const RunSpec& spec, std::ostream& out, std::ostream& log);
ExitCode run_reproduce_fig(const RunSpec& spec, std::ostream& out, std::ostream& log);
ExitCode run_sweep(const RunSpec& spec, std::ostream& out, std::ostream& log);
ExitCode run_oracle_check(const RunSpec& spec, std::ostream& out, std::ostream& log);

/// Dispatches on spec.command and maps library errors to exit codes.
ExitCode run_command(const RunSpec& spec, std::ostream& out, std::ostream& log);

/// Parses "name:min:max:count".
SweepAxis parse_axis(const std::string& text);

}  // namespace cqroute
