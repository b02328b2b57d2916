#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "cqroute/cscq.hpp"
#include "cqroute/dynamics.hpp"
#include "cqroute/network_model.hpp"
#include "cqroute/routing_analysis.hpp"

namespace cqroute {

inline constexpr const char* kToolVersion = "cqroute 0.1.0";

/// Everything a run needs from a config file.
struct RunConfig {
    NetworkConfig network;
    Cscq qubit{complex{1.0, 0.0}, complex{1.0, 0.0}, complex{0.5, 0.0}};

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Config files are JSON (comments allowed):
///
///   {
///     "n_receivers": 2, "hop": 1.0, "active_sender": 1, "frame_offset": 0.0,
///     "qubit": {"mu_re": 1, "mu_im": 0, "nu_re": 1, "nu_im": 0,
///               "alpha_re": 0.5, "alpha_im": 0},
///     "sets": [{"g": 60, "delta": 500}, {"g": 61, "delta": 600}]
///   }
///
/// Only "sets" is required; n_receivers defaults to its length. Unknown keys
/// are rejected. Errors are ParseError carrying the offending line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text that parse_config maps back to the same RunConfig.
std::string emit_config(const RunConfig& config);

/// FNV-1a over emit_config.
std::uint64_t config_hash(const RunConfig& config);
std::string config_hash_hex(const RunConfig& config);

/// 12 significant digits, the precision of every emitted data file.
std::string format_number(double value);

enum class OutputFormat { Csv, Json };

OutputFormat parse_output_format(const std::string& name);

struct OutputMeta {
    std::string config_hash;
    double horizon = 0.0;
    std::size_t points = 0;
    std::string note;  ///< optional free-form comment line
};

/// Columns: t, U_s, U_r1..U_rN, F, n_bar, unitarity_defect.
void write_series(std::ostream& os, const TimeSeries& series, const Cscq& qubit,
                  const OutputMeta& meta, OutputFormat format);

std::string report_to_json(const TransferReport& report, int indent = 2);

void write_sweep(std::ostream& os, const SweepGrid& grid, const OutputMeta& meta, OutputFormat format);

}  // namespace cqroute
