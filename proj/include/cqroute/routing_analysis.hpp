#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cqroute/cscq.hpp"
#include "cqroute/dynamics.hpp"
#include "cqroute/network_model.hpp"

namespace cqroute {

inline constexpr double kPeakThreshold = 0.95;
inline constexpr double kCrosstalkLimit = 0.1;
inline constexpr double kDefaultPeakFloor = 0.5;
inline constexpr std::size_t kDefaultGridPoints = 4001;
/// Default horizon as a multiple of the spectral transfer-time estimate.
inline constexpr double kHorizonFactor = 1.5;

struct TransferPeak {
    double t_star = 0.0;
    double peak_population = 0.0;
    std::size_t index = 0;  ///< grid index of the discrete maximum
};

/// First global maximum of the ReceiverExciton(target) population, refined
/// by a parabola through the three samples around it. Throws NoTransferPeak
/// if the maximum is below `floor`.
TransferPeak find_transfer_time(const TimeSeries& series, int target,
                                double floor = kDefaultPeakFloor);

/// pi / |lambda_a - lambda_b| for the two eigenmodes carrying the largest
/// source-target weight V_sk V_tk. Returns nullopt when no eigenmode links
/// source and target.
std::optional<double> estimate_transfer_time(const Spectrum& spectrum, Mode source, Mode target);

/// kHorizonFactor times the transfer-time estimate from SenderExciton to the
/// active receiver exciton.
double default_horizon(const NetworkConfig& config);

struct ReportOptions {
    std::size_t points = kDefaultGridPoints;
    double peak_floor = kDefaultPeakFloor;
    Cscq qubit{complex{1.0, 0.0}, complex{1.0, 0.0}, complex{0.5, 0.0}};
    PhaseConvention phase = PhaseConvention::Rotated;
};

struct TransferReport {
    int target = 1;
    double horizon = 0.0;
    std::size_t points = 0;
    double t_star = 0.0;
    double peak_population = 0.0;
    double crosstalk = 0.0;
    double confinement_defect = 0.0;
    double max_field_population = 0.0;
    double fidelity_at_t_star = 0.0;
    bool sets_distinct = true;

    /// Peak and crosstalk thresholds both met.
    bool selective() const {
        return peak_population >= kPeakThreshold && crosstalk <= kCrosstalkLimit;
    }
};

/// Builds a report from an already evolved series (source SenderExciton).
/// The refined t_star is kept only if the exact population there beats the
/// best grid sample; window maxima cover grid points up to t_star.
TransferReport analyze_series(const NetworkConfig& config, const Spectrum& spectrum,
                              const TimeSeries& series, const ReportOptions& options = {});

TransferReport selectivity_report(const NetworkConfig& config, double horizon,
                                  const ReportOptions& options = {});

enum class SweepParam { G, Delta, Horizon };

SweepParam parse_sweep_param(const std::string& name);
std::string to_string(SweepParam param);

struct SweepAxis {
    SweepParam param = SweepParam::G;
    double min = 0.0;
    double max = 0.0;
    int count = 1;

    /// count values from min to max inclusive; count 1 yields {min}.
    std::vector<double> values() const;
};

struct SweepCell {
    std::vector<double> coordinates;  ///< one value per axis
    std::optional<TransferReport> report;
    std::string error;  ///< set when report is empty
};

struct SweepGrid {
    std::vector<SweepAxis> axes;
    std::vector<SweepCell> cells;  ///< row-major, last axis fastest
};

struct SweepOptions {
    ReportOptions report;
    unsigned threads = 0;  ///< 0 picks hardware concurrency
};

/// g and delta axes perturb the active ternary set. Cells without a horizon
/// axis use default_horizon of their own config.
SweepGrid sweep(const NetworkConfig& base, const std::vector<SweepAxis>& axes,
                const SweepOptions& options = {});

}  // namespace cqroute
