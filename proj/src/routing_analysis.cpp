#include "cqroute/routing_analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "cqroute/errors.hpp"

namespace cqroute {

namespace {

// Parabola through three samples, evaluated at its vertex. Returns false if
// the samples are not strictly concave.
bool parabolic_vertex(double x0, double y0, double x1, double y1, double x2, double y2,
                      double& xv, double& yv) {
    const double d = (x0 - x1) * (x0 - x2) * (x1 - x2);
    if (d == 0.0) return false;
    const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / d;
    const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / d;
    if (!(a < 0.0)) return false;
    xv = std::clamp(-b / (2.0 * a), x0, x2);
    const double l0 = (xv - x1) * (xv - x2) / ((x0 - x1) * (x0 - x2));
    const double l1 = (xv - x0) * (xv - x2) / ((x1 - x0) * (x1 - x2));
    const double l2 = (xv - x0) * (xv - x1) / ((x2 - x0) * (x2 - x1));
    yv = l0 * y0 + l1 * y1 + l2 * y2;
    return true;
}

}  // namespace

TransferPeak find_transfer_time(const TimeSeries& series, int target, double floor) {
    if (series.rows.empty()) throw std::invalid_argument("empty time series");
    const int n = series.n_receivers();
    if (target < 1 || target > n) {
        throw ConfigError("target receiver " + std::to_string(target) + " outside 1.." + std::to_string(n));
    }
    const Mode mode = Mode::receiver_exciton(target);

    std::size_t best = 0;
    double best_pop = series.rows[0].population(mode);
    for (std::size_t k = 1; k < series.size(); ++k) {
        const double p = series.rows[k].population(mode);
        if (p > best_pop) {
            best_pop = p;
            best = k;
        }
    }
    if (best_pop < floor) {
        throw NoTransferPeak("receiver " + std::to_string(target) + " peaks at population " +
                                 std::to_string(best_pop) + ", below the floor " + std::to_string(floor),
                             best_pop);
    }

    TransferPeak peak{series.grid[best], best_pop, best};
    if (best > 0 && best + 1 < series.size()) {
        double tv = 0.0;
        double pv = 0.0;
        if (parabolic_vertex(series.grid[best - 1], series.rows[best - 1].population(mode),
                             series.grid[best], best_pop, series.grid[best + 1],
                             series.rows[best + 1].population(mode), tv, pv)) {
            peak.t_star = tv;
            peak.peak_population = std::clamp(pv, best_pop, 1.0);
        }
    }
    return peak;
}

std::optional<double> estimate_transfer_time(const Spectrum& spectrum, Mode source, Mode target) {
    const int s = mode_ordinal(spectrum.n_receivers(), source);
    const int t = mode_ordinal(spectrum.n_receivers(), target);
    const Eigen::MatrixXd& v = spectrum.eigenvectors();
    const Eigen::VectorXd lambda = spectrum.eigenvalues();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(v.cols()));
    for (Eigen::Index k = 0; k < v.cols(); ++k) order[static_cast<std::size_t>(k)] = k;
    auto weight = [&](Eigen::Index k) { return std::abs(v(s, k) * v(t, k)); };
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return weight(a) > weight(b); });

    if (order.size() < 2 || weight(order[1]) < 1e-9) return std::nullopt;
    const double gap = std::abs(lambda(order[0]) - lambda(order[1]));
    if (!(gap > 0.0)) return std::nullopt;
    return std::numbers::pi / gap;
}

double default_horizon(const NetworkConfig& config) {
    const Spectrum spectrum(build_coupling_matrix(config));
    const auto estimate = estimate_transfer_time(spectrum, Mode::sender_exciton(),
                                                 Mode::receiver_exciton(config.active_sender));
    if (!estimate) return 1000.0 / config.hop;
    return kHorizonFactor * *estimate;
}

TransferReport analyze_series(const NetworkConfig& config, const Spectrum& spectrum,
                              const TimeSeries& series, const ReportOptions& options) {
    const int target = config.active_sender;
    const Mode target_mode = Mode::receiver_exciton(target);
    const TransferPeak peak = find_transfer_time(series, target, options.peak_floor);

    TransferReport report;
    report.target = target;
    report.horizon = series.grid.back();
    report.points = series.size();
    report.sets_distinct = sets_distinct(config);

    TransferCoefficients at_peak = transfer_row(spectrum, peak.t_star, Mode::sender_exciton());
    const double grid_best = series.rows[peak.index].population(target_mode);
    if (at_peak.population(target_mode) >= grid_best) {
        report.t_star = peak.t_star;
    } else {
        at_peak = series.rows[peak.index];
        report.t_star = series.grid[peak.index];
    }
    report.peak_population = at_peak.population(target_mode);

    auto accumulate = [&](const TransferCoefficients& row) {
        for (int j = 1; j <= config.n_receivers; ++j) {
            if (j != target) {
                report.crosstalk = std::max(report.crosstalk, row.population(Mode::receiver_exciton(j)));
            }
        }
        const double kept = row.population(Mode::sender_exciton()) + row.population(target_mode);
        report.confinement_defect = std::max(report.confinement_defect, std::abs(1.0 - kept));
        report.max_field_population = std::max(report.max_field_population, field_population(row));
    };
    for (std::size_t k = 0; k < series.size() && series.grid[k] <= report.t_star; ++k) {
        accumulate(series.rows[k]);
    }
    accumulate(at_peak);

    report.fidelity_at_t_star = transfer_fidelity(at_peak, options.qubit, target_mode, options.phase);
    return report;
}

TransferReport selectivity_report(const NetworkConfig& config, double horizon,
                                  const ReportOptions& options) {
    const Spectrum spectrum(build_coupling_matrix(config));
    const std::vector<double> grid = uniform_grid(horizon, options.points);
    const TimeSeries series = evolve_series(spectrum, grid, Mode::sender_exciton());
    return analyze_series(config, spectrum, series, options);
}

SweepParam parse_sweep_param(const std::string& name) {
    if (name == "g") return SweepParam::G;
    if (name == "delta") return SweepParam::Delta;
    if (name == "horizon") return SweepParam::Horizon;
    throw ConfigError("unknown sweep parameter '" + name + "' (expected g, delta or horizon)");
}

std::string to_string(SweepParam param) {
    switch (param) {
        case SweepParam::G: return "g";
        case SweepParam::Delta: return "delta";
        case SweepParam::Horizon: return "horizon";
    }
    return "?";
}

std::vector<double> SweepAxis::values() const {
    if (count < 1) throw ConfigError("sweep axis " + to_string(param) + " needs count >= 1");
    if (count == 1) return {min};
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        out[static_cast<std::size_t>(k)] = min + (max - min) * k / (count - 1);
    }
    out.back() = max;
    return out;
}

SweepGrid sweep(const NetworkConfig& base, const std::vector<SweepAxis>& axes,
                const SweepOptions& options) {
    base.validate();
    if (axes.empty()) throw ConfigError("sweep needs at least one axis");

    std::vector<std::vector<double>> values;
    std::size_t total = 1;
    for (const auto& axis : axes) {
        values.push_back(axis.values());
        total *= values.back().size();
    }

    SweepGrid grid{axes, std::vector<SweepCell>(total)};
    for (std::size_t cell = 0; cell < total; ++cell) {
        std::size_t rest = cell;
        std::vector<double> coords(axes.size());
        for (std::size_t a = axes.size(); a-- > 0;) {
            coords[a] = values[a][rest % values[a].size()];
            rest /= values[a].size();
        }
        grid.cells[cell].coordinates = std::move(coords);
    }

    auto evaluate = [&](SweepCell& cell) {
        try {
            NetworkConfig config = base;
            std::optional<double> horizon;
            auto& active = config.sets.at(static_cast<std::size_t>(config.active_sender - 1));
            for (std::size_t a = 0; a < axes.size(); ++a) {
                switch (axes[a].param) {
                    case SweepParam::G: active.g = cell.coordinates[a]; break;
                    case SweepParam::Delta: active.delta = cell.coordinates[a]; break;
                    case SweepParam::Horizon: horizon = cell.coordinates[a]; break;
                }
            }
            cell.report = selectivity_report(config, horizon ? *horizon : default_horizon(config),
                                             options.report);
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
    };

    unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(total));
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < total; k = next++) evaluate(grid.cells[k]);
            });
        }
    }
    return grid;
}

}  // namespace cqroute
