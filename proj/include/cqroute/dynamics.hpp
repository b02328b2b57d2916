#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cqroute/network_model.hpp"

namespace cqroute {

inline constexpr double kUnitarityTolerance = 1e-10;

/// Eigendecomposition of a CouplingMatrix, reusable for any number of times.
///
/// The sender-field frequency (the rotating-frame reference) is removed
/// before diagonalizing and re-applied as a global phase, so a uniform frame
/// shift of M only perturbs populations through the rounding of the shifted
/// diagonal itself.
class Spectrum {
public:
    explicit Spectrum(const CouplingMatrix& m);

    int n_receivers() const { return n_receivers_; }
    Eigen::Index dim() const { return vectors_.rows(); }

    /// Eigenvalues of M in ascending order.
    Eigen::VectorXd eigenvalues() const;
    const Eigen::MatrixXd& eigenvectors() const { return vectors_; }

    /// exp(-i M t).
    Eigen::MatrixXcd evolution(double t) const;
    /// Row `ordinal` of exp(-i M t); M is symmetric, so this is also the column.
    Eigen::VectorXcd evolution_row(double t, int ordinal) const;

private:
    int n_receivers_;
    double shift_;
    Eigen::VectorXd reduced_;  // eigenvalues of M - shift*I
    Eigen::MatrixXd vectors_;
};

struct Propagator {
    double time = 0.0;
    int n_receivers = 1;
    Eigen::MatrixXcd matrix;
};

Propagator propagator(const Spectrum& spectrum, double t);
Propagator propagator(const CouplingMatrix& m, double t);

/// max |(U^dagger U - I)_ij|
double unitarity_error(const Propagator& p);

/// Expansion coefficients u_x(t) of one evolved mode operator over the
/// initial mode operators, indexed by mode ordinal.
struct TransferCoefficients {
    double time = 0.0;
    int n_receivers = 1;
    Eigen::VectorXcd amplitudes;

    std::complex<double> amplitude(Mode mode) const {
        return amplitudes(mode_ordinal(n_receivers, mode));
    }
    double population(Mode mode) const { return std::norm(amplitude(mode)); }
};

TransferCoefficients transfer_row(const Propagator& p, Mode source);
TransferCoefficients transfer_row(const Spectrum& spectrum, double t, Mode source);

/// |1 - sum_x |u_x|^2|
double unitarity_defect(const TransferCoefficients& c);

struct TimeSeries {
    Mode source;
    std::vector<double> grid;
    std::vector<TransferCoefficients> rows;

    std::size_t size() const { return rows.size(); }
    int n_receivers() const { return rows.empty() ? 0 : rows.front().n_receivers; }
};

/// `points` equally spaced times on [0, horizon].
std::vector<double> uniform_grid(double horizon, std::size_t points);

/// Throws std::invalid_argument unless the grid starts at 0 and is strictly increasing.
TimeSeries evolve_series(const Spectrum& spectrum, std::span<const double> grid, Mode source);
TimeSeries evolve_series(const CouplingMatrix& m, std::span<const double> grid, Mode source);

}  // namespace cqroute
