#include "cqroute/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "cqroute/errors.hpp"

namespace cqroute {

namespace {

Eigen::VectorXcd phases(const Eigen::VectorXd& eigenvalues, double t) {
    Eigen::VectorXcd out(eigenvalues.size());
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
        out(k) = std::polar(1.0, -eigenvalues(k) * t);
    }
    return out;
}

// Ordinal permutation that sorts receivers by the entries of their mode block
// (ChannelExciton, ReceiverField, ReceiverExciton). Diagonalizing in this order
// makes relabeled networks produce bitwise identical spectra.
std::vector<int> canonical_order(const CouplingMatrix& m) {
    const int n = m.n_receivers();
    const Eigen::MatrixXd& a = m.entries();
    auto block = [n](int j) {
        return std::array<int, 3>{mode_ordinal(n, Mode::channel_exciton(j)), mode_ordinal(n, Mode::receiver_field(j)),
                                  mode_ordinal(n, Mode::receiver_exciton(j))};
    };
    std::vector<std::vector<double>> keys(static_cast<std::size_t>(n) + 1);
    for (int j = 1; j <= n; ++j) {
        auto& key = keys[static_cast<std::size_t>(j)];
        const auto rows = block(j);
        for (int r : rows) {
            for (int c = 0; c < 3; ++c) key.push_back(a(r, c));
            for (int c : rows) key.push_back(a(r, c));
        }
    }
    std::vector<int> receivers(static_cast<std::size_t>(n));
    std::iota(receivers.begin(), receivers.end(), 1);
    std::stable_sort(receivers.begin(), receivers.end(), [&](int x, int y) {
        return keys[static_cast<std::size_t>(x)] < keys[static_cast<std::size_t>(y)];
    });

    std::vector<int> order(static_cast<std::size_t>(mode_count(n)));
    std::iota(order.begin(), order.end(), 0);
    for (int pos = 1; pos <= n; ++pos) {
        const auto to = block(pos);
        const auto from = block(receivers[static_cast<std::size_t>(pos - 1)]);
        for (int b = 0; b < 3; ++b) order[static_cast<std::size_t>(to[b])] = from[b];
    }
    return order;
}

}  // namespace

Spectrum::Spectrum(const CouplingMatrix& m) : n_receivers_(m.n_receivers()) {
    const Eigen::MatrixXd& entries = m.entries();
    shift_ = entries(0, 0);
    const std::vector<int> order = canonical_order(m);
    const auto dim = static_cast<Eigen::Index>(order.size());
    Eigen::MatrixXd reduced(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) reduced(r, c) = entries(order[r], order[c]);
    }
    reduced.diagonal().array() -= shift_;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(reduced);
    if (solver.info() != Eigen::Success) {
        throw EigenFailure("eigendecomposition of the coupling matrix did not converge");
    }
    reduced_ = solver.eigenvalues();
    vectors_.resize(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) vectors_.row(order[r]) = solver.eigenvectors().row(r);
}

Eigen::VectorXd Spectrum::eigenvalues() const {
    return (reduced_.array() + shift_).matrix();
}

Eigen::MatrixXcd Spectrum::evolution(double t) const {
    const Eigen::VectorXcd ph = phases(reduced_, t) * std::polar(1.0, -shift_ * t);
    const Eigen::MatrixXcd v = vectors_.cast<std::complex<double>>();
    return v * ph.asDiagonal() * v.transpose();
}

Eigen::VectorXcd Spectrum::evolution_row(double t, int ordinal) const {
    Eigen::VectorXcd weighted = vectors_.row(ordinal).transpose().cast<std::complex<double>>();
    weighted = weighted.cwiseProduct(phases(reduced_, t)) * std::polar(1.0, -shift_ * t);
    return vectors_.cast<std::complex<double>>() * weighted;
}

Propagator propagator(const Spectrum& spectrum, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("propagation time must be non-negative");
    return {t, spectrum.n_receivers(), spectrum.evolution(t)};
}

Propagator propagator(const CouplingMatrix& m, double t) {
    return propagator(Spectrum(m), t);
}

double unitarity_error(const Propagator& p) {
    const Eigen::Index d = p.matrix.rows();
    const Eigen::MatrixXcd gram = p.matrix.adjoint() * p.matrix - Eigen::MatrixXcd::Identity(d, d);
    return gram.cwiseAbs().maxCoeff();
}

TransferCoefficients transfer_row(const Propagator& p, Mode source) {
    const int row = mode_ordinal(p.n_receivers, source);
    return {p.time, p.n_receivers, p.matrix.row(row).transpose()};
}

TransferCoefficients transfer_row(const Spectrum& spectrum, double t, Mode source) {
    const int row = mode_ordinal(spectrum.n_receivers(), source);
    return {t, spectrum.n_receivers(), spectrum.evolution_row(t, row)};
}

double unitarity_defect(const TransferCoefficients& c) {
    return std::abs(1.0 - c.amplitudes.squaredNorm());
}

std::vector<double> uniform_grid(double horizon, std::size_t points) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("horizon must be positive and finite");
    }
    if (points < 2) throw std::invalid_argument("a uniform grid needs at least 2 points");
    std::vector<double> grid(points);
    const double step = horizon / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) grid[k] = step * static_cast<double>(k);
    grid.back() = horizon;
    return grid;
}

TimeSeries evolve_series(const Spectrum& spectrum, std::span<const double> grid, Mode source) {
    if (grid.empty() || grid.front() != 0.0) {
        throw std::invalid_argument("time grid must start at 0");
    }
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (!(grid[k] > grid[k - 1])) {
            throw std::invalid_argument("time grid must be strictly increasing (index " +
                                        std::to_string(k) + ")");
        }
    }
    TimeSeries series{source, std::vector<double>(grid.begin(), grid.end()), {}};
    series.rows.reserve(grid.size());
    for (double t : grid) series.rows.push_back(transfer_row(spectrum, t, source));
    return series;
}

TimeSeries evolve_series(const CouplingMatrix& m, std::span<const double> grid, Mode source) {
    return evolve_series(Spectrum(m), grid, source);
}

}  // namespace cqroute
