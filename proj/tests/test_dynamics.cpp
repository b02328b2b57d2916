#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "cqroute/dynamics.hpp"
#include "cqroute/figures.hpp"
#include "test_support.hpp"

using namespace cqroute;
using cd = std::complex<double>;

namespace {

CouplingMatrix two_mode_toy(double g) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
    m(0, 1) = m(1, 0) = g;
    return CouplingMatrix(1, m);
}

}  // namespace

TEST_CASE("propagator at t = 0 is the identity") {
    const Propagator p = propagator(build_coupling_matrix(figure_config(5)), 0.0);
    CHECK(p.matrix.isApprox(Eigen::MatrixXcd::Identity(12, 12), 1e-14));
    CHECK_THROWS_AS(propagator(build_coupling_matrix(figure_config(5)), -1.0), std::invalid_argument);
}

TEST_CASE("decoupled exciton only picks up its phase") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(9, 9);
    m(1, 1) = 500.0;
    m(7, 7) = 600.0;
    const CouplingMatrix cm(2, m);
    for (double t : {0.0, 0.001, 0.37, 12.5}) {
        const Propagator p = propagator(cm, t);
        const cd u = p.matrix(1, 1);
        CHECK(std::abs(u - std::polar(1.0, -500.0 * t)) < 1e-12);
        CHECK(std::abs(std::abs(u) - 1.0) < 1e-14);
    }
}

TEST_CASE("resonant two-mode toy oscillates as sin^2(g t)") {
    const double g = 60.0;
    const Spectrum s(two_mode_toy(g));
    for (int k = 0; k <= 200; ++k) {
        const double t = 0.0013 * k;
        const auto row = transfer_row(s, t, Mode::sender_exciton());
        CHECK(std::abs(row.population(Mode::sender_field()) - std::pow(std::sin(g * t), 2)) < 1e-8);
    }
}

TEST_CASE("propagator matches the Pade matrix exponential") {
    for (int fig : {3, 6, 11}) {
        const CouplingMatrix m = build_coupling_matrix(figure_config(fig));
        const Spectrum s(m);
        for (double t : {0.3, 2.7, 15.0}) {
            const Eigen::MatrixXcd arg = (cd(0.0, -t) * m.entries().cast<cd>()).eval();
            const Eigen::MatrixXcd pade = arg.exp();
            CHECK((s.evolution(t) - pade).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("transfer rows of a unitary are normalized") {
    const Propagator id{0.0, 2, Eigen::MatrixXcd::Identity(9, 9)};
    const auto row = transfer_row(id, Mode::sender_exciton());
    CHECK(row.amplitude(Mode::sender_exciton()) == cd(1.0, 0.0));
    CHECK(row.amplitudes.cwiseAbs().sum() == doctest::Approx(1.0));
    CHECK(unitarity_defect(row) == 0.0);

    const auto later = transfer_row(propagator(build_coupling_matrix(figure_config(5)), 10.0),
                                    Mode::sender_exciton());
    CHECK(unitarity_defect(later) <= 1e-10);
}

TEST_CASE("unitarity and composition hold for random networks") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> time(0.0, 50.0);
    for (int trial = 0; trial < 100; ++trial) {
        const CouplingMatrix m = build_coupling_matrix(testing::random_config(rng));
        const Spectrum s(m);
        const double t1 = time(rng);
        const double t2 = time(rng) / 100.0;
        const Propagator p1 = propagator(s, t1);
        const Propagator p2 = propagator(s, t2);
        const Propagator p12 = propagator(s, t1 + t2);
        CHECK(unitarity_error(p1) <= kUnitarityTolerance);
        CHECK(unitarity_error(p12) <= kUnitarityTolerance);
        CHECK((p12.matrix - p1.matrix * p2.matrix).cwiseAbs().maxCoeff() <= 1e-10);
        for (int k = 0; k < m.dim(); ++k) {
            CHECK(unitarity_defect(transfer_row(p1, mode_at(m.n_receivers(), k))) <= kUnitarityTolerance);
        }
    }
}

TEST_CASE("frame offset leaves every population unchanged") {
    for (int fig : {3, 9}) {
        NetworkConfig config = figure_config(fig);
        const std::vector<double> grid = uniform_grid(20000.0, 4001);
        const TimeSeries base = evolve_series(build_coupling_matrix(config), grid, Mode::sender_exciton());
        for (double offset : {250.0, -1000.0, 0.5, 3.7, -12.345}) {
            config.frame_offset = offset;
            const TimeSeries shifted =
                evolve_series(build_coupling_matrix(config), grid, Mode::sender_exciton());
            double worst = 0.0;
            for (std::size_t k = 0; k < grid.size(); ++k) {
                worst = std::max(worst, (base.rows[k].amplitudes.cwiseAbs2() -
                                         shifted.rows[k].amplitudes.cwiseAbs2())
                                            .cwiseAbs()
                                            .maxCoeff());
            }
            CAPTURE(offset);
            CHECK(worst <= 1e-12);
        }
    }
}

TEST_CASE("three-mode chain matches the closed-form exponential") {
    // SenderExciton - SenderField - ChannelField with equal couplings k and no detuning:
    // eigenvalues 0, +-sqrt(2) k.
    const double k = 0.8;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
    m(1, 0) = m(0, 1) = k;
    m(0, 2) = m(2, 0) = k;
    const Spectrum s(CouplingMatrix(1, m));
    for (int step = 0; step <= 100; ++step) {
        const double t = 0.173 * step;
        const double w = std::sqrt(2.0) * k * t;
        const auto row = transfer_row(s, t, Mode::sender_exciton());
        CHECK(std::abs(row.population(Mode::sender_exciton()) - std::pow((1.0 + std::cos(w)) / 2.0, 2)) < 1e-8);
        CHECK(std::abs(row.population(Mode::sender_field()) - std::pow(std::sin(w), 2) / 2.0) < 1e-8);
        CHECK(std::abs(row.population(Mode::channel_field()) - std::pow((1.0 - std::cos(w)) / 2.0, 2)) < 1e-8);
    }
}

TEST_CASE("evolve_series validates its grid") {
    const CouplingMatrix m = build_coupling_matrix(figure_config(3));
    const std::vector<double> bad_start{0.5, 1.0};
    const std::vector<double> not_increasing{0.0, 1.0, 1.0};
    const std::vector<double> empty;
    CHECK_THROWS_AS(evolve_series(m, bad_start, Mode::sender_exciton()), std::invalid_argument);
    CHECK_THROWS_AS(evolve_series(m, not_increasing, Mode::sender_exciton()), std::invalid_argument);
    CHECK_THROWS_AS(evolve_series(m, empty, Mode::sender_exciton()), std::invalid_argument);

    const std::vector<double> origin{0.0};
    const TimeSeries single = evolve_series(m, origin, Mode::sender_exciton());
    REQUIRE(single.size() == 1);
    CHECK(std::abs(single.rows[0].amplitude(Mode::sender_exciton()) - cd(1.0, 0.0)) < 1e-14);
    CHECK(single.rows[0].amplitudes.cwiseAbs2().sum() == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(uniform_grid(0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(uniform_grid(1.0, 1), std::invalid_argument);
    const auto grid = uniform_grid(2.0, 5);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 2.0);
    CHECK(grid[1] == 0.5);
}

TEST_CASE("off-target receiver stays empty during a set-1 transfer") {
    // Independent numpy scan (eigh, 4001 points over 6843.13/J): max U_r2 = 1.48e-5.
    const auto grid = uniform_grid(6843.13, 4001);
    const TimeSeries series = evolve_series(build_coupling_matrix(figure_config(3)), grid, Mode::sender_exciton());
    double worst = 0.0;
    for (const auto& row : series.rows) {
        worst = std::max(worst, row.population(Mode::receiver_exciton(2)));
        CHECK(unitarity_defect(row) <= kUnitarityTolerance);
    }
    CHECK(worst <= 0.1);
    CHECK(worst == doctest::Approx(1.48e-5).epsilon(0.05));
}

TEST_CASE("dense symmetric matrices evolve like the Pade exponential") {
    std::mt19937 rng(59);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int n : {1, 2, 4}) {
        const int d = mode_count(n);
        Eigen::MatrixXd a(d, d);
        for (int r = 0; r < d; ++r) {
            for (int c = 0; c <= r; ++c) a(r, c) = a(c, r) = normal(rng);
        }
        const CouplingMatrix m(n, a);
        const Spectrum s(m);
        const Eigen::MatrixXcd pade = (cd(0.0, -1.7) * a.cast<cd>()).eval().exp();
        CHECK((s.evolution(1.7) - pade).cwiseAbs().maxCoeff() < 1e-11);
        CHECK((s.eigenvectors() * s.eigenvalues().asDiagonal() * s.eigenvectors().transpose() - a)
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }
}

TEST_CASE("relabeling receivers permutes evolution rows exactly") {
    NetworkConfig config = figure_config(10);
    NetworkConfig relabeled = config;
    std::swap(relabeled.sets[0], relabeled.sets[3]);
    std::swap(relabeled.sets[1], relabeled.sets[2]);
    relabeled.active_sender = 2;
    const Spectrum a(build_coupling_matrix(config));
    const Spectrum b(build_coupling_matrix(relabeled));
    auto relabel = [](int j) { return 5 - j; };
    for (double t : {0.0, 13.0, 2258.8, 9000.0}) {
        const auto ra = transfer_row(a, t, Mode::sender_exciton());
        const auto rb = transfer_row(b, t, Mode::sender_exciton());
        for (int j = 1; j <= 4; ++j) {
            CHECK(ra.amplitude(Mode::receiver_exciton(j)) == rb.amplitude(Mode::receiver_exciton(relabel(j))));
            CHECK(ra.amplitude(Mode::channel_exciton(j)) == rb.amplitude(Mode::channel_exciton(relabel(j))));
        }
        CHECK(ra.amplitude(Mode::channel_field()) == rb.amplitude(Mode::channel_field()));
    }
}
