#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cqroute/cscq.hpp"
#include "cqroute/errors.hpp"
#include "cqroute/figures.hpp"

using namespace cqroute;
using cd = std::complex<double>;

namespace {

// Test-only brute force: truncated single-mode Fock amplitudes of a coherent state.
Eigen::VectorXcd coherent_vector(cd alpha, int levels) {
    Eigen::VectorXcd v(levels);
    cd amp = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n < levels; ++n) {
        if (n > 0) amp *= alpha / std::sqrt(static_cast<double>(n));
        v(n) = amp;
    }
    return v;
}

Eigen::VectorXcd kron(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    Eigen::VectorXcd out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

// Two-mode cat mu|b1,b2> + nu|-b1,-b2>, normalized.
Eigen::VectorXcd two_mode_cat(cd mu, cd nu, cd b1, cd b2, int levels) {
    Eigen::VectorXcd v = mu * kron(coherent_vector(b1, levels), coherent_vector(b2, levels)) +
                         nu * kron(coherent_vector(-b1, levels), coherent_vector(-b2, levels));
    return v / v.norm();
}

TransferCoefficients row_on(int n, std::initializer_list<std::pair<Mode, cd>> entries) {
    TransferCoefficients c{0.0, n, Eigen::VectorXcd::Zero(mode_count(n))};
    for (const auto& [mode, value] : entries) c.amplitudes(mode_ordinal(n, mode)) = value;
    return c;
}

cd random_complex(std::mt19937& rng, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    return {normal(rng), normal(rng)};
}

TransferCoefficients random_row(std::mt19937& rng, int n) {
    TransferCoefficients c{0.0, n, Eigen::VectorXcd(mode_count(n))};
    for (Eigen::Index k = 0; k < c.amplitudes.size(); ++k) c.amplitudes(k) = random_complex(rng);
    c.amplitudes.normalize();
    return c;
}

}  // namespace

TEST_CASE("normalization") {
    CHECK(normalization({1.0, 0.0, 0.3}) == doctest::Approx(1.0));
    CHECK(normalization({1.0, 0.0, cd(2.0, -1.0)}) == doctest::Approx(1.0));
    CHECK(normalization({1.0, 1.0, 0.0}) == doctest::Approx(4.0));
    CHECK_THROWS_AS(normalization({1.0, -1.0, 0.0}), DegenerateQubit);
    const double expected = 2.0 + 2.0 * std::exp(-0.5);
    CHECK(std::abs(normalization({1.0, 1.0, 0.5}) - expected) < 1e-12);
}

TEST_CASE("normalization symmetries (random qubits)") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 500; ++trial) {
        const Cscq q{random_complex(rng), random_complex(rng), random_complex(rng, 0.8)};
        const double n = normalization(q);
        CHECK(std::abs(normalization({q.nu, q.mu, q.alpha}) - n) < 1e-12);
        const cd phase = std::polar(1.0, 2.0 * std::numbers::pi * trial / 500.0);
        CHECK(std::abs(normalization({phase * q.mu, phase * q.nu, q.alpha}) - n) < 1e-12);
    }
}

TEST_CASE("coherent overlap") {
    CHECK(std::abs(coherent_overlap(cd(0.3, 0.4), cd(0.3, 0.4)) - 1.0) < 1e-15);
    CHECK(std::abs(coherent_overlap(-1.0, 1.0) - 0.1353352832366127) < 1e-12);
    const cd alpha(0.7, -1.1);
    CHECK(std::abs(std::abs(coherent_overlap(0.0, alpha)) - std::exp(-std::norm(alpha) / 2.0)) < 1e-15);

    // Against the truncated Fock inner product.
    const cd beta(0.4, 0.2);
    const cd gamma(-0.3, 0.9);
    const cd brute = coherent_vector(beta, 60).dot(coherent_vector(gamma, 60));
    CHECK(std::abs(coherent_overlap(beta, gamma) - brute) < 1e-13);
}

TEST_CASE("coherent overlap modulus is bounded by one") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const cd b = random_complex(rng);
        const cd g = random_complex(rng);
        const double modulus = std::abs(coherent_overlap(b, g));
        CHECK(modulus <= 1.0);
        CHECK(modulus < 1.0);
        CHECK(std::abs(coherent_overlap(b, b)) == doctest::Approx(1.0));
    }
}

TEST_CASE("fidelity of trivial evolutions") {
    const Cscq q{1.0, 1.0, 0.5};
    const auto identity = row_on(2, {{Mode::sender_exciton(), 1.0}});
    CHECK(transfer_fidelity(identity, q, Mode::sender_exciton()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(transfer_fidelity(identity, q, Mode::sender_exciton(), PhaseConvention::Strict) ==
          doctest::Approx(1.0).epsilon(1e-14));

    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto row = random_row(rng, 3);
        for (int k = 0; k < mode_count(3); ++k) {
            CHECK(transfer_fidelity(row, {1.0, 0.0, 0.0}, mode_at(3, k)) == doctest::Approx(1.0));
        }
    }
    CHECK_THROWS_AS(transfer_fidelity(identity, {1.0, -1.0, 0.0}, Mode::sender_exciton()), DegenerateQubit);
}

TEST_CASE("phase conventions at a perfect but rotated transfer") {
    const Cscq q{1.0, cd(0.3, 0.5), 0.6};
    const double phi = 1.1;
    const auto row = row_on(2, {{Mode::receiver_exciton(1), std::polar(1.0, phi)}});
    CHECK(transfer_fidelity(row, q, Mode::receiver_exciton(1)) == doctest::Approx(1.0).epsilon(1e-14));

    // Strict: |<Q(alpha)|Q(alpha e^{i phi})>|^2 from truncated Fock vectors.
    auto cat = [&](cd a) {
        Eigen::VectorXcd v = q.mu * coherent_vector(a, 60) + q.nu * coherent_vector(-a, 60);
        return Eigen::VectorXcd(v / v.norm());
    };
    const double brute = std::norm(cat(q.alpha).dot(cat(q.alpha * std::polar(1.0, phi))));
    CHECK(std::abs(transfer_fidelity(row, q, Mode::receiver_exciton(1), PhaseConvention::Strict) - brute) < 1e-12);
    CHECK(brute < 0.9);
}

TEST_CASE("fidelity closed form matches a two-mode brute force") {
    // Amplitude split between sender and target exciton: the state is a two-mode cat.
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 2.0);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    for (int trial = 0; trial < 25; ++trial) {
        const Cscq q{random_complex(rng), random_complex(rng), random_complex(rng, 0.6)};
        const double theta = angle(rng);
        const cd us = std::polar(std::cos(theta), phase(rng));
        const cd ur = std::polar(std::sin(theta), phase(rng));
        const auto row = row_on(1, {{Mode::sender_exciton(), us}, {Mode::receiver_exciton(1), ur}});

        const int levels = 30;
        const Eigen::VectorXcd psi = two_mode_cat(q.mu, q.nu, q.alpha * us, q.alpha * ur, levels);
        for (auto convention : {PhaseConvention::Strict, PhaseConvention::Rotated}) {
            const cd target_alpha =
                convention == PhaseConvention::Rotated ? q.alpha * std::polar(1.0, std::arg(ur)) : q.alpha;
            const Eigen::VectorXcd target = two_mode_cat(q.mu, q.nu, 0.0, target_alpha, levels);
            const double brute = std::norm(target.dot(psi));
            CHECK(std::abs(transfer_fidelity(row, q, Mode::receiver_exciton(1), convention) - brute) < 1e-10);
        }
    }
}

TEST_CASE("fidelity invariances (random rows and qubits)") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const auto row = random_row(rng, 2);
        const Cscq q{random_complex(rng), random_complex(rng), random_complex(rng, 0.7)};
        const Mode target = Mode::receiver_exciton(1 + trial % 2);
        const double f = transfer_fidelity(row, q, target);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        const cd phase = std::polar(1.0, 0.37 * trial);
        CHECK(std::abs(transfer_fidelity(row, {phase * q.mu, phase * q.nu, q.alpha}, target) - f) < 1e-12);
        // A global phase on the row (frame shift) does not change the rotated fidelity.
        TransferCoefficients shifted = row;
        shifted.amplitudes *= std::polar(1.0, -2.9 * trial);
        CHECK(std::abs(transfer_fidelity(shifted, q, target) - f) < 1e-12);
    }
}

TEST_CASE("field population") {
    const auto identity = row_on(2, {{Mode::sender_exciton(), 1.0}});
    CHECK(field_population(identity) == 0.0);
    const auto split = row_on(2, {{Mode::sender_field(), 0.6}, {Mode::channel_field(), cd(0.0, 0.48)},
                                  {Mode::receiver_field(2), 0.64}});
    CHECK(field_population(split) == doctest::Approx(0.36 + 0.2304 + 0.4096));

    std::mt19937 rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const auto row = random_row(rng, 4);
        double expected = 0.0;
        for (Mode m : {Mode::sender_field(), Mode::channel_field(), Mode::receiver_field(1),
                       Mode::receiver_field(2), Mode::receiver_field(3), Mode::receiver_field(4)}) {
            expected += row.population(m);
        }
        CHECK(field_population(row) == doctest::Approx(expected));
        CHECK(field_population(row) <= 1.0 + 1e-12);
    }
}

TEST_CASE("mean photon number") {
    std::mt19937 rng(31);
    const auto row = random_row(rng, 2);
    const cd alpha(0.5, 0.2);
    CHECK(mean_photon_number(row, {1.0, 0.0, alpha}) == doctest::Approx(std::norm(alpha) * field_population(row)));
    CHECK(mean_photon_number(row, {1.0, 1.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(mean_photon_number(row, {1.0, -1.0, 0.0}), DegenerateQubit);

    // Even cat: |alpha|^2 tanh(|alpha|^2) photons per unit field population.
    const double a2 = 0.25;
    CHECK(mean_photon_number(row, {1.0, 1.0, 0.5}) ==
          doctest::Approx(a2 * std::tanh(a2) * field_population(row)).epsilon(1e-12));
}

TEST_CASE("mean photon number is F(t) times a time-independent factor") {
    const Spectrum spectrum(build_coupling_matrix(figure_config(3)));
    std::mt19937 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const Cscq q{random_complex(rng), random_complex(rng), random_complex(rng, 0.7)};
        double ratio = -1.0;
        double last_f = -1.0;
        double last_n = -1.0;
        for (double t : {0.4, 1.3, 7.7, 250.0, 4500.0}) {
            const auto row = transfer_row(spectrum, t, Mode::sender_exciton());
            const double f = field_population(row);
            const double n = mean_photon_number(row, q);
            CHECK(n >= 0.0);
            REQUIRE(f > 1e-12);
            if (ratio < 0.0) ratio = n / f;
            CHECK(n / f == doctest::Approx(ratio).epsilon(1e-12));
            if (last_f >= 0.0 && f > last_f) CHECK(n >= last_n);
            last_f = f;
            last_n = n;
        }
    }
}
