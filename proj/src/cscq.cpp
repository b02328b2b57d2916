#include "cqroute/cscq.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "cqroute/errors.hpp"

namespace cqroute {

namespace {

double cross_term(const Cscq& q) {
    // mu nu* + mu* nu = 2 Re(mu nu*)
    return 2.0 * std::real(q.mu * std::conj(q.nu));
}

}  // namespace

double normalization(const Cscq& q, double epsilon) {
    const double value = std::norm(q.mu) + std::norm(q.nu) +
                         std::exp(-2.0 * std::norm(q.alpha)) * cross_term(q);
    if (!(value > epsilon)) {
        throw DegenerateQubit("qubit normalization " + std::to_string(value) +
                              " is below the degeneracy threshold");
    }
    return value;
}

complex coherent_overlap(complex beta, complex gamma) {
    return std::exp(-0.5 * std::norm(beta) - 0.5 * std::norm(gamma) + std::conj(beta) * gamma);
}

double transfer_fidelity(const TransferCoefficients& c, const Cscq& q, Mode target,
                         PhaseConvention convention) {
    const double norm = normalization(q);
    const int target_ordinal = mode_ordinal(c.n_receivers, target);

    complex target_alpha = q.alpha;
    if (convention == PhaseConvention::Rotated) {
        target_alpha *= std::polar(1.0, std::arg(c.amplitudes(target_ordinal)));
    }

    // Two branches (+alpha, -alpha) on each side give four multimode overlaps.
    const std::array<complex, 2> weight{q.mu, q.nu};
    const std::array<double, 2> sign{1.0, -1.0};
    complex overlap{0.0, 0.0};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            complex product{1.0, 0.0};
            for (Eigen::Index x = 0; x < c.amplitudes.size(); ++x) {
                const complex bra = x == target_ordinal ? sign[a] * target_alpha : complex{};
                const complex ket = sign[b] * q.alpha * c.amplitudes(x);
                product *= coherent_overlap(bra, ket);
            }
            overlap += std::conj(weight[a]) * weight[b] * product;
        }
    }
    return std::clamp(std::norm(overlap) / (norm * norm), 0.0, 1.0);
}

double field_population(const TransferCoefficients& c) {
    double total = 0.0;
    for (Eigen::Index x = 0; x < c.amplitudes.size(); ++x) {
        if (mode_at(c.n_receivers, static_cast<int>(x)).is_field()) total += std::norm(c.amplitudes(x));
    }
    return total;
}

double mean_photon_number(const TransferCoefficients& c, const Cscq& q) {
    const double norm = normalization(q);
    const double odd_weight = std::norm(q.mu) + std::norm(q.nu) -
                              std::exp(-2.0 * std::norm(q.alpha)) * cross_term(q);
    return std::norm(q.alpha) * odd_weight * field_population(c) / norm;
}

}  // namespace cqroute
