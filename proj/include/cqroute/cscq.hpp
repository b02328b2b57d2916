#pragma once

#include <complex>

#include "cqroute/dynamics.hpp"
#include "cqroute/network_model.hpp"

namespace cqroute {

using complex = std::complex<double>;

inline constexpr double kDegeneracyThreshold = 1e-12;

/// Logical qubit mu|alpha> + nu|-alpha> built from two coherent states.
struct Cscq {
    complex mu{1.0, 0.0};
    complex nu{0.0, 0.0};
    complex alpha{0.0, 0.0};

    friend bool operator==(const Cscq&, const Cscq&) = default;
};

/// N_alpha = |mu|^2 + |nu|^2 + exp(-2|alpha|^2) (mu nu* + mu* nu).
/// Throws DegenerateQubit when N_alpha <= epsilon.
double normalization(const Cscq& q, double epsilon = kDegeneracyThreshold);

/// <beta|gamma> for two single-mode coherent states.
complex coherent_overlap(complex beta, complex gamma);

/// How the target qubit state is phased when measuring fidelity.
enum class PhaseConvention {
    /// Target amplitude alpha * exp(i arg u_target): a known local rotation on
    /// the receiver is not counted as infidelity.
    Rotated,
    /// Target amplitude alpha exactly.
    Strict,
};

/// |<target|psi(t)>|^2, where psi(t) carries the coherent amplitude alpha*u_x
/// on every mode x and the target holds the qubit on `target` only.
double transfer_fidelity(const TransferCoefficients& c, const Cscq& q, Mode target,
                         PhaseConvention convention = PhaseConvention::Rotated);

/// F(t): summed population of the N+2 field modes.
double field_population(const TransferCoefficients& c);

/// Mean photon number in all cavities for the evolved qubit state.
double mean_photon_number(const TransferCoefficients& c, const Cscq& q);

}  // namespace cqroute
