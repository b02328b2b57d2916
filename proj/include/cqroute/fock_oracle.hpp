#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cqroute/cscq.hpp"
#include "cqroute/network_model.hpp"

namespace cqroute {

inline constexpr std::size_t kDefaultDimensionLimit = 1'000'000;
inline constexpr double kDefaultTruncationLimit = 1e-3;

/// Product space of 3N+3 bosonic modes, each truncated at `cutoff` quanta.
/// Basis index is the occupation tuple read as a base-(cutoff+1) number with
/// mode ordinal 0 as the most significant digit.
class FockSpace {
public:
    FockSpace(int n_receivers, int cutoff, std::size_t dimension_limit = kDefaultDimensionLimit);

    int n_receivers() const { return n_receivers_; }
    int n_modes() const { return n_modes_; }
    int cutoff() const { return cutoff_; }
    std::size_t dim() const { return dim_; }

    std::size_t stride(int mode) const { return strides_[static_cast<std::size_t>(mode)]; }
    int occupation(std::size_t index, int mode) const {
        return static_cast<int>((index / stride(mode)) % static_cast<std::size_t>(cutoff_ + 1));
    }
    int total_occupation(std::size_t index) const;
    std::vector<int> occupations(std::size_t index) const;
    std::size_t index_of(const std::vector<int>& occupations) const;

private:
    int n_receivers_;
    int n_modes_;
    int cutoff_;
    std::size_t dim_;
    std::vector<std::size_t> strides_;
};

/// The full rotating-wave Hamiltonian on a truncated Fock space.
struct FockHamiltonian {
    FockSpace space;
    Eigen::SparseMatrix<double> matrix;  ///< real symmetric, column-major
};

FockHamiltonian build_fock_hamiltonian(const NetworkConfig& config, int cutoff,
                                       std::size_t dimension_limit = kDefaultDimensionLimit);

struct FockState {
    Eigen::VectorXcd amplitudes;
    double truncation_weight = 0.0;  ///< probability discarded when the state was prepared
};

/// Evolves states under exp(-iHt). The Hamiltonian conserves the total
/// number of quanta, so each occupied excitation block is diagonalized once
/// and cached; blocks larger than `dense_block_limit` fall back to a
/// short-step Taylor integrator on the whole vector.
class FockEvolver {
public:
    explicit FockEvolver(const FockHamiltonian& hamiltonian, std::size_t dense_block_limit = 3000);

    /// Throws EvolutionFailure if the norm drifts by more than 1e-8.
    FockState evolve(const FockState& psi, double t);

    /// Short-step Taylor integration, independent of the block route.
    FockState evolve_taylor(const FockState& psi, double t, std::size_t max_steps = 5'000'000) const;

private:
    struct Block {
        Eigen::VectorXd eigenvalues;
        Eigen::MatrixXd eigenvectors;
    };

    const Block& block(int excitations);

    const FockHamiltonian& hamiltonian_;
    std::size_t dense_block_limit_;
    std::vector<std::vector<std::size_t>> members_;  // basis indices per total occupation
    std::vector<std::size_t> position_;              // index within its block
    std::map<int, Block> cache_;
};

FockState evolve_state(const FockHamiltonian& hamiltonian, const FockState& psi0, double t);

/// Smallest cutoff whose Poisson tail P(n > cutoff) for |alpha|^2 is below `tail`.
int select_cutoff(complex alpha, double tail = 1e-5);

/// 1 - sum_{n<=cutoff} exp(-|alpha|^2) |alpha|^(2n) / n!
double poisson_tail(complex alpha, int cutoff);

/// Truncated, renormalized qubit on `slot`, vacuum on every other mode.
/// Throws ExcessiveTruncation if the discarded weight exceeds `truncation_limit`.
FockState prepare_cscq_state(const Cscq& q, const FockSpace& space, Mode slot,
                             double truncation_limit = kDefaultTruncationLimit);
FockState prepare_cscq_state(const Cscq& q, const NetworkConfig& config, int cutoff,
                             double truncation_limit = kDefaultTruncationLimit);

/// One quantum in `mode`, vacuum elsewhere.
FockState single_excitation_state(const FockSpace& space, Mode mode);

/// |<target|psi>|^2 with the qubit prepared on `target` with amplitude
/// alpha * exp(i target_phase). target_phase = 0 is the strict convention.
double state_fidelity(const FockState& psi, const Cscq& q, const FockSpace& space, Mode target,
                      double target_phase = 0.0);

/// <n_x> for every mode ordinal x.
Eigen::VectorXd mode_occupations(const FockState& psi, const FockSpace& space);

/// Summed <n> over the N+2 field modes.
double mean_photons(const FockState& psi, const FockSpace& space);

}  // namespace cqroute
