#include "cqroute/fock_oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "cqroute/errors.hpp"

namespace cqroute {

namespace {

constexpr double kNormTolerance = 1e-8;

struct HoppingTerm {
    int a;
    int b;
    double rate;
};

}  // namespace

FockSpace::FockSpace(int n_receivers, int cutoff, std::size_t dimension_limit)
    : n_receivers_(n_receivers), n_modes_(mode_count(n_receivers)), cutoff_(cutoff), dim_(1) {
    if (n_receivers < 1) throw ConfigError("n_receivers must be positive");
    if (cutoff < 1) throw ConfigError("Fock cutoff must be at least 1");
    const std::size_t base = static_cast<std::size_t>(cutoff) + 1;
    strides_.assign(static_cast<std::size_t>(n_modes_), 1);
    for (int m = n_modes_ - 1; m >= 0; --m) {
        strides_[static_cast<std::size_t>(m)] = dim_;
        if (dim_ > dimension_limit / base) {
            throw DimensionGuard("Fock space (" + std::to_string(cutoff) + "+1)^" +
                                 std::to_string(n_modes_) + " exceeds the dimension limit " +
                                 std::to_string(dimension_limit));
        }
        dim_ *= base;
    }
}

int FockSpace::total_occupation(std::size_t index) const {
    int total = 0;
    const std::size_t base = static_cast<std::size_t>(cutoff_) + 1;
    for (int m = n_modes_ - 1; m >= 0; --m) {
        total += static_cast<int>(index % base);
        index /= base;
    }
    return total;
}

std::vector<int> FockSpace::occupations(std::size_t index) const {
    std::vector<int> occ(static_cast<std::size_t>(n_modes_));
    for (int m = 0; m < n_modes_; ++m) occ[static_cast<std::size_t>(m)] = occupation(index, m);
    return occ;
}

std::size_t FockSpace::index_of(const std::vector<int>& occupations) const {
    if (static_cast<int>(occupations.size()) != n_modes_) {
        throw std::invalid_argument("occupation tuple has the wrong length");
    }
    std::size_t index = 0;
    for (int m = 0; m < n_modes_; ++m) {
        const int n = occupations[static_cast<std::size_t>(m)];
        if (n < 0 || n > cutoff_) throw std::invalid_argument("occupation outside the cutoff");
        index += static_cast<std::size_t>(n) * stride(m);
    }
    return index;
}

FockHamiltonian build_fock_hamiltonian(const NetworkConfig& config, int cutoff,
                                       std::size_t dimension_limit) {
    config.validate();
    FockSpace space(config.n_receivers, cutoff, dimension_limit);
    const int n = config.n_receivers;
    auto ord = [n](Mode m) { return mode_ordinal(n, m); };

    // Bare mode frequencies and hopping terms straight from the RWA Hamiltonian.
    std::vector<double> omega(static_cast<std::size_t>(space.n_modes()), config.frame_offset);
    std::vector<HoppingTerm> terms;
    const TernarySet& active = config.active_set();
    omega[static_cast<std::size_t>(ord(Mode::sender_exciton()))] += active.delta;
    terms.push_back({ord(Mode::sender_field()), ord(Mode::sender_exciton()), active.g});
    terms.push_back({ord(Mode::channel_field()), ord(Mode::sender_field()), config.hop});
    for (int j = 1; j <= n; ++j) {
        const TernarySet& s = config.sets[static_cast<std::size_t>(j - 1)];
        omega[static_cast<std::size_t>(ord(Mode::channel_exciton(j)))] += s.delta;
        omega[static_cast<std::size_t>(ord(Mode::receiver_exciton(j)))] += s.delta;
        terms.push_back({ord(Mode::channel_field()), ord(Mode::channel_exciton(j)), s.g});
        terms.push_back({ord(Mode::receiver_field(j)), ord(Mode::receiver_exciton(j)), s.g});
        terms.push_back({ord(Mode::channel_field()), ord(Mode::receiver_field(j)), config.hop});
    }

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(space.dim() * (1 + 2 * terms.size()));
    std::vector<int> occ(static_cast<std::size_t>(space.n_modes()));
    for (std::size_t i = 0; i < space.dim(); ++i) {
        double diagonal = 0.0;
        for (int m = 0; m < space.n_modes(); ++m) {
            occ[static_cast<std::size_t>(m)] = space.occupation(i, m);
            diagonal += omega[static_cast<std::size_t>(m)] * occ[static_cast<std::size_t>(m)];
        }
        if (diagonal != 0.0) {
            triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), diagonal);
        }
        // a_to^dagger a_from moves one quantum; both orientations of each term.
        auto hop = [&](int to, int from, double rate) {
            const int n_from = occ[static_cast<std::size_t>(from)];
            const int n_to = occ[static_cast<std::size_t>(to)];
            if (n_from == 0 || n_to == space.cutoff()) return;
            const std::size_t j = i - space.stride(from) + space.stride(to);
            triplets.emplace_back(static_cast<int>(j), static_cast<int>(i),
                                  rate * std::sqrt(static_cast<double>(n_from) * (n_to + 1)));
        };
        for (const auto& term : terms) {
            if (term.rate == 0.0) continue;
            hop(term.a, term.b, term.rate);
            hop(term.b, term.a, term.rate);
        }
    }

    const auto d = static_cast<Eigen::Index>(space.dim());
    Eigen::SparseMatrix<double> matrix(d, d);
    matrix.setFromTriplets(triplets.begin(), triplets.end());
    matrix.makeCompressed();
    return {std::move(space), std::move(matrix)};
}

FockEvolver::FockEvolver(const FockHamiltonian& hamiltonian, std::size_t dense_block_limit)
    : hamiltonian_(hamiltonian), dense_block_limit_(dense_block_limit) {
    const FockSpace& space = hamiltonian.space;
    members_.resize(static_cast<std::size_t>(space.n_modes() * space.cutoff() + 1));
    position_.resize(space.dim());
    for (std::size_t i = 0; i < space.dim(); ++i) {
        auto& block = members_[static_cast<std::size_t>(space.total_occupation(i))];
        position_[i] = block.size();
        block.push_back(i);
    }
}

const FockEvolver::Block& FockEvolver::block(int excitations) {
    if (auto it = cache_.find(excitations); it != cache_.end()) return it->second;

    const auto& members = members_[static_cast<std::size_t>(excitations)];
    const auto size = static_cast<Eigen::Index>(members.size());
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(size, size);
    for (Eigen::Index col = 0; col < size; ++col) {
        const auto global = static_cast<Eigen::Index>(members[static_cast<std::size_t>(col)]);
        for (Eigen::SparseMatrix<double>::InnerIterator it(hamiltonian_.matrix, global); it; ++it) {
            const auto row = static_cast<std::size_t>(it.row());
            if (hamiltonian_.space.total_occupation(row) != excitations) {
                throw EvolutionFailure("Hamiltonian couples different excitation numbers", 0.0);
            }
            dense(static_cast<Eigen::Index>(position_[row]), col) = it.value();
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    if (solver.info() != Eigen::Success) {
        throw EigenFailure("eigendecomposition of excitation block " + std::to_string(excitations) +
                           " did not converge");
    }
    return cache_.emplace(excitations, Block{solver.eigenvalues(), solver.eigenvectors()})
        .first->second;
}

FockState FockEvolver::evolve(const FockState& psi, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("evolution time must be non-negative");
    if (static_cast<std::size_t>(psi.amplitudes.size()) != hamiltonian_.space.dim()) {
        throw std::invalid_argument("state dimension does not match the Fock space");
    }

    std::vector<int> occupied;
    for (std::size_t k = 0; k < members_.size(); ++k) {
        for (std::size_t i : members_[k]) {
            if (psi.amplitudes(static_cast<Eigen::Index>(i)) != complex{}) {
                occupied.push_back(static_cast<int>(k));
                if (members_[k].size() > dense_block_limit_) return evolve_taylor(psi, t);
                break;
            }
        }
    }

    FockState out{Eigen::VectorXcd::Zero(psi.amplitudes.size()), psi.truncation_weight};
    for (int k : occupied) {
        const Block& b = block(k);
        const auto& members = members_[static_cast<std::size_t>(k)];
        Eigen::VectorXcd local(static_cast<Eigen::Index>(members.size()));
        for (std::size_t p = 0; p < members.size(); ++p) {
            local(static_cast<Eigen::Index>(p)) = psi.amplitudes(static_cast<Eigen::Index>(members[p]));
        }
        Eigen::VectorXcd coeffs = b.eigenvectors.transpose().cast<complex>() * local;
        for (Eigen::Index e = 0; e < coeffs.size(); ++e) {
            coeffs(e) *= std::polar(1.0, -b.eigenvalues(e) * t);
        }
        local = b.eigenvectors.cast<complex>() * coeffs;
        for (std::size_t p = 0; p < members.size(); ++p) {
            out.amplitudes(static_cast<Eigen::Index>(members[p])) = local(static_cast<Eigen::Index>(p));
        }
    }

    const double defect = std::abs(out.amplitudes.norm() - psi.amplitudes.norm());
    if (defect > kNormTolerance) {
        throw EvolutionFailure("block evolution changed the norm by " + std::to_string(defect), defect);
    }
    return out;
}

FockState FockEvolver::evolve_taylor(const FockState& psi, double t, std::size_t max_steps) const {
    if (!(t >= 0.0)) throw std::invalid_argument("evolution time must be non-negative");
    FockState out = psi;
    if (t == 0.0) return out;

    const Eigen::SparseMatrix<complex> h = hamiltonian_.matrix.cast<complex>();
    double norm1 = 0.0;
    for (Eigen::Index col = 0; col < hamiltonian_.matrix.outerSize(); ++col) {
        double sum = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(hamiltonian_.matrix, col); it; ++it) {
            sum += std::abs(it.value());
        }
        norm1 = std::max(norm1, sum);
    }
    const double steps_needed = std::ceil(t * norm1 / 0.5);
    if (steps_needed > static_cast<double>(max_steps)) {
        throw EvolutionFailure("Taylor integration would need " + std::to_string(steps_needed) +
                                   " steps",
                               std::numeric_limits<double>::quiet_NaN());
    }
    const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(steps_needed));
    const complex factor{0.0, -t / static_cast<double>(steps)};

    Eigen::VectorXcd term;
    for (std::size_t s = 0; s < steps; ++s) {
        term = out.amplitudes;
        for (int k = 1; k <= 40; ++k) {
            term = (h * term) * (factor / static_cast<double>(k));
            out.amplitudes += term;
            if (term.norm() < 1e-17 * out.amplitudes.norm()) break;
        }
    }

    const double defect = std::abs(out.amplitudes.norm() - psi.amplitudes.norm());
    if (defect > kNormTolerance) {
        throw EvolutionFailure("Taylor integration changed the norm by " + std::to_string(defect), defect);
    }
    return out;
}

FockState evolve_state(const FockHamiltonian& hamiltonian, const FockState& psi0, double t) {
    FockEvolver evolver(hamiltonian);
    return evolver.evolve(psi0, t);
}

double poisson_tail(complex alpha, int cutoff) {
    const double mean = std::norm(alpha);
    if (mean == 0.0) return 0.0;
    double term = std::exp(-mean);  // P(0)
    double tail = 0.0;
    for (int n = 1;; ++n) {
        term *= mean / n;
        if (n > cutoff) {
            tail += term;
            if (n > mean && term < 1e-20 * tail) break;
        }
    }
    return tail;
}

int select_cutoff(complex alpha, double tail) {
    int cutoff = 1;
    while (poisson_tail(alpha, cutoff) >= tail) ++cutoff;
    return cutoff;
}

FockState prepare_cscq_state(const Cscq& q, const FockSpace& space, Mode slot,
                             double truncation_limit) {
    const double norm = normalization(q);
    const int cutoff = space.cutoff();

    std::vector<complex> local(static_cast<std::size_t>(cutoff) + 1);
    const double envelope = std::exp(-0.5 * std::norm(q.alpha));
    complex plus = envelope;   // <n|alpha>
    complex minus = envelope;  // <n|-alpha>
    double kept = 0.0;
    for (int n = 0; n <= cutoff; ++n) {
        if (n > 0) {
            const double scale = 1.0 / std::sqrt(static_cast<double>(n));
            plus *= q.alpha * scale;
            minus *= -q.alpha * scale;
        }
        local[static_cast<std::size_t>(n)] = q.mu * plus + q.nu * minus;
        kept += std::norm(local[static_cast<std::size_t>(n)]);
    }

    const double weight = std::max(0.0, 1.0 - kept / norm);
    if (weight > truncation_limit) {
        throw ExcessiveTruncation("cutoff " + std::to_string(cutoff) + " discards weight " +
                                      std::to_string(weight),
                                  weight);
    }

    FockState state{Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dim())), weight};
    const std::size_t stride = space.stride(mode_ordinal(space.n_receivers(), slot));
    const double rescale = 1.0 / std::sqrt(kept);
    for (int n = 0; n <= cutoff; ++n) {
        state.amplitudes(static_cast<Eigen::Index>(static_cast<std::size_t>(n) * stride)) =
            local[static_cast<std::size_t>(n)] * rescale;
    }
    return state;
}

FockState prepare_cscq_state(const Cscq& q, const NetworkConfig& config, int cutoff,
                             double truncation_limit) {
    config.validate();
    return prepare_cscq_state(q, FockSpace(config.n_receivers, cutoff), Mode::sender_exciton(),
                              truncation_limit);
}

FockState single_excitation_state(const FockSpace& space, Mode mode) {
    FockState state{Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dim())), 0.0};
    state.amplitudes(static_cast<Eigen::Index>(space.stride(mode_ordinal(space.n_receivers(), mode)))) = 1.0;
    return state;
}

double state_fidelity(const FockState& psi, const Cscq& q, const FockSpace& space, Mode target,
                      double target_phase) {
    Cscq rotated = q;
    rotated.alpha *= std::polar(1.0, target_phase);
    const FockState reference = prepare_cscq_state(rotated, space, target);
    const complex overlap = reference.amplitudes.dot(psi.amplitudes);
    return std::norm(overlap) / psi.amplitudes.squaredNorm();
}

Eigen::VectorXd mode_occupations(const FockState& psi, const FockSpace& space) {
    Eigen::VectorXd occ = Eigen::VectorXd::Zero(space.n_modes());
    for (std::size_t i = 0; i < space.dim(); ++i) {
        const double p = std::norm(psi.amplitudes(static_cast<Eigen::Index>(i)));
        if (p == 0.0) continue;
        for (int m = 0; m < space.n_modes(); ++m) occ(m) += p * space.occupation(i, m);
    }
    return occ / psi.amplitudes.squaredNorm();
}

double mean_photons(const FockState& psi, const FockSpace& space) {
    const Eigen::VectorXd occ = mode_occupations(psi, space);
    double total = 0.0;
    for (int m = 0; m < space.n_modes(); ++m) {
        if (mode_at(space.n_receivers(), m).is_field()) total += occ(m);
    }
    return total;
}

}  // namespace cqroute
