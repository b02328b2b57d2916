#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cqroute {

/// Parameters shared by the three quantum dots of one ternary set
/// (sender, channel and receiver copies), in units of the hop rate J.
struct TernarySet {
    double g = 0.0;      ///< exciton-field coupling, >= 0
    double delta = 0.0;  ///< exciton minus field frequency

    friend bool operator==(const TernarySet&, const TernarySet&) = default;
};

/// An N+2 cavity star network: a sender and N receivers, each hopping to a
/// central channel cavity with a uniform rate.
struct NetworkConfig {
    int n_receivers = 1;
    double hop = 1.0;
    std::vector<TernarySet> sets;
    int active_sender = 1;  ///< 1-based index of the sender QD coupled to the field
    double frame_offset = 0.0;

    /// Throws ConfigError on a broken invariant.
    void validate() const;

    const TernarySet& active_set() const { return sets.at(static_cast<std::size_t>(active_sender - 1)); }

    friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// True when every pair of ternary sets differs in g or delta. Routing is
/// only expected to be selective when this holds.
bool sets_distinct(const NetworkConfig& config);

enum class ModeKind : std::uint8_t {
    SenderField,
    SenderExciton,
    ChannelField,
    ChannelExciton,
    ReceiverField,
    ReceiverExciton,
};

/// A bosonic mode of the network. `j` is the 1-based set/receiver index for
/// the per-set kinds and ignored (kept 0) otherwise.
struct Mode {
    ModeKind kind = ModeKind::SenderField;
    int j = 0;

    static constexpr Mode sender_field() { return {ModeKind::SenderField, 0}; }
    static constexpr Mode sender_exciton() { return {ModeKind::SenderExciton, 0}; }
    static constexpr Mode channel_field() { return {ModeKind::ChannelField, 0}; }
    static constexpr Mode channel_exciton(int j) { return {ModeKind::ChannelExciton, j}; }
    static constexpr Mode receiver_field(int j) { return {ModeKind::ReceiverField, j}; }
    static constexpr Mode receiver_exciton(int j) { return {ModeKind::ReceiverExciton, j}; }

    bool is_field() const {
        return kind == ModeKind::SenderField || kind == ModeKind::ChannelField ||
               kind == ModeKind::ReceiverField;
    }

    friend bool operator==(const Mode&, const Mode&) = default;
};

// Ordering: SenderField, SenderExciton, ChannelField, ChannelExciton(1..N),
// ReceiverField(1..N), ReceiverExciton(1..N).
int mode_count(int n_receivers);
int mode_ordinal(int n_receivers, Mode mode);
int mode_ordinal(const NetworkConfig& config, Mode mode);
Mode mode_at(int n_receivers, int ordinal);
std::string to_string(Mode mode);

/// Real symmetric single-excitation matrix M with d/dt a = -i M a.
class CouplingMatrix {
public:
    /// Wraps an explicit matrix. Throws ConfigError unless it is
    /// (3N+3)x(3N+3), finite and exactly symmetric.
    CouplingMatrix(int n_receivers, Eigen::MatrixXd entries);

    int n_receivers() const { return n_receivers_; }
    Eigen::Index dim() const { return entries_.rows(); }
    const Eigen::MatrixXd& entries() const { return entries_; }
    double operator()(Mode row, Mode col) const;

private:
    int n_receivers_;
    Eigen::MatrixXd entries_;
};

CouplingMatrix build_coupling_matrix(const NetworkConfig& config);

}  // namespace cqroute
