#include "cqroute/network_model.hpp"

#include <cmath>
#include <utility>

#include "cqroute/errors.hpp"

namespace cqroute {

void NetworkConfig::validate() const {
    if (n_receivers < 1) {
        throw ConfigError("n_receivers must be positive, got " + std::to_string(n_receivers));
    }
    if (static_cast<int>(sets.size()) != n_receivers) {
        throw ConfigError("expected " + std::to_string(n_receivers) + " ternary sets, got " +
                          std::to_string(sets.size()));
    }
    if (active_sender < 1 || active_sender > n_receivers) {
        throw ConfigError("active_sender must lie in 1.." + std::to_string(n_receivers) + ", got " +
                          std::to_string(active_sender));
    }
    if (!(hop > 0.0) || !std::isfinite(hop)) {
        throw ConfigError("hop must be a positive finite number");
    }
    if (!std::isfinite(frame_offset)) {
        throw ConfigError("frame_offset must be finite");
    }
    for (std::size_t k = 0; k < sets.size(); ++k) {
        const auto& s = sets[k];
        if (!std::isfinite(s.g) || !std::isfinite(s.delta)) {
            throw ConfigError("set " + std::to_string(k + 1) + " has a non-finite parameter");
        }
        if (s.g < 0.0) {
            throw ConfigError("set " + std::to_string(k + 1) + " has negative g");
        }
    }
}

bool sets_distinct(const NetworkConfig& config) {
    for (std::size_t a = 0; a < config.sets.size(); ++a) {
        for (std::size_t b = a + 1; b < config.sets.size(); ++b) {
            if (config.sets[a] == config.sets[b]) return false;
        }
    }
    return true;
}

int mode_count(int n_receivers) { return 3 * n_receivers + 3; }

int mode_ordinal(int n_receivers, Mode mode) {
    auto check_j = [&] {
        if (mode.j < 1 || mode.j > n_receivers) {
            throw ConfigError("receiver index " + std::to_string(mode.j) + " outside 1.." +
                              std::to_string(n_receivers));
        }
    };
    switch (mode.kind) {
        case ModeKind::SenderField: return 0;
        case ModeKind::SenderExciton: return 1;
        case ModeKind::ChannelField: return 2;
        case ModeKind::ChannelExciton: check_j(); return 2 + mode.j;
        case ModeKind::ReceiverField: check_j(); return 2 + n_receivers + mode.j;
        case ModeKind::ReceiverExciton: check_j(); return 2 + 2 * n_receivers + mode.j;
    }
    throw ConfigError("unknown mode kind");
}

int mode_ordinal(const NetworkConfig& config, Mode mode) {
    return mode_ordinal(config.n_receivers, mode);
}

Mode mode_at(int n_receivers, int ordinal) {
    if (ordinal < 0 || ordinal >= mode_count(n_receivers)) {
        throw ConfigError("mode ordinal " + std::to_string(ordinal) + " out of range");
    }
    if (ordinal == 0) return Mode::sender_field();
    if (ordinal == 1) return Mode::sender_exciton();
    if (ordinal == 2) return Mode::channel_field();
    const int rest = ordinal - 3;
    const int j = rest % n_receivers + 1;
    switch (rest / n_receivers) {
        case 0: return Mode::channel_exciton(j);
        case 1: return Mode::receiver_field(j);
        default: return Mode::receiver_exciton(j);
    }
}

std::string to_string(Mode mode) {
    const auto j = std::to_string(mode.j);
    switch (mode.kind) {
        case ModeKind::SenderField: return "SenderField";
        case ModeKind::SenderExciton: return "SenderExciton";
        case ModeKind::ChannelField: return "ChannelField";
        case ModeKind::ChannelExciton: return "ChannelExciton(" + j + ")";
        case ModeKind::ReceiverField: return "ReceiverField(" + j + ")";
        case ModeKind::ReceiverExciton: return "ReceiverExciton(" + j + ")";
    }
    return "?";
}

CouplingMatrix::CouplingMatrix(int n_receivers, Eigen::MatrixXd entries)
    : n_receivers_(n_receivers), entries_(std::move(entries)) {
    if (n_receivers < 1) throw ConfigError("n_receivers must be positive");
    const Eigen::Index d = mode_count(n_receivers);
    if (entries_.rows() != d || entries_.cols() != d) {
        throw ConfigError("coupling matrix must be " + std::to_string(d) + "x" + std::to_string(d));
    }
    if (!entries_.allFinite()) throw ConfigError("coupling matrix has non-finite entries");
    if (entries_ != entries_.transpose()) throw ConfigError("coupling matrix is not symmetric");
}

double CouplingMatrix::operator()(Mode row, Mode col) const {
    return entries_(mode_ordinal(n_receivers_, row), mode_ordinal(n_receivers_, col));
}

CouplingMatrix build_coupling_matrix(const NetworkConfig& config) {
    config.validate();
    const int n = config.n_receivers;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(mode_count(n), mode_count(n));

    auto link = [&](Mode a, Mode b, double value) {
        const int i = mode_ordinal(n, a);
        const int k = mode_ordinal(n, b);
        m(i, k) = value;
        m(k, i) = value;
    };
    auto onsite = [&](Mode a, double value) {
        const int i = mode_ordinal(n, a);
        m(i, i) = value;
    };

    const double wf = config.frame_offset;
    const TernarySet& active = config.active_set();

    onsite(Mode::sender_field(), wf);
    onsite(Mode::sender_exciton(), wf + active.delta);
    onsite(Mode::channel_field(), wf);
    link(Mode::sender_field(), Mode::sender_exciton(), active.g);
    link(Mode::channel_field(), Mode::sender_field(), config.hop);

    for (int j = 1; j <= n; ++j) {
        const TernarySet& s = config.sets[static_cast<std::size_t>(j - 1)];
        onsite(Mode::channel_exciton(j), wf + s.delta);
        onsite(Mode::receiver_field(j), wf);
        onsite(Mode::receiver_exciton(j), wf + s.delta);
        link(Mode::channel_field(), Mode::channel_exciton(j), s.g);
        link(Mode::receiver_field(j), Mode::receiver_exciton(j), s.g);
        link(Mode::channel_field(), Mode::receiver_field(j), config.hop);
    }
    return CouplingMatrix(n, std::move(m));
}

}  // namespace cqroute
