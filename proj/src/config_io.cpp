#include "cqroute/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cqroute/errors.hpp"

namespace cqroute {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

int line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    int line = 1;
    for (std::size_t k = 0; k < offset; ++k) {
        if (text[k] == '\n') ++line;
    }
    return line;
}

// Best effort: the first line mentioning "key".
int line_of_key(std::string_view text, const std::string& key) {
    const auto pos = text.find("\"" + key + "\"");
    return pos == std::string_view::npos ? 0 : line_of_offset(text, pos);
}

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    [[noreturn]] void fail(const std::string& key, const std::string& message) const {
        throw ParseError(message, line_of_key(text_, key));
    }

    void reject_unknown(const json& object, const std::set<std::string>& allowed,
                        const std::string& where) const {
        for (const auto& [key, value] : object.items()) {
            if (!allowed.count(key)) fail(key, "unknown key '" + key + "' in " + where);
        }
    }

    double number(const json& object, const std::string& key, double fallback) const {
        if (!object.contains(key)) return fallback;
        const json& v = object.at(key);
        if (!v.is_number()) fail(key, "'" + key + "' must be a number");
        return v.get<double>();
    }

    int integer(const json& object, const std::string& key, int fallback) const {
        if (!object.contains(key)) return fallback;
        const json& v = object.at(key);
        if (!v.is_number_integer()) fail(key, "'" + key + "' must be an integer");
        return v.get<int>();
    }

private:
    std::string_view text_;
};

}  // namespace

RunConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    Reader reader(text);
    if (!root.is_object()) throw ParseError("config must be a JSON object", 1);
    reader.reject_unknown(root, {"n_receivers", "hop", "active_sender", "frame_offset", "qubit", "sets"},
                          "config");

    RunConfig config;
    NetworkConfig& net = config.network;
    if (!root.contains("sets")) throw ParseError("missing required key 'sets'", 0);
    const json& sets = root.at("sets");
    if (!sets.is_array()) reader.fail("sets", "'sets' must be a list of {g, delta}");
    for (const auto& entry : sets) {
        if (!entry.is_object()) reader.fail("sets", "each entry of 'sets' must be an object");
        reader.reject_unknown(entry, {"g", "delta"}, "a ternary set");
        if (!entry.contains("g") || !entry.contains("delta")) {
            reader.fail("sets", "each ternary set needs both 'g' and 'delta'");
        }
        net.sets.push_back({reader.number(entry, "g", 0.0), reader.number(entry, "delta", 0.0)});
    }
    net.n_receivers = reader.integer(root, "n_receivers", static_cast<int>(net.sets.size()));
    net.hop = reader.number(root, "hop", 1.0);
    net.active_sender = reader.integer(root, "active_sender", 1);
    net.frame_offset = reader.number(root, "frame_offset", 0.0);

    if (root.contains("qubit")) {
        const json& q = root.at("qubit");
        if (!q.is_object()) reader.fail("qubit", "'qubit' must be an object");
        reader.reject_unknown(q, {"mu_re", "mu_im", "nu_re", "nu_im", "alpha_re", "alpha_im"}, "qubit");
        const Cscq d = config.qubit;
        config.qubit.mu = {reader.number(q, "mu_re", d.mu.real()), reader.number(q, "mu_im", d.mu.imag())};
        config.qubit.nu = {reader.number(q, "nu_re", d.nu.real()), reader.number(q, "nu_im", d.nu.imag())};
        config.qubit.alpha = {reader.number(q, "alpha_re", d.alpha.real()),
                              reader.number(q, "alpha_im", d.alpha.imag())};
    }

    try {
        net.validate();
    } catch (const ConfigError& e) {
        throw ParseError(std::string("invalid network: ") + e.what(), 0);
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file " + path.string(), 0);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line());
    }
}

std::string emit_config(const RunConfig& config) {
    const NetworkConfig& net = config.network;
    ordered_json root;
    root["n_receivers"] = net.n_receivers;
    root["hop"] = net.hop;
    root["active_sender"] = net.active_sender;
    root["frame_offset"] = net.frame_offset;
    root["qubit"] = {
        {"mu_re", config.qubit.mu.real()},       {"mu_im", config.qubit.mu.imag()},
        {"nu_re", config.qubit.nu.real()},       {"nu_im", config.qubit.nu.imag()},
        {"alpha_re", config.qubit.alpha.real()}, {"alpha_im", config.qubit.alpha.imag()},
    };
    root["sets"] = ordered_json::array();
    for (const auto& s : net.sets) root["sets"].push_back({{"g", s.g}, {"delta", s.delta}});
    return root.dump(2) + "\n";
}

std::uint64_t config_hash(const RunConfig& config) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : emit_config(config)) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string config_hash_hex(const RunConfig& config) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << config_hash(config);
    return os.str();
}

std::string format_number(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

OutputFormat parse_output_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw ConfigError("unknown output format '" + name + "' (expected csv or json)");
}

namespace {

// Round-trips through the 12-digit text form so CSV and JSON carry the same values.
double rounded(double value) { return std::stod(format_number(value)); }

void write_comments(std::ostream& os, const OutputMeta& meta) {
    os << "# " << kToolVersion << "\n";
    os << "# config_hash " << meta.config_hash << "\n";
    os << "# horizon " << format_number(meta.horizon) << "\n";
    os << "# points " << meta.points << "\n";
    if (!meta.note.empty()) os << "# " << meta.note << "\n";
}

ordered_json meta_json(const OutputMeta& meta) {
    ordered_json m;
    m["tool"] = kToolVersion;
    m["config_hash"] = meta.config_hash;
    m["horizon"] = rounded(meta.horizon);
    m["points"] = meta.points;
    if (!meta.note.empty()) m["note"] = meta.note;
    return m;
}

void write_table(std::ostream& os, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows, const OutputMeta& meta,
                 OutputFormat format) {
    if (format == OutputFormat::Csv) {
        write_comments(os, meta);
        for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_number(row[c]);
            os << "\n";
        }
        return;
    }
    ordered_json root;
    root["meta"] = meta_json(meta);
    root["columns"] = columns;
    root["rows"] = ordered_json::array();
    for (const auto& row : rows) {
        ordered_json r = ordered_json::array();
        for (double v : row) r.push_back(rounded(v));
        root["rows"].push_back(std::move(r));
    }
    os << root.dump() << "\n";
}

}  // namespace

void write_series(std::ostream& os, const TimeSeries& series, const Cscq& qubit,
                  const OutputMeta& meta, OutputFormat format) {
    const int n = series.n_receivers();
    std::vector<std::string> columns{"t", "U_s"};
    for (int j = 1; j <= n; ++j) columns.push_back("U_r" + std::to_string(j));
    columns.insert(columns.end(), {"F", "n_bar", "unitarity_defect"});

    std::vector<std::vector<double>> rows;
    rows.reserve(series.size());
    for (std::size_t k = 0; k < series.size(); ++k) {
        const TransferCoefficients& c = series.rows[k];
        std::vector<double> row{series.grid[k], c.population(Mode::sender_exciton())};
        for (int j = 1; j <= n; ++j) row.push_back(c.population(Mode::receiver_exciton(j)));
        row.push_back(field_population(c));
        row.push_back(mean_photon_number(c, qubit));
        row.push_back(unitarity_defect(c));
        rows.push_back(std::move(row));
    }
    write_table(os, columns, rows, meta, format);
}

std::string report_to_json(const TransferReport& report, int indent) {
    ordered_json r;
    r["target"] = report.target;
    r["horizon"] = rounded(report.horizon);
    r["points"] = report.points;
    r["t_star"] = rounded(report.t_star);
    r["peak_population"] = rounded(report.peak_population);
    r["crosstalk"] = rounded(report.crosstalk);
    r["confinement_defect"] = rounded(report.confinement_defect);
    r["max_field_population"] = rounded(report.max_field_population);
    r["fidelity_at_t_star"] = rounded(report.fidelity_at_t_star);
    r["sets_distinct"] = report.sets_distinct;
    r["selective"] = report.selective();
    r["thresholds"] = {{"peak_population_min", kPeakThreshold}, {"crosstalk_max", kCrosstalkLimit}};
    return r.dump(indent);
}

void write_sweep(std::ostream& os, const SweepGrid& grid, const OutputMeta& meta, OutputFormat format) {
    std::vector<std::string> columns;
    for (const auto& axis : grid.axes) columns.push_back(to_string(axis.param));

    if (format == OutputFormat::Csv) {
        write_comments(os, meta);
        for (const auto& c : columns) os << c << ",";
        os << "status,t_star,peak_population,crosstalk,confinement_defect,max_field_population,"
              "fidelity_at_t_star,selective,error\n";
        for (const auto& cell : grid.cells) {
            for (double v : cell.coordinates) os << format_number(v) << ",";
            if (cell.report) {
                const auto& r = *cell.report;
                os << "ok," << format_number(r.t_star) << "," << format_number(r.peak_population) << ","
                   << format_number(r.crosstalk) << "," << format_number(r.confinement_defect) << ","
                   << format_number(r.max_field_population) << ","
                   << format_number(r.fidelity_at_t_star) << "," << (r.selective() ? 1 : 0) << ",\n";
            } else {
                std::string message = cell.error;
                for (char& ch : message) {
                    if (ch == ',' || ch == '\n') ch = ';';
                }
                os << "error,,,,,,,0," << message << "\n";
            }
        }
        return;
    }

    ordered_json root;
    root["meta"] = meta_json(meta);
    root["axes"] = ordered_json::array();
    for (const auto& axis : grid.axes) {
        root["axes"].push_back({{"param", to_string(axis.param)},
                                {"min", axis.min},
                                {"max", axis.max},
                                {"count", axis.count}});
    }
    root["cells"] = ordered_json::array();
    for (const auto& cell : grid.cells) {
        ordered_json c;
        ordered_json coords = ordered_json::array();
        for (double v : cell.coordinates) coords.push_back(rounded(v));
        c["coordinates"] = coords;
        if (cell.report) {
            c["report"] = ordered_json::parse(report_to_json(*cell.report, -1));
        } else {
            c["error"] = cell.error;
        }
        root["cells"].push_back(std::move(c));
    }
    os << root.dump() << "\n";
}

}  // namespace cqroute
