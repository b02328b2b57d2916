// Command-line front end: cqroute <simulate|reproduce-fig|sweep|oracle-check> [options]

#include <iostream>

#include <CLI11.hpp>

#include "cqroute/commands.hpp"

int main(int argc, char** argv) {
    using namespace cqroute;

    CLI::App app{"Selective state routing in coupled-cavity QED networks"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    RunSpec spec;
    std::string config_path;
    std::string out_path;
    std::string report_path;
    std::string format = "csv";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_path, "Output file (default: stdout)");
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--horizon", spec.horizon, "Simulation horizon in units of 1/J")
            ->check(CLI::PositiveNumber);
        sub->add_option("--points", spec.points, "Number of grid points")->check(CLI::Range(2, 100'000'000));
        sub->add_flag("--strict-phase", spec.strict_phase, "Report the unrotated fidelity");
    };

    auto* simulate = app.add_subcommand("simulate", "Populations, F(t) and n_bar on a time grid");
    simulate->add_option("--config", config_path, "Network config file")->required();
    simulate->add_option("--report", report_path, "Also write the transfer report (JSON)");
    add_common(simulate);

    auto* fig = app.add_subcommand("reproduce-fig", "Run a built-in figure scenario (3..11)");
    fig->add_option("--fig", spec.figure, "Figure id")->required();
    fig->add_option("--report", report_path, "Write the transfer report here instead");
    add_common(fig);

    auto* sweep = app.add_subcommand("sweep", "Grid sweep over g, delta and horizon");
    sweep->add_option("--config", config_path, "Base network config file")->required();
    sweep->add_option("--axis", spec.axes, "Axis name:min:max:count (name: g, delta, horizon)")
        ->required();
    sweep->add_option("--threads", spec.threads, "Worker threads (0: all cores)");
    add_common(sweep);

    auto* oracle = app.add_subcommand("oracle-check", "Compare against the truncated Fock-space oracle");
    auto* oracle_config = oracle->add_option("--config", config_path, "Network config file");
    oracle->add_option("--fig", spec.figure, "Use a built-in figure scenario")->excludes(oracle_config);
    oracle->add_option("--cutoff", spec.cutoff, "Per-mode Fock cutoff")->check(CLI::PositiveNumber);
    oracle->add_option("--dim-limit", spec.dimension_limit, "Largest allowed Fock dimension");
    add_common(oracle);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::Usage);
    }

    spec.command = app.get_subcommands().front()->get_name();
    spec.config_path = config_path;
    spec.out = out_path;
    if (!report_path.empty()) spec.report_path = report_path;
    spec.format = parse_output_format(format);

    return static_cast<int>(run_command(spec, std::cout, std::cerr));
}
