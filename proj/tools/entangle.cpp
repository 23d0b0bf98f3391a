#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entangle/cli.hpp"
#include "entangle/config.hpp"
#include "entangle/errors.hpp"
#include "entangle/output.hpp"

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

int report(const entangle::RunOutcome& outcome) {
    if (outcome.exit_code != entangle::kExitOk) {
        std::cerr << "entangle: " << outcome.message << '\n';
        return outcome.exit_code;
    }
    for (const auto& f : outcome.files) {
        std::cerr << "wrote " << f.string() << '\n';
    }
    return entangle::kExitOk;
}

int cmd_run(const std::string& path, std::vector<std::string> overrides, const std::string& out_dir) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "entangle: cannot read config " << path << '\n';
        return entangle::kExitParseError;
    }
    std::ostringstream text;
    text << in.rdbuf();
    if (!out_dir.empty()) {
        overrides.push_back("output.dir=" + out_dir);
    }
    entangle::RunConfig config;
    try {
        config = entangle::parse_config(text.str(), overrides);
    } catch (const entangle::Error& e) {
        std::cerr << "entangle: " << path << ": " << e.what() << '\n';
        return entangle::kExitParseError;
    }
    return report(entangle::run(config, {entangle::workers_from_env(), utc_timestamp()}));
}

int cmd_point(std::vector<std::string> overrides, const std::string& out_dir) {
    overrides.insert(overrides.begin(), "sweep.kind=point");
    if (!out_dir.empty()) {
        overrides.push_back("output.dir=" + out_dir);
    }
    entangle::RunConfig config;
    try {
        config = entangle::parse_config("", overrides);
    } catch (const entangle::Error& e) {
        std::cerr << "entangle: " << e.what() << '\n';
        return entangle::kExitParseError;
    }
    if (config.sweep.kind != entangle::SweepKind::Point) {
        std::cerr << "entangle: point does not take a sweep kind\n";
        return entangle::kExitParseError;
    }
    if (!out_dir.empty()) {
        return report(entangle::run(config, {1, utc_timestamp()}));
    }
    try {
        const auto result = entangle::run_sweep(config.to_sweep_spec());
        entangle::write_records(std::cout, result, config.output.precision);
        return entangle::kExitOk;
    } catch (const entangle::Error& e) {
        std::cerr << "entangle: " << entangle::to_string(e.kind()) << ": " << e.what() << '\n';
        return entangle::kExitNumericalError;
    }
}

int cmd_list_sweeps() {
    for (const auto& info : entangle::sweep_kinds()) {
        std::cout << std::left << std::setw(18) << info.name << ' ' << info.description << '\n';
    }
    return entangle::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stationary polariton entanglement: steady-state Gaussian solver and parameter sweeps"};
    app.set_version_flag("--version", std::string(entangle::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;

    auto* run = app.add_subcommand("run", "Run the sweep described by a config file");
    run->add_option("config", config_path, "Config file")->required();
    run->add_option("--set", overrides, "Override a config key (key=value or section.key=value)");
    run->add_option("--out", out_dir, "Output directory (overrides output.dir)");

    auto* point = app.add_subcommand("point", "Evaluate one operating point; prints the record to stdout");
    point->add_option("--set", overrides, "Override a parameter (key=value)");
    point->add_option("--out", out_dir, "Write the output files here instead of printing");

    app.add_subcommand("list-sweeps", "List the available sweep kinds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : entangle::kExitParseError;
    }

    if (*run) {
        return cmd_run(config_path, overrides, out_dir);
    }
    if (*point) {
        return cmd_point(overrides, out_dir);
    }
    return cmd_list_sweeps();
}
