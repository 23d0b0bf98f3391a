#include "entangle/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "entangle/errors.hpp"
#include "entangle/output.hpp"

namespace entangle {
namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw Error(ErrorKind::Io, "write to " + path.string() + " failed");
    }
}

}  // namespace

std::string metadata_text(const RunConfig& config, const SweepResult& result, const std::string& timestamp) {
    std::ostringstream os;
    os << "# entangle " << kVersion << " run metadata\n";
    if (!timestamp.empty()) {
        os << "# generated = " << timestamp << '\n';
    }
    os << "# resolved configuration (parseable as a config file)\n";
    os << echo_config(config);
    os << "\n# summary\n";
    for (const auto& line : summary_lines(result)) {
        os << line << '\n';
    }
    return os.str();
}

unsigned workers_from_env() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ENTANGLE_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap >= 1) {
            n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        }
    }
    return n;
}

RunOutcome run(const RunConfig& config, const RunOptions& options) {
    RunOutcome outcome;
    try {
        SweepResult result = run_sweep(config.to_sweep_spec(), {options.workers});

        const std::filesystem::path dir(config.output.dir);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec || !std::filesystem::is_directory(dir)) {
            throw Error(ErrorKind::Io, "cannot create output directory " + dir.string());
        }
        const int digits = config.output.precision;
        for (const auto& format : config.output.formats) {
            std::ostringstream os;
            std::filesystem::path path;
            if (format == "csv") {
                write_records(os, result, digits);
                path = dir / (config.output.name + ".csv");
            } else if (format == "meta") {
                os << metadata_text(config, result, options.timestamp);
                path = dir / (config.output.name + ".meta.txt");
            } else {
                write_plot_data(os, result, digits);
                path = dir / (config.output.name + ".dat");
            }
            write_file(path, os.str());
            outcome.files.push_back(path);
        }
        outcome.result = std::move(result);
    } catch (const ConfigError& e) {
        outcome.exit_code = kExitParseError;
        outcome.message = e.what();
    } catch (const Error& e) {
        outcome.message = std::string(to_string(e.kind())) + ": " + e.what();
        switch (e.kind()) {
            case ErrorKind::Io: outcome.exit_code = kExitIoError; break;
            case ErrorKind::Config: outcome.exit_code = kExitParseError; break;
            default: outcome.exit_code = kExitNumericalError; break;
        }
    } catch (const std::exception& e) {
        outcome.exit_code = kExitNumericalError;
        outcome.message = e.what();
    }
    return outcome;
}

}  // namespace entangle
