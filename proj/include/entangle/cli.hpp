#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "entangle/config.hpp"

namespace entangle {

enum ExitCode : int {
    kExitOk = 0,
    kExitParseError = 2,
    kExitNumericalError = 3,
    kExitIoError = 4,
};

inline constexpr const char* kVersion = "1.0.0";

struct RunOptions {
    unsigned workers = 1;
    std::string timestamp;  ///< written to the metadata file only
};

struct RunOutcome {
    int exit_code = kExitOk;
    std::string message;
    std::vector<std::filesystem::path> files;
    std::optional<SweepResult> result;
};

/// Runs the configured sweep and writes <dir>/<name>.csv, .meta.txt and .dat
/// (as selected by output.formats). Never throws; failures map to exit codes.
RunOutcome run(const RunConfig& config, const RunOptions& options);

/// Worker count: hardware concurrency, capped by ENTANGLE_THREADS when set.
unsigned workers_from_env();

/// Metadata text: generation info, the resolved config echo and the summary.
std::string metadata_text(const RunConfig& config, const SweepResult& result, const std::string& timestamp);

}  // namespace entangle
