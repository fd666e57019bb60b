#pragma once

#include "infogeo/expfam.hpp"

#include <nlohmann/json_fwd.hpp>
#include <string>

namespace infogeo::cli {

using json = nlohmann::json;

// Config or schema problem: wrong types, missing fields, inconsistent
// dimensions. Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Subcommand names accepted by run_command.
//   project, fisher, model-div, fiber-sample,
//   check-constancy, check-pythagorean, check-affine, check-second-deriv,
//   catalog

// Execute one job: validates and resolves the config (filling defaults),
// dispatches, and returns the full report
//   { "config": <resolved echo>, "result": {...}, "version": "..." }
// plus "duration_ms" when with_timings is set. Throws ConfigError for
// schema problems and the library's error types for numeric failures.
json run_command(const std::string& command, const json& config, bool with_timings = false);

// Flatten a report's result block into CSV ("key,value" rows; grid sweeps
// become real tables). Numbers are serialized exactly as in the JSON
// output so both formats carry identical values.
std::string report_to_csv(const json& report);

// Write content to path atomically (temp file in the same directory, then
// rename).
void write_atomic(const std::string& path, const std::string& content);

// Full command-line entry point; returns the process exit code
// (0 success, 2 config error, 3 numeric/solver error).
int run_cli(int argc, char** argv);

} // namespace infogeo::cli
