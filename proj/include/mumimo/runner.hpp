/**
 * @file runner.hpp
 * @brief Experiment dispatch behind the CLI: load config, run, write CSV.
 */
#ifndef MUMIMO_RUNNER_HPP
#define MUMIMO_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <string>

namespace mumimo {

/// Runs one experiment end to end and writes the CSV. Prints a one-line
/// summary per sweep point. Returns the process exit code: 0 success,
/// 2 config error (including an unknown experiment name), 3 I/O error.
int run(const std::string& configPath, const std::string& experimentName,
        const std::string& outPath,
        std::optional<std::uint64_t> seedOverride = std::nullopt,
        int threads = 0);

}  // namespace mumimo

#endif
