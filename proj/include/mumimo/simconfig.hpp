/**
 * @file simconfig.hpp
 * @brief Experiment configuration (flat key-value or JSON), result records
 *        and their CSV serialization.
 */
#ifndef MUMIMO_SIMCONFIG_HPP
#define MUMIMO_SIMCONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mumimo {

/// Bad configuration contents (unknown key, malformed number, value out of
/// range). Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem failure (unreadable config, unwritable output). Maps to CLI
/// exit code 3.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimConfig {
  // system geometry
  unsigned m = 4;  // transmit antennas
  unsigned k = 2;  // users
  unsigned n = 2;  // receive antennas per user
  unsigned l = 2;  // streams per user

  // channel statistics
  std::vector<double> wList{10.0, 50.0, 200.0, 1000.0};  // entries may be +inf
  double rhoTx = 0.9;
  double rhoRx = 0.0;

  // link and solver
  double power = 1.0;
  std::vector<double> snrDbList{0, 5, 10, 15, 20, 25, 30};
  double mseSnrDb = 20.0;  // fixed SNR of the mse-vs-w sweep
  double convW = 100.0;    // fixed W of the convergence experiment
  double epsilon = 1e-4;
  int maxIterations = 100;
  double bisectionTol = 1e-10;

  // Monte Carlo shape
  int nTrials = 50;
  int nReal = 20;
  int nSym = 100;
  std::uint64_t seed = 1;

  std::vector<std::string> schemes{"robust", "baseline"};
};

/// One output row of an experiment.
struct ExperimentRecord {
  std::string experiment;
  std::string scheme;
  std::string sweepName;
  double sweepValue = 0.0;
  double metric = 0.0;
  double stderrVal = 0.0;
  long trials = 0;
  std::uint64_t seed = 0;
};

/// Parses flat "key = value" text (or JSON when the text starts with '{');
/// omitted keys keep their defaults. Throws ConfigError with the offending
/// key and line.
SimConfig parse_config(const std::string& text);

/// Reads and parses a config file; ".json" files are parsed as JSON.
/// Throws IoError when the file cannot be read.
SimConfig load_config(const std::string& path);

/// Fixed 8-column CSV; floats carry 17 significant digits so equal records
/// serialize byte-identically.
std::string to_csv(const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> parse_csv(const std::string& text);

/// Writes the CSV; throws IoError when the path is not writable.
void write_csv(const std::vector<ExperimentRecord>& records,
               const std::string& path);

}  // namespace mumimo

#endif
