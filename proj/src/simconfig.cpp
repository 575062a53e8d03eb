#include "mumimo/simconfig.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace mumimo {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

[[noreturn]] void fail(const std::string& where, const std::string& key,
                       const std::string& what) {
  throw ConfigError("config error (" + where + "): key '" + key + "': " + what);
}

double want_double(const std::string& raw, const std::string& key,
                   const std::string& where) {
  const std::string v = trim(raw);
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    fail(where, key, "malformed number '" + v + "'");
  }
  return d;
}

long long want_integer(const std::string& raw, const std::string& key,
                       const std::string& where) {
  const double d = want_double(raw, key, where);
  if (d != std::floor(d) || std::abs(d) > 9e15) {
    fail(where, key, "expected an integer, got '" + trim(raw) + "'");
  }
  return static_cast<long long>(d);
}

std::uint64_t want_u64(const std::string& raw, const std::string& key,
                       const std::string& where) {
  const std::string v = trim(raw);
  char* end = nullptr;
  const unsigned long long u = std::strtoull(v.c_str(), &end, 10);
  if (v.empty() || v[0] == '-' || end != v.c_str() + v.size()) {
    fail(where, key, "malformed unsigned integer '" + v + "'");
  }
  return u;
}

std::vector<double> want_double_list(const std::string& raw, const std::string& key,
                                     const std::string& where) {
  std::vector<double> out;
  for (const auto& part : split(raw, ',')) {
    if (part.empty()) fail(where, key, "empty list element");
    out.push_back(want_double(part, key, where));
  }
  return out;
}

unsigned want_count(const std::string& raw, const std::string& key,
                    const std::string& where) {
  const long long v = want_integer(raw, key, where);
  if (v < 1) fail(where, key, "must be at least 1");
  return static_cast<unsigned>(v);
}

double want_rho(const std::string& raw, const std::string& key,
                const std::string& where) {
  const double v = want_double(raw, key, where);
  if (!(v >= 0.0 && v < 1.0)) fail(where, key, "must lie in [0, 1)");
  return v;
}

double want_positive(const std::string& raw, const std::string& key,
                     const std::string& where) {
  const double v = want_double(raw, key, where);
  if (!(v > 0.0)) fail(where, key, "must be positive");
  return v;
}

void apply_key(SimConfig& cfg, const std::string& key, const std::string& value,
               const std::string& where) {
  if (key == "m") {
    cfg.m = want_count(value, key, where);
  } else if (key == "k") {
    cfg.k = want_count(value, key, where);
  } else if (key == "n") {
    cfg.n = want_count(value, key, where);
  } else if (key == "l") {
    cfg.l = want_count(value, key, where);
  } else if (key == "w_list") {
    cfg.wList = want_double_list(value, key, where);
    for (double w : cfg.wList) {
      if (!(w > 0.0)) fail(where, key, "entries must be positive (or inf)");
    }
  } else if (key == "rho_tx") {
    cfg.rhoTx = want_rho(value, key, where);
  } else if (key == "rho_rx") {
    cfg.rhoRx = want_rho(value, key, where);
  } else if (key == "power") {
    cfg.power = want_positive(value, key, where);
  } else if (key == "snr_db_list") {
    cfg.snrDbList = want_double_list(value, key, where);
    if (cfg.snrDbList.empty()) fail(where, key, "must not be empty");
  } else if (key == "mse_snr_db") {
    cfg.mseSnrDb = want_double(value, key, where);
  } else if (key == "conv_w") {
    cfg.convW = want_positive(value, key, where);
  } else if (key == "epsilon") {
    cfg.epsilon = want_positive(value, key, where);
  } else if (key == "max_iterations") {
    cfg.maxIterations = static_cast<int>(want_count(value, key, where));
  } else if (key == "bisection_tol") {
    cfg.bisectionTol = want_positive(value, key, where);
  } else if (key == "n_trials") {
    cfg.nTrials = static_cast<int>(want_count(value, key, where));
  } else if (key == "n_real") {
    cfg.nReal = static_cast<int>(want_count(value, key, where));
  } else if (key == "n_sym") {
    cfg.nSym = static_cast<int>(want_count(value, key, where));
  } else if (key == "seed") {
    cfg.seed = want_u64(value, key, where);
  } else if (key == "schemes") {
    cfg.schemes.clear();
    for (const auto& s : split(value, ',')) {
      if (s != "robust" && s != "baseline") {
        fail(where, key, "unknown scheme '" + s + "'");
      }
      cfg.schemes.push_back(s);
    }
    if (cfg.schemes.empty()) fail(where, key, "must not be empty");
  } else {
    fail(where, key, "unknown key");
  }
}

void validate(const SimConfig& cfg) {
  if (cfg.l > cfg.n) {
    throw ConfigError("config error: 'l' (streams per user) must not exceed 'n' "
                      "(receive antennas per user)");
  }
  if (cfg.k * cfg.l > cfg.m) {
    std::cerr << "warning: k*l > m; the spatial load exceeds the transmit array\n";
  }
}

SimConfig parse_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config error: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config error: JSON config must be an object");
  }
  SimConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    std::string raw;
    if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) raw += ",";
        raw += value[i].is_string() ? value[i].get<std::string>() : value[i].dump();
      }
    } else if (value.is_string()) {
      raw = value.get<std::string>();
    } else {
      raw = value.dump();
    }
    apply_key(cfg, key, raw, "json");
  }
  validate(cfg);
  return cfg;
}

}  // namespace

SimConfig parse_config(const std::string& text) {
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') return parse_json(text);

  SimConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    const std::size_t eq = stripped.find('=');
    const std::string where = "line " + std::to_string(lineNo);
    if (eq == std::string::npos) {
      throw ConfigError("config error (" + where + "): expected 'key = value', got '" +
                        stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config error (" + where + "): missing key");
    }
    apply_key(cfg, key, value, where);
  }
  validate(cfg);
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    return parse_json(buf.str());
  }
  return parse_config(buf.str());
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_csv(const std::vector<ExperimentRecord>& records) {
  std::string out = "experiment,scheme,sweep_name,sweep_value,metric,stderr,trials,seed\n";
  for (const auto& r : records) {
    out += r.experiment + "," + r.scheme + "," + r.sweepName + "," +
           fmt17(r.sweepValue) + "," + fmt17(r.metric) + "," + fmt17(r.stderrVal) +
           "," + std::to_string(r.trials) + "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

std::vector<ExperimentRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      trim(line) != "experiment,scheme,sweep_name,sweep_value,metric,stderr,trials,seed") {
    throw ConfigError("csv error: missing or unexpected header");
  }
  std::vector<ExperimentRecord> records;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 8) throw ConfigError("csv error: expected 8 fields per row");
    ExperimentRecord r;
    r.experiment = f[0];
    r.scheme = f[1];
    r.sweepName = f[2];
    r.sweepValue = want_double(f[3], "sweep_value", "csv");
    r.metric = want_double(f[4], "metric", "csv");
    r.stderrVal = want_double(f[5], "stderr", "csv");
    r.trials = static_cast<long>(want_integer(f[6], "trials", "csv"));
    r.seed = want_u64(f[7], "seed", "csv");
    records.push_back(std::move(r));
  }
  return records;
}

void write_csv(const std::vector<ExperimentRecord>& records,
               const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file for writing: " + path);
  out << to_csv(records);
  if (!out) throw IoError("failed writing output file: " + path);
}

}  // namespace mumimo
