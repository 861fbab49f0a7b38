#ifndef FFGS_TOOLS_RUN_CONFIG_HPP
#define FFGS_TOOLS_RUN_CONFIG_HPP

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ffgs::cli {

using json = nlohmann::json;

#ifndef FFGS_VERSION
#define FFGS_VERSION "unknown"
#endif

inline const char* version_string() { return FFGS_VERSION; }

/// Bad configuration: reported before any computation, exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Subcommand parameters bound to CLI options. Values from a JSON config file
/// fill only the options that were not given on the command line.
class RunConfig {
 public:
  explicit RunConfig(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T& var, const std::string& help, bool affects_output = true) {
    auto* opt = app_->add_option("--" + name, var, help)->capture_default_str();
    params_.push_back({name, opt, [&var](const json& j) { var = j.get<T>(); }, [&var] { return json(var); },
                       affects_output});
    return opt;
  }

  CLI::Option* add_flag(const std::string& name, bool& var, const std::string& help) {
    auto* opt = app_->add_flag("--" + name, var, help);
    params_.push_back({name, opt, [&var](const json& j) { var = j.get<bool>(); }, [&var] { return json(var); }, true});
    return opt;
  }

  /// --seed, --out, --threads, --json.
  void add_common(std::uint64_t& seed, std::string& out, int& threads) {
    add("seed", seed, "Master random seed");
    add("out", out, "Output directory", false);
    add("threads", threads, "Worker threads (0 = logical CPU count)", false);
    app_->add_option("--json", json_path_, "JSON config file; command-line flags take precedence");
  }

  void merge_json() {
    if (json_path_.empty()) return;
    std::ifstream in(json_path_);
    if (!in) throw ConfigError("cannot read config file " + json_path_);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config file " + json_path_ + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file " + json_path_ + " must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
      auto it = std::find_if(params_.begin(), params_.end(), [&](const Param& p) { return p.name == key; });
      if (it == params_.end()) throw ConfigError("config file: unknown key '" + key + "'");
      if (it->option->count() > 0) continue;
      try {
        it->set(value);
      } catch (const json::exception& e) {
        throw ConfigError("config file: bad value for '" + key + "': " + e.what());
      }
    }
  }

  /// Every parameter, or only those that change computed results.
  json echo(bool output_affecting_only) const {
    json j = json::object();
    for (const auto& p : params_) {
      if (!output_affecting_only || p.affects_output) j[p.name] = p.get();
    }
    return j;
  }

 private:
  struct Param {
    std::string name;
    CLI::Option* option;
    std::function<void(const json&)> set;
    std::function<json()> get;
    bool affects_output;
  };

  CLI::App* app_;
  std::vector<Param> params_;
  std::string json_path_;
};

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline std::string fmt(double x, int digits = 12) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

inline std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw ConfigError("cannot create output directory " + dir);
  const auto probe = std::filesystem::path(dir) / ".ffgs-write-test";
  {
    std::ofstream f(probe);
    if (!f) throw ConfigError("output directory " + dir + " is not writable");
  }
  std::filesystem::remove(probe, ec);
  return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  f.close();
  if (!f) throw std::runtime_error("failed to write " + path.string());
}

/// Leading `#` lines for CSV outputs. Wall-clock time lives in the manifest.
inline std::string csv_preamble(const std::string& command, const json& config, std::uint64_t seed) {
  std::string s = "# ffgs " + command + "\n";
  s += "# version: " + std::string(version_string()) + "\n";
  s += "# seed: " + std::to_string(seed) + "\n";
  s += "# config: " + config.dump() + "\n";
  return s;
}

/// <command>.json next to the outputs: full config, version, duration, results.
inline void write_manifest(const std::filesystem::path& dir, const std::string& command, const json& config,
                           std::uint64_t seed, double seconds, const std::vector<std::string>& outputs,
                           const json& results) {
  json m;
  m["command"] = command;
  m["version"] = version_string();
  m["seed"] = seed;
  m["config"] = config;
  m["duration_seconds"] = seconds;
  m["outputs"] = outputs;
  m["results"] = results;
  write_file(dir / (command + ".json"), m.dump(2) + "\n");
}

}  // namespace ffgs::cli

#endif  // FFGS_TOOLS_RUN_CONFIG_HPP
