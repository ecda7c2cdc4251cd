#pragma once

#include "gwa/grid.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gwa {

enum class Subcommand { Norm, Grand, Amalgam, Maximal, Verify };

const char* to_string(Subcommand s);
std::optional<Subcommand> parse_subcommand(std::string_view s);

/// A validated run description. `parameters` holds every key other than
/// subcommand, f, output_dir and seed, as trimmed text.
struct RunConfig {
  std::optional<Subcommand> subcommand;
  std::string input;
  std::map<std::string, std::string> parameters;
  std::string output_dir = "gwa-out";
  std::uint64_t seed = 7;

  bool operator==(const RunConfig&) const = default;

  bool has(const std::string& key) const { return parameters.count(key) != 0; }
  double real(const std::string& key, double fallback) const;
  long integer(const std::string& key, long fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<long> integers(const std::string& key) const;
};

/// One key = value assignment and where it came from ("line 3", "--p").
struct ConfigEntry {
  std::string key;
  std::string value;
  std::string origin;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

/// Line-oriented `key = value` text; `#` starts a comment. Throws ConfigError.
RunConfig parse_config(std::string_view text);

/// Later entries override earlier ones. Throws ConfigError listing every problem.
RunConfig build_config(const std::vector<ConfigEntry>& entries);

std::vector<ConfigEntry> config_entries(std::string_view text);

/// Canonical text: fixed key order, one assignment per line.
std::string emit_config(const RunConfig& config);

/// Keys accepted for a subcommand, in canonical order.
std::vector<std::string> config_keys(Subcommand s);

using FunctionSampler = std::function<std::complex<double>(const Point<double>&)>;
using WeightSampler = std::function<double(const Point<double>&)>;

/// const:c | indicator:lo,hi[,lo2,hi2] | gaussian:center,sigma | ramp:lo,hi | bump:center,radius[,xi]
FunctionSampler parse_function_sampler(std::string_view spec);
/// const:c | exp:k (e^{k|x|}) | power:s ((1+|x|)^s)
WeightSampler parse_weight_sampler(std::string_view spec);

}  // namespace gwa
