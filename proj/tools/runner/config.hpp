#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace wavelab::runner {

using json = nlohmann::json;

// Schema violation; `path` is the offending field, e.g. "params.family.count".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct GridSpec {
  std::size_t t = 0;
  std::size_t r = 0;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Parses "t=<N>,r=<N>" (either part may be omitted, not both).
GridSpec parse_grid(const std::string& text);

struct ExperimentConfig {
  std::string command;
  json params = json::object();
  std::optional<GridSpec> grid;
  std::uint64_t seed = 1;
  std::filesystem::path out = "wavelab-out";

  // Output path is not part of the serialized identity.
  [[nodiscard]] json to_json() const;
  static ExperimentConfig from_json(const json& j);

  // FNV-1a 64 of the canonical (sorted-key, compact) to_json() dump, as 16 hex digits.
  [[nodiscard]] std::string hash() const;

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.command == b.command && a.params == b.params && a.grid == b.grid && a.seed == b.seed;
  }
};

const std::vector<std::string>& command_ids();
bool is_command(const std::string& id);

std::uint64_t fnv1a(std::string_view bytes);

// Typed access to a JSON object with defaults; every read key is recorded so
// finish() can reject unknown ones.
class ParamReader {
 public:
  ParamReader(const json& object, std::string path);

  double number(const std::string& key, std::optional<double> fallback = std::nullopt);
  double positive(const std::string& key, std::optional<double> fallback = std::nullopt);
  std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt);
  std::size_t count(const std::string& key, std::optional<std::size_t> fallback = std::nullopt,
                    std::size_t minimum = 1);
  bool boolean(const std::string& key, bool fallback);
  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt,
                     const std::vector<std::string>& choices = {});
  std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt);
  [[nodiscard]] bool has(const std::string& key) const;
  // Sub-object reader; an absent key yields an empty object.
  ParamReader object(const std::string& key);
  const json& raw(const std::string& key);

  [[nodiscard]] std::string field(const std::string& key) const { return path_ + "." + key; }
  [[nodiscard]] const std::string& path() const { return path_; }
  void finish() const;

 private:
  const json* lookup(const std::string& key);
  const json* obj_;
  std::string path_;
  std::set<std::string> used_;
};

}  // namespace wavelab::runner
