#pragma once

// Experiment configuration and report files.
//
// Config: flat "key = value" lines, '#' starts a comment. Only registered keys
// are accepted. A report file also loads as a config (its config.* lines,
// with the prefix dropped). Reports: "key=value" lines in insertion order, then CSV
// tables introduced by a "[table <name>]" line.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dslpn/params.hpp"
#include "dslpn/rng.hpp"

namespace dslpn {

class ExperimentConfig {
 public:
  // Every registered key with its default.
  ExperimentConfig();

  static const std::map<std::string, std::string>& defaults();

  // Throws Error for an unknown key.
  void set(const std::string& key, const std::string& value);
  // Parses config-file text; throws Error on unknown keys or malformed lines.
  void loadText(std::string_view text);
  void loadFile(const std::string& path);

  const std::string& get(const std::string& key) const;
  std::uint64_t getU64(const std::string& key) const;
  double getDouble(const std::string& key) const;
  params::Rational getRational(const std::string& key) const;
  bool getBool(const std::string& key) const;
  Seed seed() const { return Seed::fromHex(get("seed")); }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

class Report {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }
  void set(const std::string& key, std::uint64_t value) { set(key, std::to_string(value)); }
  void set(const std::string& key, int value) { set(key, std::to_string(value)); }
  void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }
  void set(const std::string& key, double value);
  void set(const std::string& key, unsigned value) { set(key, std::to_string(value)); }

  // "config.<key>" entries plus the code registry version. The output path
  // and worker count are left out.
  void embedConfig(const ExperimentConfig& config);
  void table(const std::string& name, std::vector<std::string> header, std::vector<std::vector<std::string>> rows);

  // Adds every entry and table of `other`.
  void append(const Report& other);

  std::string str() const;
  void write(const std::string& path) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
  };
  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<Table> tables_;
};

// Shortest round-trip decimal for a double ("%.17g" trimmed).
std::string formatDouble(double v);

}  // namespace dslpn
