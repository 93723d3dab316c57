#include "dslpn/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dslpn/ecc.hpp"
#include "dslpn/errors.hpp"
#include "dslpn/serialize.hpp"

namespace dslpn {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string csvField(const std::string& f) {
  if (f.find_first_of(",\"\n") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

const std::map<std::string, std::string>& ExperimentConfig::defaults() {
  static const std::map<std::string, std::string> d = {
      // shared
      {"seed", "0"},
      {"workers", "0"},  // 0: available parallelism
      {"trials", "0"},   // 0: the command's own default
      {"out", ""},
      {"debug", "false"},
      {"exhaustive", "false"},
      // params
      {"scheme", "ltdf"},
      {"preset", ""},
      {"k", "6"},
      {"gamma", "3/2"},
      {"D", ""},  // empty: Gamma + 1 (ltdf) or 3 (crhf)
      {"n", "64"},
      {"lambda", "8"},
      {"mode", "asymptotic"},
      {"max-n", "65536"},
      {"max-l", "0"},  // 0: unbounded
      {"max-m", "1099511627776"},
      // crhf
      {"t", "0"},
      {"s", "0"},
      {"h-distance", "0"},
      // ltdf
      {"branch", ""},
      {"x", ""},
      {"y", ""},
      {"key", ""},
      {"trapdoor", ""},
      {"in", ""},
      {"eps", ""},  // empty: derived
      // sampling
      {"kind", "good-sparse"},
      {"m", "16384"},
      {"d", "3"},
      {"max-rejects", "1000"},
      {"matrix", ""},  // sample: output file
      // cryptanalysis
      {"alpha", "1"},
      {"t-size", "8"},
      {"max-subsets", "50"},
      {"max-tries", "5000"},
      {"wmax", "3"},
      {"w", "4"},
      {"delta", "0.5"},
      {"c", "1"},
      {"samples", "50"},
      {"strategy", "sparse-attack"},
  };
  return d;
}

ExperimentConfig::ExperimentConfig() : values_(defaults()) {}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw Error("config: unknown key '" + key + "'");
  it->second = value;
}

void ExperimentConfig::loadText(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  // A report file can serve as a config: only its config.* lines are read.
  bool report = false;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (report && line.rfind("[table ", 0) == 0) break;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(no) + ": expected key = value");
    std::string k = trim(std::string_view(t).substr(0, eq));
    if (no == 1 && (k == "command" || k == "registry_version")) report = true;
    if (report) {
      if (k.rfind("config.", 0) != 0) continue;
      k.erase(0, 7);
    }
    set(k, trim(std::string_view(t).substr(eq + 1)));
  }
}

void ExperimentConfig::loadFile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("config: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  loadText(ss.str());
}

const std::string& ExperimentConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw Error("config: unknown key '" + key + "'");
  return it->second;
}

std::uint64_t ExperimentConfig::getU64(const std::string& key) const {
  const std::string& v = get(key);
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw Error("config: '" + key + "' must be a non-negative integer, got '" + v + "'");
  return out;
}

double ExperimentConfig::getDouble(const std::string& key) const {
  try {
    return params::toDouble(params::parseRational(get(key)));
  } catch (const Error&) {
    throw Error("config: '" + key + "' must be a number, got '" + get(key) + "'");
  }
}

params::Rational ExperimentConfig::getRational(const std::string& key) const {
  try {
    return params::parseRational(get(key));
  } catch (const Error&) {
    throw Error("config: '" + key + "' must be a rational, got '" + get(key) + "'");
  }
}

bool ExperimentConfig::getBool(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no" || v.empty()) return false;
  throw Error("config: '" + key + "' must be true or false, got '" + v + "'");
}

std::string formatDouble(double v) {
  char buf[64];
  if (std::isfinite(v) && v == std::trunc(v) && std::fabs(v) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

void Report::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_)
    if (k == key) {
      v = value;
      return;
    }
  entries_.emplace_back(key, value);
}

void Report::set(const std::string& key, double value) { set(key, formatDouble(value)); }

void Report::embedConfig(const ExperimentConfig& config) {
  set("registry_version", static_cast<std::uint64_t>(kCodeRegistryVersion));
  set("format_version", static_cast<std::uint64_t>(io::kFormatVersion));
  // Output path and worker count do not affect results.
  for (const auto& [k, v] : config.values())
    if (k != "out" && k != "workers") set("config." + k, v);
}

void Report::table(const std::string& name, std::vector<std::string> header, std::vector<std::vector<std::string>> rows) {
  tables_.push_back({name, std::move(header), std::move(rows)});
}

void Report::append(const Report& other) {
  for (const auto& [k, v] : other.entries_) set(k, v);
  tables_.insert(tables_.end(), other.tables_.begin(), other.tables_.end());
}

std::string Report::str() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  for (const auto& t : tables_) {
    out += "[table " + t.name + "]\n";
    auto line = [&](const std::vector<std::string>& fields) {
      for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csvField(fields[i]);
      out += "\n";
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
  }
  return out;
}

void Report::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("report: cannot write " + path);
  f << str();
  if (!f) throw Error("report: write failed for " + path);
}

}  // namespace dslpn
