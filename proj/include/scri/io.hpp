#pragma once
// CSV tables, key=value experiment configs and check reports.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <fmt/format.h>

namespace scri {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// cells are numbers or short labels
using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  explicit Table(std::vector<std::string> cols = {}) : columns(std::move(cols)) {}
  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::invalid_argument("table row does not match the column schema");
    rows.push_back(std::move(row));
  }
};

inline std::string format_cell(const Cell& c) {
  if (auto* d = std::get_if<double>(&c)) return fmt::format("{:.17g}", *d);
  return std::get<std::string>(c);
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (auto& r : t.rows) {
    for (size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_cell(r[i]);
    out += '\n';
  }
  return out;
}

inline void emit_csv(const Table& t, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << to_csv(t);
  if (!f) throw IoError("write failed: " + path);
}

// numeric cells come back as doubles, anything unparsable stays a string
inline Table read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  auto split = [](const std::string& line) {
    std::vector<std::string> v;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) v.push_back(c);
    if (!line.empty() && line.back() == ',') v.emplace_back();
    return v;
  };
  std::string line;
  if (!std::getline(f, line)) throw IoError("empty csv: " + path);
  Table t(split(line));
  while (std::getline(f, line)) {
    std::vector<Cell> row;
    for (auto& c : split(line)) {
      size_t pos = 0;
      try {
        double d = std::stod(c, &pos);
        if (pos == c.size()) {
          row.emplace_back(d);
          continue;
        }
      } catch (const std::exception&) {
      }
      row.emplace_back(c);
    }
    t.add(std::move(row));
  }
  return t;
}

// ---------------------------------------------------------------------------
// plain key = value config, '#' comments

class Config {
 public:
  Config() = default;
  Config(std::map<std::string, std::string> defaults, std::set<std::string> required = {})
      : values_(std::move(defaults)), required_(std::move(required)) {
    for (auto& k : required_) known_.insert(k);
    for (auto& [k, v] : values_) known_.insert(k);
  }

  void parse(std::istream& in, const std::string& source = "config") {
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
      ++no;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      auto trim = [](std::string s) {
        auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError(fmt::format("{}:{}: expected key = value", source, no));
      std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
      if (!known_.count(k)) throw ConfigError(fmt::format("{}:{}: unknown key '{}'", source, no, k));
      values_[k] = v;
      seen_.insert(k);
    }
    for (auto& k : required_)
      if (!seen_.count(k)) throw ConfigError(fmt::format("{}: missing required key '{}'", source, k));
  }
  void parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config " + path);
    parse(f, path);
  }
  void parse_string(const std::string& text) {
    std::istringstream s(text);
    parse(s);
  }

  bool has(const std::string& k) const { return values_.count(k) > 0; }
  std::string str(const std::string& k) const {
    auto it = values_.find(k);
    if (it == values_.end()) throw ConfigError("missing key '" + k + "'");
    return it->second;
  }
  double num(const std::string& k) const {
    std::string s = str(k);
    size_t pos = 0;
    double d;
    try {
      d = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("key '{}': '{}' is not a number", k, s));
    }
    if (pos != s.size()) throw ConfigError(fmt::format("key '{}': '{}' is not a number", k, s));
    return d;
  }
  int integer(const std::string& k) const {
    double d = num(k);
    if (d != static_cast<int>(d)) throw ConfigError(fmt::format("key '{}' must be an integer", k));
    return static_cast<int>(d);
  }
  std::vector<double> list(const std::string& k) const {
    std::vector<double> out;
    std::stringstream ss(str(k));
    std::string c;
    while (std::getline(ss, c, ',')) {
      try {
        out.push_back(std::stod(c));
      } catch (const std::exception&) {
        throw ConfigError(fmt::format("key '{}': bad list entry '{}'", k, c));
      }
    }
    return out;
  }
  const std::set<std::string>& known() const { return known_; }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> required_, known_, seen_;
};

// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  double expected = 0, got = 0, tolerance = 0;
  bool pass = false;
};

struct RunReport {
  std::vector<Check> checks;

  // |got - expected| <= tol
  void near(const std::string& name, double expected, double got, double tol) {
    checks.push_back({name, expected, got, tol, std::fabs(got - expected) <= tol});
  }
  // got < bound
  void below(const std::string& name, double got, double bound) { checks.push_back({name, bound, got, 0.0, got < bound}); }
  // got >= bound
  void at_least(const std::string& name, double got, double bound) { checks.push_back({name, bound, got, 0.0, got >= bound}); }
  void truth(const std::string& name, bool ok) { checks.push_back({name, 1.0, ok ? 1.0 : 0.0, 0.0, ok}); }

  bool pass() const {
    for (auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void merge(const RunReport& o) { checks.insert(checks.end(), o.checks.begin(), o.checks.end()); }
  Table table() const {
    Table t({"check", "expected", "got", "tolerance", "pass"});
    for (auto& c : checks) t.add({c.name, c.expected, c.got, c.tolerance, c.pass ? std::string("pass") : std::string("FAIL")});
    return t;
  }
};

}  // namespace scri
