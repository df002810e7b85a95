#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gse {

/// Flat key-value configuration with [section] headers.
/// Lines: `key = value`; `#` starts a comment; keys are addressed as
/// "section.key" ("" section for keys before any header).
class Config {
 public:
  static Config from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str(), path);
  }

  static Config from_string(const std::string& text, std::string origin = "<string>") {
    Config c;
    c.origin_ = std::move(origin);
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::string t = trim(line);
      if (t.empty()) continue;
      if (t.front() == '[') {
        if (t.back() != ']')
          c.fail(lineno, "unterminated section header");
        section = trim(t.substr(1, t.size() - 2));
        continue;
      }
      auto eq = t.find('=');
      if (eq == std::string::npos) c.fail(lineno, "expected key = value");
      std::string key = trim(t.substr(0, eq));
      std::string val = trim(t.substr(eq + 1));
      if (key.empty()) c.fail(lineno, "empty key");
      c.values_[section.empty() ? key : section + "." + key] = val;
    }
    return c;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end())
      throw std::runtime_error(origin_ + ": missing config key '" + key + "'");
    return it->second;
  }

  std::string get_string(const std::string& key, const std::string& dflt) const {
    auto it = values_.find(key);
    return it == values_.end() ? dflt : it->second;
  }

  double get_double(const std::string& key) const {
    return parse_double(key, get_string(key));
  }
  double get_double(const std::string& key, double dflt) const {
    return has(key) ? get_double(key) : dflt;
  }

  int get_int(const std::string& key) const {
    double v = get_double(key);
    int i = static_cast<int>(v);
    if (i != v)
      throw std::runtime_error(origin_ + ": key '" + key + "' is not an integer");
    return i;
  }
  int get_int(const std::string& key, int dflt) const {
    return has(key) ? get_int(key) : dflt;
  }

  std::vector<double> get_list_double(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& tok : split(get_string(key)))
      out.push_back(parse_double(key, tok));
    return out;
  }

  std::vector<std::string> get_list_string(const std::string& key) const {
    return split(get_string(key));
  }

  const std::string& origin() const { return origin_; }

 private:
  static std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  }

  static std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos <= s.size()) {
      size_t comma = s.find(',', pos);
      if (comma == std::string::npos) comma = s.size();
      std::string t = trim(s.substr(pos, comma - pos));
      if (!t.empty()) out.push_back(t);
      pos = comma + 1;
    }
    return out;
  }

  double parse_double(const std::string& key, const std::string& tok) const {
    try {
      size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw std::runtime_error(origin_ + ": key '" + key + "' has non-numeric value '" +
                               tok + "'");
    }
  }

  [[noreturn]] void fail(int lineno, const std::string& msg) const {
    throw std::runtime_error(origin_ + ":" + std::to_string(lineno) + ": " + msg);
  }

  std::string origin_;
  std::map<std::string, std::string> values_;
};

}  // namespace gse
