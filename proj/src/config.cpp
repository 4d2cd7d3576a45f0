#include "wqed/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wqed/units.hpp"

namespace wqed {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::string line;
  std::string section;
  int number = 0;
  std::ostringstream raw;
  while (std::getline(in, line)) {
    ++number;
    raw << line << '\n';
    std::string body = line;
    const auto comment = body.find_first_of("#;");
    if (comment != std::string::npos) body.erase(comment);
    body = trim(body);
    if (body.empty()) continue;
    auto where = [&] { return source + ":" + std::to_string(number) + ": "; };
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(where() + "unterminated section header");
      section = trim(std::string_view(body).substr(1, body.size() - 2));
      if (section.empty()) throw ConfigError(where() + "empty section name");
      if (cfg.section_lines_.count(section))
        throw ConfigError(where() + "section [" + section + "] repeated");
      cfg.section_lines_[section] = number;
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where() + "expected 'key = value'");
    if (section.empty()) throw ConfigError(where() + "key outside any [section]");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError(where() + "missing key");
    if (value.empty()) throw ConfigError(where() + section + "." + key + ": missing value");
    auto& keys = cfg.sections_[section];
    if (keys.count(key)) throw ConfigError(where() + section + "." + key + ": given twice");
    keys[key] = {value, number};
  }
  cfg.raw_ = raw.str();
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  return parse(in, path.string());
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

int Config::line_of(const std::string& section, const std::string& key) const {
  if (!has(section, key)) return 0;
  return sections_.at(section).at(key).line;
}

void Config::fail(const std::string& section, const std::string& key,
                  const std::string& reason) const {
  std::ostringstream os;
  os << source_;
  const int line = line_of(section, key);
  if (line > 0) {
    os << ':' << line;
  } else if (section_lines_.count(section)) {
    os << ':' << section_lines_.at(section);
  }
  os << ": " << section << '.' << key << ": " << reason;
  throw ConfigError(os.str());
}

const Config::Entry& Config::entry(const std::string& section, const std::string& key) const {
  if (!has(section, key)) fail(section, key, "required key missing");
  return sections_.at(section).at(key);
}

void Config::restrict_keys(const std::string& section, const std::set<std::string>& allowed) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return;
  for (const auto& [key, e] : s->second)
    if (!allowed.count(key)) fail(section, key, "unknown key");
}

std::string Config::text(const std::string& section, const std::string& key) const {
  return entry(section, key).value;
}

std::string Config::text(const std::string& section, const std::string& key,
                         const std::string& fallback) const {
  return has(section, key) ? text(section, key) : fallback;
}

double Config::to_number(const std::string& section, const std::string& key,
                         const std::string& text) const {
  std::string s = trim(text);
  double scale = 1.0;
  auto strip_suffix = [&](std::string_view suffix, double factor) {
    if (s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
      s = trim(std::string_view(s).substr(0, s.size() - suffix.size()));
      if (!s.empty() && s.back() == '*') s = trim(std::string_view(s).substr(0, s.size() - 1));
      scale = factor;
      return true;
    }
    return false;
  };
  if (!strip_suffix("lambda0", kLambda0)) strip_suffix("pi", kPi);
  if (s.empty() && scale != 1.0) return scale;
  double value = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value))
    fail(section, key, "'" + text + "' is not a number");
  return value * scale;
}

double Config::number(const std::string& section, const std::string& key) const {
  return to_number(section, key, text(section, key));
}

double Config::number(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? number(section, key) : fallback;
}

int Config::integer(const std::string& section, const std::string& key) const {
  const double v = number(section, key);
  if (v != std::round(v) || std::abs(v) > 2e9) fail(section, key, "expected an integer");
  return static_cast<int>(v);
}

int Config::integer(const std::string& section, const std::string& key, int fallback) const {
  return has(section, key) ? integer(section, key) : fallback;
}

bool Config::flag(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  std::string v = text(section, key);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  fail(section, key, "expected true or false");
}

std::vector<double> Config::numbers(const std::string& section, const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(text(section, key))) out.push_back(to_number(section, key, item));
  return out;
}

std::vector<std::string> Config::words(const std::string& section, const std::string& key) const {
  return split_list(text(section, key));
}

}  // namespace wqed
