#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wqed/errors.hpp"

namespace wqed {

/// Malformed or invalid experiment configuration. The message carries
/// "source:line: section.key: reason" when the offending line is known.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Line-oriented INI text:
///
///   # comment
///   [section]
///   key = value        ; trailing comments allowed
///
/// Numbers accept a unit suffix: "4 lambda0", "0.5 pi", "2pi".
/// Lists are comma separated.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source = "<config>");
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string text(const std::string& section, const std::string& key) const;
  std::string text(const std::string& section, const std::string& key,
                   const std::string& fallback) const;
  double number(const std::string& section, const std::string& key) const;
  double number(const std::string& section, const std::string& key, double fallback) const;
  int integer(const std::string& section, const std::string& key) const;
  int integer(const std::string& section, const std::string& key, int fallback) const;
  bool flag(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& section, const std::string& key) const;
  std::vector<std::string> words(const std::string& section, const std::string& key) const;

  /// Line of a key (0 when absent).
  int line_of(const std::string& section, const std::string& key) const;
  /// Rejects keys outside `allowed` in a section.
  void restrict_keys(const std::string& section, const std::set<std::string>& allowed) const;
  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& reason) const;

  const std::string& source() const { return source_; }
  /// The configuration exactly as read.
  const std::string& raw() const { return raw_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::string source_;
  std::string raw_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::map<std::string, int> section_lines_;

  const Entry& entry(const std::string& section, const std::string& key) const;
  double to_number(const std::string& section, const std::string& key,
                   const std::string& text) const;
};

}  // namespace wqed
