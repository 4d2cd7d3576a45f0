#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace wqed {

using CsvCell = std::variant<double, long long, std::string>;

/// Round-trip formatting: 17 significant digits.
std::string format_double(double value);

/// Comma-separated writer with a fixed header. Rows are flushed as written so
/// partial results survive an abort.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns);

  void row(const std::vector<CsvCell>& cells);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::size_t width_;
  std::ofstream out_;
};

}  // namespace wqed
