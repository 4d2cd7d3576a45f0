#include "wqed/csv.hpp"

#include <cmath>
#include <cstdio>

#include "wqed/errors.hpp"

namespace wqed {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns)
    : path_(path), width_(columns.size()) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path);
  if (!out_) throw InvalidArgument("cannot write " + path.string());
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
  out_.flush();
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  if (cells.size() != width_) throw InvalidArgument("CsvWriter: row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    if (const double* d = std::get_if<double>(&cells[i])) {
      out_ << format_double(*d);
    } else if (const long long* n = std::get_if<long long>(&cells[i])) {
      out_ << *n;
    } else {
      out_ << std::get<std::string>(cells[i]);
    }
  }
  out_ << '\n';
  out_.flush();
  if (!out_) throw InvalidArgument("write failed: " + path_.string());
}

}  // namespace wqed
