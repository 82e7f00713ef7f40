#include "vacblow/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace vacblow {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), ncols_(header.size()) {
  if (!out_) throw std::runtime_error("cannot open " + path);
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << "\r\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != ncols_) throw std::invalid_argument("csv row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_g17(values[i]);
  out_ << "\r\n";
}

}  // namespace vacblow
