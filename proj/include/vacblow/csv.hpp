#pragma once
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace vacblow {

/// RFC-4180 CSV with a mandatory header; numbers at 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row(std::initializer_list<double> values) { row(std::vector<double>(values)); }

 private:
  std::ofstream out_;
  std::size_t ncols_;
};

std::string format_g17(double v);

}  // namespace vacblow
