#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace fockphase::cli {

/// Shortest round-trip text is not needed; 17 significant digits always.
std::string format_double(double value);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);

  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(unsigned long long value);
  CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(std::size_t value) { return cell(static_cast<unsigned long long>(value)); }
  CsvWriter& cell(std::string_view text);
  void end_row();

 private:
  void separator();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

}  // namespace fockphase::cli
