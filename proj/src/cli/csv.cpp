#include "cli/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fockphase::cli {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header)
    : out_(out), columns_(header.size()) {
  for (auto h : header) cell(h);
  end_row();
}

void CsvWriter::separator() {
  if (filled_ == columns_) throw std::logic_error("CSV row has too many cells");
  if (filled_++ > 0) out_ << ',';
}

CsvWriter& CsvWriter::cell(double value) {
  separator();
  out_ << format_double(value);
  return *this;
}

CsvWriter& CsvWriter::cell(long long value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::cell(unsigned long long value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  separator();
  out_ << text;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("CSV row has too few cells");
  out_ << '\n';
  filled_ = 0;
}

}  // namespace fockphase::cli
