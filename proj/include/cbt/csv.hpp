#pragma once

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace cbt::csv {

// Six significant digits, '.' as decimal point, "inf"/"nan" spelled out.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class Writer {
 public:
  Writer(std::ostream& os, char delimiter = ',') : os_(&os), delim_(delimiter) {}

  void comment(std::string_view key, std::string_view value) { *os_ << "# " << key << " = " << value << '\n'; }
  void comment(std::string_view text) { *os_ << "# " << text << '\n'; }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) *os_ << delim_;
      *os_ << cells[i];
    }
    *os_ << '\n';
  }

  static std::string cell(double v) { return format_real(v); }
  static std::string cell(std::int64_t v) { return std::to_string(v); }
  static std::string cell(std::uint64_t v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  static std::string cell(std::string_view v) { return std::string(v); }

 private:
  std::ostream* os_;
  char delim_;
};

}  // namespace cbt::csv
