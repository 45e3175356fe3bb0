#pragma once

// Plain-text dense matrix format:
//
//   rows cols
//   a00 a01 ... a0(cols-1)
//   ...
//
// Values are written with 17 significant digits so a write/read cycle is
// exact for every finite double.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rmc/linalg.hpp"

namespace rmc {

/// Shortest-unambiguous formatting at 17 significant digits ("%.17g").
std::string format_real(double x);

void write_dense(std::ostream& out, const Matrix& a);
Matrix read_dense(std::istream& in, std::string_view source = "<stream>");

void save_dense(const std::string& path, const Matrix& a);
Matrix load_dense(const std::string& path);

namespace detail {

// Line-oriented reader shared by the text formats; tracks line numbers for
// ParseError messages.
class LineReader {
 public:
  LineReader(std::istream& in, std::string_view source);

  /// Next non-empty line (after trimming); false at end of input.
  bool next(std::string& line);
  [[noreturn]] void fail(const std::string& what) const;
  int line_number() const { return line_; }

 private:
  std::istream& in_;
  std::string source_;
  int line_ = 0;
};

std::vector<std::string_view> split_ws(std::string_view line);
double parse_real(std::string_view token, const LineReader& where);
long long parse_integer(std::string_view token, const LineReader& where);

}  // namespace detail
}  // namespace rmc
