#include "rmc/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "rmc/errors.hpp"

namespace rmc {

namespace detail {

LineReader::LineReader(std::istream& in, std::string_view source)
    : in_(in), source_(source) {}

bool LineReader::next(std::string& line) {
  while (std::getline(in_, line)) {
    ++line_;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    return true;
  }
  return false;
}

void LineReader::fail(const std::string& what) const {
  throw ParseError(source_ + ":" + std::to_string(line_) + ": " + what);
}

double parse_real(std::string_view token, const LineReader& where) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    where.fail("expected a finite number, got '" + std::string(token) + "'");
  }
  return value;
}

long long parse_integer(std::string_view token, const LineReader& where) {
  long long value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    where.fail("expected an integer, got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace detail

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_dense(std::ostream& out, const Matrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << format_real(a(i, j));
    }
    out << '\n';
  }
}

namespace detail {
std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}
}  // namespace detail

using detail::split_ws;

Matrix read_dense(std::istream& in, std::string_view source) {
  detail::LineReader reader(in, source);
  std::string line;
  if (!reader.next(line)) reader.fail("missing 'rows cols' header");
  auto head = split_ws(line);
  if (head.size() != 2) reader.fail("header must be 'rows cols'");
  const long long rows = detail::parse_integer(head[0], reader);
  const long long cols = detail::parse_integer(head[1], reader);
  if (rows <= 0 || cols <= 0) reader.fail("dimensions must be positive");

  Matrix a(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    if (!reader.next(line)) reader.fail("expected " + std::to_string(rows) + " rows");
    auto tokens = split_ws(line);
    if (static_cast<long long>(tokens.size()) != cols) {
      reader.fail("expected " + std::to_string(cols) + " values");
    }
    for (long long j = 0; j < cols; ++j) a(i, j) = detail::parse_real(tokens[j], reader);
  }
  return a;
}

void save_dense(const std::string& path, const Matrix& a) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_dense(out, a);
  if (!out) throw IoError("write failed for '" + path + "'");
}

Matrix load_dense(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_dense(in, path);
}

}  // namespace rmc
