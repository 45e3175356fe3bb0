#include "rmc/observations.hpp"

#include <cmath>
#include <fstream>

#include "rmc/errors.hpp"
#include "rmc/matrix_io.hpp"

namespace rmc {

ObservationSet::ObservationSet(Index rows, Index cols, double sample_rate,
                               std::vector<Entry> entries)
    : rows_(rows), cols_(cols), sample_rate_(sample_rate), entries_(std::move(entries)) {
  if (rows <= 0 || cols <= 0) throw DimensionError("ObservationSet: dimensions must be positive");
  if (!(sample_rate > 0.0 && sample_rate <= 1.0)) {
    throw ParameterError("ObservationSet: sample rate must lie in (0, 1]");
  }
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const Entry& e = entries_[k];
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols) {
      throw DimensionError("ObservationSet: entry (" + std::to_string(e.row) + ", " +
                           std::to_string(e.col) + ") out of range");
    }
    if (!std::isfinite(e.value)) throw NumericalError("ObservationSet: non-finite value");
    if (k > 0 && !(entries_[k - 1].cell() < e.cell())) {
      throw DimensionError("ObservationSet: entries must be strictly sorted by (row, col)");
    }
  }
}

ObservationSet ObservationSet::with_values(std::span<const double> values) const {
  if (values.size() != entries_.size()) {
    throw DimensionError("ObservationSet::with_values: value count mismatch");
  }
  ObservationSet out = *this;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) throw NumericalError("ObservationSet: non-finite value");
    out.entries_[k].value = values[k];
  }
  return out;
}

Matrix ObservationSet::to_dense() const {
  Matrix a = Matrix::Zero(rows_, cols_);
  for (const Entry& e : entries_) a(e.row, e.col) = e.value;
  return a;
}

std::size_t ObservationSet::support_size() const {
  std::size_t n = 0;
  for (const Entry& e : entries_)
    if (e.value != 0.0) ++n;
  return n;
}

std::vector<Cell> ObservationSet::support() const {
  std::vector<Cell> out;
  for (const Entry& e : entries_)
    if (e.value != 0.0) out.push_back(e.cell());
  return out;
}

Mask ObservationSet::mask() const {
  Mask m{rows_, cols_, sample_rate_, {}};
  m.cells.reserve(entries_.size());
  for (const Entry& e : entries_) m.cells.push_back(e.cell());
  return m;
}

ObservationSet restrict_to(const Matrix& a, const Mask& mask) {
  if (a.rows() != mask.rows || a.cols() != mask.cols) {
    throw DimensionError("restrict_to: matrix and mask shapes differ");
  }
  std::vector<Entry> entries;
  entries.reserve(mask.cells.size());
  for (const Cell& c : mask.cells) entries.push_back({c.row, c.col, a(c.row, c.col)});
  return ObservationSet(mask.rows, mask.cols, mask.sample_rate, std::move(entries));
}

double entrywise_max_norm(const ObservationSet& s) {
  double m = 0.0;
  for (const Entry& e : s.entries()) m = std::max(m, std::abs(e.value));
  return m;
}

void write_observations(std::ostream& out, const ObservationSet& obs) {
  out << obs.rows() << ' ' << obs.cols() << ' ' << format_real(obs.sample_rate()) << '\n';
  for (const Entry& e : obs.entries()) {
    out << e.row << ' ' << e.col << ' ' << format_real(e.value) << '\n';
  }
}

ObservationSet read_observations(std::istream& in, std::string_view source) {
  detail::LineReader reader(in, source);
  std::string line;
  if (!reader.next(line)) reader.fail("missing 'n1 n2 p' header");
  auto head = detail::split_ws(line);
  if (head.size() != 3) reader.fail("header must be 'n1 n2 p'");
  const long long rows = detail::parse_integer(head[0], reader);
  const long long cols = detail::parse_integer(head[1], reader);
  const double p = detail::parse_real(head[2], reader);
  if (rows <= 0 || cols <= 0) reader.fail("dimensions must be positive");
  if (!(p > 0.0 && p <= 1.0)) reader.fail("sample rate must lie in (0, 1]");

  std::vector<Entry> entries;
  while (reader.next(line)) {
    auto tok = detail::split_ws(line);
    if (tok.size() != 3) reader.fail("expected 'i j value'");
    Entry e{detail::parse_integer(tok[0], reader), detail::parse_integer(tok[1], reader),
            detail::parse_real(tok[2], reader)};
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols) reader.fail("index out of range");
    if (!entries.empty() && !(entries.back().cell() < e.cell())) {
      reader.fail("entries must be strictly sorted by (i, j)");
    }
    entries.push_back(e);
  }
  return ObservationSet(rows, cols, p, std::move(entries));
}

void save_observations(const std::string& path, const ObservationSet& obs) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_observations(out, obs);
  if (!out) throw IoError("write failed for '" + path + "'");
}

ObservationSet load_observations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_observations(in, path);
}

}  // namespace rmc
