#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rmc/linalg.hpp"

namespace rmc {

struct Cell {
  Index row = 0;
  Index col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Entry {
  Index row = 0;
  Index col = 0;
  double value = 0.0;

  Cell cell() const { return {row, col}; }
};

/// Sampled index set Omega: 0-based cells in strictly increasing (row, col)
/// order, plus the sampling probability that produced it.
struct Mask {
  Index rows = 0;
  Index cols = 0;
  double sample_rate = 1.0;
  std::vector<Cell> cells;

  std::size_t size() const { return cells.size(); }
};

/// Values on a sampled index set (P_Omega of some matrix) in triplet form.
///
/// Invariants, checked on construction: indices in range, strictly sorted
/// by (row, col), every value finite, sample_rate in (0, 1].
class ObservationSet {
 public:
  ObservationSet() = default;
  ObservationSet(Index rows, Index cols, double sample_rate, std::vector<Entry> entries);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  double sample_rate() const { return sample_rate_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::span<const Entry> entries() const { return entries_; }

  /// Same index set, new values (one per entry, in entry order).
  ObservationSet with_values(std::span<const double> values) const;

  /// Dense embedding: value on Omega, zero elsewhere.
  Matrix to_dense() const;

  /// Number of entries whose value is not exactly zero.
  std::size_t support_size() const;
  std::vector<Cell> support() const;

  Mask mask() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  double sample_rate_ = 1.0;
  std::vector<Entry> entries_;
};

/// P_Omega(a) for the cells of `mask`.
ObservationSet restrict_to(const Matrix& a, const Mask& mask);

/// max_{(i,j) in set} |value|; 0 for an empty set.
double entrywise_max_norm(const ObservationSet& s);

// Observation file:
//   n1 n2 p
//   i j value        (one line per entry, 0-based, sorted by (i, j))
void write_observations(std::ostream& out, const ObservationSet& obs);
ObservationSet read_observations(std::istream& in, std::string_view source = "<stream>");
void save_observations(const std::string& path, const ObservationSet& obs);
ObservationSet load_observations(const std::string& path);

}  // namespace rmc
