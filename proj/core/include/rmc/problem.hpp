#pragma once

// Synthetic robust matrix completion instances.
//
// L* = X Y^T with i.i.d. standard normal X (n1 x r) and Y (n2 x r); each cell
// is observed independently with probability p; each observed cell is
// corrupted with probability alpha by an outlier drawn uniformly from
// [-2 ||L*||_inf, 2 ||L*||_inf]. Every random stream is keyed by the
// instance seed and a purpose tag, see random.hpp.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rmc/linalg.hpp"
#include "rmc/observations.hpp"

namespace rmc {

struct GroundTruth {
  Matrix l_star;
  SvdFactors factors;  // rank-r compact SVD of l_star
  IncoherenceReport incoherence;
  /// Outliers on Omega, sorted by cell. A cell is an outlier because its
  /// corruption event fired, so a value may be exactly zero.
  std::vector<Entry> s_star;

  Index rank() const { return factors.rank(); }
  double sigma_max() const { return factors.sigma(0); }
  /// (mu r / n) sigma_1 with n = max(n1, n2): the entrywise scale that sets
  /// the threshold schedule.
  double entry_scale() const;
};

struct SparsityStats {
  Index max_row_count = 0;
  Index max_col_count = 0;
  double alpha_hat = 0.0;  // max(max_row_count, max_col_count) / (p n), n = max(n1, n2)
  Index total_outliers = 0;
};

struct CorruptedObservations {
  ObservationSet observations;  // P_Omega(L* + S*)
  std::vector<Entry> outliers;  // P_Omega(S*)
  SparsityStats stats;
};

struct AssumptionReport {
  double mu = 0.0;
  double kappa = 1.0;
  double alpha_hat = 0.0;
  double p = 0.0;
  Index n = 0;
  Index r = 0;
  /// p n / (kappa^4 mu^3 r^3 log n): larger means better sampled.
  double sampling_ratio = 0.0;
  /// alpha_hat kappa^2 mu^2 r^2: smaller means sparser outliers.
  double outlier_ratio = 0.0;
};

/// Throws DimensionError unless 1 <= r <= min(n1, n2).
GroundTruth gen_ground_truth(Index n1, Index n2, Index r, std::uint64_t seed);

/// Ground truth wrapper for an arbitrary low-rank matrix of rank r.
GroundTruth ground_truth_from(Matrix l_star, Index r);

/// One uniform draw per cell in row-major order; cell kept iff draw < p.
/// Throws ParameterError unless 0 < p <= 1.
Mask sample_mask(Index n1, Index n2, double p, std::uint64_t seed);

/// Throws ParameterError unless 0 <= alpha < 1 or if the mask is empty or
/// does not match the ground-truth shape.
CorruptedObservations inject_outliers(const GroundTruth& gt, const Mask& mask, double alpha,
                                      std::uint64_t seed);

SparsityStats sparsity_stats(Index n1, Index n2, double p, const std::vector<Entry>& outliers);

AssumptionReport check_assumptions(const GroundTruth& gt, const ObservationSet& obs,
                                   const SparsityStats& stats);

/// Full instance: ground truth (with s_star filled) and observations.
struct Instance {
  GroundTruth truth;
  CorruptedObservations data;
};

Instance make_instance(Index n1, Index n2, Index r, double p, double alpha, std::uint64_t seed);

// Ground-truth sidecar file: the dense matrix format for L*, followed by
//   outliers K
//   i j value     (K lines, sorted by (i, j))
void write_truth(std::ostream& out, const GroundTruth& gt);
/// Reads L* and the outliers; factors are recomputed at rank r.
GroundTruth read_truth(std::istream& in, Index r, std::string_view source = "<stream>");
void save_truth(const std::string& path, const GroundTruth& gt);
GroundTruth load_truth(const std::string& path, Index r);

}  // namespace rmc
