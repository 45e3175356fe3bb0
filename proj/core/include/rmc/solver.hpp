#pragma once

// Alternating outlier thresholding and singular value projection.
//
// Starting from L^0 = 0, for t = 0, 1, ...
//   xi^t    = beta * gamma^t
//   S^t     = T_{xi^t}( P_Omega(M - L^t) )
//   L^{t+1} = P_r( L^t - p^{-1} P_Omega(L^t + S^t - M) )
// With hard thresholding this is the R-RMC iteration (SVP + hard
// thresholding) under the same threshold schedule.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmc/linalg.hpp"
#include "rmc/observations.hpp"
#include "rmc/problem.hpp"
#include "rmc/threshold.hpp"

namespace rmc {

enum class BetaMode {
  Fixed,       // use SolverConfig::beta as given
  Oracle,      // beta_factor * (mu r / n) sigma_1 of the supplied ground truth
  DataDriven,  // beta_factor * beta_data_driven(obs, rank)
};

struct SolverConfig {
  Index rank = 1;
  ThresholdKind kind = ThresholdKind::soft();
  double beta = 0.0;
  BetaMode beta_mode = BetaMode::Fixed;
  double beta_factor = 1.1;
  double gamma = 0.9;
  int max_iters = 500;
  /// Stop once ||L^{t+1} - L^t||_F / max(||L^t||_F, 1e-30) < stop_tol.
  double stop_tol = 1e-9;
  /// How the rank-r projection is computed. The previous iterate's right
  /// singular vectors seed the subspace method when warm_start is set.
  SvdOptions svd = with_method(SvdMethod::Subspace);
  bool warm_start = true;
  /// When false every wall-clock field is recorded as 0, which makes traces
  /// byte-reproducible.
  bool record_timing = true;

  /// Throws ParameterError / DimensionError on an invalid configuration.
  void validate() const;
};

struct IterateState {
  int t = 0;
  Matrix l;
  ObservationSet s;
  double xi = 0.0;
};

enum class Termination { Converged, MaxIters, Failed };

const char* to_string(Termination t);

struct IterationRecord {
  int t = 0;
  double xi = 0.0;
  /// ||L^t - L^{t-1}||_F / max(||L^{t-1}||_F, 1e-30); 0 at t = 0.
  double successive_change = 0.0;
  std::size_t support_size = 0;
  // Filled only when a ground truth is supplied.
  std::optional<double> rel_inf_error;      // ||L^t - L*||_inf / ||L*||_inf
  std::optional<double> inf_error;          // ||L^t - L*||_inf
  std::optional<bool> support_in_truth;     // supp(S^t) within Omega and supp(S*)
  std::optional<double> outlier_inf_error;  // ||P_Omega(S^t - S*)||_inf
  std::int64_t wall_ms = 0;
};

struct SolveTrace {
  std::string algorithm;
  double beta = 0.0;
  std::vector<IterationRecord> records;  // t = 0 .. iterations
  Matrix l_hat;
  ObservationSet s_hat;
  Termination termination = Termination::MaxIters;
  /// Iteration t at which L^t was found stationary (L^{t+1} ~ L^t).
  std::optional<int> converged_at;
  int iterations = 0;  // number of L updates executed
  std::string failure;
  std::vector<std::string> warnings;

  const IterationRecord& final_record() const { return records.back(); }
};

/// S^t = T_{xi^t}(P_Omega(M - L^t)) on the index set of obs.
ObservationSet s_update(const IterateState& state, const ObservationSet& obs,
                        const SolverConfig& cfg);

/// Factors of P_r(L^t - p^{-1} P_Omega(L^t + S^t - M)). `s_new` must share
/// the index set of `obs`.
SvdFactors l_update_factors(const IterateState& state, const ObservationSet& s_new,
                            const ObservationSet& obs, const SolverConfig& cfg, double p,
                            const SvdOptions& svd);

Matrix l_update(const IterateState& state, const ObservationSet& s_new, const ObservationSet& obs,
                const SolverConfig& cfg, double p);

/// Heuristic threshold scale (mu_hat r / n) sigma_hat_1 from the rank-r SVD of
/// p^{-1} P_Omega(M). Returns 0 for an all-zero observation.
double beta_data_driven(const ObservationSet& obs, Index rank);

/// beta for cfg: resolved by mode and checked positive (ParameterError).
double resolve_beta(const SolverConfig& cfg, const ObservationSet& obs, const GroundTruth* truth);

/// Runs the iteration with cfg.kind. Configuration errors throw; numerical
/// failures end the run with Termination::Failed.
SolveTrace solve(const ObservationSet& obs, const SolverConfig& cfg,
                 const GroundTruth* truth = nullptr);

/// Same loop with hard thresholding (cfg.kind is ignored).
SolveTrace solve_rrmc(const ObservationSet& obs, const SolverConfig& cfg,
                      const GroundTruth* truth = nullptr);

/// CSV with header t,xi,successive_change,support_size,rel_inf_error,support_in_truth,wall_ms.
void write_trace_csv(std::ostream& out, const SolveTrace& trace);
void save_trace_csv(const std::string& path, const SolveTrace& trace);

}  // namespace rmc
