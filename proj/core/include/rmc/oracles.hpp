#pragma once

// Randomized numerical checks of deterministic matrix inequalities that the
// convergence analysis relies on. Each check draws `trials` independent
// instances satisfying the hypotheses and evaluates both sides exactly
// (dense SVDs), so any violation is a genuine counterexample up to the
// stated rounding slack.

#include <cstdint>
#include <string>
#include <vector>

#include "rmc/linalg.hpp"
#include "rmc/threshold.hpp"

namespace rmc {

struct OracleReport {
  std::string lemma_name;
  int trials = 0;
  /// min over trials of (bound - observed), in the bound's units.
  double worst_slack = 0.0;
  int violations = 0;

  bool passed() const { return violations == 0; }
};

/// [U; V] stacked: (n1 + n2) x r.
Matrix stack_factors(const Matrix& u, const Matrix& v);

/// Orthogonal Procrustes rotation G = A B^T from the SVD A S B^T of
/// ref^T f; G minimizes ||f - ref R||_F over orthogonal R.
Matrix procrustes_rotation(const Matrix& ref, const Matrix& f);

/// ||S||_2 <= k ||S||_inf for S with at most k nonzeros in every row and
/// column (k = alpha n).
double sparse_spectral_slack(const Matrix& s, Index max_per_line);
OracleReport check_sparse_spectral(int trials, std::uint64_t seed);

/// Both sides of the rank-r perturbation bound for L = P_r(L* + E), given
/// ||E||_2 <= sigma_r(L*) / 2:
///   ||L - L*||_inf <= ||Delta||_{2,inf} (||F||_{2,inf} + ||F*||_{2,inf}) ||Sigma||_2
///                     + (3 + 4 kappa) ||F*||_{2,inf}^2 ||E||_2.
struct PerturbationSides {
  double lhs = 0.0;
  double rhs = 0.0;
  double sigma1 = 0.0;
  /// ||Delta||_F minus the best ||F - F* R||_F over the tried rotations.
  double procrustes_gap = 0.0;
};
PerturbationSides perturbation_sides(const Matrix& l_star, Index r, const Matrix& e);
OracleReport check_perturbation_bound(int trials, std::uint64_t seed);

/// ||P_pattern(A B^T)||_F^2 <= c min(||A||_F^2 ||B||_{2,inf}^2, ||A||_{2,inf}^2 ||B||_F^2)
/// for a pattern with at most c cells per row and column (c = 2 alpha p n).
/// Returns bound - lhs.
double sparse_projection_slack(const std::vector<std::pair<Index, Index>>& pattern,
                               double per_line_bound, const Matrix& a, const Matrix& b);
OracleReport check_sparse_projection_bound(int trials, std::uint64_t seed);

/// Support containment and entrywise error of one thresholding step when
/// ||L^t - L*||_inf <= (mu r / n) sigma_1 gamma^t and
/// beta >= (mu r / n) sigma_1; runs both Soft and SCAD (a = 3) per trial.
OracleReport check_threshold_lemma(int trials, std::uint64_t seed);

/// Random sparsity pattern on an n1 x n2 grid with at most `per_line`
/// cells in every row and column (union of random partial permutations).
std::vector<std::pair<Index, Index>> random_sparse_pattern(Index n1, Index n2, Index per_line,
                                                           std::uint64_t seed);

std::vector<OracleReport> run_all_oracles(int trials, std::uint64_t seed);

}  // namespace rmc
