#pragma once

// Dense linear algebra used by the solver: truncated SVD (the rank-r
// projection), matrix norms and incoherence diagnostics.

#include <Eigen/Dense>

#include <cstdint>

namespace rmc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Compact factorization a ~= u * diag(sigma) * v^T with k columns.
///
/// Columns of u and v are orthonormal, sigma is sorted nonincreasing and
/// every singular pair is sign-canonical: the entry of largest magnitude in
/// each u column is positive (lowest index wins ties).
struct SvdFactors {
  Matrix u;
  Vector sigma;
  Matrix v;

  Index rank() const { return sigma.size(); }
  Matrix reconstruct() const;
};

enum class SvdMethod {
  Auto,      // Dense up to dense_limit, Subspace above it.
  Dense,     // Full SVD, then truncate.
  Subspace,  // Block subspace iteration with Rayleigh-Ritz extraction.
};

struct SvdOptions {
  SvdMethod method = SvdMethod::Auto;
  Index dense_limit = 2000;
  Index oversample = 10;
  int max_subspace_iters = 60;
  /// Subspace iteration stops once every leading residual
  /// ||(I - QQ^T) a v_i|| is below residual_tol * sigma_1.
  double residual_tol = 1e-12;
  std::uint64_t seed = 0x5eed5eedULL;
  /// Optional warm start for the subspace method: an (a.cols() x b) matrix
  /// whose span approximates the leading right singular subspace. Ignored
  /// when empty or when its shape does not fit.
  Matrix start;
};

inline SvdOptions with_method(SvdMethod method) {
  SvdOptions o;
  o.method = method;
  return o;
}

/// Best rank-k approximation factors of a (Eckart-Young).
///
/// Throws DimensionError when k is not in [1, min(rows, cols)] and
/// NumericalError when the factorization produces non-finite values.
SvdFactors truncated_svd(const Matrix& a, Index k, const SvdOptions& options = {});

/// u * diag(sigma) * v^T of truncated_svd(a, k).
Matrix rank_r_project(const Matrix& a, Index k, const SvdOptions& options = {});

/// Largest singular value by power iteration on a^T a.
///
/// Starts from the normalized all-ones vector and runs at most 100
/// iterations, stopping early when the Rayleigh quotient changes by less
/// than 1e-12 relative.
double spectral_norm(const Matrix& a);

struct MatrixNorms {
  double frobenius = 0.0;
  double entrywise_max = 0.0;
  double two_inf = 0.0;            // max row l2 norm
  double two_inf_transpose = 0.0;  // max column l2 norm
};

MatrixNorms norms(const Matrix& a);

double entrywise_max_norm(const Matrix& a);
double two_inf_norm(const Matrix& a);

struct IncoherenceReport {
  double mu = 0.0;
  double row_norm_u = 0.0;
  double row_norm_v = 0.0;
  double kappa = 1.0;
};

/// mu = (n / r) * max(||u||_{2,inf}^2, ||v||_{2,inf}^2) with
/// n = max(rows(u), rows(v)); kappa = sigma_1 / sigma_r.
///
/// Throws ParameterError when sigma is empty or sigma_r <= 0 and
/// DimensionError when u and v disagree on r.
IncoherenceReport incoherence(const Matrix& u, const Matrix& v, const Vector& sigma);

/// The mu part of incoherence() alone; defined for zero singular values.
double coherence(const Matrix& u, const Matrix& v);

/// Number of singular values of a above rel_tol * sigma_1.
Index numerical_rank(const Matrix& a, double rel_tol = 1e-9);

/// All singular values of a, nonincreasing.
Vector singular_values(const Matrix& a);

/// Throws NumericalError naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& a, const char* what);

}  // namespace rmc
