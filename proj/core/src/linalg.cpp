#include "rmc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rmc/errors.hpp"
#include "rmc/random.hpp"

namespace rmc {

namespace {

void canonicalize_signs(SvdFactors& f) {
  for (Index c = 0; c < f.u.cols(); ++c) {
    Index best = 0;
    double best_abs = -1.0;
    for (Index r = 0; r < f.u.rows(); ++r) {
      const double v = std::abs(f.u(r, c));
      if (v > best_abs) {
        best_abs = v;
        best = r;
      }
    }
    if (f.u(best, c) < 0.0) {
      f.u.col(c) *= -1.0;
      f.v.col(c) *= -1.0;
    }
  }
}

Matrix orthonormal_basis(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
}

SvdFactors dense_svd(const Matrix& a, Index k) {
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericalError("truncated_svd: dense SVD did not converge");
  }
  SvdFactors f;
  f.u = svd.matrixU().leftCols(k);
  f.sigma = svd.singularValues().head(k);
  f.v = svd.matrixV().leftCols(k);
  return f;
}

// Block subspace iteration on a with b = k + oversample columns. Returns
// false if the residual test is not met within the iteration budget.
bool subspace_svd(const Matrix& a, Index k, const SvdOptions& opt, SvdFactors& out) {
  const Index m = a.rows();
  const Index n = a.cols();
  const Index b = std::min(k + opt.oversample, std::min(m, n));

  Matrix v0;
  if (opt.start.rows() == n && opt.start.cols() >= k) {
    v0 = opt.start.leftCols(std::min<Index>(opt.start.cols(), b));
    if (v0.cols() < b) {
      // Pad a short warm start with seeded Gaussian columns.
      CounterRng rng(derive_seed(opt.seed, tag_of("svd-pad")));
      Matrix padded(n, b);
      padded.leftCols(v0.cols()) = v0;
      for (Index j = v0.cols(); j < b; ++j)
        for (Index i = 0; i < n; ++i) padded(i, j) = rng.normal();
      v0 = std::move(padded);
    }
  } else {
    CounterRng rng(derive_seed(opt.seed, tag_of("svd-start")));
    v0.resize(n, b);
    for (Index j = 0; j < b; ++j)
      for (Index i = 0; i < n; ++i) v0(i, j) = rng.normal();
  }

  Matrix w = a * v0;
  for (int it = 0; it < opt.max_subspace_iters; ++it) {
    const Matrix q = orthonormal_basis(w);
    const Matrix z = a.transpose() * q;  // (q^T a)^T, n x b
    Eigen::JacobiSVD<Matrix> small(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    // z = Vz S Uz^T  =>  q^T a = Uz S Vz^T
    const Matrix& vz = small.matrixU();
    const Vector& s = small.singularValues();
    const Matrix u_full = q * small.matrixV();
    w = a * vz;

    const double scale = s(0);
    double worst = 0.0;
    for (Index i = 0; i < k; ++i) {
      worst = std::max(worst, (w.col(i) - s(i) * u_full.col(i)).norm());
    }
    if (!std::isfinite(worst)) return false;
    if (scale == 0.0 || worst <= opt.residual_tol * scale) {
      out.u = u_full.leftCols(k);
      out.sigma = s.head(k);
      out.v = vz.leftCols(k);
      return true;
    }
  }
  return false;
}

}  // namespace

Matrix SvdFactors::reconstruct() const {
  return u * sigma.asDiagonal() * v.transpose();
}

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) throw NumericalError(std::string(what) + ": non-finite entry");
}

SvdFactors truncated_svd(const Matrix& a, Index k, const SvdOptions& options) {
  const Index min_dim = std::min(a.rows(), a.cols());
  if (min_dim == 0 || k < 1 || k > min_dim) {
    throw DimensionError("truncated_svd: rank " + std::to_string(k) + " outside [1, " +
                         std::to_string(min_dim) + "]");
  }
  require_finite(a, "truncated_svd input");

  bool dense = options.method == SvdMethod::Dense ||
               (options.method == SvdMethod::Auto && min_dim <= options.dense_limit);
  // Oversampled block would cover the whole space; nothing to gain.
  if (k + options.oversample >= min_dim) dense = true;

  SvdFactors f;
  if (dense || !subspace_svd(a, k, options, f)) f = dense_svd(a, k);
  if (!f.u.allFinite() || !f.v.allFinite() || !f.sigma.allFinite()) {
    throw NumericalError("truncated_svd: non-finite factors");
  }
  canonicalize_signs(f);
  return f;
}

Matrix rank_r_project(const Matrix& a, Index k, const SvdOptions& options) {
  return truncated_svd(a, k, options).reconstruct();
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) throw DimensionError("spectral_norm: empty matrix");
  Vector x = Vector::Ones(a.cols()) / std::sqrt(static_cast<double>(a.cols()));
  double rayleigh = 0.0;
  for (int it = 0; it < 100; ++it) {
    const Vector ax = a * x;
    const Vector y = a.transpose() * ax;
    const double next = x.dot(y);  // x^T a^T a x, x unit
    const double ny = y.norm();
    if (ny == 0.0) {
      rayleigh = next;
      break;
    }
    x = y / ny;
    const bool settled = it > 0 && std::abs(next - rayleigh) <= 1e-12 * std::abs(next);
    rayleigh = next;
    if (settled) break;
  }
  // One more Rayleigh evaluation at the final vector.
  rayleigh = std::max(rayleigh, (a * x).squaredNorm());
  return std::sqrt(std::max(rayleigh, 0.0));
}

double entrywise_max_norm(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double two_inf_norm(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.rowwise().norm().maxCoeff();
}

MatrixNorms norms(const Matrix& a) {
  MatrixNorms out;
  if (a.size() == 0) return out;
  out.frobenius = a.norm();
  out.entrywise_max = entrywise_max_norm(a);
  out.two_inf = two_inf_norm(a);
  out.two_inf_transpose = a.colwise().norm().maxCoeff();
  return out;
}

double coherence(const Matrix& u, const Matrix& v) {
  if (u.cols() != v.cols() || u.cols() == 0) {
    throw DimensionError("incoherence: u and v must have the same positive column count");
  }
  const double r = static_cast<double>(u.cols());
  const double n = static_cast<double>(std::max(u.rows(), v.rows()));
  const double ru = two_inf_norm(u);
  const double rv = two_inf_norm(v);
  return n / r * std::max(ru * ru, rv * rv);
}

IncoherenceReport incoherence(const Matrix& u, const Matrix& v, const Vector& sigma) {
  if (sigma.size() == 0 || sigma.size() != u.cols()) {
    throw ParameterError("incoherence: sigma length must equal the factor rank");
  }
  const double last = sigma(sigma.size() - 1);
  if (!(last > 0.0)) throw ParameterError("incoherence: sigma_r must be positive");
  IncoherenceReport rep;
  rep.mu = coherence(u, v);
  rep.row_norm_u = two_inf_norm(u);
  rep.row_norm_v = two_inf_norm(v);
  rep.kappa = sigma(0) / last;
  return rep;
}

Vector singular_values(const Matrix& a) {
  if (a.size() == 0) return Vector();
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues();
}

Index numerical_rank(const Matrix& a, double rel_tol) {
  const Vector s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++rank;
  return rank;
}

}  // namespace rmc
