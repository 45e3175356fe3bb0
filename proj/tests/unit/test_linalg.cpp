#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "reference.hpp"
#include "rmc/errors.hpp"
#include "rmc/linalg.hpp"
#include "rmc/problem.hpp"

using namespace rmc;

namespace {

Matrix random_matrix(Index rows, Index cols, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = nd(gen);
  return a;
}

void expect_orthonormal(const Matrix& q) {
  const Index k = q.cols();
  EXPECT_LE((q.transpose() * q - Matrix::Identity(k, k)).norm(), 1e-10 * std::max<Index>(k, 1));
}

}  // namespace

TEST(TruncatedSvd, DiagonalTruncation) {
  Matrix a = Vector::LinSpaced(3, 3, 1).asDiagonal();
  const SvdFactors f = truncated_svd(a, 2);
  ASSERT_EQ(f.rank(), 2);
  EXPECT_NEAR(f.sigma(0), 3.0, 1e-14);
  EXPECT_NEAR(f.sigma(1), 2.0, 1e-14);
  Matrix want = Matrix::Zero(3, 3);
  want(0, 0) = 3;
  want(1, 1) = 2;
  EXPECT_LE((f.reconstruct() - want).norm(), 1e-13);
}

TEST(TruncatedSvd, FullRankReconstructs) {
  const Matrix a = random_matrix(12, 7, 1);
  const SvdFactors f = truncated_svd(a, 7);
  EXPECT_LE((f.reconstruct() - a).norm(), 1e-10 * a.norm());
  expect_orthonormal(f.u);
  expect_orthonormal(f.v);
}

TEST(TruncatedSvd, TailMatchesReferenceSvd) {
  const Matrix a = random_matrix(20, 15, 2);
  const ref::Svd full = ref::jacobi_svd(a);
  const double tail = (a - rank_r_project(a, 5)).norm();
  EXPECT_NEAR(tail, ref::tail_energy(full.sigma, 5), 1e-8 * ref::tail_energy(full.sigma, 5));
}

TEST(TruncatedSvd, SigmaSortedAndFactorsOrthonormal) {
  const Matrix a = random_matrix(30, 25, 3);
  const SvdFactors f = truncated_svd(a, 10);
  for (Index i = 1; i < f.rank(); ++i) EXPECT_GE(f.sigma(i - 1), f.sigma(i));
  EXPECT_GE(f.sigma(f.rank() - 1), 0.0);
  expect_orthonormal(f.u);
  expect_orthonormal(f.v);
}

TEST(TruncatedSvd, SignCanonicalization) {
  const Matrix a = random_matrix(9, 9, 4);
  const SvdFactors f = truncated_svd(a, 4);
  for (Index j = 0; j < 4; ++j) {
    Index best = 0;
    for (Index i = 1; i < 9; ++i)
      if (std::abs(f.u(i, j)) > std::abs(f.u(best, j))) best = i;
    EXPECT_GT(f.u(best, j), 0.0);
  }
  // Same input twice gives the same bits.
  const SvdFactors g = truncated_svd(a, 4);
  EXPECT_EQ(f.u, g.u);
  EXPECT_EQ(f.v, g.v);
}

TEST(TruncatedSvd, SubspaceMatchesDense) {
  const GroundTruth gt = gen_ground_truth(150, 120, 4, 11);
  const Matrix a = gt.l_star + 0.01 * random_matrix(150, 120, 5);
  const SvdFactors d = truncated_svd(a, 4, with_method(SvdMethod::Dense));
  const SvdFactors s = truncated_svd(a, 4, with_method(SvdMethod::Subspace));
  EXPECT_LE((d.sigma - s.sigma).norm(), 1e-9 * d.sigma(0));
  EXPECT_LE((d.reconstruct() - s.reconstruct()).norm(), 1e-8 * a.norm());
  expect_orthonormal(s.u);
  expect_orthonormal(s.v);
}

TEST(TruncatedSvd, SubspaceWarmStartIsDeterministic) {
  const Matrix a = random_matrix(80, 60, 6);
  SvdOptions o = with_method(SvdMethod::Subspace);
  o.start = truncated_svd(a, 3).v;
  const SvdFactors x = truncated_svd(a, 3, o);
  const SvdFactors y = truncated_svd(a, 3, o);
  EXPECT_EQ(x.u, y.u);
  EXPECT_EQ(x.sigma, y.sigma);
}

TEST(TruncatedSvd, RejectsBadRank) {
  const Matrix a = random_matrix(4, 3, 7);
  EXPECT_THROW(truncated_svd(a, 0), DimensionError);
  EXPECT_THROW(truncated_svd(a, 4), DimensionError);
}

TEST(TruncatedSvd, RejectsNonFinite) {
  Matrix a = random_matrix(4, 4, 8);
  a(1, 2) = std::nan("");
  EXPECT_THROW(truncated_svd(a, 2), Error);
}

TEST(RankProject, ZeroMatrix) {
  EXPECT_EQ(rank_r_project(Matrix::Zero(5, 4), 3), Matrix::Zero(5, 4));
}

TEST(RankProject, IdempotentOnLowRank) {
  const Matrix x = random_matrix(10, 1, 9), y = random_matrix(8, 1, 10);
  const Matrix w = random_matrix(10, 1, 11), z = random_matrix(8, 1, 12);
  const Matrix a = x * y.transpose() + w * z.transpose();
  EXPECT_LE((rank_r_project(a, 2) - a).norm(), 1e-10 * a.norm());
  const Matrix b = random_matrix(15, 12, 13);
  const Matrix p = rank_r_project(b, 4);
  EXPECT_LE((rank_r_project(p, 4) - p).norm(), 1e-9 * p.norm());
  EXPECT_LE(numerical_rank(p), 4);
}

TEST(RankProject, DiagonalRankOne) {
  Matrix a = Vector::LinSpaced(3, 3, 1).asDiagonal();
  Matrix want = Matrix::Zero(3, 3);
  want(0, 0) = 3;
  EXPECT_LE((rank_r_project(a, 1) - want).norm(), 1e-14);
}

TEST(RankProject, EckartYoungAgainstReferenceCompetitors) {
  std::mt19937_64 gen(14);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 5 + static_cast<Index>(gen() % 20);
    const Matrix a = random_matrix(n, n, 100 + trial);
    const ref::Svd full = ref::jacobi_svd(a);
    for (Index k = 1; k <= n; ++k) {
      const double ours = (a - rank_r_project(a, k)).norm();
      // A competitor: rank-k approximation with one singular pair swapped out.
      Matrix b = Matrix::Zero(n, n);
      for (Index i = 0; i < k; ++i) {
        const Index idx = (i == k - 1 && k < n) ? k : i;
        b += full.sigma(idx) * full.u.col(idx) * full.v.col(idx).transpose();
      }
      EXPECT_LE(ours, (a - b).norm() + 1e-8);
    }
  }
}

TEST(SpectralNorm, Examples) {
  EXPECT_NEAR(spectral_norm(Matrix::Identity(4, 4)), 1.0, 1e-12);
  Matrix d = Vector::LinSpaced(3, 3, 1).asDiagonal();
  EXPECT_NEAR(spectral_norm(d), 3.0, 1e-10);
  const Matrix a = random_matrix(10, 10, 15);
  const double want = ref::jacobi_svd(a).sigma(0);
  EXPECT_NEAR(spectral_norm(a), want, 1e-8 * want);
}

TEST(SpectralNorm, NotAboveFrobenius) {
  const Matrix a = random_matrix(7, 11, 16);
  EXPECT_LE(spectral_norm(a), a.norm() * (1 + 1e-12));
}

TEST(Norms, IdentityAndOnes) {
  const MatrixNorms i = norms(Matrix::Identity(3, 3));
  EXPECT_DOUBLE_EQ(i.frobenius, std::sqrt(3.0));
  EXPECT_EQ(i.entrywise_max, 1.0);
  EXPECT_EQ(i.two_inf, 1.0);
  EXPECT_EQ(i.two_inf_transpose, 1.0);
  const MatrixNorms o = norms(Matrix::Ones(2, 3));
  EXPECT_DOUBLE_EQ(o.frobenius, std::sqrt(6.0));
  EXPECT_EQ(o.entrywise_max, 1.0);
  EXPECT_DOUBLE_EQ(o.two_inf, std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(o.two_inf_transpose, std::sqrt(2.0));
}

TEST(Norms, MatchLoopOracle) {
  const Matrix a = random_matrix(8, 8, 17);
  const MatrixNorms n = norms(a);
  const ref::Norms r = ref::loop_norms(a);
  EXPECT_NEAR(n.frobenius, r.frobenius, 1e-14 * r.frobenius);
  EXPECT_EQ(n.entrywise_max, r.entrywise_max);
  EXPECT_NEAR(n.two_inf, r.two_inf, 1e-15 * r.two_inf);
  EXPECT_NEAR(n.two_inf_transpose, r.two_inf_transpose, 1e-15 * r.two_inf_transpose);
  EXPECT_LE(n.entrywise_max, n.two_inf);
  EXPECT_LE(n.two_inf, n.frobenius);
}

TEST(Incoherence, SpikeAndFlat) {
  Matrix e = Matrix::Zero(4, 1);
  e(0, 0) = 1;
  IncoherenceReport r = incoherence(e, e, Vector::Ones(1));
  EXPECT_DOUBLE_EQ(r.mu, 4.0);
  EXPECT_DOUBLE_EQ(r.kappa, 1.0);
  const Matrix flat = Matrix::Constant(4, 1, 0.5);
  r = incoherence(flat, flat, Vector::Ones(1));
  EXPECT_NEAR(r.mu, 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(r.kappa, 1.0);
}

TEST(Incoherence, MatchesRowNormLoop) {
  const GroundTruth gt = gen_ground_truth(100, 100, 3, 18);
  double best = 0.0;
  for (const Matrix* m : {&gt.factors.u, &gt.factors.v}) {
    for (Index i = 0; i < m->rows(); ++i) {
      double s = 0.0;
      for (Index j = 0; j < m->cols(); ++j) s += (*m)(i, j) * (*m)(i, j);
      best = std::max(best, s);
    }
  }
  EXPECT_NEAR(gt.incoherence.mu, 100.0 / 3.0 * best, 1e-12 * gt.incoherence.mu);
  EXPECT_NEAR(gt.incoherence.kappa, gt.factors.sigma(0) / gt.factors.sigma(2), 1e-12);
}

TEST(Incoherence, ConsequencesHoldOnInstances) {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const GroundTruth gt = gen_ground_truth(60, 60, 3, seed);
    const double mu_r_n = gt.incoherence.mu * 3.0 / 60.0;
    const MatrixNorms n = norms(gt.l_star);
    EXPECT_LE(n.entrywise_max, mu_r_n * gt.sigma_max() * (1 + 1e-12));
    EXPECT_LE(n.two_inf, std::sqrt(mu_r_n) * gt.sigma_max() * (1 + 1e-12));
    EXPECT_LE(n.two_inf_transpose, std::sqrt(mu_r_n) * gt.sigma_max() * (1 + 1e-12));
  }
}

TEST(Incoherence, RejectsZeroSigma) {
  const Matrix u = Matrix::Identity(3, 2);
  EXPECT_THROW(incoherence(u, u, Vector::Zero(2)), ParameterError);
}
