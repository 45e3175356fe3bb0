#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "reference.hpp"
#include "rmc/oracles.hpp"
#include "rmc/problem.hpp"
#include "rmc/solver.hpp"

using namespace rmc;

TEST(SparseSpectral, EqualityAndSingleEntry) {
  EXPECT_NEAR(sparse_spectral_slack(Matrix::Identity(4, 4), 1), 0.0, 1e-12);
  Matrix s = Matrix::Zero(5, 5);
  s(2, 3) = 5;
  EXPECT_NEAR(sparse_spectral_slack(s, 1), 0.0, 1e-12);
}

TEST(SparseSpectral, RandomTrials) {
  const OracleReport r = check_sparse_spectral(100, 1);
  EXPECT_EQ(r.trials, 100);
  EXPECT_EQ(r.violations, 0);
  EXPECT_TRUE(r.passed());
}

TEST(RandomSparsePattern, RespectsLineCap) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pattern = random_sparse_pattern(30, 22, 4, seed);
    std::vector<std::pair<long, long>> cells(pattern.begin(), pattern.end());
    const ref::LineCounts lc = ref::count_lines(30, 22, cells);
    EXPECT_LE(lc.max_row, 4);
    EXPECT_LE(lc.max_col, 4);
    EXPECT_FALSE(pattern.empty());
  }
}

TEST(StackedFactors, OrthonormalBlocks) {
  const GroundTruth gt = gen_ground_truth(12, 9, 3, 2);
  const Matrix f = stack_factors(gt.factors.u, gt.factors.v);
  EXPECT_EQ(f.rows(), 21);
  EXPECT_LE((f.transpose() * f - 2 * Matrix::Identity(3, 3)).norm(), 1e-9 * 3);
}

TEST(Procrustes, RecoversKnownRotation) {
  const GroundTruth gt = gen_ground_truth(15, 15, 3, 3);
  const Matrix f = stack_factors(gt.factors.u, gt.factors.v);
  Eigen::HouseholderQR<Matrix> qr(Matrix::Random(3, 3));
  const Matrix q = qr.householderQ();
  const Matrix g = procrustes_rotation(f, f * q);
  EXPECT_LE((g - q).norm(), 1e-10);
}

TEST(Perturbation, ZeroPerturbation) {
  const GroundTruth gt = gen_ground_truth(20, 20, 2, 4);
  const PerturbationSides s = perturbation_sides(gt.l_star, 2, Matrix::Zero(20, 20));
  EXPECT_LE(s.lhs, 1e-12 * s.sigma1);
  EXPECT_GE(s.rhs - s.lhs, -1e-8 * s.sigma1);
}

TEST(Perturbation, RankOnePerturbation) {
  const GroundTruth gt = gen_ground_truth(25, 25, 3, 5);
  std::mt19937_64 gen(6);
  std::normal_distribution<double> nd;
  Vector x(25), y(25);
  for (Index i = 0; i < 25; ++i) {
    x(i) = nd(gen);
    y(i) = nd(gen);
  }
  const Matrix e = 0.4 * gt.factors.sigma(2) * (x / x.norm()) * (y / y.norm()).transpose();
  const PerturbationSides s = perturbation_sides(gt.l_star, 3, e);
  EXPECT_GT(s.lhs, 0.0);
  EXPECT_GE(s.rhs - s.lhs, -1e-8 * s.sigma1);
}

TEST(Perturbation, RandomTrials) {
  const OracleReport r = check_perturbation_bound(100, 2);
  EXPECT_EQ(r.violations, 0);
}

TEST(SparseProjection, EmptyAndFullPatterns) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> nd;
  Matrix a(6, 2), b(6, 2);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 2; ++j) {
      a(i, j) = nd(gen);
      b(i, j) = nd(gen);
    }
  EXPECT_GE(sparse_projection_slack({}, 0.0, a, b), 0.0);

  std::vector<std::pair<Index, Index>> full;
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 6; ++j) full.emplace_back(i, j);
  // Loop evaluation of ||A B^T||_F^2 <= n ||A||_F^2 ||B||_{2,inf}^2.
  double lhs = 0.0;
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 6; ++j) {
      double v = 0.0;
      for (Index k = 0; k < 2; ++k) v += a(i, k) * b(j, k);
      lhs += v * v;
    }
  const ref::Norms nb = ref::loop_norms(b);
  EXPECT_LE(lhs, 6.0 * a.squaredNorm() * nb.two_inf * nb.two_inf);
  EXPECT_GE(sparse_projection_slack(full, 6.0, a, b), -1e-9);
}

TEST(SparseProjection, RandomTrials) {
  EXPECT_EQ(check_sparse_projection_bound(100, 3).violations, 0);
}

TEST(ThresholdLemma, ExactIterate) {
  const Instance inst = make_instance(20, 20, 2, 0.7, 0.0, 8);
  IterateState st;
  st.l = inst.truth.l_star;
  st.xi = inst.truth.entry_scale();
  SolverConfig cfg;
  EXPECT_EQ(s_update(st, inst.data.observations, cfg).support_size(), 0u);
}

TEST(ThresholdLemma, SingleOutlierDetected) {
  GroundTruth gt = gen_ground_truth(10, 10, 1, 9);
  const double beta = 1.1 * gt.entry_scale();
  std::vector<Entry> entries;
  for (Index i = 0; i < 10; ++i)
    for (Index j = 0; j < 10; ++j) entries.push_back({i, j, gt.l_star(i, j) + (i == 4 && j == 1 ? 3 * beta : 0.0)});
  const ObservationSet obs(10, 10, 1.0, entries);
  IterateState st;
  st.l = gt.l_star;
  st.xi = beta;
  const ObservationSet s = s_update(st, obs, SolverConfig{});
  const auto support = s.support();
  ASSERT_EQ(support.size(), 1u);
  EXPECT_EQ(support[0], (Cell{4, 1}));
}

TEST(ThresholdLemma, RandomTrials) {
  EXPECT_EQ(check_threshold_lemma(100, 4).violations, 0);
}

TEST(RunAll, FourReports) {
  const auto reports = run_all_oracles(5, 1);
  ASSERT_EQ(reports.size(), 4u);
  for (const auto& r : reports) EXPECT_EQ(r.trials, 5);
}
