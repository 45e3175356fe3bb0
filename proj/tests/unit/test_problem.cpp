#include <gtest/gtest.h>

#include <cmath>

#include "reference.hpp"
#include "rmc/errors.hpp"
#include "rmc/problem.hpp"

using namespace rmc;

TEST(GenGroundTruth, FullRankSmall) {
  const GroundTruth gt = gen_ground_truth(4, 4, 4, 1);
  EXPECT_EQ(gt.rank(), 4);
  EXPECT_TRUE(std::isfinite(gt.incoherence.kappa));
  EXPECT_GE(gt.incoherence.kappa, 1.0);
}

TEST(GenGroundTruth, NumericalRankThree) {
  const GroundTruth gt = gen_ground_truth(100, 100, 3, 7);
  const ref::Svd full = ref::jacobi_svd(gt.l_star);
  EXPECT_LT(full.sigma(3) / full.sigma(0), 1e-9);
  EXPECT_NEAR(gt.sigma_max(), full.sigma(0), 1e-10 * full.sigma(0));
}

TEST(GenGroundTruth, Deterministic) {
  EXPECT_EQ(gen_ground_truth(30, 20, 2, 99).l_star, gen_ground_truth(30, 20, 2, 99).l_star);
  EXPECT_NE(gen_ground_truth(30, 20, 2, 99).l_star, gen_ground_truth(30, 20, 2, 98).l_star);
}

TEST(GenGroundTruth, Errors) {
  EXPECT_THROW(gen_ground_truth(5, 4, 5, 1), DimensionError);
  EXPECT_THROW(gen_ground_truth(5, 4, 0, 1), DimensionError);
}

TEST(GenGroundTruth, EntryBoundFromIncoherence) {
  for (unsigned s = 0; s < 5; ++s) {
    const GroundTruth gt = gen_ground_truth(80, 50, 4, s);
    EXPECT_LE(entrywise_max_norm(gt.l_star), gt.entry_scale() + 1e-12 * gt.entry_scale());
  }
}

TEST(SampleMask, FullSampling) {
  const Mask m = sample_mask(7, 5, 1.0, 3);
  EXPECT_EQ(m.size(), 35u);
}

TEST(SampleMask, RateConcentrates) {
  const Mask m = sample_mask(1000, 1000, 0.3, 12);
  EXPECT_NEAR(static_cast<double>(m.size()) / 1e6, 0.3, 0.01);
}

TEST(SampleMask, SeedsDiffer) {
  EXPECT_NE(sample_mask(30, 30, 0.5, 1).cells, sample_mask(30, 30, 0.5, 2).cells);
  EXPECT_EQ(sample_mask(30, 30, 0.5, 1).cells, sample_mask(30, 30, 0.5, 1).cells);
}

TEST(SampleMask, Errors) {
  EXPECT_THROW(sample_mask(3, 3, 0.0, 1), ParameterError);
  EXPECT_THROW(sample_mask(3, 3, 1.1, 1), ParameterError);
}

TEST(InjectOutliers, NoOutliers) {
  const GroundTruth gt = gen_ground_truth(20, 20, 2, 1);
  const Mask m = sample_mask(20, 20, 0.5, 2);
  const CorruptedObservations c = inject_outliers(gt, m, 0.0, 3);
  EXPECT_TRUE(c.outliers.empty());
  EXPECT_EQ(c.stats.alpha_hat, 0.0);
  for (const Entry& e : c.observations.entries()) EXPECT_EQ(e.value, gt.l_star(e.row, e.col));
}

TEST(InjectOutliers, RatesAndBookkeeping) {
  const GroundTruth gt = gen_ground_truth(1000, 1000, 2, 4);
  const Mask m = sample_mask(1000, 1000, 0.3, 5);
  const CorruptedObservations c = inject_outliers(gt, m, 0.1, 6);
  EXPECT_NEAR(static_cast<double>(c.stats.total_outliers) / static_cast<double>(m.size()), 0.1,
              0.01);
  EXPECT_LE(c.stats.alpha_hat, 0.2);

  // Observed - L* on Omega reproduces the stored outliers exactly.
  const double bound = 2 * entrywise_max_norm(gt.l_star);
  auto it = c.outliers.begin();
  for (const Entry& e : c.observations.entries()) {
    const double diff = e.value - gt.l_star(e.row, e.col);
    if (it != c.outliers.end() && it->cell() == e.cell()) {
      EXPECT_EQ(e.value, gt.l_star(e.row, e.col) + it->value);
      EXPECT_LE(std::abs(it->value), bound);
      ++it;
    } else {
      EXPECT_EQ(diff, 0.0);
    }
  }
  EXPECT_EQ(it, c.outliers.end());  // every outlier sits on Omega

  std::vector<std::pair<long, long>> cells;
  for (const Entry& e : c.outliers) cells.emplace_back(e.row, e.col);
  const ref::LineCounts lc = ref::count_lines(1000, 1000, cells);
  EXPECT_EQ(c.stats.max_row_count, lc.max_row);
  EXPECT_EQ(c.stats.max_col_count, lc.max_col);
  EXPECT_NEAR(c.stats.alpha_hat * 0.3 * 1000, std::max(lc.max_row, lc.max_col), 1e-9);
}

TEST(InjectOutliers, Errors) {
  const GroundTruth gt = gen_ground_truth(5, 5, 1, 1);
  const Mask m = sample_mask(5, 5, 1.0, 1);
  EXPECT_THROW(inject_outliers(gt, m, 1.0, 1), ParameterError);
  EXPECT_THROW(inject_outliers(gt, m, -0.1, 1), ParameterError);
  EXPECT_THROW(inject_outliers(gt, Mask{5, 5, 0.5, {}}, 0.1, 1), ParameterError);
}

TEST(CheckAssumptions, SpikeTruth) {
  Matrix l = Matrix::Zero(6, 6);
  l(0, 0) = 2.0;
  const GroundTruth gt = ground_truth_from(l, 1);
  const Mask m = sample_mask(6, 6, 1.0, 1);
  const CorruptedObservations c = inject_outliers(gt, m, 0.0, 1);
  const AssumptionReport r = check_assumptions(gt, c.observations, c.stats);
  EXPECT_NEAR(r.mu, 6.0, 1e-12);
  EXPECT_EQ(r.alpha_hat, 0.0);
}

TEST(CheckAssumptions, LargeInstanceIsFinite) {
  const Instance inst = make_instance(1000, 1000, 5, 0.3, 0.1, 1);
  const AssumptionReport r = check_assumptions(inst.truth, inst.data.observations, inst.data.stats);
  for (double x : {r.mu, r.kappa, r.alpha_hat, r.sampling_ratio, r.outlier_ratio}) {
    EXPECT_TRUE(std::isfinite(x));
    EXPECT_GT(x, 0.0);
  }
  EXPECT_EQ(r.p, 0.3);
  EXPECT_EQ(r.r, 5);
}

TEST(MakeInstance, Deterministic) {
  const Instance a = make_instance(40, 30, 2, 0.4, 0.1, 77);
  const Instance b = make_instance(40, 30, 2, 0.4, 0.1, 77);
  EXPECT_EQ(a.truth.l_star, b.truth.l_star);
  ASSERT_EQ(a.data.observations.size(), b.data.observations.size());
  for (std::size_t k = 0; k < a.data.observations.size(); ++k) {
    EXPECT_EQ(a.data.observations.entries()[k].value, b.data.observations.entries()[k].value);
  }
}
