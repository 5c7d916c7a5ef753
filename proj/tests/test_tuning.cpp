#include <gtest/gtest.h>

#include <cmath>

#include "scsa/scsa.hpp"
#include "support.hpp"

using namespace scsa;
using testing_support::random_image;

namespace {

SweepSpec spec_for(const Image& ref, std::vector<double> h, std::vector<double> g, Objective o = Objective::min_mse) {
  SweepSpec s;
  s.h_values = std::move(h);
  s.gamma_values = std::move(g);
  s.objective = o;
  s.reference = ref;
  return s;
}

}  // namespace

TEST(LogSpaced, EndpointsAndRatio) {
  const auto v = log_spaced(0.01, 1.0, 5);
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(v.front(), 0.01);
  EXPECT_EQ(v.back(), 1.0);
  for (std::size_t k = 1; k < v.size(); ++k) EXPECT_NEAR(v[k] / v[k - 1], std::sqrt(10.0), 1e-12);
  EXPECT_EQ(log_spaced(0.3, 5.0, 1), std::vector<double>{0.3});
  EXPECT_THROW(log_spaced(0.0, 1.0, 3), UsageError);
  EXPECT_THROW(log_spaced(2.0, 1.0, 3), UsageError);
}

TEST(Objective, RoundTrip) {
  for (Objective o : {Objective::min_mse, Objective::max_psnr, Objective::max_mssim})
    EXPECT_EQ(parse_objective(to_string(o)), o);
  EXPECT_THROW(parse_objective("fastest"), UsageError);
}

TEST(Sweep, SingleCellIsBest) {
  const Image img = random_image(10, 10, 1);
  const SweepResult r = sweep(img, spec_for(img, {0.3}, {4.0}), {0.3, 4.0, 0.0, 1.0});
  ASSERT_EQ(r.table.size(), 1u);
  EXPECT_EQ(r.best_mse, 0u);
  EXPECT_EQ(r.best_psnr, 0u);
  EXPECT_EQ(r.best_mssim, 0u);
}

TEST(Sweep, TableLayoutAndBookkeeping) {
  const Image img = random_image(12, 12, 2);
  const std::vector<double> hs{0.05, 0.1, 0.3, 0.9};
  const SweepResult r = sweep(img, spec_for(img, hs, {1.0, 2.0, 4.0}), {});
  ASSERT_EQ(r.table.size(), 12u);
  for (std::size_t k = 0; k < r.table.size(); ++k) {
    EXPECT_EQ(r.table[k].h, hs[k / 3]);
    EXPECT_GE(r.table[k].wall_time_s, 0.0);
    if (k >= 3) EXPECT_LE(r.table[k].total_neg_eigs, r.table[k - 3].total_neg_eigs);
  }
}

TEST(Sweep, CachedSpectraMatchFreshRuns) {
  const Image img = random_image(12, 10, 3);
  const SweepResult r = sweep(img, spec_for(img, {0.1, 0.2}, {1.0, 2.5, 4.0}), {});
  for (const SweepRow& row : r.table) {
    const Image rec = reconstruct_2d(img, {row.h, row.gamma, 0.0, 1.0}).reconstructed;
    EXPECT_NEAR(row.mse, mse(img, rec), 1e-12);
    EXPECT_NEAR(row.mssim, mssim(img, rec), 1e-12);
  }
}

TEST(Sweep, BestIsArgOptimumWithTieBreak) {
  const Image img = random_image(12, 12, 4);
  const SweepResult r = sweep(img, spec_for(img, {0.05, 0.1, 0.2, 0.4}, {2.0, 4.0}, Objective::max_psnr), {});
  for (const SweepRow& row : r.table) {
    EXPECT_GE(r.table[r.best_mse].mse, 0.0);
    EXPECT_LE(r.table[r.best_mse].mse, row.mse);
    EXPECT_GE(r.table[r.best_psnr].psnr_db, row.psnr_db);
    EXPECT_GE(r.table[r.best_mssim].mssim, row.mssim);
  }
  EXPECT_EQ(&r.best(), &r.table[r.best_psnr]);

  SweepRow a{0.1, 4.0, 1.0, 0, 0, 0, 0}, b{0.2, 1.0, 1.0, 0, 0, 0, 0}, c{0.1, 2.0, 1.0, 0, 0, 0, 0};
  EXPECT_TRUE(detail::better(a, b, Objective::min_mse));
  EXPECT_FALSE(detail::better(b, a, Objective::min_mse));
  EXPECT_TRUE(detail::better(c, a, Objective::min_mse));
}

TEST(Sweep, MseIsReportedOnOriginalScale) {
  const Image img = example1_image(example1_grid(16));
  const SweepResult r = sweep(img, spec_for(img, {0.05}, {4.0}), {0.05, 4.0, 0.0, img.delta});
  const Image rec = reconstruct_2d(img, {0.05, 4.0, 0.0, img.delta}).reconstructed;
  EXPECT_NEAR(r.table[0].mse, 4.0 * mse(img, rec), 1e-15);
}

TEST(Sweep, RejectsBadGrids) {
  const Image img = random_image(6, 6, 5);
  EXPECT_THROW(sweep(img, spec_for(img, {}, {4.0}), {}), DataError);
  EXPECT_THROW(sweep(img, spec_for(img, {0.2, 0.1}, {4.0}), {}), DataError);
  EXPECT_THROW(sweep(img, spec_for(random_image(6, 7, 5), {0.2}, {4.0}), {}), DataError);
}

TEST(Sweep, ThreadCountDoesNotChangeTable) {
  const Image img = random_image(16, 16, 6);
  const SweepSpec s = spec_for(img, {0.1, 0.3}, {2.0, 4.0});
  const SweepResult a = sweep(img, s, {}, 1), b = sweep(img, s, {}, 3);
  for (std::size_t k = 0; k < a.table.size(); ++k) {
    EXPECT_EQ(a.table[k].mse, b.table[k].mse);
    EXPECT_EQ(a.table[k].mssim, b.table[k].mssim);
  }
}

// Heavy-noise protocol: PSNR over h in [1, 2.2] rises then falls.
TEST(Sweep, HeavyNoiseObjectiveIsUnimodal) {
  const Image clean = testing_support::lena_crop();
  const Image noisy = add_noise(clean, {75.0, 42, true});
  SweepSpec s = spec_for(clean, log_spaced(0.5, 4.0, 10), {4.0}, Objective::max_psnr);
  const SweepResult r = sweep(noisy, s, {});
  const std::size_t best = r.best_psnr;
  EXPECT_GT(best, 0u);
  EXPECT_LT(best, r.table.size() - 1);
  for (std::size_t k = 1; k <= best; ++k) EXPECT_GT(r.table[k].psnr_db, r.table[k - 1].psnr_db);
  for (std::size_t k = best + 1; k < r.table.size(); ++k) EXPECT_LT(r.table[k].psnr_db, r.table[k - 1].psnr_db);
  EXPECT_GE(r.table[best].h, 1.0);
  EXPECT_LE(r.table[best].h, 2.2 * 1.3);
}
