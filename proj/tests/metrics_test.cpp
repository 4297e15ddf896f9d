#include "fbpaug/metrics.hpp"
#include "fbpaug/phantoms.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace fbpaug {
namespace {

Mask mask_from(std::initializer_list<int> bits, Eigen::Index h, Eigen::Index w, Spacing s = {}) {
  Mask m(h, w, s);
  auto it = bits.begin();
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < w; ++j) m.values(i, j) = static_cast<std::uint8_t>(*it++);
  return m;
}

// Brute force over all 2^n sign assignments of the (mid-)ranks.
double brute_force_p(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) d.push_back(x[i] - y[i]);
  const auto n = d.size();
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(d[j]) < std::abs(d[i])) ++less;
      if (std::abs(d[j]) == std::abs(d[i])) ++equal;
    }
    ranks[i] = less + (equal + 1.0) / 2.0;
  }
  double observed = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (d[i] > 0) observed += ranks[i];
  std::size_t hits = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) w += ranks[i];
    if (w >= observed - 1e-9) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(std::size_t{1} << n);
}

TEST(Dice, IdenticalAndEmpty) {
  const auto x = mask_from({1, 1, 0, 0, 1, 0, 0, 0, 1}, 3, 3);
  const Mask empty(3, 3);
  EXPECT_EQ(dice(x, x), 1.0);
  EXPECT_EQ(dice(x, empty), 0.0);
  EXPECT_EQ(dice(empty, empty), 1.0);
}

TEST(Dice, HandCountedOverlap) {
  // |X| = 4, |Y| = 6, |X n Y| = 3
  const auto x = mask_from({1, 1, 0, 1, 1, 0, 0, 0, 0}, 3, 3);
  const auto y = mask_from({1, 1, 1, 1, 0, 1, 1, 0, 0}, 3, 3);
  EXPECT_DOUBLE_EQ(dice(x, y), 0.6);
  EXPECT_DOUBLE_EQ(dice(y, x), 0.6);
}

TEST(Dice, SymmetricAndBounded) {
  for (unsigned seed = 0; seed < 50; ++seed) {
    RngStream rng(seed);
    Mask a(6, 5), b(6, 5);
    for (Eigen::Index i = 0; i < 6; ++i)
      for (Eigen::Index j = 0; j < 5; ++j) {
        a.values(i, j) = rng.bernoulli(0.4);
        b.values(i, j) = rng.bernoulli(0.4);
      }
    const double d = dice(a, b);
    EXPECT_EQ(d, dice(b, a));
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 1.0);
    if (a.count() > 0) EXPECT_EQ(d == 1.0, (a.values == b.values).all());
  }
}

TEST(Dice, ShapeMismatchThrows) {
  EXPECT_THROW(dice(Mask(3, 3), Mask(3, 4)), std::invalid_argument);
}

TEST(LesionVolume, PixelArea) {
  EXPECT_EQ(lesion_volume(Mask(4, 4)), 0.0);
  Mask m(2, 5, Spacing{1.0, 1.0});
  m.values.setOnes();
  EXPECT_DOUBLE_EQ(lesion_volume(m), 10.0);
  m.spacing = Spacing{0.5, 0.5};
  EXPECT_DOUBLE_EQ(lesion_volume(m), 2.5);
  const std::vector<Mask> stack{m, m};
  EXPECT_DOUBLE_EQ(lesion_volume(stack, 2.0), 10.0);
}

TEST(BlandAltman, ArithmeticAndLimits) {
  const std::vector<PairRecord> pairs{{"a", 10.0, 8.0, 0.9}, {"b", 6.0, 6.0, 1.0}};
  const auto ba = bland_altman_points(pairs);
  ASSERT_EQ(ba.points.size(), 2u);
  EXPECT_DOUBLE_EQ(ba.points[0].mean, 9.0);
  EXPECT_DOUBLE_EQ(ba.points[0].diff, 2.0);
  EXPECT_DOUBLE_EQ(ba.points[1].mean, 6.0);
  EXPECT_DOUBLE_EQ(ba.points[1].diff, 0.0);
  EXPECT_DOUBLE_EQ(ba.mean_diff, 1.0);
  EXPECT_NEAR(ba.upper_limit, 1.0 + 1.96 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(ba.lower_limit, 1.0 - 1.96 * std::sqrt(2.0), 1e-12);
}

TEST(BlandAltman, SoftMinusSharpSign) {
  const std::vector<PairRecord> pairs{{"a", 3.0, 5.0, 0.5}};
  EXPECT_DOUBLE_EQ(bland_altman_points(pairs).points[0].diff, -2.0);
}

TEST(BlandAltman, IdenticalVolumesGiveZeroLimits) {
  const std::vector<PairRecord> pairs{{"a", 3.0, 3.0, 1}, {"b", 7.0, 7.0, 1}, {"c", 1.0, 1.0, 1}};
  const auto ba = bland_altman_points(pairs);
  for (const auto& p : ba.points) EXPECT_EQ(p.diff, 0.0);
  EXPECT_EQ(ba.lower_limit, 0.0);
  EXPECT_EQ(ba.upper_limit, 0.0);
  EXPECT_THROW(bland_altman_points(std::vector<PairRecord>{}), std::invalid_argument);
}

TEST(PairsCsv, Format) {
  const std::vector<PairRecord> pairs{{"item_000", 10.0, 8.0, 0.75}, {"item_001", 6.0, 6.5, 1.0}};
  std::ostringstream os;
  write_pairs_csv(os, pairs);
  EXPECT_EQ(os.str(), "pair_id,mean_volume,diff_volume,dice\nitem_000,9,2,0.75\nitem_001,6.25,-0.5,1\n");
}

TEST(Wilcoxon, AllPositiveExact) {
  const std::vector<double> x{2, 3, 4, 5, 6, 7}, y{1, 1, 1, 1, 1, 1};
  const auto r = wilcoxon_one_sided(x, y);
  EXPECT_TRUE(r.exact);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0 / 64.0);
  EXPECT_DOUBLE_EQ(r.statistic, 21.0);
}

TEST(Wilcoxon, MatchesScipyReference) {
  // scipy.stats.wilcoxon(x, y, alternative="greater"): exact 0.01953125,
  // normal approximation with continuity correction 0.022005492006475714.
  const std::vector<double> x{1.83, 0.50, 1.62, 2.48, 1.68, 1.88, 1.55, 3.06, 1.30};
  const std::vector<double> y{0.878, 0.647, 0.598, 2.05, 1.06, 1.29, 1.06, 3.14, 1.29};
  const auto exact = wilcoxon_one_sided(x, y, WilcoxonMethod::Exact);
  EXPECT_DOUBLE_EQ(exact.statistic, 40.0);
  EXPECT_NEAR(exact.p_value, 0.01953125, 1e-15);
  EXPECT_NEAR(wilcoxon_one_sided(x, y, WilcoxonMethod::Normal).p_value, 0.022005492006475714, 1e-12);
}

TEST(Wilcoxon, ExactEqualsBruteForceIncludingTies) {
  for (unsigned seed = 0; seed < 40; ++seed) {
    RngStream rng(seed);
    const int n = 5 + static_cast<int>(seed % 8);  // 5..12
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      // Coarse grid so ties and zero differences occur.
      x[i] = std::round(rng.normal(0.3, 1.0) * 2.0) / 2.0;
      y[i] = std::round(rng.normal(0.0, 1.0) * 2.0) / 2.0;
    }
    bool all_zero = true;
    for (int i = 0; i < n; ++i) all_zero &= x[i] == y[i];
    if (all_zero) continue;
    EXPECT_NEAR(wilcoxon_one_sided(x, y, WilcoxonMethod::Exact).p_value, brute_force_p(x, y), 1e-12) << seed;
  }
}

TEST(Wilcoxon, NormalApproximationCloseToExactAtTwenty) {
  for (unsigned seed = 100; seed < 110; ++seed) {
    RngStream rng(seed);
    std::vector<double> x(20), y(20);
    for (int i = 0; i < 20; ++i) {
      x[i] = rng.normal(0.2, 1.0);
      y[i] = rng.normal(0.0, 1.0);
    }
    const double exact = wilcoxon_one_sided(x, y, WilcoxonMethod::Exact).p_value;
    const double approx = wilcoxon_one_sided(x, y, WilcoxonMethod::Normal).p_value;
    EXPECT_NEAR(exact, approx, 0.01) << seed;
  }
}

TEST(Wilcoxon, AutoSwitchesToNormalAboveTwenty) {
  std::vector<double> x(25), y(25, 0.0);
  for (int i = 0; i < 25; ++i) x[i] = (i % 3 == 0 ? -1.0 : 1.0) * (i + 1);
  EXPECT_FALSE(wilcoxon_one_sided(x, y).exact);
  EXPECT_TRUE(wilcoxon_one_sided(std::span(x).first(20), std::span(y).first(20)).exact);
}

TEST(Wilcoxon, DegenerateInputsThrow) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_THROW(wilcoxon_one_sided(x, x), std::invalid_argument);
  EXPECT_THROW(wilcoxon_one_sided(std::vector<double>{1, 2, 3, 4}, std::vector<double>{0, 0, 0, 0}),
               std::invalid_argument);
  EXPECT_THROW(wilcoxon_one_sided(x, std::vector<double>{1, 2, 3}), std::invalid_argument);
}

TEST(Bonferroni, ScalesAndClamps) {
  const std::vector<double> p{0.01, 0.5, 0.2};
  const auto c = bonferroni(p, 3);
  EXPECT_DOUBLE_EQ(c[0], 0.03);
  EXPECT_EQ(c[1], 1.0);
  EXPECT_DOUBLE_EQ(c[2], 0.6000000000000001);
  EXPECT_LT(c[0], c[2]);
  EXPECT_LE(c[2], c[1]);
  EXPECT_THROW(bonferroni(p, 2), std::invalid_argument);
}

TEST(ThresholdSegment, OutsideRangeIsEmpty) {
  const Image2D<double> img(10, 10, Spacing{}, 5.0);
  EXPECT_EQ(threshold_segment(img, 0.0, 1.0, 1).count(), 0);
  EXPECT_THROW(threshold_segment(img, 1.0, 1.0, 1), std::invalid_argument);
}

TEST(ThresholdSegment, SmallBlobRemoved) {
  Image2D<double> img(8, 8);
  img(2, 2) = img(2, 3) = img(3, 3) = 1.0;  // 3-pixel 4-connected blob
  img(6, 6) = 1.0;
  EXPECT_EQ(threshold_segment(img, 0.5, 1.5, 5).count(), 0);
  EXPECT_EQ(threshold_segment(img, 0.5, 1.5, 3).count(), 3);
  EXPECT_EQ(threshold_segment(img, 0.5, 1.5, 1).count(), 4);
}

TEST(ThresholdSegment, DiagonalNeighboursAreSeparateComponents) {
  Image2D<double> img(4, 4);
  img(0, 0) = img(1, 1) = img(2, 2) = 1.0;
  EXPECT_EQ(threshold_segment(img, 0.5, 1.5, 2).count(), 0);
}

TEST(ThresholdSegment, DiskRecoveredFromPhantom) {
  const auto disk = disk_phantom(128, 0.6, 0.5);
  const auto seg = threshold_segment(disk, 0.4, 0.6, 5);
  Mask truth(128, 128);
  const double c = 63.5, r = 0.6 * 64.0;
  for (Eigen::Index i = 0; i < 128; ++i)
    for (Eigen::Index j = 0; j < 128; ++j)
      truth.values(i, j) = (i - c) * (i - c) + (j - c) * (j - c) <= r * r;
  EXPECT_GE(dice(seg, truth), 0.98);
}

TEST(ConsistencyReport, IdenticalPairs) {
  const auto m = mask_from({1, 0, 1, 1}, 2, 2);
  const std::vector<std::pair<Mask, Mask>> pairs{{m, m}, {m, m}, {m, m}};
  const auto rep = consistency_report(pairs);
  EXPECT_EQ(rep.summary(), "1.00 (0.00)");
  EXPECT_EQ(rep.dice.size(), 3u);
}

TEST(ConsistencyReport, StdConventions) {
  const std::vector<double> d{0.5, 1.0};
  const auto pop = consistency_report(d, StdConvention::Population);
  EXPECT_DOUBLE_EQ(pop.mean, 0.75);
  EXPECT_DOUBLE_EQ(pop.std, 0.25);
  const auto sample = consistency_report(d);
  EXPECT_DOUBLE_EQ(sample.std, std::sqrt(0.125));
  EXPECT_EQ(sample.summary(), "0.75 (0.35)");
  EXPECT_THROW(consistency_report(std::vector<double>{}), std::invalid_argument);
}

}  // namespace
}  // namespace fbpaug
