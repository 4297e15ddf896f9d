#include "fbpaug/phantoms.hpp"
#include "fbpaug/tomography.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace fbpaug {
namespace {

Image2D<double> random_image(Eigen::Index side, unsigned seed) {
  RngStream rng(seed);
  Image2D<double> img(side, side);
  for (Eigen::Index i = 0; i < side; ++i)
    for (Eigen::Index j = 0; j < side; ++j) img(i, j) = rng.uniform(-1.0, 1.0);
  return img;
}

TEST(PadForRadon, ThreeByThreeCentredOnFive) {
  Image2D<double> img(3, 3);
  img.values << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  const auto [padded, rec] = pad_for_radon(img, 0.0);
  EXPECT_EQ(padded.height(), 5);
  EXPECT_EQ(padded.width(), 5);
  EXPECT_EQ(rec, (PadRecord{3, 3, 1, 1, 0.0}));
  EXPECT_EQ(padded(1, 1), 1);
  EXPECT_EQ(padded(3, 3), 9);
  EXPECT_EQ(padded(0, 0), 0);
}

TEST(PadForRadon, CtSliceCanvas) {
  Image2D<double> img(512, 512, Spacing{0.7, 0.7}, -1000.0);
  const auto [padded, rec] = pad_for_radon(img, -1000.0);
  EXPECT_EQ(padded.height(), 725);
  EXPECT_EQ(padded.width(), 725);
  EXPECT_EQ(rec.top, 106);
  EXPECT_EQ(rec.left, 106);
  EXPECT_EQ(padded.spacing, img.spacing);
  const auto back = crop_after_radon(padded, rec);
  EXPECT_EQ(back.height(), 512);
  EXPECT_EQ(back.width(), 512);
}

TEST(PadForRadon, CanvasSideIsOddAndCoversDiagonal) {
  for (Eigen::Index h = 1; h < 40; h += 3)
    for (Eigen::Index w = 1; w < 40; w += 5) {
      const auto s = radon_canvas_side(h, w);
      EXPECT_EQ(s % 2, 1);
      EXPECT_GE(s * s, h * h + w * w);
      EXPECT_LT((s - 2) * (s - 2), h * h + w * w);
    }
}

TEST(PadForRadon, CropInvertsPadExactly) {
  Image2D<double> img(7, 4, Spacing{0.5, 0.5});
  RngStream rng(3);
  for (Eigen::Index i = 0; i < 7; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) img(i, j) = rng.normal();
  const auto [padded, rec] = pad_for_radon(img, -3.5);
  EXPECT_TRUE((crop_after_radon(padded, rec).values == img.values).all());
}

TEST(CropAfterRadon, IdentityRecord) {
  const auto img = random_image(6, 1);
  const auto out = crop_after_radon(img, PadRecord{6, 6, 0, 0, 0.0});
  EXPECT_TRUE((out.values == img.values).all());
}

TEST(CropAfterRadon, MismatchedRecordThrows) {
  const auto img = random_image(6, 1);
  EXPECT_THROW(crop_after_radon(img, PadRecord{6, 6, 1, 0, 0.0}), std::invalid_argument);
  EXPECT_THROW(crop_after_radon(img, PadRecord{8, 2, 0, 0, 0.0}), std::invalid_argument);
}

TEST(Radon, ZeroImageGivesZeroSinogram) {
  const Image2D<double> img(33, 33);
  const auto s = radon(img, 20);
  EXPECT_EQ(s.n_angles(), 20);
  EXPECT_EQ(s.n_detectors(), 33);
  EXPECT_TRUE((s.values == 0.0).all());
}

TEST(Radon, EvenSideGetsOddDetectorCount) {
  const Image2D<double> img(32, 32);
  EXPECT_EQ(radon(img, 4).n_detectors(), 33);
}

TEST(Radon, AnglesCoverHalfTurn) {
  const auto s = radon(Image2D<double>(9, 9), 8);
  for (Eigen::Index i = 0; i < 8; ++i) EXPECT_DOUBLE_EQ(s.angle(i), static_cast<double>(i) * std::numbers::pi / 8.0);
}

TEST(Radon, RejectsNonSquareAndBadAngles) {
  EXPECT_THROW(radon(Image2D<double>(9, 8), 4), std::invalid_argument);
  EXPECT_THROW(radon(Image2D<double>(9, 9), 0), std::invalid_argument);
  EXPECT_THROW(radon(Image2D<double>(9, 9, Spacing{1.0, 0.5}), 4), std::invalid_argument);
}

TEST(Radon, DiskMatchesChordLengths) {
  const auto disk = disk_phantom(256, 0.8, 1.0);
  const auto s = radon(disk, 360);
  const double r = 0.4 * 256.0;
  const auto exact = analytic_disk_sinogram(r, 1.0, 360, s.n_detectors(), 1.0);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < s.n_detectors(); ++k) {
    const double t = static_cast<double>(k) - s.detector_center();
    if (std::abs(t) <= 0.9 * r) worst = std::max(worst, (s.values.col(k) - exact.values.col(k)).abs().maxCoeff());
  }
  EXPECT_LE(worst, 0.02 * 2.0 * r);
}

TEST(Radon, ScalesWithPixelSize) {
  const auto a = radon(disk_phantom(64, 0.5, 1.0, 1.0), 12);
  const auto b = radon(disk_phantom(64, 0.5, 1.0, 0.5), 12);
  EXPECT_NEAR((a.values * 0.5 - b.values).abs().maxCoeff(), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(b.det_spacing, 0.5);
}

TEST(Radon, IsLinear) {
  const auto a = random_image(41, 1);
  const auto b = random_image(41, 2);
  Image2D<double> combo(41, 41);
  combo.values = 2.5 * a.values - 0.75 * b.values;
  const auto lhs = radon(combo, 30).values;
  const Grid<double> rhs = 2.5 * radon(a, 30).values - 0.75 * radon(b, 30).values;
  EXPECT_LE((lhs - rhs).abs().maxCoeff(), 1e-6 * rhs.abs().maxCoeff());
}

TEST(Radon, QuarterTurnShiftsAngles) {
  // Rotating the image counter-clockwise by 90 degrees moves angle i to i + n/2,
  // and angles wrapping past pi come back mirrored in t.
  const std::vector<EllipseSpec> ellipses{{0.3, -0.2, 0.3, 0.15, 0.4, 1.0}, {-0.25, 0.3, 0.1, 0.2, 0.0, 0.5}};
  const auto img = ellipses_phantom(128, ellipses);
  Image2D<double> rotated(128, 128);
  for (Eigen::Index i = 0; i < 128; ++i)
    for (Eigen::Index j = 0; j < 128; ++j) rotated(i, j) = img(j, 127 - i);
  const Eigen::Index n = 360;
  const auto s = radon(img, n);
  const auto sr = radon(rotated, n);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index shifted = i + n / 2;
    const Eigen::RowVectorXd got = sr.values.row(shifted % n);
    const Eigen::RowVectorXd want = shifted < n ? Eigen::RowVectorXd(s.values.row(i))
                                                : Eigen::RowVectorXd(s.values.row(i).reverse());
    worst = std::max(worst, (got - want).cwiseAbs().maxCoeff());
  }
  EXPECT_LE(worst, 1e-9 * s.values.abs().maxCoeff());
}

TEST(Radon, AnalyticRotationWithinOnePercentRms) {
  // Rotating the ellipse table by k angular steps shifts sinogram rows by k.
  std::vector<EllipseSpec> ellipses{{0.3, -0.2, 0.3, 0.15, 0.4, 1.0}, {-0.25, 0.3, 0.1, 0.2, 0.0, 0.5}};
  const Eigen::Index n = 360;
  const int k = 20;
  const double alpha = k * std::numbers::pi / n;
  auto rotated = ellipses;
  for (auto& e : rotated) {
    const double x = e.cx, y = e.cy;
    e.cx = x * std::cos(alpha) - y * std::sin(alpha);
    e.cy = x * std::sin(alpha) + y * std::cos(alpha);
    e.rotation += alpha;
  }
  const auto s = radon(ellipses_phantom(256, ellipses), n);
  const auto sr = radon(ellipses_phantom(256, rotated), n);
  double se = 0.0, ref = 0.0;
  for (Eigen::Index i = 0; i + k < n; ++i) {
    se += (sr.values.row(i + k) - s.values.row(i)).square().sum();
    ref += s.values.row(i).square().sum();
  }
  EXPECT_LE(std::sqrt(se / ref), 0.01);
}

TEST(Radon, PointSymmetricImageHasEvenProjections) {
  const std::vector<EllipseSpec> ellipses{{0.3, 0.1, 0.2, 0.1, 0.3, 1.0}, {-0.3, -0.1, 0.2, 0.1, 0.3, 1.0}};
  const auto s = radon(ellipses_phantom(128, ellipses), 90);
  const double peak = s.values.abs().maxCoeff();
  for (Eigen::Index i = 0; i < s.n_angles(); ++i) {
    EXPECT_LE((s.values.row(i) - s.values.row(i).reverse()).abs().maxCoeff(), 0.01 * peak);
  }
}

TEST(Backproject, ZeroSinogramGivesZeroImage) {
  const Sinogram<double> s(12, 21, 1.0);
  const auto img = backproject(s);
  EXPECT_EQ(img.height(), 21);
  EXPECT_TRUE((img.values == 0.0).all());
}

TEST(Backproject, SingleAngleIsConstantAlongRays) {
  // Only the theta = 0 row is nonzero; rays at theta = 0 run vertically, so
  // every column of the output must be constant.
  Sinogram<double> s(8, 31, 1.0);
  RngStream rng(5);
  for (Eigen::Index k = 0; k < 31; ++k) s.values(0, k) = rng.uniform(0.0, 1.0);
  const auto img = backproject(s);
  for (Eigen::Index j = 0; j < img.width(); ++j) {
    EXPECT_NEAR(img.values.col(j).maxCoeff() - img.values.col(j).minCoeff(), 0.0, 1e-12);
    EXPECT_NEAR(img(0, j), s.values(0, j) / 16.0, 1e-12);
  }
}

TEST(Backproject, UsesHalfOverNWeight) {
  Sinogram<double> s(10, 11, 1.0);
  s.values.setConstant(3.0);
  const auto img = backproject(s);
  EXPECT_NEAR(img(5, 5), 10 * 3.0 / 20.0, 1e-12);
}

TEST(Backproject, UnfilteredDiskIsBlurredPositiveAndPeaksInCentre) {
  const auto disk = disk_phantom(64, 0.5, 1.0);
  const auto bp = backproject(radon(disk, 90));
  const Eigen::Index c = bp.height() / 2;
  double peak = 0.0;
  Eigen::Index pi = 0, pj = 0;
  for (Eigen::Index i = 0; i < bp.height(); ++i)
    for (Eigen::Index j = 0; j < bp.width(); ++j) {
      const double dx = static_cast<double>(j - c), dy = static_cast<double>(i - c);
      if (dx * dx + dy * dy <= 15.0 * 15.0) EXPECT_GT(bp(i, j), 0.0);
      if (bp(i, j) > peak) peak = bp(i, j), pi = i, pj = j;
    }
  EXPECT_LE(std::abs(pi - c), 1);
  EXPECT_LE(std::abs(pj - c), 1);
  EXPECT_GT(bp(c, c + 20), 0.0);  // smeared beyond the disk edge
}

TEST(Backproject, IsLinearAndFinite) {
  Sinogram<double> a(16, 25, 1.0), b(16, 25, 1.0);
  RngStream rng(9);
  for (Eigen::Index i = 0; i < 16; ++i)
    for (Eigen::Index k = 0; k < 25; ++k) {
      a.values(i, k) = rng.normal();
      b.values(i, k) = rng.normal();
    }
  Sinogram<double> combo(16, 25, 1.0);
  combo.values = 0.3 * a.values + 2.0 * b.values;
  const Grid<double> rhs = 0.3 * backproject(a).values + 2.0 * backproject(b).values;
  const auto lhs = backproject(combo).values;
  EXPECT_TRUE(lhs.isFinite().all());
  EXPECT_LE((lhs - rhs).abs().maxCoeff(), 1e-9 * rhs.abs().maxCoeff());
}

TEST(Tomography, FloatInstantiation) {
  const auto disk = disk_phantom<float>(32, 0.5, 1.0f);
  const auto s = radon(disk, 16);
  const auto bp = backproject(s);
  EXPECT_TRUE(bp.values.isFinite().all());
  EXPECT_GT(bp(16, 16), 0.0f);
}

}  // namespace
}  // namespace fbpaug
