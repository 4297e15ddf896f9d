#ifndef FBPAUG_TOMOGRAPHY_HPP
#define FBPAUG_TOMOGRAPHY_HPP

#include "fbpaug/image.hpp"

#include <cmath>
#include <vector>

namespace fbpaug {

/// Everything needed to undo pad_for_radon.
struct PadRecord {
  Eigen::Index height = 0;
  Eigen::Index width = 0;
  Eigen::Index top = 0;
  Eigen::Index left = 0;
  double fill = 0.0;

  bool operator==(const PadRecord&) const = default;
};

/// Smallest odd side S with S^2 >= h^2 + w^2.
inline Eigen::Index radon_canvas_side(Eigen::Index h, Eigen::Index w) {
  const auto diag2 = h * h + w * w;
  auto side = static_cast<Eigen::Index>(std::ceil(std::sqrt(static_cast<double>(diag2))));
  while (side * side < diag2) ++side;
  while (side > 1 && (side - 1) * (side - 1) >= diag2) --side;
  if (side % 2 == 0) ++side;
  return side;
}

/// Centres the image on a square canvas large enough that every rotation of
/// the original frame stays inside the inscribed circle.
template <typename Scalar>
std::pair<Image2D<Scalar>, PadRecord> pad_for_radon(const Image2D<Scalar>& img, double fill) {
  validate(img);
  const Eigen::Index side = radon_canvas_side(img.height(), img.width());
  PadRecord rec{img.height(), img.width(), (side - img.height()) / 2, (side - img.width()) / 2, fill};
  Image2D<Scalar> out(side, side, img.spacing, static_cast<Scalar>(fill));
  out.values.block(rec.top, rec.left, rec.height, rec.width) = img.values;
  return {std::move(out), rec};
}

template <typename Scalar>
Image2D<Scalar> crop_after_radon(const Image2D<Scalar>& img, const PadRecord& rec) {
  require(rec.top >= 0 && rec.left >= 0 && rec.height >= 1 && rec.width >= 1,
          "pad record has negative offsets or empty extent");
  require(rec.top + rec.height <= img.height() && rec.left + rec.width <= img.width(),
          "pad record does not fit inside the image");
  return Image2D<Scalar>(img.values.block(rec.top, rec.left, rec.height, rec.width), img.spacing);
}

namespace detail {

template <typename Scalar>
Scalar bilinear_or_zero(const Grid<Scalar>& g, double row, double col) {
  const double r0f = std::floor(row);
  const double c0f = std::floor(col);
  const auto r0 = static_cast<Eigen::Index>(r0f);
  const auto c0 = static_cast<Eigen::Index>(c0f);
  if (r0 < -1 || c0 < -1 || r0 >= g.rows() || c0 >= g.cols()) return Scalar(0);
  const double fr = row - r0f;
  const double fc = col - c0f;
  auto at = [&](Eigen::Index r, Eigen::Index c) -> double {
    if (r < 0 || c < 0 || r >= g.rows() || c >= g.cols()) return 0.0;
    return static_cast<double>(g(r, c));
  };
  const double top = (1.0 - fc) * at(r0, c0) + fc * at(r0, c0 + 1);
  const double bottom = (1.0 - fc) * at(r0 + 1, c0) + fc * at(r0 + 1, c0 + 1);
  return static_cast<Scalar>((1.0 - fr) * top + fr * bottom);
}

}  // namespace detail

/// Parallel-beam line integrals of a square image.
///
/// Pixel (i, j) sits at x = (j - c) * d, y = (c - i) * d with c = (side - 1) / 2.
/// Detector bin k samples the ray t = (k - c_det) * d, i.e. the points
/// t * (cos a, sin a) + s * (-sin a, cos a). The image is sampled bilinearly
/// along that ray at one-pixel steps (equivalently: rotate by -a, then sum
/// columns), and the sum is scaled by d so that values are physical integrals.
/// The detector count is the side length, bumped to the next odd number.
template <typename Scalar>
Sinogram<Scalar> radon(const Image2D<Scalar>& img, Eigen::Index n_angles) {
  validate(img);
  require(img.is_square(), "radon requires a square image; pad it first");
  require(img.spacing.x == img.spacing.y, "radon requires isotropic pixel spacing");
  require(n_angles >= 1, "radon requires at least one angle");

  const Eigen::Index side = img.height();
  const Eigen::Index n_det = side % 2 == 1 ? side : side + 1;
  const double d = img.spacing.x;
  Sinogram<Scalar> sino(n_angles, n_det, d);

  const double c_img = 0.5 * static_cast<double>(side - 1);
  const double c_det = sino.detector_center();
  for (Eigen::Index a = 0; a < n_angles; ++a) {
    const double theta = sino.angle(a);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    for (Eigen::Index k = 0; k < n_det; ++k) {
      const double t = static_cast<double>(k) - c_det;
      double sum = 0.0;
      for (Eigen::Index m = 0; m < side; ++m) {
        const double s = static_cast<double>(m) - c_img;
        const double x = t * ct - s * st;
        const double y = t * st + s * ct;
        sum += static_cast<double>(detail::bilinear_or_zero(img.values, c_img - y, c_img + x));
      }
      sino.values(a, k) = static_cast<Scalar>(sum * d);
    }
  }
  return sino;
}

/// Back-projection with the discrete weight 1/(2n):
///   BP(f)(x, y) = 1/(2n) * sum_i f_i(x cos a_i + y sin a_i)
/// Each projection is interpolated linearly along the detector axis; rays
/// falling outside the detector contribute nothing.
template <typename Scalar>
Image2D<Scalar> backproject(const Sinogram<Scalar>& sino, Eigen::Index height, Eigen::Index width) {
  require(sino.n_angles() >= 1 && sino.n_detectors() >= 1, "empty sinogram");
  require(height >= 1 && width >= 1, "backprojection grid must be non-empty");
  require(sino.det_spacing > 0, "detector spacing must be positive");

  const Eigen::Index n_det = sino.n_detectors();
  const double c_det = sino.detector_center();
  const double cy = 0.5 * static_cast<double>(height - 1);
  const double cx = 0.5 * static_cast<double>(width - 1);
  const double last = static_cast<double>(n_det - 1);

  Grid<double> acc = Grid<double>::Zero(height, width);
  for (Eigen::Index a = 0; a < sino.n_angles(); ++a) {
    const double theta = sino.angle(a);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const auto row = sino.values.row(a);
    for (Eigen::Index i = 0; i < height; ++i) {
      const double y = cy - static_cast<double>(i);
      for (Eigen::Index j = 0; j < width; ++j) {
        const double x = static_cast<double>(j) - cx;
        const double u = x * ct + y * st + c_det;
        if (u < 0.0 || u > last) continue;
        const auto u0 = static_cast<Eigen::Index>(u);
        const double f = u - static_cast<double>(u0);
        double v = static_cast<double>(row(u0));
        if (f > 0.0) v += f * (static_cast<double>(row(u0 + 1)) - v);
        acc(i, j) += v;
      }
    }
  }
  acc *= 1.0 / (2.0 * static_cast<double>(sino.n_angles()));
  return Image2D<Scalar>(acc.cast<Scalar>(), Spacing{sino.det_spacing, sino.det_spacing});
}

template <typename Scalar>
Image2D<Scalar> backproject(const Sinogram<Scalar>& sino) {
  return backproject(sino, sino.n_detectors(), sino.n_detectors());
}

}  // namespace fbpaug

#endif  // FBPAUG_TOMOGRAPHY_HPP
