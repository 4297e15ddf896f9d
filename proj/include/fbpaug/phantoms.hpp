#ifndef FBPAUG_PHANTOMS_HPP
#define FBPAUG_PHANTOMS_HPP

#include "fbpaug/image.hpp"
#include "fbpaug/rng.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

namespace fbpaug {

/// Ellipse in normalized coordinates: the image spans [-1, 1] on both axes,
/// y pointing up. `rotation` is counter-clockwise in radians.
struct EllipseSpec {
  double cx = 0.0;
  double cy = 0.0;
  double semi_x = 0.5;
  double semi_y = 0.5;
  double rotation = 0.0;
  double value = 1.0;

  bool contains(double x, double y) const {
    const double dx = x - cx;
    const double dy = y - cy;
    const double c = std::cos(rotation);
    const double s = std::sin(rotation);
    const double u = (dx * c + dy * s) / semi_x;
    const double v = (-dx * s + dy * c) / semi_y;
    return u * u + v * v <= 1.0;
  }
};

/// Modified Shepp-Logan table (higher-contrast variant, skull = 1.0,
/// brain = 0.2).
inline std::vector<EllipseSpec> shepp_logan_ellipses() {
  constexpr double deg = std::numbers::pi / 180.0;
  return {
      {0.0, 0.0, 0.69, 0.92, 0.0, 1.0},
      {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.8},
      {0.22, 0.0, 0.11, 0.31, -18.0 * deg, -0.2},
      {-0.22, 0.0, 0.16, 0.41, 18.0 * deg, -0.2},
      {0.0, 0.35, 0.21, 0.25, 0.0, 0.1},
      {0.0, 0.1, 0.046, 0.046, 0.0, 0.1},
      {0.0, -0.1, 0.046, 0.046, 0.0, 0.1},
      {-0.08, -0.605, 0.046, 0.023, 0.0, 0.1},
      {0.0, -0.606, 0.023, 0.023, 0.0, 0.1},
      {0.06, -0.605, 0.023, 0.046, 0.0, 0.1},
  };
}

namespace detail {

inline double ellipse_sum(std::span<const EllipseSpec> ellipses, double x, double y) {
  double v = 0.0;
  for (const auto& e : ellipses) {
    if (e.contains(x, y)) v += e.value;
  }
  return v;
}

}  // namespace detail

/// Sum of ellipse indicators. Pixels whose centre and corners disagree are
/// supersampled 4x4.
template <typename Scalar = double>
Image2D<Scalar> ellipses_phantom(Eigen::Index size, std::span<const EllipseSpec> ellipses,
                                 double spacing_mm = 1.0) {
  require(size >= 8, "phantom size must be at least 8");
  for (const auto& e : ellipses) require(e.semi_x > 0 && e.semi_y > 0, "ellipse semi-axes must be positive");

  Image2D<Scalar> img(size, size, Spacing{spacing_mm, spacing_mm});
  if (ellipses.empty()) return img;

  const double c = 0.5 * static_cast<double>(size - 1);
  const double scale = 2.0 / static_cast<double>(size);
  auto value_at = [&](double row, double col) {
    return detail::ellipse_sum(ellipses, (col - c) * scale, (c - row) * scale);
  };

  constexpr std::array<double, 4> sub{-0.375, -0.125, 0.125, 0.375};
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) {
      const auto r = static_cast<double>(i);
      const auto q = static_cast<double>(j);
      const double centre = value_at(r, q);
      const bool uniform = value_at(r - 0.5, q - 0.5) == centre && value_at(r - 0.5, q + 0.5) == centre &&
                           value_at(r + 0.5, q - 0.5) == centre && value_at(r + 0.5, q + 0.5) == centre;
      if (uniform) {
        img(i, j) = static_cast<Scalar>(centre);
        continue;
      }
      double acc = 0.0;
      for (double dr : sub)
        for (double dc : sub) acc += value_at(r + dr, q + dc);
      img(i, j) = static_cast<Scalar>(acc / 16.0);
    }
  }
  return img;
}

template <typename Scalar = double>
Image2D<Scalar> ellipses_phantom(Eigen::Index size, const std::vector<EllipseSpec>& ellipses,
                                 double spacing_mm = 1.0) {
  return ellipses_phantom<Scalar>(size, std::span<const EllipseSpec>(ellipses), spacing_mm);
}

/// Centred disk of radius radius_frac * size / 2 pixels.
template <typename Scalar = double>
Image2D<Scalar> disk_phantom(Eigen::Index size, double radius_frac, double value, double spacing_mm = 1.0) {
  require(radius_frac > 0.0 && radius_frac < 1.0, "disk radius fraction must lie in (0, 1)");
  const std::vector<EllipseSpec> disk{{0.0, 0.0, radius_frac, radius_frac, 0.0, value}};
  return ellipses_phantom<Scalar>(size, disk, spacing_mm);
}

template <typename Scalar = double>
Image2D<Scalar> shepp_logan(Eigen::Index size, double spacing_mm = 1.0) {
  return ellipses_phantom<Scalar>(size, shepp_logan_ellipses(), spacing_mm);
}

/// Body ellipse (value `body`) holding one to three round lesions of value
/// `lesion`. The layout is a fixed function of `index` (golden-ratio
/// sequence), so item i is the same on every run.
template <typename Scalar = double>
Image2D<Scalar> lesion_phantom(Eigen::Index size, std::uint64_t index, double body = 0.2, double lesion = 0.6,
                               double spacing_mm = 1.0) {
  constexpr double phi = 0.6180339887498949;
  auto frac = [](double v) { return v - std::floor(v); };
  std::vector<EllipseSpec> ellipses{{0.0, 0.0, 0.85, 0.7, 0.0, body}};
  const int n_lesions = 1 + static_cast<int>(index % 3);
  for (int l = 0; l < n_lesions; ++l) {
    const double seq = static_cast<double>(index * 3 + static_cast<std::uint64_t>(l) + 1);
    const double angle = 2.0 * std::numbers::pi * frac(seq * phi);
    const double dist = 0.15 + 0.3 * frac(seq * phi * phi);
    const double radius = 0.06 + 0.08 * frac(seq * 0.7548776662466927);
    ellipses.push_back({dist * std::cos(angle), dist * std::sin(angle), radius, radius, 0.0, lesion - body});
  }
  return ellipses_phantom<Scalar>(size, ellipses, spacing_mm);
}

/// p(t) = 2 * value * sqrt(R^2 - t^2) on every row.
template <typename Scalar = double>
Sinogram<Scalar> analytic_disk_sinogram(double radius_mm, double value, Eigen::Index n_angles,
                                        Eigen::Index n_detectors, double det_spacing) {
  require(n_angles >= 1 && n_detectors >= 1, "sinogram geometry must be non-empty");
  require(radius_mm > 0 && det_spacing > 0, "radius and detector spacing must be positive");
  Sinogram<Scalar> sino(n_angles, n_detectors, det_spacing);
  require(radius_mm <= sino.detector_center() * det_spacing + 0.5 * det_spacing,
          "disk does not fit inside the detector range");
  for (Eigen::Index k = 0; k < n_detectors; ++k) {
    const double t = (static_cast<double>(k) - sino.detector_center()) * det_spacing;
    const double chord = std::abs(t) <= radius_mm ? 2.0 * value * std::sqrt(radius_mm * radius_mm - t * t) : 0.0;
    sino.values.col(k).setConstant(static_cast<Scalar>(chord));
  }
  return sino;
}

/// Adds i.i.d. N(0, sigma^2) per pixel, drawn from RngStream(seed).
template <typename Scalar>
Image2D<Scalar> add_noise(const Image2D<Scalar>& img, double sigma, std::uint64_t seed) {
  require(sigma >= 0.0, "noise sigma must be non-negative");
  Image2D<Scalar> out = img;
  if (sigma == 0.0) return out;
  RngStream rng(seed);
  for (Eigen::Index i = 0; i < out.height(); ++i)
    for (Eigen::Index j = 0; j < out.width(); ++j)
      out(i, j) = static_cast<Scalar>(static_cast<double>(out(i, j)) + rng.normal(0.0, sigma));
  return out;
}

}  // namespace fbpaug

#endif  // FBPAUG_PHANTOMS_HPP
